import os
from unittest import mock

from base import TestBase

from fdrkit.config import Settings
from fdrkit.errors import ConfigError
from fdrkit.simulate import resolve_workers


class SettingsTest(TestBase):
    def test_threads_from_environment(self):
        with mock.patch.dict(os.environ, {"FDRKIT_THREADS": "3"}):
            self.assertEqual(Settings().threads, 3)

    def test_default_is_cpu_count(self):
        with mock.patch.dict(os.environ, {"FDRKIT_THREADS": ""}):
            self.assertEqual(Settings().threads, os.cpu_count() or 1)

    def test_invalid_values(self):
        for raw in ("many", "0", "-2"):
            with mock.patch.dict(os.environ, {"FDRKIT_THREADS": raw}):
                with self.assertRaises(ConfigError):
                    Settings()

    def test_workers_are_capped_by_threads(self):
        with mock.patch.dict(os.environ, {"FDRKIT_THREADS": "2"}):
            self.assertEqual(resolve_workers(None, 100), 2)
            self.assertEqual(resolve_workers(8, 100), 2)
            self.assertEqual(resolve_workers(1, 100), 1)
            self.assertEqual(resolve_workers(8, 1), 1)
