import os

from dotenv import load_dotenv

from .errors import ConfigError
from .utils.constants import THREADS_ENV


class Settings:
    """Runtime settings read from the environment or a ``.env`` file."""

    def __init__(self):
        load_dotenv()

        raw = os.getenv(THREADS_ENV)
        if raw is None or not raw.strip():
            self.threads = os.cpu_count() or 1
            return

        try:
            threads = int(raw)
        except ValueError:
            raise ConfigError(
                "{} must be a positive integer, got '{}'".format(THREADS_ENV, raw)
            )
        if threads < 1:
            raise ConfigError(
                "{} must be a positive integer, got {}".format(THREADS_ENV, threads)
            )
        self.threads = threads
