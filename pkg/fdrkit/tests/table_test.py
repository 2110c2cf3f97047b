import json
import math

import pandas as pd
from base import TempDirTestBase

from fdrkit import formats
from fdrkit.errors import InputError
from fdrkit.table import InputTable, sniff_delimiter


class InputTableTest(TempDirTestBase):
    def test_sniff(self):
        self.assertEqual(sniff_delimiter("p\tz\n"), "\t")
        self.assertEqual(sniff_delimiter("p,z\n"), ",")

    def test_tab_separated(self):
        table = InputTable.read(self.write("in.tsv", "voxel\tp\nA\t0.01\nB\t0.2\n"))
        self.assertEqual(table.delimiter, "\t")
        self.assertEqual(table.columns, ["voxel", "p"])
        self.assertEqual(table.numeric("p").tolist(), [0.01, 0.2])
        self.assertEqual(table.text("voxel").tolist(), ["A", "B"])

    def test_malformed_cell_names_row_and_column(self):
        table = InputTable.read(self.write("in.csv", "p\n0.1\nabc\n0.3\n"))
        with self.assertRaises(InputError) as ctx:
            table.numeric("p")
        self.assertEqual((ctx.exception.row, ctx.exception.column), (2, "p"))
        self.assertIn("row 2, column 'p'", str(ctx.exception))

    def test_empty_and_non_finite_cells(self):
        table = InputTable.read(self.write("in.csv", "p,z\n0.1,\n0.2,inf\n"))
        with self.assertRaises(InputError) as ctx:
            table.numeric("z")
        self.assertEqual(ctx.exception.row, 1)

    def test_missing_column(self):
        table = InputTable.read(self.write("in.csv", "p\n0.1\n"))
        with self.assertRaises(InputError):
            table.numeric("z")

    def test_missing_file_and_empty_table(self):
        with self.assertRaises(InputError):
            InputTable.read(str(self.tmpdir / "absent.csv"))
        with self.assertRaises(InputError):
            InputTable.read(self.write("empty.csv", "p\n"))


class FormatterTest(TempDirTestBase):
    def setUp(self):
        super().setUp()
        self.summary = [("t_pos", math.inf), ("t_neg", -math.inf), ("R", 1), ("sets", ["a", "b"])]
        self.columns = {
            "id": ["x", "y"],
            "adjusted": [0.0123456789, math.nan],
            "rejected": [True, False],
        }

    def test_table(self):
        text = formats.Table(self.summary, self.columns, ",", 4).generate()
        lines = text.splitlines()
        self.assertEqual(lines[:4], ["# t_pos: +inf", "# t_neg: -inf", "# R: 1", "# sets: a;b"])
        self.assertEqual(lines[4:], ["id,adjusted,rejected", "x,0.01235,true", "y,NA,false"])

    def test_table_quotes_awkward_cells(self):
        columns = {"label": ['Smith, J', 'say "hi"', "two\nlines"], "p": [0.1, 0.2, 0.3]}
        path = self.write("out.csv", formats.Table([("R", 1)], columns).generate())
        frame = pd.read_csv(path, comment="#")
        self.assertEqual(frame["label"].tolist(), columns["label"])
        self.assertEqual(frame["p"].tolist(), columns["p"])

    def test_json(self):
        data = json.loads(formats.Json(self.summary, self.columns).generate())
        self.assertEqual(data["summary"], {"t_pos": "+inf", "t_neg": "-inf", "R": 1, "sets": ["a", "b"]})
        self.assertEqual(data["rows"][1], {"id": "y", "adjusted": None, "rejected": False})

    def test_ragged_columns(self):
        with self.assertRaises(ValueError):
            formats.Table([], {"a": [1], "b": [1, 2]})

    def test_base_is_abstract(self):
        with self.assertRaises(NotImplementedError):
            formats.base.BaseFormatter([], {}).generate()
