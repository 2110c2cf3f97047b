import json

import pandas as pd
from base import STEP_UP_EXAMPLE, TempDirTestBase
from click.testing import CliRunner

from fdrkit import __version__
from fdrkit.cli import cli


class CliTestBase(TempDirTestBase):
    def setUp(self):
        super().setUp()
        self.runner = CliRunner()
        self.out = str(self.tmpdir / "out.txt")

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args))

    def summary(self):
        with open(self.out, encoding="utf-8") as f:
            lines = [line[2:].rstrip("\n") for line in f if line.startswith("# ")]
        return dict(line.split(": ", 1) for line in lines)

    def rows(self, sep=","):
        return pd.read_csv(self.out, comment="#", sep=sep)

    def step_up_file(self):
        body = "\n".join(str(p) for p in STEP_UP_EXAMPLE)
        return self.write("p.csv", "p\n" + body + "\n")


class AdjustCommandTest(CliTestBase):
    def test_bh(self):
        result = self.invoke("adjust", self.step_up_file(), "--q", "0.2", "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self.summary()["critical_p"], "0.066")
        self.assertEqual(int(self.rows()["rejected"].sum()), 6)

    def test_bky(self):
        result = self.invoke(
            "adjust", self.step_up_file(), "--method", "bky", "--q", "0.2", "--out", self.out
        )
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self.summary()["rejected"], "8")

    def test_keeps_columns_order_and_delimiter(self):
        path = self.write("p.tsv", "name\tp\nb\t0.5\na\t0.001\n")
        result = self.invoke("adjust", path, "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        rows = self.rows(sep="\t")
        self.assertEqual(list(rows.columns), ["name", "p", "adjusted_p", "rejected"])
        self.assertEqual(rows["name"].tolist(), ["b", "a"])
        self.assertEqual(rows["rejected"].tolist(), [False, True])

    def test_passthrough_cells_with_delimiters(self):
        path = self.write("names.csv", 'label,p\n"Smith, J",0.01\nplain,0.5\n')
        result = self.invoke("adjust", path, "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        rows = self.rows()
        self.assertEqual(rows["label"].tolist(), ["Smith, J", "plain"])
        self.assertEqual(rows["rejected"].tolist(), [True, False])

    def test_json(self):
        result = self.invoke("adjust", self.step_up_file(), "--json", "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.out, encoding="utf-8") as f:
            data = json.load(f)
        self.assertEqual(data["summary"]["tests"], 17)
        self.assertEqual(len(data["rows"]), 17)

    def test_refuses_to_correct_twice(self):
        path = self.write("adj.csv", "p,adjusted_p\n0.01,0.02\n")
        result = self.invoke("adjust", path)
        self.assertEqual(result.exit_code, 2)

    def test_malformed_cell(self):
        path = self.write("bad.csv", "p\n0.01\nx\n")
        result = self.invoke("adjust", path)
        self.assertEqual(result.exit_code, 2)
        self.assertIn("row 2, column 'p'", result.output)

    def test_missing_file(self):
        result = self.invoke("adjust", str(self.tmpdir / "absent.csv"))
        self.assertEqual(result.exit_code, 2)

    def test_out_of_range_pvalue(self):
        path = self.write("bad.csv", "p\n0.01\n1.5\n")
        self.assertEqual(self.invoke("adjust", path).exit_code, 2)

    def test_unknown_method(self):
        result = self.invoke("adjust", self.step_up_file(), "--method", "holm")
        self.assertEqual(result.exit_code, 1)


class StrategyCommandTest(CliTestBase):
    def setUp(self):
        super().setUp()
        self.z_file = self.write("z.csv", "id,z\nv1,2.5\nv2,-0.3\nv3,1.0\nv4,-3.9\n")

    def test_uncorrected_parametric_thresholds(self):
        result = self.invoke(
            "strategy",
            self.z_file,
            "--strategy",
            "twotailed",
            "--uncorrected",
            "--q",
            "0.05",
            "--dof",
            "107",
            "--out",
            self.out,
        )
        self.assertEqual(result.exit_code, 0, result.output)
        summary = self.summary()
        self.assertEqual(summary["method"], "uncorrected")
        self.assertLess(abs(float(summary["t_pos_parametric"]) - 1.982), 5e-4)
        self.assertLess(abs(float(summary["t_neg_parametric"]) + 1.982), 5e-4)

    def test_rows_follow_input(self):
        result = self.invoke(
            "strategy", self.z_file, "--strategy", "splittails", "--out", self.out
        )
        self.assertEqual(result.exit_code, 0, result.output)
        rows = self.rows()
        self.assertEqual(rows["id"].tolist(), ["v1", "v2", "v3", "v4"])
        self.assertEqual(rows["rejected_neg"].tolist(), [False, False, False, True])
        self.assertEqual(self.summary()["t_neg"], "-3.9")

    def test_sentinels_in_json(self):
        path = self.write("flat.csv", "z\n0.1\n-0.2\n")
        result = self.invoke(
            "strategy", path, "--strategy", "canonical", "--json", "--out", self.out
        )
        self.assertEqual(result.exit_code, 0, result.output)
        with open(self.out, encoding="utf-8") as f:
            summary = json.load(f)["summary"]
        self.assertEqual(summary["t_pos"], "+inf")
        self.assertEqual(summary["t_neg"], "-inf")

    def test_bb_strategy_reports_selection(self):
        result = self.invoke(
            "strategy", self.z_file, "--strategy", "canonical-bb", "--out", self.out
        )
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self.summary()["S"], "2")

    def test_two_tailed_p_column(self):
        path = self.write("zp.csv", "z,p\n3.0,0.0027\n-3.0,0.0027\n0.1,0.92\n")
        result = self.invoke(
            "strategy", path, "--strategy", "twotailed", "--two-tailed-input", "--out", self.out
        )
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(self.rows()["rejected_neg"].tolist(), [False, True, False])

    def test_all_null_split_tails_bb_sentinels(self):
        path = self.write("null.csv", "z\n0.1\n-0.2\n0.3\n-0.4\n")
        result = self.invoke(
            "strategy", path, "--strategy", "splittails-bb", "--out", self.out
        )
        self.assertEqual(result.exit_code, 0, result.output)
        summary = self.summary()
        self.assertEqual((summary["t_pos"], summary["t_neg"]), ("+inf", "-inf"))
        self.assertEqual(summary["R"], "0")

    def test_combined_leaks_strong_negative_signal_into_positive_side(self):
        nulls = "2.4\n2.0\n1.5\n1.0\n0.8\n0.6\n0.4\n0.3\n0.2\n0.1\n" * 2
        path = self.write("negative.csv", "z\n" + "-6\n" * 80 + nulls)
        result = self.invoke("strategy", path, "--strategy", "combined", "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        summary = self.summary()
        self.assertEqual(summary["rejected_neg"], "80")
        self.assertGreater(int(summary["rejected_pos"]), 0)

    def test_missing_z(self):
        path = self.write("p.csv", "p\n0.01\n")
        result = self.invoke("strategy", path, "--strategy", "canonical")
        self.assertEqual(result.exit_code, 2)

    def test_no_none_method(self):
        result = self.invoke(
            "strategy", self.z_file, "--strategy", "canonical", "--method", "none"
        )
        self.assertEqual(result.exit_code, 1)


class BbCommandTest(CliTestBase):
    def test_three_sets_one_selected(self):
        path = self.write(
            "sets.csv",
            "set,p\na,0.001\na,0.004\na,0.3\nb,0.5\nb,0.9\nc,0.4\nc,0.7\n",
        )
        result = self.invoke("bb", path, "--q", "0.05", "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        summary = self.summary()
        self.assertEqual((summary["R"], summary["S"]), ("1", "3"))
        self.assertAlmostEqual(float(summary["q_prime"]), 0.05 / 3, places=6)
        self.assertEqual(summary["selected"], "a")
        self.assertEqual(self.rows()["selected"].tolist(), [True] * 3 + [False] * 4)

    def test_both_sets_selected_keeps_the_level(self):
        path = self.write("sets.csv", "set,p\na,0.001\na,0.3\nb,0.002\nb,0.6\n")
        result = self.invoke("bb", path, "--q", "0.05", "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        summary = self.summary()
        self.assertEqual((summary["R"], summary["S"]), ("2", "2"))
        self.assertEqual(float(summary["q_prime"]), 0.05)

    def test_no_set_selected(self):
        path = self.write("sets.csv", "set,p\na,0.5\na,0.9\nb,0.4\nb,0.7\n")
        result = self.invoke("bb", path, "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        summary = self.summary()
        self.assertEqual((summary["R"], summary["rejected"]), ("0", "0"))
        self.assertFalse(self.rows()["rejected"].any())

    def test_missing_set_column(self):
        path = self.write("p.csv", "p\n0.01\n")
        self.assertEqual(self.invoke("bb", path).exit_code, 2)


class SimulateCommandTest(CliTestBase):
    ARGS = (
        "simulate",
        "--scenario",
        "ii",
        "--method",
        "bh",
        "--strategy",
        "twotailed",
        "--tests",
        "100",
        "--realizations",
        "20",
        "--workers",
        "1",
    )

    def test_deterministic(self):
        first = str(self.tmpdir / "first.csv")
        second = str(self.tmpdir / "second.csv")
        self.assertEqual(self.invoke(*self.ARGS, "--out", first).exit_code, 0)
        self.assertEqual(self.invoke(*self.ARGS, "--out", second).exit_code, 0)
        with open(first) as a, open(second) as b:
            self.assertEqual(a.read(), b.read())

    def test_rows(self):
        result = self.invoke(*self.ARGS, "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        rows = self.rows()
        self.assertEqual(rows["view"].tolist(), ["both", "positive", "negative"])
        self.assertTrue(rows.loc[rows["view"] == "negative", "power"].isna().all())

    def test_unknown_scenario(self):
        self.assertEqual(self.invoke("simulate", "--scenario", "xi").exit_code, 1)


class MiscCommandTest(CliTestBase):
    def test_threshold(self):
        result = self.invoke("threshold", "--dof", "107", "--out", self.out)
        self.assertEqual(result.exit_code, 0, result.output)
        summary = self.summary()
        self.assertLess(abs(float(summary["t_pos"]) - 1.982), 5e-4)
        self.assertLess(abs(float(summary["t_neg"]) + 1.982), 5e-4)

    def test_threshold_bad_alpha(self):
        self.assertEqual(self.invoke("threshold", "--dof", "5", "--alpha", "2").exit_code, 2)

    def test_unknown_command(self):
        self.assertEqual(self.invoke("frobnicate").exit_code, 1)

    def test_version(self):
        result = self.invoke("--version")
        self.assertEqual(result.exit_code, 0)
        self.assertIn(__version__, result.output)
