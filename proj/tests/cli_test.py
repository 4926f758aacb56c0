#!/usr/bin/env python3
"""End-to-end checks of the slam command line tool.

usage: cli_test.py SLAM_BINARY REPORT_SCHEMA
"""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

SLAM = sys.argv[1] if len(sys.argv) > 1 else "slam"
SCHEMA = sys.argv[2] if len(sys.argv) > 2 else "schemas/report.schema.json"


def run(*args, check_code=None):
    p = subprocess.run([SLAM, *map(str, args)], capture_output=True, text=True)
    if check_code is not None and p.returncode != check_code:
        raise AssertionError(f"{args}: exit {p.returncode}, stderr:\n{p.stderr}")
    return p


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.root = Path(cls.tmp.name)
        cls.case1 = cls.root / "case1"
        run("simulate", "--case", "I", "--seed", 42, "--out", cls.case1, check_code=0)
        with open(SCHEMA) as f:
            cls.schema = json.load(f)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def evaluate(self, *extra, preds=("labeling_I", "labeling_II")):
        args = ["evaluate", "--dataset", self.case1 / "dataset.csv", "--truth", self.case1 / "truth.csv"]
        for p in preds:
            args += ["--pred", self.case1 / f"{p}.csv"]
        return run(*args, "--k", 4, *extra, check_code=0)

    def test_simulate_case_v(self):
        out = self.root / "v1"
        run("simulate", "--case", "V", "--seed", 3, "--out", out, check_code=0)
        files = sorted(os.listdir(out))
        self.assertEqual(len(files), 4)
        with open(out / "dataset.csv") as f:
            self.assertEqual(len(list(csv.reader(f))) - 1, 30)
        again = self.root / "v2"
        run("simulate", "--case", "V", "--seed", 3, "--out", again, check_code=0)
        for name in files:
            self.assertEqual((out / name).read_bytes(), (again / name).read_bytes(), name)

    def test_unknown_case_is_usage_error(self):
        self.assertEqual(run("simulate", "--case", "IX", "--out", self.root / "x").returncode, 2)
        self.assertEqual(run("qtable", "--case", "0").returncode, 2)

    def test_usage_errors(self):
        self.assertEqual(run("sweep", "bogus").returncode, 2)
        self.assertEqual(run("evaluate").returncode, 2)
        self.assertEqual(run().returncode, 2)
        r = run("evaluate", "--dataset", self.case1 / "dataset.csv", "--truth", self.case1 / "truth.csv",
                "--pred", self.case1 / "labeling_I.csv", "--k", "many")
        self.assertEqual(r.returncode, 2)

    def test_pipeline_errors(self):
        bad = self.root / "bad.csv"
        bad.write_text("spot_id,label\ns0,A\n")
        r = run("evaluate", "--dataset", self.case1 / "dataset.csv", "--truth", self.case1 / "truth.csv",
                "--pred", bad)
        self.assertEqual(r.returncode, 1)
        self.assertIn("input", r.stderr)
        r = run("evaluate", "--dataset", self.case1 / "dataset.csv", "--truth", self.case1 / "truth.csv",
                "--pred", self.case1 / "labeling_I.csv", "--k", 36)
        self.assertEqual(r.returncode, 1)
        self.assertIn("graph", r.stderr)

    def test_report_is_byte_identical_and_valid(self):
        a = self.evaluate("--q-pair", "1,2").stdout
        b = self.evaluate("--q-pair", "1,2").stdout
        self.assertEqual(a, b)
        report = json.loads(a)
        jsonschema.validate(report, self.schema)
        self.assertEqual(len(report["labelings"]), 2)
        for block in report["labelings"]:
            self.assertEqual(len(block["scores"]), 15)
        timed = json.loads(self.evaluate("--timings").stdout)
        jsonschema.validate(timed, self.schema)
        self.assertIn("timings", timed)

    def test_serial_matches_parallel(self):
        self.assertEqual(self.evaluate().stdout, self.evaluate("--serial").stdout)

    def test_truth_against_itself(self):
        report = json.loads(self.evaluate(preds=("truth",)).stdout)
        scores = {s["metric"]: s["value"] for s in report["labelings"][0]["scores"]}
        self.assertEqual(scores["ari"], 1.0)
        self.assertLessEqual(abs(scores["slam"]), 1e-12)

    def test_cli_equals_harness(self):
        report = json.loads(self.evaluate("--q-pair", "labeling_I,labeling_II", "--seed", 42).stdout)
        table = json.loads(run("qtable", "--case", "I", "--seed", 42, check_code=0).stdout)
        from_report = {r["metric"]: (r["s1"], r["s2"], r["q"]) for r in report["q"]}
        from_table = {r["metric"]: (r["s1"], r["s2"], r["q"]) for r in table["rows"]}
        self.assertEqual(from_report, from_table)
        self.assertAlmostEqual(from_table["accuracy"][2], 1 / 3, places=12)

    def test_csv_and_exports(self):
        out_csv = self.root / "scores.csv"
        edges = self.root / "edges.csv"
        zdir = self.root / "z"
        self.evaluate("--csv", out_csv, "--export-edges", edges, "--export-z", zdir)
        rows = list(csv.DictReader(io.StringIO(out_csv.read_text())))
        self.assertEqual(len(rows), 30)
        self.assertEqual(edges.read_text().splitlines()[0], "u,v,I")
        self.assertEqual(len(edges.read_text().splitlines()), 61)
        self.assertTrue(any(zdir.iterdir()))

    def test_sensitivity_defaults(self):
        out = self.root / "sens.csv"
        p = run("sweep", "sensitivity", "--out", out, check_code=0)
        self.assertIn("sensitivity", p.stderr)
        rows = list(csv.DictReader(out.open()))
        self.assertEqual(len(rows), 5 * 10)
        self.assertEqual(sorted({float(r["h"]) for r in rows}), [0.001, 0.01, 0.05, 0.1, 0.5])

    def test_complexity_n_sweep(self):
        p = run("sweep", "complexity", "--n", "10,100,1000", check_code=0)
        rows = list(csv.DictReader(io.StringIO(p.stdout)))
        self.assertEqual(len(rows), 3)
        ns = [int(r["n"]) for r in rows]
        self.assertEqual(ns, sorted(ns))
        self.assertEqual(ns, [10, 100, 1000])

    def test_metrics_catalog(self):
        cat = json.loads(run("metrics", check_code=0).stdout)
        self.assertEqual(len(cat), 15)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0]], verbosity=2)
