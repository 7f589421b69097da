#!/usr/bin/env python3
"""End-to-end checks of the mad executable: exit codes, outputs, report schema."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

MAD = sys.argv.pop(1)
FIXTURES = sys.argv.pop(1)
SCHEMA = sys.argv.pop(1)
HAVE_SOLVER = bool(os.environ.get("MAD_SOLVER"))


def fixture(app, name):
    return os.path.join(FIXTURES, app, name)


def run(*args):
    return subprocess.run([MAD, *args], capture_output=True, text=True, timeout=600)


def analyze(app, out, decomposition="decomposition.json", *extra):
    return run("analyze",
               "--schema", fixture(app, "schema.sql"),
               "--functionalities", fixture(app, "functionalities.json"),
               "--decomposition", fixture(app, decomposition),
               "-o", out, "-q", *extra)


class InputErrors(unittest.TestCase):
    def test_missing_file_exits_1_without_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "out")
            r = run("analyze", "--schema", fixture("bank", "schema.sql"),
                    "--functionalities", fixture("bank", "functionalities.json"),
                    "--decomposition", os.path.join(tmp, "missing.json"), "-o", out)
            self.assertEqual(r.returncode, 1, r.stderr)
            self.assertIn("missing.json", r.stderr)
            self.assertFalse(os.path.exists(out))

    def test_bad_sql_exits_1(self):
        with tempfile.TemporaryDirectory() as tmp:
            bad = os.path.join(tmp, "schema.sql")
            with open(bad, "w") as f:
                f.write("CREATE TABLE Account (id INT PRIMARY KEY, balance INT\n")
            r = run("analyze", "--schema", bad,
                    "--functionalities", fixture("bank", "functionalities.json"),
                    "--decomposition", fixture("bank", "decomposition.json"), "-o", tmp)
            self.assertEqual(r.returncode, 1)
            self.assertTrue(r.stderr.startswith("mad:"), r.stderr)

    def test_usage_error_exits_1(self):
        self.assertEqual(run("analyze", "--mcl", "2").returncode, 1)
        self.assertEqual(run().returncode, 1)


@unittest.skipUnless(HAVE_SOLVER, "no SMT solver")
class Analyze(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        with open(SCHEMA) as f:
            cls.schema = json.load(f)

    def load(self, out):
        with open(os.path.join(out, "report.json")) as f:
            report = json.load(f)
        jsonschema.validate(report, self.schema)
        return report

    def test_bank_report(self):
        with tempfile.TemporaryDirectory() as out:
            r = analyze("bank", out, "decomposition.json", "--emit-chop", "--dump-smt", os.path.join(out, "smt"))
            self.assertEqual(r.returncode, 0, r.stderr)
            report = self.load(out)
            self.assertEqual(report["status"], "complete")
            totals = report["totals"]
            self.assertGreaterEqual(totals["#CA"], 1)
            self.assertEqual(totals["#TA"], totals["#CA"] + totals["#Ext"])
            self.assertEqual(report["types"]["Total"], totals["#TA"])
            self.assertEqual(len(report["combinations"]), 3)
            rs = [a for a in report["anomalies"] if a["type"] == "RS" and a["kind"] == "core"]
            self.assertTrue(rs)
            self.assertEqual(sorted(rs[0]["edges"]), ["RW", "SOT", "SOT", "WR"])
            self.assertEqual(rs[0]["functionalities"], ["Total", "Transfer"])
            with open(os.path.join(out, "report.txt")) as f:
                text = f.read()
            self.assertIn("#CA", text)
            self.assertIn("LU/WS", text)
            self.assertEqual(text, r.stdout)
            with open(os.path.join(out, "chop.json")) as f:
                json.load(f)
            self.assertEqual(len([n for n in os.listdir(os.path.join(out, "smt")) if n.endswith(".smt2")]), 3)

    def test_mono_has_no_anomalies(self):
        with tempfile.TemporaryDirectory() as out:
            r = analyze("bank", out, "mono.json", "--format", "json")
            self.assertEqual(r.returncode, 0, r.stderr)
            report = self.load(out)
            self.assertEqual(report["totals"]["#CA"], 0)
            self.assertEqual(report["totals"]["#TA"], 0)
            self.assertEqual(r.stdout, "")
            self.assertFalse(os.path.exists(os.path.join(out, "report.txt")))

    def test_core_ext_report(self):
        with tempfile.TemporaryDirectory() as out:
            r = analyze("core_ext", out, "decomposition.json", "--mcl", "5", "--format", "json")
            self.assertEqual(r.returncode, 0, r.stderr)
            report = self.load(out)
            ids = {a["id"]: a for a in report["anomalies"]}
            ext = [a for a in report["anomalies"] if a["kind"] == "extension"]
            self.assertTrue(ext)
            for a in ext:
                self.assertEqual(ids[a["extends"]]["kind"], "core")
                self.assertLess(ids[a["extends"]]["length"], a["length"])

    def test_timeout_is_partial(self):
        with tempfile.TemporaryDirectory() as out:
            r = analyze("bank", out, "decomposition.json", "--global-timeout", "0", "--format", "json")
            self.assertEqual(r.returncode, 2, r.stderr)
            report = self.load(out)
            self.assertEqual(report["status"], "partial")
            self.assertTrue(all(c["status"] == "skipped" for c in report["combinations"]))

    def test_unusable_solver_exits_1(self):
        with tempfile.TemporaryDirectory() as out:
            r = analyze("bank", out, "decomposition.json", "--solver", "/nonexistent/z3")
            self.assertEqual(r.returncode, 1)


class Oracle(unittest.TestCase):
    def test_bank_subsets(self):
        r = run("oracle", "--schema", fixture("bank", "schema.sql"),
                "--functionalities", fixture("bank", "functionalities.json"),
                "--decomposition", fixture("bank", "decomposition.json"))
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        verdicts = {",".join(x["subset"]): x["anomaly"] for x in out["results"]}
        self.assertEqual(verdicts["Total"], False)
        self.assertEqual(verdicts["Total,Transfer"], True)
        self.assertTrue(all(x["verdict"] == "exhaustive" for x in out["results"]))

    def test_mono_subset(self):
        r = run("oracle", "--schema", fixture("bank", "schema.sql"),
                "--functionalities", fixture("bank", "functionalities.json"),
                "--subset", "Transfer,Total")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertFalse(json.loads(r.stdout)["results"][0]["anomaly"])

    def test_unknown_subset_name(self):
        r = run("oracle", "--schema", fixture("bank", "schema.sql"),
                "--functionalities", fixture("bank", "functionalities.json"), "--subset", "Nope")
        self.assertEqual(r.returncode, 1)


if __name__ == "__main__":
    unittest.main(verbosity=2)
