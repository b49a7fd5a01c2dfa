import sys
sys.pycache_prefix = "/tmp/lccbench/"

import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from main import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, main
from src.api.io.fs import get_project_root, read_json, read_text_file, write_json
from src.api.io.tables import ResultTable
from src.bench import VERIFY_COLUMNS

TWO_LEVEL_RUN = {
    "name": "two level",
    "model": {"name": "two_level", "params": {"Delta": 1.5}},
    "channels": [{"name": "two_level_lcc", "params": {"lam": 0.2}}],
    "sweep": {"variable": "x", "grid": {"values": [-0.5, 0.0, 0.5]}},
    "outputs": ["gamma", "c", "eta"],
    "seed": 4,
}

RANDOM_RUN = {
    "name": "random family",
    "model": {"name": "random_family", "params": {"d": 3}},
    "channels": [{"name": "scaled_rho_lcc", "params": {"lam": 0.4}}, {"name": "identity"}],
    "sweep": {"variable": "x", "grid": {"values": [-0.3, 0.0, 0.6]}},
    "outputs": ["I_rho", "gamma", "c"],
}


class TestMain(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_catalog(self):
        out = self.root / "catalog.json"
        self.assertEqual(main(["catalog", "--out", str(out)]), EXIT_OK)
        catalog = read_json(out)
        self.assertIn("meter_lcc", [channel["name"] for channel in catalog["channels"]])
        self.assertEqual(len(catalog["suites"]), 5)

    def test_run_writes_csv(self):
        config = self.root / "run.json"
        write_json(config, TWO_LEVEL_RUN)
        out = self.root / "results" / "two_level.csv"
        self.assertEqual(main(["run", "--config", str(config), "--out", str(out), "--seed", "7"]), EXIT_OK)
        table = ResultTable.from_csv(read_text_file(out))
        self.assertEqual(table.metadata["seed"], 7)
        self.assertEqual(table.columns, ["label", "x", "gamma", "c", "eta", "failed"])
        for c in table.column("c"):
            self.assertAlmostEqual(c, 5.0, places=8)

    def run_body(self, config: Path, seed: int) -> str:
        out = self.root / f"seeded_{seed}.csv"
        self.assertEqual(main(["run", "--config", str(config), "--out", str(out), "--seed", str(seed)]), EXIT_OK)
        return ResultTable.from_csv(read_text_file(out)).body()

    def test_seeded_model_runs_are_reproducible(self):
        config = self.root / "random.json"
        write_json(config, RANDOM_RUN)
        first = self.run_body(config, 11)
        self.assertEqual(first, self.run_body(config, 11))
        self.assertNotEqual(first, self.run_body(config, 12))

    def test_failed_points_exit_with_failure(self):
        config = self.root / "run.json"
        write_json(config, dict(TWO_LEVEL_RUN, channels=[{"name": "scaled_rho_lcc"}],
                                sweep={"variable": "lambda", "grid": {"values": [0.5, 2.0]}}))
        self.assertEqual(main(["run", "--config", str(config), "--out", str(self.root / "out.csv")]),
                         EXIT_FAILURE)

    def test_configuration_errors(self):
        self.assertEqual(main(["run", "--config", str(self.root / "missing.json")]), EXIT_CONFIG)
        bad = self.root / "bad.json"
        write_json(bad, dict(TWO_LEVEL_RUN, model={"name": "harmonic"}))
        self.assertEqual(main(["run", "--config", str(bad)]), EXIT_CONFIG)
        verify = os.path.join(get_project_root(), "experiments", "verify.json")
        self.assertEqual(main(["run", "--config", verify]), EXIT_CONFIG)

    def test_verify_inputs_only(self):
        config = self.root / "verify.json"
        inputs = os.path.join(get_project_root(), "experiments", "inputs")
        write_json(config, {"kind": "verify", "suites": ["input_suite"], "inputs": [
            {"povm": os.path.join(inputs, "corrupted_povm.json"), "expect": "fail"}]})
        out = self.root / "verify.csv"
        self.assertEqual(main(["verify", "--config", str(config), "--out", str(out)]), EXIT_OK)
        table = ResultTable.from_csv(read_text_file(out))
        self.assertEqual(table.column("label"), ["input_suite/corrupted_povm"])
        self.assertTrue(table.metadata["passed"])

        write_json(config, {"kind": "verify", "suites": ["input_suite"], "inputs": [
            {"povm": os.path.join(inputs, "corrupted_povm.json"), "expect": "pass"}]})
        self.assertEqual(main(["verify", "--config", str(config), "--out", str(out)]), EXIT_FAILURE)
        self.assertFalse(json.loads(read_text_file(out).splitlines()[0][1:])["passed"])

    def test_verify_table_on_stdout_is_clean(self):
        config = self.root / "verify.json"
        inputs = os.path.join(get_project_root(), "experiments", "inputs")
        write_json(config, {"kind": "verify", "suites": ["input_suite"], "inputs": [
            {"povm": os.path.join(inputs, "corrupted_povm.json"), "expect": "fail"}]})
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            self.assertEqual(main(["verify", "--config", str(config), "--threads", "2"]), EXIT_OK)
        table = ResultTable.from_csv(stdout.getvalue())
        self.assertEqual(table.columns, VERIFY_COLUMNS)
        self.assertEqual(table.column("label"), ["input_suite/corrupted_povm"])
        self.assertIn("Verification passed", stderr.getvalue())


if __name__ == '__main__':
    unittest.main()
