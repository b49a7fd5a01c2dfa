import sys
sys.pycache_prefix = "/tmp/lccbench/"

import json
import os
import tempfile
import unittest
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from src.api.io.fs import get_project_root
from src.core.exceptions import CatalogError, ConfigError
from src.core.experiment import ExperimentConfig, GridSpec, VerifyConfig, load_config, output_columns, \
    run_experiment, validate_experiment


def sweep_config(**overrides) -> ExperimentConfig:
    document = {
        "name": "lambda sweep",
        "model": {"name": "two_level", "params": {"Delta": 1.0}},
        "channels": [{"name": "scaled_rho_lcc", "params": {}}],
        "sweep": {"variable": "lambda", "grid": {"values": [0.25, 1.5]}},
        "x": 0.2,
        "outputs": ["gamma", "c", "residuals"],
    }
    document.update(overrides)
    return ExperimentConfig.model_validate(document)


class TestExperimentModule(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.root = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def write(self, name: str, text: str) -> str:
        path = self.root / name
        path.write_text(text)
        return str(path)

    def test_grid_points(self):
        self.assertEqual(GridSpec(values=[3, 1]).points(), [3.0, 1.0])
        np.testing.assert_allclose(GridSpec(start=0.0, stop=1.0, num=5).points(), [0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(GridSpec(start=1e-3, stop=1e-1, num=3, scale="log").points(), [1e-3, 1e-2, 1e-1])

    def test_grid_errors(self):
        with self.assertRaises(ValidationError):
            GridSpec(values=[])
        with self.assertRaises(ValidationError):
            GridSpec(start=0.0, stop=1.0)
        with self.assertRaises(ValidationError):
            GridSpec(start=0.0, stop=1.0, num=3, scale="log")

    def test_load_config_errors(self):
        with self.assertRaises(ConfigError):
            load_config(self.write("broken.json", "{not json"))
        with self.assertRaises(ConfigError):
            load_config(self.write("list.json", "[1, 2]"))
        with self.assertRaises(ConfigError):
            load_config(self.write("extra.json", json.dumps({"kind": "verify", "colour": "red"})))
        with self.assertRaises(ConfigError):
            load_config(str(self.root / "missing.json"))

    def test_verify_paths_resolve_against_config(self):
        document = {"kind": "verify", "inputs": [{"povm": "inputs/a.json", "state": "inputs/b.json"}]}
        config = load_config(self.write("verify.json", json.dumps(document)))
        self.assertIsInstance(config, VerifyConfig)
        check = config.inputs[0]
        self.assertEqual(check.povm, str(self.root.resolve() / "inputs" / "a.json"))
        self.assertEqual(check.state, str(self.root.resolve() / "inputs" / "b.json"))
        self.assertEqual(check.expect, "pass")

    def test_validation_errors(self):
        with self.assertRaises(ConfigError):
            validate_experiment(sweep_config(channels=[{"name": "identity"}],
                                             sweep={"variable": "theta", "grid": {"values": [0.1]}}))
        with self.assertRaises(ConfigError):
            validate_experiment(sweep_config(channels=[{"name": "scaled_rho_lcc"}, {"name": "scaled_rho_lcc"}]))
        with self.assertRaises(CatalogError):
            validate_experiment(sweep_config(model={"name": "harmonic"}))
        with self.assertRaises(ConfigError):
            load_config(self.write("bad.json", json.dumps(sweep_config(model={"name": "harmonic"}).model_dump())))

    def test_output_columns(self):
        self.assertEqual(output_columns(sweep_config()),
                         ["label", "lambda", "gamma", "c", "residual_completeness", "residual_coherence", "failed"])

    def test_failed_point_is_flagged(self):
        table = run_experiment(sweep_config())
        self.assertEqual(len(table.rows), 2)
        self.assertEqual(table.failed_rows, 1)
        good, bad = table.rows
        self.assertEqual(good["failed"], 0)
        self.assertEqual(good["label"], "scaled_rho_lcc")
        self.assertLess(abs(good["gamma"]), 1e-9)
        self.assertAlmostEqual(good["c"], 4.0, places=8)
        self.assertEqual(bad["failed"], 1)
        self.assertEqual(bad["c"], 0.0)
        self.assertEqual(table.metadata["errors"][0]["row"], 1)
        self.assertIn("lambda=1.5", table.metadata["errors"][0]["error"])
        for key in ("experiment", "config_hash", "seed", "timestamp", "library", "libs", "os"):
            self.assertIn(key, table.metadata)

    def test_threads_do_not_change_output(self):
        config = sweep_config(sweep={"variable": "x", "grid": {"start": -1.0, "stop": 1.0, "num": 9}},
                              channels=[{"name": "two_level_lcc"}, {"name": "identity"}])
        single = run_experiment(config, threads=1)
        pooled = run_experiment(config, threads=3)
        self.assertEqual(single.body(), pooled.body())
        self.assertEqual(single.metadata["config_hash"], pooled.metadata["config_hash"])
        self.assertEqual(single.column("label")[:2], ["two_level_lcc", "identity"])

    def test_von_neumann_sweep(self):
        config = load_config(os.path.join(get_project_root(), "experiments", "spin_meter_schemes.json"))
        table = run_experiment(config, threads=2)
        self.assertEqual(len(table.rows), 30)
        self.assertEqual(table.failed_rows, 0)
        qubit = [row for row in table.rows if row["label"] == "qubit LCC"]
        for row in qubit[:5]:
            self.assertAlmostEqual(row["c"], 4.0, delta=1e-3)
            self.assertGreater(row["one_minus_gamma"], 1.0 - 1e-5)
        wva = [row for row in table.rows if row["label"] == "WVA"]
        self.assertAlmostEqual(wva[0]["one_minus_gamma"], wva[0]["analytic"], delta=1e-4)

    def test_three_qubit_sweep(self):
        config = load_config(os.path.join(get_project_root(), "experiments", "three_qubit_ratio.json"))
        table = run_experiment(config)
        self.assertEqual(len(table.rows), 21)
        self.assertEqual(table.failed_rows, 0)
        for row in table.rows:
            self.assertLessEqual(abs(row["analytic"] - row["one_minus_gamma"]), 1e-6 + 2e-4)
        self.assertGreater(table.rows[0]["one_minus_gamma"], table.rows[-1]["one_minus_gamma"])


if __name__ == '__main__':
    unittest.main()
