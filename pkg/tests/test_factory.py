import sys
sys.pycache_prefix = "/tmp/lccbench/"

import unittest

from src.api.io.fs import get_project_root
from src.factory import create_bench_instance


class TestFactory(unittest.TestCase):

    def test_defaults(self):
        bench = create_bench_instance({}, get_project_root())
        self.assertIn("lcc_suite", bench.suites)
        self.assertGreaterEqual(bench.threads, 1)

    def test_configured_threads_and_directory(self):
        configs = {"bench": {"threads": 3, "suites_dir": "src/plugins"}}
        bench = create_bench_instance(configs, get_project_root())
        self.assertEqual(bench.threads, 3)
        self.assertEqual(len(bench.suites), 5)

    def test_missing_suites_directory(self):
        with self.assertRaises(FileNotFoundError):
            create_bench_instance({"bench": {"suites_dir": "no/such/dir"}}, get_project_root())


if __name__ == '__main__':
    unittest.main()
