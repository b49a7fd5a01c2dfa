import sys
sys.pycache_prefix = "/tmp/lccbench/"

import unittest

from src.core.system_info import LIBRARY_NAME, LIBRARY_VERSION, SystemInfo


class TestSystemInfo(unittest.TestCase):

    def setUp(self):
        self.info = SystemInfo()

    def test_sections(self):
        for key in ("cpu", "mem", "os", "libs"):
            self.assertIsNotNone(self.info[key])
        self.assertIsNone(self.info["gpu"])
        self.assertGreater(self.info["mem"]["total"], 0)
        self.assertIn("numpy", self.info["libs"])

    def test_default_threads(self):
        self.assertGreaterEqual(self.info.default_threads(), 1)
        self.info.info["cpu"] = {"pcores": None, "lcores": None, "model": ""}
        self.assertEqual(self.info.default_threads(), 1)

    def test_run_metadata(self):
        metadata = self.info.run_metadata()
        self.assertEqual(metadata["library"], f"{LIBRARY_NAME} {LIBRARY_VERSION}")
        self.assertEqual(set(metadata), {"library", "libs", "os"})
        self.assertNotIn("mem", metadata)


if __name__ == '__main__':
    unittest.main()
