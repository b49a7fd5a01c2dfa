import sys
sys.pycache_prefix = "/tmp/lccbench/"

import io
import logging
import os
import tempfile
import unittest

from src.api.utils.logging import configure_main_logger, get_suite_logger


class TestLoggingModule(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        root = logging.getLogger()
        for handler in root.handlers[:]:
            handler.close()
            root.removeHandler(handler)
        suite = logging.getLogger("lccbench.suites.qfi_suite")
        for handler in suite.handlers[:]:
            handler.close()
            suite.removeHandler(handler)
        self.directory.cleanup()

    def test_invalid_level(self):
        with self.assertRaises(ValueError):
            configure_main_logger("LOUD")

    def test_reconfiguration_replaces_handlers(self):
        configure_main_logger("DEBUG", log_to_stdout=True)
        configure_main_logger("warning", log_to_stdout=True)
        root = logging.getLogger()
        self.assertEqual(len(root.handlers), 1)
        self.assertEqual(root.level, logging.WARNING)

    def test_console_stream(self):
        stream = io.StringIO()
        configure_main_logger("INFO", stream=stream)
        logging.getLogger("src.bench").info("table follows")
        self.assertIn("[INFO] src.bench: table follows", stream.getvalue())

    def test_file_and_additional_handlers(self):
        path = os.path.join(self.directory.name, "run.log")
        extra = logging.NullHandler()
        configure_main_logger("INFO", path, log_to_stdout=False, additional_handlers=[extra])
        logging.getLogger("src.core.lcc").info("built channel")
        root = logging.getLogger()
        self.assertIn(extra, root.handlers)
        for handler in root.handlers:
            handler.flush()
        with open(path) as log:
            self.assertIn("[INFO] src.core.lcc: built channel", log.read())

    def test_suite_logger(self):
        path = os.path.join(self.directory.name, "qfi_suite.log")
        logger = get_suite_logger("qfi_suite", path)
        self.assertEqual(logger.name, "lccbench.suites.qfi_suite")
        self.assertIs(get_suite_logger("qfi_suite", path), logger)
        self.assertEqual(len(logger.handlers), 1)
        self.assertTrue(logger.propagate)


if __name__ == '__main__':
    unittest.main()
