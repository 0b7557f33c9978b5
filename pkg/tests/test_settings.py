import importlib
import os
import unittest
from unittest.mock import patch

import settings


class TestSettings(unittest.TestCase):

    def tearDown(self):
        importlib.reload(settings)

    @patch("dotenv.load_dotenv")
    def test_defaults(self, _):
        with patch.dict(os.environ, {}, clear=True):
            importlib.reload(settings)
        self.assertEqual(settings.LOG_LEVEL, "WARNING")
        self.assertEqual(settings.AUDIT_WORKERS, 1)
        self.assertFalse(settings.FULL_BOUNDS)

    @patch("dotenv.load_dotenv")
    def test_environment(self, _):
        env = {"LOG_LEVEL": "debug", "AUDIT_WORKERS": "4", "KERNEL_FULL_BOUNDS": "1"}
        with patch.dict(os.environ, env, clear=True):
            importlib.reload(settings)
        self.assertEqual(settings.LOG_LEVEL, "DEBUG")
        self.assertEqual(settings.AUDIT_WORKERS, 4)
        self.assertTrue(settings.FULL_BOUNDS)


if __name__ == "__main__":
    unittest.main()
