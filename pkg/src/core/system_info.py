"""
SystemInfo Class Module

This module defines a SystemInfo class that gathers information about the host
at initialization and provides access to it using the [] operator. lccbench
records it in the metadata line of every result table and uses the core
count to size the sweep worker pool.

Classes:
    SystemInfo: Collects CPU, memory, OS and library information.

Usage:
    sys_info = SystemInfo()
    cpu_info = sys_info['cpu']
    threads = sys_info.default_threads()
"""

# Python Imports
import platform
from typing import Any, Dict

# Library Imports
import numpy as np
import psutil
import scipy

LIBRARY_NAME = "lccbench"
LIBRARY_VERSION = "0.1.0"


class SystemInfo:
    """
    A class to collect and store host information.

    Attributes:
        info (Dict[str, Any]): A dictionary containing all gathered information.
    """

    def __init__(self):
        self.info = {
            'cpu': self._get_cpu_info(),
            'mem': self._get_memory_info(),
            'os': self._get_os_info(),
            'libs': self._get_library_info(),
        }

    def __getitem__(self, key):
        """
        Allow accessing system information using dictionary-like syntax.

        Args:
            key (str): 'cpu', 'mem', 'os' or 'libs'.

        Returns:
            Any: The requested information, or None if the key is not found.
        """
        return self.info.get(key, None)

    def _get_cpu_info(self) -> Dict[str, Any]:
        return {
            "pcores": psutil.cpu_count(logical=False),
            "lcores": psutil.cpu_count(logical=True),
            "model": platform.processor(),
        }

    def _get_memory_info(self) -> Dict[str, Any]:
        mem = psutil.virtual_memory()
        return {"total": mem.total, "available": mem.available}

    def _get_os_info(self) -> Dict[str, Any]:
        return {
            "system": platform.system(),
            "release": platform.release(),
            "python": platform.python_version(),
        }

    def _get_library_info(self) -> Dict[str, str]:
        return {LIBRARY_NAME: LIBRARY_VERSION, "numpy": np.__version__, "scipy": scipy.__version__}

    def default_threads(self) -> int:
        """Worker count for sweeps: physical cores, falling back to logical ones."""
        return int(self.info['cpu']["pcores"] or self.info['cpu']["lcores"] or 1)

    def run_metadata(self) -> Dict[str, Any]:
        """The subset recorded in result metadata."""
        return {"library": f"{LIBRARY_NAME} {LIBRARY_VERSION}", "libs": self['libs'], "os": self['os']}
