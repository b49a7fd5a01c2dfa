"""
LCC Suite

This module exposes the LccSuite to the suite manager.
"""

from .lcc_suite import LccSuite

# The suite class to be loaded by the suite manager
plugin_class = LccSuite
