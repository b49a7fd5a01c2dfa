"""
POVM Suite

This module exposes the PovmSuite to the suite manager.
"""

from .povm_suite import PovmSuite

# The suite class to be loaded by the suite manager
plugin_class = PovmSuite
