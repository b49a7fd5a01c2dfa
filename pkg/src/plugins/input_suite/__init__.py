"""
Input Suite

This module exposes the InputSuite to the suite manager.
"""

from .input_suite import InputSuite

# The suite class to be loaded by the suite manager
plugin_class = InputSuite
