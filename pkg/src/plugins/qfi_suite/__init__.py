"""
QFI Suite

This module exposes the QfiSuite to the suite manager.
"""

from .qfi_suite import QfiSuite

# The suite class to be loaded by the suite manager
plugin_class = QfiSuite
