"""
Restricted Suite

This module exposes the RestrictedSuite to the suite manager.
"""

from .restricted_suite import RestrictedSuite

# The suite class to be loaded by the suite manager
plugin_class = RestrictedSuite
