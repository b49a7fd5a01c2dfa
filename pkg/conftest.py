"""
Shared test configuration.

Registers the hypothesis profiles; select one with HYPOTHESIS_PROFILE.
"""

# Python Imports
import os

# Library Imports
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))
