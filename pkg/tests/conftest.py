"""Shared test configuration.

Hypothesis profiles: "ci" (default) runs enough examples to be useful,
"fast" trims the example count for quick local iteration.  Select with
HYPOTHESIS_PROFILE=fast pytest.
"""

import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "fast",
    max_examples=15,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))
