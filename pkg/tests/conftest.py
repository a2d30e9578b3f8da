import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

NODE_TYPES = ["(4,0,0)", "(2,2,2)", "(0,4,4)", "(1,3,3)", "(0,3,6)", "(0,2,8)", "(2,0,6)", "(0,0,12)"]
EXTENDED_TYPES = ["(1,3,3,1)", "(0,4,4,1)", "(0,2,8,1)", "(2,3,0,2)"]
