from hypothesis import HealthCheck, settings

settings.register_profile(
    "ltlab", max_examples=30, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ltlab")
