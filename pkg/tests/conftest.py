import pytest
from hypothesis import HealthCheck, settings

from genuslab import cache as cache_mod

settings.register_profile("lab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lab")


@pytest.fixture
def tmp_cache(tmp_path):
    """An enabled cache in a temporary directory, installed as the default."""
    c = cache_mod.Cache(tmp_path / "cache")
    old = cache_mod.set_cache(c)
    yield c
    cache_mod.set_cache(old)
