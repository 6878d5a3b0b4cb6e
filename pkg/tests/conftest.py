import pytest


def pytest_collection_modifyitems(config, items):
    # heavy preset integrations only run when not deselected via -m
    for item in items:
        if "acceptance" in item.nodeid and "slow_suite" in item.fixturenames:
            item.add_marker(pytest.mark.slow)


@pytest.fixture(scope="session")
def slow_suite():
    """Warm the shared preset-run cache once for all acceptance tests."""
    from kerrcavity.validate import warm_cache

    warm_cache(workers=2)
    return True
