import pytest


def pytest_addoption(parser):
    """Add a command line option to run the full size experiments."""
    parser.addoption(
        "--slow",
        action="store_true",
        default=False,
        help="run the full size experiments")


def pytest_collection_modifyitems(config, items):
    """Select tests to run based on command line options."""
    if config.getoption("--slow"):
        return
    skip_slow = pytest.mark.skip(reason="need --slow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
