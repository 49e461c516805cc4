"""tests/unit/test_version.py"""

import levyscope


def test_version():
    """Verify that the version string is present and valid."""
    assert isinstance(levyscope.__version__, str)
    assert len(levyscope.__version__) > 0
    # Basic semver-ish check
    assert levyscope.__version__.count(".") >= 1
