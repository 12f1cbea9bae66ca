import os

import pytest

HERE = os.path.dirname(__file__)


def full_table_path():
    """Locate the conductor < 10000 allcurves table, or None.

    Search order: $CFT_DATA_DIR, ./data relative to the repo root.
    The table is not vendored; scripts/fetch_cremona.py downloads it.
    """
    name = "allcurves.00000-09999"
    candidates = []
    if os.environ.get("CFT_DATA_DIR"):
        candidates.append(os.path.join(os.environ["CFT_DATA_DIR"], name))
    candidates.append(os.path.join(HERE, "..", "data", name))
    for cand in candidates:
        if os.path.exists(cand):
            return os.path.abspath(cand)
    return None


@pytest.fixture(scope="session")
def cremona_table():
    path = full_table_path()
    if path is None:
        pytest.skip("full Cremona table not present; run "
                    "scripts/fetch_cremona.py (see README) and re-run")
    return path
