from __future__ import annotations

import pytest

from weightlab import Session, set_session


@pytest.fixture(scope="session", autouse=True)
def shared_session():
    """One interning session for the whole run so memoized tables stay warm.

    Tests that need isolation (determinism, disk cache) build their own
    Session objects and pass them explicitly.
    """
    sess = Session()
    set_session(sess)
    yield sess
    set_session(None)
