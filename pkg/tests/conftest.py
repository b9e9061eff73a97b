import os
import tempfile

# Config reads the environment at import time, so this has to run before src is imported
os.environ.setdefault("TAME_LOG_DIR", tempfile.mkdtemp(prefix="tame-logs-"))

import pytest  # noqa: E402

from src.abelian_ext import AbelianExtQ  # noqa: E402
from src.qlattice import GradeGroup  # noqa: E402


@pytest.fixture
def rational():
    return AbelianExtQ.rational()


@pytest.fixture
def gaussian():
    return AbelianExtQ.cyclotomic(4)


@pytest.fixture
def zeta8():
    return AbelianExtQ.cyclotomic(8)


@pytest.fixture
def sqrt2():
    return AbelianExtQ.from_subgroup(8, [7])


@pytest.fixture
def z2():
    return GradeGroup.standard(2)


@pytest.fixture(autouse=True)
def small_conductor_bound(monkeypatch):
    """Keep default cover searches short; tests needing more pass a bound explicitly."""
    from src.config import Config
    monkeypatch.setattr(Config, "CONDUCTOR_BOUND", 200)
