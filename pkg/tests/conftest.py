"""Session fixtures: the numeric KZ truncation and the exact solver
candidates are expensive, so they are built once and shared."""

import time

import pytest

from assoclab.kz import build_kz, check_kz
from assoclab.mzv import MZVCache, mzv_table
from assoclab.solver import solve_generic

SOLVER_SEEDS = (7, 42, 101)

TIMINGS = {}


@pytest.fixture(scope="session")
def cache_path(tmp_path_factory):
    return str(tmp_path_factory.mktemp("mzvcache") / "mzv_cache.txt")


@pytest.fixture(scope="session")
def mzv_cache(cache_path):
    return MZVCache(cache_path)


@pytest.fixture(scope="session")
def table10(mzv_cache):
    t0 = time.perf_counter()
    out = mzv_table(10, digits=50, cache=mzv_cache)
    TIMINGS.setdefault("mzv_table_w10", time.perf_counter() - t0)
    return out


@pytest.fixture(scope="session")
def kz10(mzv_cache, table10):
    t0 = time.perf_counter()
    out = build_kz(W=10, digits=50, cache=mzv_cache)
    TIMINGS.setdefault("kz_build_w10", time.perf_counter() - t0)
    return out


@pytest.fixture(scope="session")
def kz_report(kz10):
    t0 = time.perf_counter()
    rep = check_kz(kz10)
    TIMINGS.setdefault("kz_check_w8", time.perf_counter() - t0)
    return rep


@pytest.fixture(scope="session")
def candidates():
    out = []
    for s in SOLVER_SEEDS:
        t0 = time.perf_counter()
        out.append(solve_generic(6, seed=s))
        TIMINGS.setdefault(f"solve_w6_seed{s}", time.perf_counter() - t0)
    return out


@pytest.fixture(scope="session")
def timings():
    return TIMINGS
