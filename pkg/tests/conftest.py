import zlib
from functools import lru_cache

import numpy as np
import pytest

from cslm.mc_sim import SimConfig, run_simulation

ACCEPTANCE_KEY = pytest.StashKey[list]()


def rel_linf(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))) / np.max(np.abs(b)))


def random_symbols(rng, N, batch=()):
    return rng.normal(size=batch + (N,)) + 1j * rng.normal(size=batch + (N,))


@lru_cache(maxsize=None)
def cached_sim(n_fft, U, i, trials, seed, schemes, shift_method="random"):
    return run_simulation(SimConfig(n_fft=n_fft, U=U, i=i, trials=trials, seed=seed,
                                    schemes=schemes, shift_method=shift_method))


@pytest.fixture
def rng(request):
    # stable per-test seed so failures reproduce
    return np.random.default_rng(zlib.crc32(request.node.name.encode()))


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
