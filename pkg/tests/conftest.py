import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from padic_hausdorff.radial import RadialFunction

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

primes = st.sampled_from([2, 3, 5, 7])
dims = st.integers(1, 3)


@st.composite
def radial_functions(draw, p=None, n=None, max_len=8, signed=False, tail=False):
    p = draw(primes) if p is None else p
    n = draw(dims) if n is None else n
    k_min = draw(st.integers(-6, 6))
    size = draw(st.integers(1, max_len))
    mag = st.floats(0.01, 100.0, allow_nan=False)
    vals = draw(st.lists(mag, min_size=size, max_size=size))
    if signed:
        signs = draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=size, max_size=size))
        vals = [v * s for v, s in zip(vals, signs)]
    t = draw(mag) if tail else 0.0
    return RadialFunction(p, n, k_min, tuple(vals), t)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_functions(count, seed=0, signed=False, tail_prob=0.0):
    """Deterministic list of random radial functions for table-driven checks."""
    g = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        p = int(g.choice([2, 3, 5]))
        n = int(g.integers(1, 3))
        k_min = int(g.integers(-5, 5))
        size = int(g.integers(1, 9))
        vals = np.exp(g.uniform(np.log(0.05), np.log(20.0), size=size))
        if signed:
            vals *= g.choice([-1.0, 1.0], size=size)
        tail = float(g.uniform(0.1, 5.0)) if g.random() < tail_prob else 0.0
        out.append(RadialFunction(p, n, k_min, tuple(vals.tolist()), tail))
    return out


ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
