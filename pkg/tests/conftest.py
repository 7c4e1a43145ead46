import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from csdc import equilateral, make_triangle  # noqa: E402
from csdc.surface import random_sources, sweep_sources  # noqa: E402

_RESULTS = pytest.StashKey[dict]()

CRITERIA = {
    1: "solver matches multi-start Newton oracle",
    2: "double solution on the danger cylinder",
    3: "degree-12 companion surface fit",
    4: "deltoid limit",
    5: "count changes by 2 across the companion surface",
    6: "Jacobian rank on and off the cylinder",
    7: "square-root fold scaling",
    8: "Rieck identity survey",
    9: "CLI determinism",
}


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture(scope="session")
def acceptance(request):
    """Record one part of an acceptance criterion: ``acceptance(k, ok, detail)``."""
    store = request.config.stash[_RESULTS]

    def record(k: int, ok: bool, detail: str) -> bool:
        store.setdefault(k, []).append((bool(ok), detail))
        print(f"criterion {k} {'PASS' if ok else 'FAIL'}: {detail}")
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_RESULTS, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        parts = store.get(k)
        if not parts:
            terminalreporter.write_line(f"[----] {k}. {title}: not run")
            continue
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k}. {title}: {detail}")


@pytest.fixture(scope="session")
def tri_eq():
    return equilateral()


def _random_triangle(rng, min_gap=0.2):
    while True:
        ph = rng.uniform(-np.pi, np.pi, 3)
        d = np.abs((ph[:, None] - ph[None, :] + np.pi) % (2 * np.pi) - np.pi)
        if d[np.triu_indices(3, 1)].min() > min_gap:
            return make_triangle(*ph)


@pytest.fixture
def random_triangle():
    """Factory for seeded nondegenerate triangles."""
    return lambda seed, min_gap=0.2: _random_triangle(np.random.default_rng(seed), min_gap)


@pytest.fixture(scope="session")
def isosceles():
    """Mirror-symmetric across the x-axis: A at angle 0, B and C at +-2.2."""
    return make_triangle(0.0, 2.2, -2.2)


@pytest.fixture(scope="session")
def eq_sweep_timed(tri_eq):
    """Companion samples from 3500 seeded sources, z0 uniform in [0.3, 4], with build seconds."""
    t0 = time.perf_counter()
    params = random_sources(3500, 1, (0.3, 4.0), log_uniform=False)
    res, _ = sweep_sources(tri_eq, params)
    return res, time.perf_counter() - t0


@pytest.fixture(scope="session")
def eq_sweep(eq_sweep_timed):
    return eq_sweep_timed[0]
