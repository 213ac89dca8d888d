import os
import random

import pytest
from hypothesis import HealthCheck, settings

from rigid_turbine.construct import build
from rigid_turbine.samples import random_standard_tuple, sweep_instances
from rigid_turbine.scalar import cyclotomic_field

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CRITERIA: dict[int, list[tuple[str, bool]]] = {}


def record(criterion: int, label: str, passed: bool) -> None:
    _CRITERIA.setdefault(criterion, []).append((label, passed))


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        checks = _CRITERIA[number]
        ok = all(p for _, p in checks)
        failed = [label for label, p in checks if not p]
        detail = f"{len(checks)} check{'s' if len(checks) != 1 else ''}" if ok else "failed: " + "; ".join(failed)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")


@pytest.fixture(scope="session")
def sweep():
    """72 valid exact instances over the (n, k) x l x shaft grid with their builds."""
    return [(data, build(data)) for data in sweep_instances(per_type=3)]


@pytest.fixture(scope="session")
def random_tuples():
    rng = random.Random(77)
    out = []
    conductors = (3, 4, 5, 6, 8, 12)
    for i in range(100):
        field = cyclotomic_field(conductors[i % len(conductors)])
        m = rng.randint(1, 6)
        density = rng.choice((0.2, 0.4, 0.7))
        out.append(random_standard_tuple(rng, m, field, density=density, singular=(i % 4 == 3)))
    return out
