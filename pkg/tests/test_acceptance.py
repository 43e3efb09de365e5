"""Acceptance battery: every advertised capability, one test per criterion.

The full battery runs once per session (it is the expensive part of the
suite); each test then asserts its own criterion so a regression points at
the exact capability that broke.
"""

import pytest

from p2stab import acceptance

CRITERION_NAMES = {
    1: "dimvec-tables",
    2: "charge-forms-agree",
    3: "abc-symbolic",
    4: "T-matrix-identity",
    5: "king-weight-family",
    6: "family-coherence",
    7: "point-module-pipeline",
    8: "hilbert-configurations",
    9: "collinearity-wall",
    10: "duality",
    11: "tilt-composites",
    12: "submodule-oracle-calibration",
    13: "selftest-timing",
}


@pytest.fixture(scope="module")
def battery():
    results = acceptance.run_all("full")
    return {r.number: r for r in results}


def test_battery_shape(battery):
    assert sorted(battery) == list(range(1, 14))
    for number, r in battery.items():
        assert r.name == CRITERION_NAMES[number]
    lines = acceptance.format_results(list(battery.values()))
    assert len(lines) == 14
    assert lines[-1].endswith("/13 criteria passed")


@pytest.mark.parametrize("number", sorted(CRITERION_NAMES))
def test_criterion(battery, number):
    r = battery[number]
    assert r.passed, f"criterion {number} ({r.name}): {r.detail}"
