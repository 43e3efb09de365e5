"""Weight families, numerical walls, chamber location, and the reports."""

import pytest
from fractions import Fraction

from p2stab.charge import z_sigma_b
from p2stab.errors import InputError
from p2stab.geometry import hc_boundary_theta, zeta_boundary_theta
from p2stab.io_utils import dumps_json
from p2stab.quiver import theta_pair
from p2stab.walls import (
    ADJACENCY,
    CHAMBER_STRUCTURE,
    chamber_membership,
    family_consistency,
    family_theta,
    hilbert_report,
    king_theta,
    module_dims,
    numerical_walls,
    perp_plane,
    theta_b0,
    theta_b1,
    theta_family_r,
    wall_svg,
    walls_json,
)


def test_module_dims():
    assert module_dims(3, "A1") == (3, 7, 3)
    assert module_dims(3, "A0") == (3, 6, 2)
    with pytest.raises(InputError):
        module_dims(0, "A1")
    with pytest.raises(InputError):
        module_dims(2, "A2")


# ---------------------------------------------------------------------------
# weight families


def test_king_theta_matches_displayed_families():
    for n in (1, 2, 4):
        for r in (1, 2, 3):
            mclass = (n + 1 - r, 2 * n + 1, n)
            for b in (Fraction(1, 5), Fraction(1, 2), Fraction(7, 10)):
                got = king_theta(z_sigma_b(b), mclass)
                assert got == theta_family_r(n, r, b)
                assert theta_pair(got, mclass) == 0


def test_king_theta_point_module_weight():
    b = Fraction(2, 7)
    assert king_theta(z_sigma_b(b), (1, 2, 1)) == (-b, b - 1, 2 - b)


def test_king_theta_rejects_flat_charge():
    # Z vanishes on the class: (1, 2, 1) against (1, 0), (-1, 0), (1, 0)
    with pytest.raises(InputError):
        king_theta([(Fraction(1), 0), (Fraction(-1), 0), (Fraction(1), 0)], (1, 2, 1))
    with pytest.raises(InputError):
        king_theta([(1, 0), (0, 1)], (1, 2, 1))


def test_family_endpoints_are_the_boundary_weights():
    for n in (1, 2, 3, 5):
        assert theta_b1(n, 1) == hc_boundary_theta(n)
        assert theta_b0(n, 0) == zeta_boundary_theta(n)


def test_family_is_linear_interpolation():
    for n in (1, 3):
        t0, t1 = theta_b1(n, 0), theta_b1(n, 1)
        for b in (Fraction(1, 3), Fraction(9, 8), Fraction(-1, 4)):
            want = tuple((1 - b) * p + b * q for p, q in zip(t0, t1))
            assert theta_b1(n, b) == want
    assert theta_b1(2, Fraction(1, 2)) == (-1, -1, Fraction(7, 2))


def test_family_consistency_report():
    out = family_consistency(3, Fraction(1, 3))
    assert out["ok"]
    assert out["point"]["expected"] == Fraction(2, 3)
    assert out["structure_sheaf"]["A1"] == out["structure_sheaf"]["A0"] == -1
    assert family_consistency(1, Fraction(7, 8))["ok"]


def test_family_theta_dispatch():
    assert family_theta(2, "A0", Fraction(1, 2)) == theta_b0(2, Fraction(1, 2))
    with pytest.raises(InputError):
        family_theta(2, "nope", 0)


# ---------------------------------------------------------------------------
# the perpendicular plane and its walls


def test_perp_plane_round_trip():
    plane = perp_plane((2, 5, 2))
    assert plane.basis == ((1, 0, -1), (0, 2, -5))
    for b in plane.basis:
        assert theta_pair(b, (2, 5, 2)) == 0
    s, t = Fraction(3, 2), Fraction(-1, 3)
    assert plane.coords_of(plane.theta_of(s, t)) == (s, t)
    with pytest.raises(InputError):
        plane.coords_of((1, 0, 0))


def test_numerical_walls_small_goldens():
    assert numerical_walls((1, 0, 0)) == []
    w = numerical_walls((1, 1, 0))
    assert len(w) == 1  # both unit subvectors cut the same line in the plane
    assert w[0].witnesses == ((0, 1, 0), (1, 0, 0))
    assert [x.normal_in_plane for x in numerical_walls((1, 3, 1))] == [
        (1, 0),
        (1, 1),
        (1, 2),
        (1, 3),
        (0, 1),
    ]
    with pytest.raises(InputError):
        numerical_walls((0, 0, 0))
    with pytest.raises(InputError):
        numerical_walls((1, -1, 0))


def test_numerical_walls_structure():
    d = (2, 5, 2)
    walls = numerical_walls(d)
    assert len(walls) == 13
    plane = perp_plane(d)
    for w in walls:
        assert w.status == "numerical"
        assert w.witness == w.witnesses[0] == min(w.witnesses)
        for dp in w.witnesses:
            assert all(0 <= x <= y for x, y in zip(dp, d))
            # the witness really lies on the wall line, in plane coordinates
            u = theta_pair(plane.basis[0], dp)
            v = theta_pair(plane.basis[1], dp)
            p, q = w.normal_in_plane
            assert p * v - q * u == 0 or (p * u + q * v != 0)
    # lines are pairwise distinct
    assert len({w.normal_in_plane for w in walls}) == len(walls)


# ---------------------------------------------------------------------------
# chambers


def test_chamber_family_coordinates():
    for b in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        r = chamber_membership(theta_b1(2, b), 2, "A1")
        assert r.chamber == "C_P2"
        assert (r.sigma, r.tau) == (1 - b, b)


def test_chamber_boundaries_and_outer_chambers():
    assert chamber_membership(theta_b1(2, 1), 2, "A1").chamber == "theta1_1"
    assert chamber_membership(theta_b1(2, 0), 2, "A1").chamber == "theta1_0"
    assert chamber_membership(theta_b0(3, 0), 3, "A0").chamber == "theta0_0"
    assert chamber_membership(theta_b0(3, 1), 3, "A0").chamber == "theta0_1"

    plus = chamber_membership((-202, 2, 197), 2, "A1")
    assert plus.chamber == "C_plus" and plus.blocking is None
    assert (plus.sigma, plus.tau) == (-1, 101)
    minus = chamber_membership((2, -202, 503), 2, "A1")
    assert minus.chamber == "C_minus"
    assert (minus.sigma, minus.tau) == (101, -1)


def test_chamber_blocked_and_errors():
    blocked = chamber_membership((-8, 2, 3), 2, "A1")
    assert blocked.chamber == "outside"
    assert blocked.blocking is not None and blocked.blocking.witness == (1, 0, 2)
    # opposite cone: beyond both endpoints at once
    anti = chamber_membership([-x for x in theta_b1(2, Fraction(1, 2))], 2, "A1")
    assert anti.chamber == "outside" and anti.blocking is None
    with pytest.raises(InputError):
        chamber_membership((0, 0, 0), 2, "A1")
    with pytest.raises(InputError):
        chamber_membership((1, 1, 1), 2, "A1")  # not perpendicular to (2,5,2)


# ---------------------------------------------------------------------------
# reports


def test_walls_json_schema():
    out = walls_json(2, "A1", seed=9)
    assert out["meta"] == {"seed": 9, "tool": "p2stab", "version": "0.1.0"}
    assert out["class"] == [2, 5, 2]
    assert out["plane_basis"] == [[1, 0, -1], [0, 2, -5]]
    assert len(out["walls"]) == 13
    for w in out["walls"]:
        assert set(w) == {"normal_in_plane", "witness", "witnesses", "status"}
    assert [c["name"] for c in out["chambers"]] == ["C_plus", "C_P2", "C_minus"]
    assert out["adjacency"] == list(ADJACENCY)
    dumps_json(out)  # must serialize cleanly


def test_chamber_structure_constants():
    assert CHAMBER_STRUCTURE[0]["boundary"] == "theta1_1"
    assert CHAMBER_STRUCTURE[2]["label"] == "zeta-contraction"
    assert ADJACENCY[1] == "theta1_1 (Hilbert-Chow)"


def test_wall_svg_deterministic():
    svg = wall_svg(2, "A1")
    assert svg.startswith("<svg ") and svg.endswith("\n")
    assert svg == wall_svg(2, "A1")
    for label in ("C_plus", "C_P2", "C_minus"):
        assert label in svg
    assert wall_svg(1, "A0") != svg


def test_hilbert_report_single_point():
    rep = hilbert_report(1, [[(1, 2, 3)]])
    assert rep["n"] == 1 and rep["class_A1"] == [1, 3, 1]
    (entry,) = rep["configurations"]
    assert entry["zeta"]["skipped"] is True
    assert entry["hc_filtration"]["factor_dims"] == [[0, 1, 0], [1, 2, 1]]
    assert all(item["verdict"] == "stable" for item in entry["interior"])
    assert entry["dual_across_hc"]["shrink_consistent"]


def test_hilbert_report_groups_and_determinism(monkeypatch):
    configs = [
        [(1, 0, 0), (0, 1, 0)],
        [(0, 1, 0), (1, 0, 0)],  # same support, listed in another order
        [(1, 0, 0), (0, 0, 1)],
    ]
    rep = hilbert_report(2, configs)
    assert rep["s_equivalence_groups"] == [[0, 1], [2]]
    ser = dumps_json(rep)
    monkeypatch.setenv("P2STAB_THREADS", "3")
    assert dumps_json(hilbert_report(2, configs)) == ser
    for entry in rep["configurations"]:
        assert entry["zeta"]["at_minus_eps"]["verdict"] == entry["zeta"]["expected"]
        assert entry["zeta"]["shrink_consistent"]


def test_hilbert_report_input_checks():
    with pytest.raises(InputError):
        hilbert_report(0, [])
    with pytest.raises(InputError):
        hilbert_report(2, [[(1, 0, 0)]])  # wrong point count
    with pytest.raises(InputError):
        hilbert_report(1, [[(1, 2, 3)]], eps=Fraction(2, 3))
