"""Quiver module layer: construction, hom/iso, duality, tilting, stability."""

import random

import pytest
from fractions import Fraction

from p2stab.errors import InputError, VerificationError
from p2stab.geometry import module_ideal_A1, module_point
from p2stab.linalg import PrimeField, QQ, mat_inverse, mat_mul
from p2stab.quiver import (
    DestabilizedError,
    QuiverRep,
    check_relations,
    closure,
    direct_sum,
    dualize,
    hom_space,
    is_invariant,
    iso_test,
    jh_factors,
    king_test,
    quotient_by,
    random_rep,
    rep_from_json,
    rep_to_json,
    require_relations,
    reverse_theta,
    s_equiv,
    simple,
    sub_from,
    submodule_dimvecs,
    theta_pair,
    theta_transform,
    tilt_B_to_Bprime,
    tilt_Bprime_to_B,
    triple_dims,
)

F2 = PrimeField(2)
F5 = PrimeField(5)
F7 = PrimeField(7)

O_X = module_point([1, 0, 0])
O_Y = module_point([0, 1, 0])
O_Z = module_point([1, 1, 1])

# weights on the skyscraper dims (1, 2, 1): stable / semistable / unstable
TH_STABLE = (-3, 1, 1)
TH_SEMI = (-2, 1, 0)
TH_UNSTABLE = (1, 0, -1)


# ---------------------------------------------------------------------------
# construction and validation


def test_simple_modules():
    for v in range(3):
        s = simple("B", v)
        assert s.dims == tuple(1 if w == v else 0 for w in range(3))
        assert check_relations(s) == (True, None)
    with pytest.raises(InputError):
        simple("B", 3)


def test_constructor_rejects_shape_mismatch():
    gamma = [[[Fraction(0)]], [[Fraction(0)]], [[Fraction(0)]]]
    delta = [[[Fraction(0)]], [[Fraction(0)]], [[Fraction(0)]]]
    with pytest.raises(InputError):
        QuiverRep("B", QQ, (1, 2, 1), gamma, delta)  # gammas should be 2x1


def test_require_relations_catches_corruption():
    rep = module_point([1, 2, 3])
    bad_delta = [[list(r) for r in rep.delta_m(j)] for j in range(3)]
    bad_delta[0][0][0] += 1
    broken = QuiverRep(rep.algebra, rep.field, rep.dims, rep.gamma, bad_delta)
    ok, pair = check_relations(broken)
    assert not ok and pair is not None
    with pytest.raises(VerificationError):
        require_relations(broken)


@pytest.mark.parametrize("field", [QQ, F5])
@pytest.mark.parametrize("dims", [(1, 2, 1), (2, 3, 2), (0, 2, 1)])
def test_random_rep_satisfies_relations(field, dims):
    rng = random.Random(11)
    for _ in range(5):
        rep = random_rep("B", field, dims, rng)
        assert rep.dims == dims
        assert check_relations(rep) == (True, None)


@pytest.mark.parametrize("field", [QQ, F7])
def test_json_round_trip(field):
    rng = random.Random(3)
    rep = random_rep("B", field, (2, 3, 1), rng)
    blob = rep_to_json(rep)
    back = rep_from_json(blob)
    assert rep_to_json(back) == blob
    assert back.dims == rep.dims and back.algebra == rep.algebra
    assert iso_test(rep, back).isomorphic


def test_rep_from_json_rejects_garbage():
    with pytest.raises(InputError):
        rep_from_json({"algebra": "B", "dims": [1, "x", 1]})


# ---------------------------------------------------------------------------
# submodule mechanics


def test_closure_gives_invariant_triple():
    triple = closure(O_X, seeds2=[[Fraction(1)]])
    assert triple_dims(triple) == (0, 0, 1)
    assert is_invariant(O_X, triple)
    # a vertex-0 seed drags its arrow images along
    full = closure(O_X, seeds0=[[Fraction(1)]])
    assert triple_dims(full) == (1, 2, 1)


def test_sub_from_and_quotient_complement():
    triple = closure(O_X, seeds1=[[Fraction(1), Fraction(0)]])
    sub = sub_from(O_X, triple)
    quo = quotient_by(O_X, triple)
    assert check_relations(sub) == (True, None)
    assert check_relations(quo) == (True, None)
    assert tuple(s + q for s, q in zip(sub.dims, quo.dims)) == O_X.dims
    with pytest.raises(InputError):
        sub_from(O_X, ([[Fraction(1)]], [], []))  # not arrow-invariant


def test_skyscraper_submodule_dimvecs_exact():
    res = submodule_dimvecs(O_X)
    assert res.complete
    assert res.dimvecs == frozenset(
        {(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 2, 1), (1, 2, 1)}
    )
    assert res.layer1_dimvecs <= res.dimvecs
    for dv, wit in res.witnesses.items():
        assert triple_dims(wit) == dv
        assert is_invariant(O_X, wit)


def test_search_is_deterministic():
    a = submodule_dimvecs(O_Z, seed=5)
    b = submodule_dimvecs(O_Z, seed=5)
    assert a.dimvecs == b.dimvecs and a.evidence == b.evidence


@pytest.mark.parametrize("dims", [(1, 2, 1), (2, 2, 1), (1, 3, 2)])
def test_layer1_sound_on_prime_field_reps(dims):
    rng = random.Random(7)
    for _ in range(4):
        rep = random_rep("B", F2, dims, rng)
        res = submodule_dimvecs(rep)
        assert res.complete  # exhaustive on the module's own field
        assert res.layer1_dimvecs <= res.dimvecs
        for dv, wit in res.witnesses.items():
            assert is_invariant(rep, wit) and triple_dims(wit) == dv


# ---------------------------------------------------------------------------
# hom spaces and isomorphy


def test_hom_dimensions():
    assert len(hom_space(simple("B", 0), simple("B", 0))) == 1
    assert len(hom_space(simple("B", 0), simple("B", 1))) == 0
    assert len(hom_space(O_X, O_X)) == 1
    assert len(hom_space(O_X, O_Y)) == 0


def test_iso_invariant_under_base_change():
    rep = module_point([2, -1, 3])
    P = [
        [[Fraction(2)]],
        [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]],
        [[Fraction(-3)]],
    ]
    Pinv = [mat_inverse(QQ, M) for M in P]
    gamma = [mat_mul(QQ, mat_mul(QQ, P[1], rep.gamma_m(i)), Pinv[0]) for i in range(3)]
    delta = [mat_mul(QQ, mat_mul(QQ, P[2], rep.delta_m(j)), Pinv[1]) for j in range(3)]
    other = require_relations(QuiverRep("B", QQ, rep.dims, gamma, delta))
    res = iso_test(rep, other)
    assert res.isomorphic and res.certainty == "exact"


def test_point_modules_distinguished():
    res = iso_test(O_X, O_Y)
    assert not res.isomorphic
    assert res.certainty == "exact"  # Hom is zero, no coin flips involved
    assert not iso_test(O_X, simple("B", 1)).isomorphic  # dims differ


def test_point_module_representative_independence():
    assert iso_test(module_point([1, 2, 3]), module_point([2, 4, 6])).isomorphic


# ---------------------------------------------------------------------------
# duality


def test_dualize_reverses_dims_and_keeps_relations():
    rep = module_ideal_A1([(1, 0, 0), (0, 1, 0)])
    dual = dualize(rep)
    assert dual.dims == rep.dims[::-1]
    assert check_relations(dual) == (True, None)
    double = dualize(dual)
    assert double.dims == rep.dims
    assert iso_test(rep, double).isomorphic


def test_reverse_theta_golden():
    assert reverse_theta((1, 2, 3)) == (-3, -2, -1)
    assert reverse_theta(reverse_theta((5, -1, 7))) == (5, -1, 7)


@pytest.mark.parametrize(
    "dims,theta",
    [((1, 2, 1), TH_STABLE), ((1, 2, 1), TH_UNSTABLE), ((2, 3, 1), (1, 1, -5))],
)
def test_dual_verdict_invariance(dims, theta):
    rng = random.Random(23)
    for _ in range(6):
        rep = random_rep("B", QQ, dims, rng)
        lhs = king_test(rep, theta)
        rhs = king_test(dualize(rep), reverse_theta(theta))
        assert lhs.verdict == rhs.verdict


# ---------------------------------------------------------------------------
# tilting


def test_skyscraper_tilt_round_trip():
    mid = tilt_B_to_Bprime(O_X)
    assert mid.algebra == "Bprime" and mid.dims == (1, 1, 1)
    back, flag = tilt_Bprime_to_B(mid)
    assert flag is None
    assert back.dims == (1, 2, 1)
    assert iso_test(back, O_X).isomorphic
    with pytest.raises(InputError):
        tilt_B_to_Bprime(mid)  # wrong source algebra
    with pytest.raises(InputError):
        tilt_Bprime_to_B(O_X)


def test_theta_transform_golden():
    assert theta_transform((1, 2, 3)) == (1, 9, -2)
    assert theta_transform((-4, 0, 4)) == (-4, 4, 0)


@pytest.mark.parametrize("theta", [(1, 2, 3), (-3, 1, 1), (0, 5, -2)])
def test_theta_transform_matches_tilt_pairing(theta):
    for rep in (O_X, module_ideal_A1([(1, 0, 0), (0, 1, 0)])):
        mid = tilt_B_to_Bprime(rep)
        assert theta_pair(theta_transform(theta), mid.dims) == theta_pair(
            theta, rep.dims
        )


# ---------------------------------------------------------------------------
# stability


def test_king_verdicts_on_skyscraper():
    assert king_test(O_X, TH_STABLE).verdict == "stable"
    assert king_test(O_X, TH_SEMI).verdict == "semistable"
    bad = king_test(O_X, TH_UNSTABLE)
    assert bad.verdict == "unstable" and bad.certainty == "exact"
    assert bad.witness_dimvec == (0, 0, 1)
    assert theta_pair(TH_UNSTABLE, bad.witness_dimvec) < 0
    assert king_test(O_X, (1, 1, 1)).verdict == "theta-nonvanishing"


def test_jh_factors_of_direct_sum():
    pair = direct_sum(O_X, O_Y)
    factors = jh_factors(pair, TH_STABLE)
    assert sorted(f.dims for f in factors) == [(1, 2, 1), (1, 2, 1)]
    for f in factors:
        assert iso_test(f, O_X).isomorphic or iso_test(f, O_Y).isomorphic


def test_jh_factors_raises_on_unstable_input():
    with pytest.raises(DestabilizedError) as info:
        jh_factors(O_X, TH_UNSTABLE)
    assert info.value.verdict.witness_dimvec == (0, 0, 1)


def test_s_equivalence():
    assert s_equiv(direct_sum(O_X, O_Y), direct_sum(O_Y, O_X), TH_STABLE)
    assert not s_equiv(direct_sum(O_X, O_Y), direct_sum(O_X, O_Z), TH_STABLE)
