"""Representations of the Beilinson quiver of P^2 and its quadric cousin.

The quiver has three vertices v0 <- v1 <- v2 with three arrows gamma_i from
v1 to v0 and three arrows delta_j from v2 to v1.  We work throughout with
*right* modules presented by pullback data: a representation N assigns
spaces N0, N1, N2 and matrices

    gamma*_i : N0 -> N1   (n1 x n0),     delta*_j : N1 -> N2   (n2 x n1).

Two relation ideals occur:

    B  (symmetric):       delta*_j gamma*_i + delta*_i gamma*_j = 0  (i <= j),
    B' (antisymmetric):   delta*_j gamma*_i - delta*_i gamma*_j = 0  (i < j).

Modules over B are the quiver side of the tilted heart A_1, modules over B'
of the heart A'_1; the two tilt functors below move between them.  King
stability, submodule enumeration with honest completeness flags, and
Jordan-Hoelder filtrations live here as well.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import IncompleteOracleError, InputError, VerificationError
from . import linalg
from .linalg import (
    QQ,
    PrimeField,
    clear_denominators,
    field_from_json,
    galois_number,
    identity,
    is_zero_matrix,
    iter_subspaces,
    mat_mul,
    mat_vec,
    right_kernel,
    row_space,
    rref,
    solve_right,
    transpose,
    zeros,
)

ALGEBRAS = ("B", "Bprime")

#: relation index pairs per algebra; for "B" the diagonal pairs encode
#: delta_i gamma_i = 0 (the i = j case of the symmetric relations)
_REL_PAIRS = {
    "B": [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)],
    "Bprime": [(0, 1), (0, 2), (1, 2)],
}

DimVec = Tuple[int, int, int]
SubTriple = Tuple[tuple, tuple, tuple]


def _freeze_matrix(F, M, nrows: int, ncols: int):
    if len(M) != nrows:
        raise InputError("dimension mismatch")
    out = []
    for row in M:
        if len(row) != ncols:
            raise InputError("dimension mismatch")
        out.append(tuple(F.convert(x) for x in row))
    return tuple(out)


@dataclass(frozen=True)
class QuiverRep:
    """A finite-dimensional right module, given by its pullback matrices."""

    algebra: str
    field: object
    dims: DimVec
    gamma: Tuple  # three (n1 x n0) matrices
    delta: Tuple  # three (n2 x n1) matrices

    def __post_init__(self):
        if self.algebra not in ALGEBRAS:
            raise InputError(f"unknown algebra {self.algebra!r}")
        n0, n1, n2 = self.dims
        if min(n0, n1, n2) < 0:
            raise InputError("negative dimension")
        object.__setattr__(self, "dims", (int(n0), int(n1), int(n2)))
        if len(self.gamma) != 3 or len(self.delta) != 3:
            raise InputError("three gamma and three delta arrows required")
        object.__setattr__(
            self,
            "gamma",
            tuple(_freeze_matrix(self.field, g, n1, n0) for g in self.gamma),
        )
        object.__setattr__(
            self,
            "delta",
            tuple(_freeze_matrix(self.field, d, n2, n1) for d in self.delta),
        )

    # -- small conveniences -------------------------------------------------

    def gamma_m(self, i: int):
        return [list(r) for r in self.gamma[i]]

    def delta_m(self, j: int):
        return [list(r) for r in self.delta[j]]

    def total_dim(self) -> int:
        return sum(self.dims)

    def __repr__(self) -> str:
        return f"QuiverRep({self.algebra}, {self.field!r}, dims={self.dims})"


def rep_to_json(rep: QuiverRep) -> dict:
    def flat(M):
        return [str(x) for row in M for x in row]

    return {
        "algebra": rep.algebra,
        "field": rep.field.to_json(),
        "dims": list(rep.dims),
        "gamma": [flat(M) for M in rep.gamma],
        "delta": [flat(M) for M in rep.delta],
    }


def rep_from_json(obj: dict) -> QuiverRep:
    try:
        field = field_from_json(obj["field"])
        dims = tuple(int(x) for x in obj["dims"])
        n0, n1, n2 = dims
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed module JSON: {exc}") from exc

    def unflat(flat, nrows, ncols):
        if len(flat) != nrows * ncols:
            raise InputError("dimension mismatch")
        vals = [field.convert(Fraction(s)) for s in flat]
        return [vals[r * ncols : (r + 1) * ncols] for r in range(nrows)]

    gamma = [unflat(m, n1, n0) for m in obj["gamma"]]
    delta = [unflat(m, n2, n1) for m in obj["delta"]]
    return QuiverRep(obj["algebra"], field, dims, gamma, delta)


# ---------------------------------------------------------------------------
# relations


def check_relations(rep: QuiverRep) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """(True, None) if all relations hold, else (False, first bad (i, j))."""
    F = rep.field
    for (i, j) in _REL_PAIRS[rep.algebra]:
        a = mat_mul(F, rep.delta_m(j), rep.gamma_m(i))
        b = mat_mul(F, rep.delta_m(i), rep.gamma_m(j))
        if rep.algebra == "B":
            m = [[F.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
        else:
            m = [[F.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
        if not is_zero_matrix(F, m):
            return (False, (i, j))
    return (True, None)


def require_relations(rep: QuiverRep) -> QuiverRep:
    ok, bad = check_relations(rep)
    if not ok:
        raise VerificationError(f"relations violated at arrow pair {bad}")
    return rep


# ---------------------------------------------------------------------------
# building blocks


def simple(algebra: str, vertex: int, field=QQ) -> QuiverRep:
    """The vertex simple C v_i (all arrows zero)."""
    if vertex not in (0, 1, 2):
        raise InputError("vertex must be 0, 1 or 2")
    dims = tuple(1 if v == vertex else 0 for v in range(3))
    n0, n1, n2 = dims
    gamma = [zeros(field, n1, n0) for _ in range(3)]
    delta = [zeros(field, n2, n1) for _ in range(3)]
    return QuiverRep(algebra, field, dims, gamma, delta)


def direct_sum(a: QuiverRep, b: QuiverRep) -> QuiverRep:
    if a.algebra != b.algebra or a.field != b.field:
        raise InputError("summands live over different algebras or fields")
    F = a.field

    def block(M, N, rM, cM, rN, cN):
        out = zeros(F, rM + rN, cM + cN)
        for i in range(rM):
            for j in range(cM):
                out[i][j] = M[i][j]
        for i in range(rN):
            for j in range(cN):
                out[rM + i][cM + j] = N[i][j]
        return out

    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    gamma = [
        block(a.gamma[i], b.gamma[i], a.dims[1], a.dims[0], b.dims[1], b.dims[0])
        for i in range(3)
    ]
    delta = [
        block(a.delta[j], b.delta[j], a.dims[2], a.dims[1], b.dims[2], b.dims[1])
        for j in range(3)
    ]
    return QuiverRep(a.algebra, F, dims, gamma, delta)


# ---------------------------------------------------------------------------
# subspace triples


def _pivots_of_rref(F, R) -> List[int]:
    piv = []
    for row in R:
        for c, x in enumerate(row):
            if not F.is_zero(x):
                piv.append(c)
                break
    return piv


def _canon(F, vectors, ncols) -> tuple:
    rows, _ = row_space(F, vectors, ncols)
    return tuple(tuple(r) for r in rows)


def closure(rep: QuiverRep, seeds0=(), seeds1=(), seeds2=()) -> SubTriple:
    """Smallest submodule containing the given vectors (one pass suffices
    because the quiver is a two-step path)."""
    F = rep.field
    n0, n1, n2 = rep.dims
    U0 = _canon(F, [list(v) for v in seeds0], n0)
    at1 = [list(v) for v in seeds1]
    for u in U0:
        for i in range(3):
            at1.append(mat_vec(F, rep.gamma_m(i), list(u)))
    U1 = _canon(F, at1, n1)
    at2 = [list(v) for v in seeds2]
    for u in U1:
        for j in range(3):
            at2.append(mat_vec(F, rep.delta_m(j), list(u)))
    U2 = _canon(F, at2, n2)
    return (U0, U1, U2)


def triple_dims(triple: SubTriple) -> DimVec:
    return tuple(len(u) for u in triple)  # type: ignore[return-value]


def is_invariant(rep: QuiverRep, triple: SubTriple) -> bool:
    F = rep.field
    U0, U1, U2 = triple
    R1, p1 = row_space(F, [list(r) for r in U1], rep.dims[1])
    R2, p2 = row_space(F, [list(r) for r in U2], rep.dims[2])
    for u in U0:
        for i in range(3):
            v = mat_vec(F, rep.gamma_m(i), list(u))
            if not linalg.in_row_space(F, R1, p1, v):
                return False
    for u in U1:
        for j in range(3):
            v = mat_vec(F, rep.delta_m(j), list(u))
            if not linalg.in_row_space(F, R2, p2, v):
                return False
    return True


def sub_from(rep: QuiverRep, triple: SubTriple) -> QuiverRep:
    """The submodule carried by an invariant subspace triple, in the basis
    given by the canonical rref rows of the triple."""
    F = rep.field
    if not is_invariant(rep, triple):
        raise InputError("not a submodule")
    canon = tuple(
        _canon(F, [list(r) for r in U], rep.dims[v]) for v, U in enumerate(triple)
    )
    U0, U1, U2 = canon
    piv = [_pivots_of_rref(F, U) for U in canon]

    def induced(M, src, tgt, tgt_piv):
        cols = []
        for u in src:
            v = mat_vec(F, M, list(u))
            cols.append([v[p] for p in tgt_piv])
        return transpose(cols, ncols=len(src)) if cols else [[] for _ in range(len(tgt))]

    gamma = [induced(rep.gamma_m(i), U0, U1, piv[1]) for i in range(3)]
    delta = [induced(rep.delta_m(j), U1, U2, piv[2]) for j in range(3)]
    dims = triple_dims(canon)
    return QuiverRep(rep.algebra, F, dims, gamma, delta)


def quotient_by(rep: QuiverRep, triple: SubTriple) -> QuiverRep:
    """The quotient module, in the complement-coordinate basis: at each
    vertex the surviving coordinates are the non-pivot columns of the
    subspace's rref basis ("drop the pivot coordinates after reducing")."""
    F = rep.field
    if not is_invariant(rep, triple):
        raise InputError("not a submodule")
    data = []
    for v, U in enumerate(triple):
        R, piv = row_space(F, [list(r) for r in U], rep.dims[v])
        comp = [c for c in range(rep.dims[v]) if c not in piv]
        data.append((R, piv, comp))

    def project(vertex, vec):
        R, piv, comp = data[vertex]
        w = linalg.reduce_vector(F, R, piv, vec)
        return [w[c] for c in comp]

    def induced(M, src_vertex, tgt_vertex):
        _, _, comp_src = data[src_vertex]
        cols = []
        for c in comp_src:
            e = [F.zero()] * rep.dims[src_vertex]
            e[c] = F.one()
            cols.append(project(tgt_vertex, mat_vec(F, M, e)))
        tgt_dim = len(data[tgt_vertex][2])
        return transpose(cols, ncols=len(comp_src)) if cols else [
            [] for _ in range(tgt_dim)
        ]

    gamma = [induced(rep.gamma_m(i), 0, 1) for i in range(3)]
    delta = [induced(rep.delta_m(j), 1, 2) for j in range(3)]
    dims = tuple(len(d[2]) for d in data)
    return QuiverRep(rep.algebra, F, dims, gamma, delta)


# ---------------------------------------------------------------------------
# hom spaces and isomorphy


def hom_space(a: QuiverRep, b: QuiverRep) -> List[Tuple]:
    """Basis of Hom(a, b): triples (f0, f1, f2) with f1 gamma^a = gamma^b f0
    and f2 delta^a = delta^b f1."""
    if a.algebra != b.algebra or a.field != b.field:
        raise InputError("modules live over different algebras or fields")
    F = a.field
    a0, a1, a2 = a.dims
    b0, b1, b2 = b.dims
    nvars = b0 * a0 + b1 * a1 + b2 * a2
    off1 = b0 * a0
    off2 = off1 + b1 * a1

    rows: List[List] = []

    def add_equations(src_mats, tgt_mats, src_dims, var_off_src, var_off_tgt):
        # f_tgt @ M_a  ==  M_b @ f_src   for each arrow M
        (sa, ta) = src_dims  # (source vertex dim in a, target vertex dim in a)
        for M_a, M_b in zip(src_mats, tgt_mats):
            tb = len(M_b)  # target vertex dim in b
            for p in range(tb):
                for q in range(sa):
                    row = [F.zero()] * nvars
                    # + sum_m f_tgt[p][m] * M_a[m][q]
                    for m in range(ta):
                        row[var_off_tgt + p * ta + m] = F.add(
                            row[var_off_tgt + p * ta + m], M_a[m][q]
                        )
                    # - sum_m M_b[p][m] * f_src[m][q]
                    for m in range(len(M_b[p])):
                        idx = var_off_src + m * sa + q
                        row[idx] = F.sub(row[idx], M_b[p][m])
                    rows.append(row)

    # gamma equations: f1 gamma^a_i = gamma^b_i f0
    add_equations(
        [a.gamma_m(i) for i in range(3)],
        [b.gamma_m(i) for i in range(3)],
        (a0, a1),
        0,
        off1,
    )
    # delta equations: f2 delta^a_j = delta^b_j f1
    add_equations(
        [a.delta_m(j) for j in range(3)],
        [b.delta_m(j) for j in range(3)],
        (a1, a2),
        off1,
        off2,
    )

    basis = right_kernel(F, rows, ncols=nvars)

    def unflatten(vec):
        f0 = [vec[p * a0 : (p + 1) * a0] for p in range(b0)]
        f1 = [vec[off1 + p * a1 : off1 + (p + 1) * a1] for p in range(b1)]
        f2 = [vec[off2 + p * a2 : off2 + (p + 1) * a2] for p in range(b2)]
        return (f0, f1, f2)

    return [unflatten(v) for v in basis]


@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    certainty: str  # "exact" | "probabilistic"
    failure_bound: Optional[float]
    witness: Optional[Tuple] = None

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return self.isomorphic


def iso_test(a: QuiverRep, b: QuiverRep, seed: int = 0, samples: int = 20) -> IsoResult:
    """Isomorphy via an invertible intertwiner.

    A found invertible element of Hom(a, b) is a proof; failure to find one
    among random linear combinations is only probabilistic, with the
    Schwartz-Zippel failure bound reported (never silent).
    """
    if a.dims != b.dims or a.field != b.field or a.algebra != b.algebra:
        return IsoResult(False, "exact", None)
    if a.total_dim() == 0:
        return IsoResult(True, "exact", None, ((), (), ()))
    F = a.field
    homs = hom_space(a, b)
    if not homs:
        return IsoResult(False, "exact", None)

    def combo(coeffs):
        fs = []
        for v in range(3):
            n = a.dims[v]
            M = zeros(F, n, n)
            for c, h in zip(coeffs, homs):
                if F.is_zero(c):
                    continue
                for p in range(n):
                    for q in range(n):
                        M[p][q] = F.add(M[p][q], F.mul(c, h[v][p][q]))
            fs.append(M)
        return fs

    def invertible(fs):
        return all(
            linalg.rank(F, M) == a.dims[v] for v, M in enumerate(fs)
        )

    deg = a.total_dim()
    if isinstance(F, PrimeField) and F.p ** len(homs) <= 4096:
        # small enough to decide exactly
        for coeffs in itertools.product(F.elements(), repeat=len(homs)):
            if all(F.is_zero(c) for c in coeffs):
                continue
            fs = combo(coeffs)
            if invertible(fs):
                return IsoResult(True, "exact", None, tuple(fs))
        return IsoResult(False, "exact", None)

    rng = random.Random(seed)
    if isinstance(F, PrimeField):
        sample = lambda: F.convert(rng.randrange(F.p))
        per = min(1.0, deg / F.p)
    else:
        span = 1 << 31
        sample = lambda: Fraction(rng.randrange(span))
        per = deg / (1 << 31)
    for _ in range(samples):
        fs = combo([sample() for _ in homs])
        if invertible(fs):
            return IsoResult(True, "exact", None, tuple(fs))
    return IsoResult(False, "probabilistic", min(1.0, per ** samples) if per > 0 else 0.0)


# ---------------------------------------------------------------------------
# duality


def dualize(rep: QuiverRep) -> QuiverRep:
    """The linear dual with reversed grading: vertex i of N* carries the
    dual of vertex 2 - i of N; arrows act by transposes, no sign twists.

    gamma*_i on N* is (delta*_i of N)^T and delta*_j on N* is
    (gamma*_j of N)^T; both relation ideals are preserved.
    """
    n0, n1, n2 = rep.dims
    dims = (n2, n1, n0)
    gamma = [transpose(rep.delta_m(i), ncols=n1) for i in range(3)]
    delta = [transpose(rep.gamma_m(j), ncols=n0) for j in range(3)]
    return QuiverRep(rep.algebra, rep.field, dims, gamma, delta)


def reverse_theta(theta: Sequence) -> Tuple[Fraction, Fraction, Fraction]:
    """The weight matching duality: (t0, t1, t2) -> (-t2, -t1, -t0)."""
    t0, t1, t2 = (Fraction(x) for x in theta)
    return (-t2, -t1, -t0)


# ---------------------------------------------------------------------------
# tilting between B and B'


def tilt_B_to_Bprime(rep: QuiverRep) -> QuiverRep:
    """Carry a B-module N to the B'-module M with M0 = N0, M1 = N2 and
    M2 = coker(delta_V), where delta_V : N1 -> N2^3 stacks the deltas.

    Requires delta_V injective; otherwise the object leaves the target
    module category.
    """
    if rep.algebra != "B":
        raise InputError("tilt_B_to_Bprime expects a B-module")
    F = rep.field
    n0, n1, n2 = rep.dims
    stacked = []
    for j in range(3):
        stacked.extend(rep.delta_m(j))
    stacked_rank = linalg.rank(F, stacked) if stacked else 0
    if stacked_rank < n1:
        raise InputError("object leaves mod-B' (theta1 >= 0 regime)")
    # image of delta_V inside F^{3 n2}, as a row space
    img_rows, img_piv = row_space(F, transpose(stacked, ncols=n1), 3 * n2) if stacked else ([], [])
    comp = [c for c in range(3 * n2) if c not in img_piv]
    m2 = len(comp)
    assert m2 == 3 * n2 - n1

    def project(vec):
        w = linalg.reduce_vector(F, img_rows, img_piv, vec)
        return [w[c] for c in comp]

    gamma_M = [
        mat_mul(F, rep.delta_m((i + 1) % 3), rep.gamma_m((i + 2) % 3))
        for i in range(3)
    ]
    delta_M = []
    for j in range(3):
        cols = []
        for c in range(n2):
            e = [F.zero()] * (3 * n2)
            e[j * n2 + c] = F.one()
            cols.append(project(e))
        delta_M.append(transpose(cols, ncols=n2) if cols else [[] for _ in range(m2)])
    out = QuiverRep("Bprime", F, (n0, n2, m2), gamma_M, delta_M)
    return require_relations(out)


def tilt_Bprime_to_B(rep: QuiverRep) -> Tuple[QuiverRep, Optional[str]]:
    """Carry a B'-module M to the B-module N with N0 = M0, N2 = M1 and
    N1 = ker(delta^V), where delta^V : M1 (x) V -> M2 sums the deltas.

    Always defined; returns (N, flag) where flag warns when delta^V is not
    surjective (the construction then sits outside the generic locus).
    """
    if rep.algebra != "Bprime":
        raise InputError("tilt_Bprime_to_B expects a B'-module")
    F = rep.field
    m0, m1, m2 = rep.dims
    D = [
        [rep.delta[j][r][c] for j in range(3) for c in range(m1)]
        for r in range(m2)
    ]
    K = right_kernel(F, D, ncols=3 * m1)
    n1 = len(K)
    flag = None
    if linalg.rank(F, D) < m2:
        flag = "non-generic (dim N1 > 3*dim M1 - dim M2)"
    Kt = transpose(K, ncols=3 * m1)  # columns are kernel basis vectors

    gamma_N = []
    for i in range(3):
        cols = []
        gi1 = rep.gamma_m((i + 1) % 3)
        gi2 = rep.gamma_m((i + 2) % 3)
        for a in range(m0):
            w = [F.zero()] * (3 * m1)
            for r in range(m1):
                w[((i + 2) % 3) * m1 + r] = gi1[r][a]
                w[((i + 1) % 3) * m1 + r] = F.neg(gi2[r][a])
            c = solve_right(F, Kt, w)
            if c is None:
                raise VerificationError(
                    "tilt image escaped the kernel; relations must be broken"
                )
            cols.append(c)
        gamma_N.append(transpose(cols, ncols=m0) if cols else [[] for _ in range(n1)])

    delta_N = [
        [[K[b][j * m1 + r] for b in range(n1)] for r in range(m1)]
        for j in range(3)
    ]
    out = QuiverRep("B", F, (m0, n1, m1), gamma_N, delta_N)
    return require_relations(out), flag


# ---------------------------------------------------------------------------
# stability weights


def theta_pair(theta: Sequence, dims: Sequence) -> Fraction:
    return sum((Fraction(t) * int(d) for t, d in zip(theta, dims)), Fraction(0))


def theta_transform(theta: Sequence) -> Tuple[Fraction, Fraction, Fraction]:
    """Rewrite an A_1-side weight in the A'_1 dimension-vector coordinates:
    (t0, t1, t2) -> (t0, 3 t1 + t2, -t1).

    This is precomposition with the base change that expresses the A'_1
    simples in the A_1 basis, so evaluation against dimension vectors is
    unchanged objectwise.
    """
    t0, t1, t2 = (Fraction(x) for x in theta)
    return (t0, 3 * t1 + t2, -t1)


# ---------------------------------------------------------------------------
# the layered submodule oracle


@dataclass(frozen=True)
class SubmoduleSearch:
    """Result of the two-layer submodule dimension-vector search.

    Layer 1 closes a pool of generated submodules (kernels, images, cyclic
    and random closures) under sums and intersections: sound, possibly
    incomplete, with explicit witnesses over the base field.  Layer 2 is an
    exhaustive enumeration over a finite field (exact there; for rational
    modules it certifies via reductions mod several primes).  ``complete``
    is set only when Layer 2 ran, and ``evidence`` says how strong the
    certificate is.
    """

    dims: DimVec
    dimvecs: frozenset
    layer1_dimvecs: frozenset
    witnesses: Dict[DimVec, SubTriple]
    complete: bool
    evidence: str
    layers: Tuple[str, ...]
    budget: int
    seed: int

    @property
    def layer1_missing(self) -> frozenset:
        return self.dimvecs - self.layer1_dimvecs


def _u1_candidates(rep: QuiverRep, seed: int, cap: int, pair_budget: int) -> List[tuple]:
    """Candidate middle-vertex subspaces, as canonical rref row tuples.

    Sources: arrow images and kernels, cyclic spans of coordinate (and, over
    a small prime field, all) vectors, delta-preimages of a pool of
    end-vertex targets, seeded random spans, then sums and intersections of
    earlier candidates under a work budget.
    """
    F = rep.field
    n0, n1, n2 = rep.dims
    pool: Dict[tuple, None] = {}

    def add(rows) -> Tuple[tuple, bool]:
        canon = _canon(F, [list(r) for r in rows], n1)
        if canon in pool or len(pool) >= cap:
            return canon, False
        pool[canon] = None
        return canon, True

    def basis_vectors(n):
        for c in range(n):
            e = [F.zero()] * n
            e[c] = F.one()
            yield e

    def gamma_span(x):
        return [mat_vec(F, rep.gamma_m(i), list(x)) for i in range(3)]

    add([])
    add(identity(F, n1))

    # arrow images and kernels
    gamma_cols = [transpose(rep.gamma_m(i), ncols=n0) for i in range(3)]
    for i in range(3):
        add(gamma_cols[i])
    add([row for cols in gamma_cols for row in cols])
    stacked_delta = [row for j in range(3) for row in rep.delta_m(j)]
    add(right_kernel(F, stacked_delta, ncols=n1))
    for j in range(3):
        add(right_kernel(F, rep.delta_m(j), ncols=n1))

    # cyclic spans of coordinate vectors; over a small prime field every
    # vector is affordable, and then every cyclic subspace is seeded here
    for e in basis_vectors(n0):
        add(gamma_span(e))
    for e in basis_vectors(n1):
        add([e])
    if isinstance(F, PrimeField):
        if n0 and F.p ** n0 <= 512:
            for coeffs in itertools.product(F.elements(), repeat=n0):
                if any(c != 0 for c in coeffs):
                    add(gamma_span(list(coeffs)))
        if n1 and F.p ** n1 <= 512:
            for coeffs in itertools.product(F.elements(), repeat=n1):
                if any(c != 0 for c in coeffs):
                    add([list(coeffs)])

    # delta-preimages of a small pool of subspaces at the end vertex
    targets: Dict[tuple, None] = {}

    def add_target(rows) -> None:
        if len(targets) < 64:
            targets.setdefault(_canon(F, [list(r) for r in rows], n2), None)

    add_target([])
    add_target(identity(F, n2))
    for j in range(3):
        add_target(transpose(rep.delta_m(j), ncols=n1))
    if n2 <= 4:
        ebasis = list(basis_vectors(n2))
        for mask in range(1, 2**n2 - 1):
            add_target([ebasis[k] for k in range(n2) if (mask >> k) & 1])
    for u1c in list(pool)[:40]:
        imgs = [mat_vec(F, rep.delta_m(j), list(u)) for u in u1c for j in range(3)]
        add_target(row_space(F, imgs, n2)[0])

    deltas_t = [transpose(rep.delta_m(j), ncols=n1) for j in range(3)]

    def delta_preimage(wrows):
        ann = right_kernel(F, [list(r) for r in wrows], ncols=n2)
        constraints = [mat_vec(F, deltas_t[j], list(w)) for w in ann for j in range(3)]
        return right_kernel(F, constraints, ncols=n1)

    for w in list(targets):
        add(delta_preimage(w))

    # seeded random cyclic spans
    rng = random.Random(seed)

    def rand_vec(n):
        if isinstance(F, PrimeField):
            return [rng.randrange(F.p) for _ in range(n)]
        return [Fraction(rng.randint(-3, 3)) for _ in range(n)]

    for _ in range(8):
        if n0:
            add(gamma_span(rand_vec(n0)))
        if n1:
            add([rand_vec(n1)])

    # close under sums and intersections with a work budget
    ops = 0
    atoms = list(pool)
    for a, b in itertools.combinations(atoms, 2):
        if ops >= pair_budget or len(pool) >= cap:
            break
        add([list(r) for r in a] + [list(r) for r in b])
        add(linalg.intersect_row_spaces(F, [list(r) for r in a], [list(r) for r in b], n1))
        ops += 2
    frontier = [t for t in pool if t not in set(atoms)]
    rounds = 0
    while frontier and ops < pair_budget and len(pool) < cap and rounds < 2:
        snapshot = list(pool)
        new: List[tuple] = []
        for a in frontier:
            if ops >= pair_budget or len(pool) >= cap:
                break
            for b in snapshot:
                if ops >= pair_budget or len(pool) >= cap:
                    break
                canon, fresh = add([list(r) for r in a] + [list(r) for r in b])
                ops += 1
                if fresh:
                    new.append(canon)
        frontier = new
        rounds += 1
    return list(pool)


def _layer1(rep: QuiverRep, seed: int, cap: int = 250, pair_budget: int = 4000):
    """Witnessed dimvec search driven by candidate middle subspaces.

    A triple (U0, U1, U2) is a submodule exactly when U0 lies inside
    U0max(U1) = {x : gamma_i(x) in U1 for all i} and U2 contains delta(U1);
    every intermediate dimension at the outer vertices is realizable.  So
    each candidate U1 certifies a full rectangle of dimension vectors, with
    explicit witnesses.  Sound for any candidate pool; complete whenever
    the pool covers the middle subspaces that matter.
    """
    F = rep.field
    n0, n1, n2 = rep.dims
    gammas_t = [transpose(rep.gamma_m(i), ncols=n0) for i in range(3)]
    witnesses: Dict[DimVec, SubTriple] = {}
    for u1c in _u1_candidates(rep, seed, cap, pair_budget):
        u1 = [list(r) for r in u1c]
        imgs = [mat_vec(F, rep.delta_m(j), list(u)) for u in u1 for j in range(3)]
        D, dpiv = row_space(F, imgs, n2)
        d2 = len(D)
        # deterministic completion of delta(U1) towards the full end fibre
        growth: List[List] = []
        grow_rows, grow_piv = [list(r) for r in D], list(dpiv)
        for k in range(n2):
            e = [F.zero()] * n2
            e[k] = F.one()
            red = linalg.reduce_vector(F, grow_rows, grow_piv, list(e))
            if any(not F.is_zero(x) for x in red):
                growth.append(e)
                grow_rows, grow_piv = row_space(F, grow_rows + [e], n2)
        # U0max via functionals vanishing on U1
        ann = right_kernel(F, u1, ncols=n1)
        constraints = [mat_vec(F, gammas_t[i], list(w)) for w in ann for i in range(3)]
        u0max = right_kernel(F, constraints, ncols=n0)
        for a in range(len(u0max) + 1):
            for c in range(d2, n2 + 1):
                dv = (a, len(u1c), c)
                if dv in witnesses:
                    continue
                u0rows = _canon(F, [list(u0max[i]) for i in range(a)], n0)
                u2rows = _canon(
                    F, [list(r) for r in D] + [list(g) for g in growth[: c - d2]], n2
                )
                witnesses[dv] = (u0rows, u1c, u2rows)
    return witnesses


def _layer2_dimvecs(rep: QuiverRep) -> frozenset:
    """Exact dimvec set over the rep's own finite field, by enumerating
    middle-vertex subspaces only.

    For the two-step path quiver a triple (U0, U1, U2) is a submodule iff
    U0 <= U0max(U1) and U2 >= delta(U1), and all intermediate dimensions at
    the outer vertices are realized, so enumerating U1 gives everything.
    """
    F = rep.field
    n0, n1, n2 = rep.dims
    gam_cols = [
        [[rep.gamma[i][r][c] for r in range(n1)] for c in range(n0)]
        for i in range(3)
    ]
    out = set()
    for rows, piv in iter_subspaces(F, n1):
        u1 = len(rows)
        # dim of delta(U1)
        imgs = []
        for u in rows:
            for j in range(3):
                imgs.append(mat_vec(F, rep.delta_m(j), list(u)))
        d2 = len(row_space(F, imgs, n2)[0]) if imgs else 0
        # U0max = kernel of x |-> (gamma_i x mod U1)_i
        if u1 == n1:
            k0 = n0
        else:
            comp = [c for c in range(n1) if c not in piv]
            res_rows = []
            for i in range(3):
                for c in range(n0):
                    w = linalg.reduce_vector(F, [list(r) for r in rows], piv, gam_cols[i][c])
                    res_rows.append([w[cc] for cc in comp])
            # res_rows currently holds columns of the residual maps; we need
            # the kernel of the stacked residual matrix acting on F^{n0}
            mat = []
            for i in range(3):
                block = res_rows[i * n0 : (i + 1) * n0]  # one column per c
                for rr in range(len(comp)):
                    mat.append([block[c][rr] for c in range(n0)])
            k0 = n0 - linalg.rank(F, mat) if mat else n0
        for u0 in range(k0 + 1):
            for u2 in range(d2, n2 + 1):
                out.add((u0, u1, u2))
    return frozenset(out)


#: primes tried for rational modules, smallest first (enumeration cost is
#: driven by the Galois number at the middle vertex)
_LAYER2_PRIMES = (2, 3, 5)
_LAYER2_SUBSPACE_CAP = 150_000


def _reduce_rep_mod_p(rep: QuiverRep, p: int) -> QuiverRep:
    """Reduce a rational module mod p after rescaling each arrow to a
    primitive integer matrix (submodule lattices ignore arrow scaling)."""
    F = PrimeField(p)

    def red(M, nrows, ncols):
        if nrows == 0 or ncols == 0:
            return [[0] * ncols for _ in range(nrows)]
        ints = clear_denominators([list(r) for r in M])
        return [[x % p for x in row] for row in ints]

    n0, n1, n2 = rep.dims
    gamma = [red(rep.gamma[i], n1, n0) for i in range(3)]
    delta = [red(rep.delta[j], n2, n1) for j in range(3)]
    return QuiverRep(rep.algebra, F, rep.dims, gamma, delta)


def submodule_dimvecs(rep: QuiverRep, budget: int = 12, seed: int = 0) -> SubmoduleSearch:
    """Two-layer search for the set of submodule dimension vectors.

    Layer 1 (always): generated closures + sums/intersections, explicit
    witnesses, sound but possibly incomplete over Q.  Layer 2 (when the
    total dimension fits the budget): exhaustive subspace enumeration — on
    the module's own prime field this is exact; rational modules are
    reduced mod several primes and certified either by the squeeze
    layer1 == layer2 (rigorous) or by cross-prime agreement.
    """
    return _submodule_dimvecs_impl(rep, int(budget), int(seed))


@lru_cache(maxsize=256)
def _submodule_dimvecs_impl(rep: QuiverRep, budget: int, seed: int) -> SubmoduleSearch:
    witnesses = _layer1(rep, seed)
    layer1_set = frozenset(witnesses)
    layers = ["layer1"]

    if rep.total_dim() > budget:
        return SubmoduleSearch(
            rep.dims, layer1_set, layer1_set, witnesses, False,
            "layer1-only (budget exceeded)", tuple(layers), budget, seed,
        )

    n1 = rep.dims[1]
    if isinstance(rep.field, PrimeField):
        if galois_number(n1, rep.field.p) > _LAYER2_SUBSPACE_CAP:
            return SubmoduleSearch(
                rep.dims, layer1_set, layer1_set, witnesses, False,
                "layer1-only (enumeration too large)", tuple(layers), budget, seed,
            )
        full = _layer2_dimvecs(rep)
        layers.append(f"layer2(F_{rep.field.p})")
        if not layer1_set <= full:
            raise VerificationError("layer 1 produced a non-submodule dimvec")
        return SubmoduleSearch(
            rep.dims, full, layer1_set, witnesses, True,
            f"exhaustive(F_{rep.field.p})", tuple(layers), budget, seed,
        )

    # rational module: reductions mod primes
    prime_sets = []
    for p in _LAYER2_PRIMES:
        if galois_number(n1, p) > _LAYER2_SUBSPACE_CAP:
            continue
        red = _reduce_rep_mod_p(rep, p)
        full_p = _layer2_dimvecs(red)
        layers.append(f"layer2(mod {p})")
        if not layer1_set <= full_p:
            raise VerificationError(
                f"saturated reduction mod {p} lost a certified submodule"
            )
        if full_p == layer1_set:
            return SubmoduleSearch(
                rep.dims, layer1_set, layer1_set, witnesses, True,
                f"squeeze(p={p})", tuple(layers), budget, seed,
            )
        prime_sets.append((p, full_p))

    if prime_sets:
        ps = ",".join(str(p) for p, _ in prime_sets)
        inter = frozenset.intersection(*[s for _, s in prime_sets])
        if inter == layer1_set:
            # true set is sandwiched: layer1 <= true <= every reduction
            return SubmoduleSearch(
                rep.dims, layer1_set, layer1_set, witnesses, True,
                f"squeeze(intersection mod {ps})", tuple(layers), budget, seed,
            )
        if len(prime_sets) >= 2 and all(
            s == prime_sets[0][1] for _, s in prime_sets[1:]
        ):
            return SubmoduleSearch(
                rep.dims, prime_sets[0][1], layer1_set, witnesses, True,
                f"cross-prime({ps})", tuple(layers), budget, seed,
            )
    if not prime_sets:
        reason = "no usable prime"
    elif len(prime_sets) == 1:
        reason = "mod-p excess unresolved"
    else:
        reason = "cross-prime disagreement"
    return SubmoduleSearch(
        rep.dims, layer1_set, layer1_set, witnesses, False,
        f"layer1-only ({reason})", tuple(layers), budget, seed,
    )


# ---------------------------------------------------------------------------
# King stability


@dataclass(frozen=True)
class KingVerdict:
    verdict: str            # "stable" | "semistable" | "unstable" | "theta-nonvanishing"
    certainty: str          # "exact" | "probabilistic"
    witness_dimvec: Optional[DimVec]
    witness: Optional[SubTriple]
    theta: Tuple
    search: Optional[SubmoduleSearch]

    @property
    def semistable(self) -> bool:
        return self.verdict in ("stable", "semistable")


def king_test(
    rep: QuiverRep,
    theta: Sequence,
    budget: int = 12,
    seed: int = 0,
    search: Optional[SubmoduleSearch] = None,
) -> KingVerdict:
    """King (semi)stability of rep for the weight theta.

    Requires theta(dims) = 0 (else verdict "theta-nonvanishing").  The rep
    is unstable iff some submodule has theta < 0; a verdict is "exact" when
    backed by an explicit witness (instability) or by a complete search
    (semistability), and "probabilistic" otherwise — never silent.
    """
    theta = tuple(Fraction(x) for x in theta)
    if theta_pair(theta, rep.dims) != 0:
        return KingVerdict("theta-nonvanishing", "exact", None, None, theta, None)
    if search is None:
        search = submodule_dimvecs(rep, budget=budget, seed=seed)
    zero = (0, 0, 0)
    negatives = sorted(
        (dv for dv in search.dimvecs if theta_pair(theta, dv) < 0),
        key=lambda dv: (sum(dv), dv),
    )
    if negatives:
        witnessed = [dv for dv in negatives if dv in search.witnesses]
        if witnessed:
            dv = witnessed[0]
            return KingVerdict(
                "unstable", "exact", dv, search.witnesses[dv], theta, search
            )
        return KingVerdict("unstable", "probabilistic", negatives[0], None, theta, search)
    has_middle = any(
        dv not in (zero, rep.dims) and theta_pair(theta, dv) == 0
        for dv in search.dimvecs
    )
    verdict = "semistable" if has_middle else "stable"
    certainty = "exact" if search.complete else "probabilistic"
    return KingVerdict(verdict, certainty, None, None, theta, search)


class DestabilizedError(VerificationError):
    """Raised by jh_factors on an unstable module; carries the witness."""

    def __init__(self, verdict: KingVerdict):
        self.verdict = verdict
        super().__init__(
            f"module is not semistable: destabilizing dimvec {verdict.witness_dimvec}"
        )


def jh_factors(
    rep: QuiverRep,
    theta: Sequence,
    budget: int = 12,
    seed: int = 0,
    verify: bool = False,
) -> List[QuiverRep]:
    """Jordan-Hoelder factors of a theta-semistable module.

    Peels a minimal-dimension theta = 0 proper submodule (automatically
    stable) and recurses on the quotient; the concatenated factor dims add
    up to dims(rep).  Raises DestabilizedError with the witness if the
    module is not semistable.
    """
    theta = tuple(Fraction(x) for x in theta)
    first = king_test(rep, theta, budget=budget, seed=seed)
    if first.verdict == "theta-nonvanishing":
        raise InputError("theta does not vanish on the module class")
    if first.verdict == "unstable":
        raise DestabilizedError(first)

    factors: List[QuiverRep] = []
    current = rep
    zero = (0, 0, 0)
    while True:
        if current.total_dim() == 0:
            break
        search = submodule_dimvecs(current, budget=budget, seed=seed)
        candidates = [
            dv
            for dv in search.witnesses
            if dv not in (zero, current.dims) and theta_pair(theta, dv) == 0
        ]
        if not candidates:
            factors.append(current)
            break
        dv = min(candidates, key=lambda d: (sum(d), d))
        w = search.witnesses[dv]
        factors.append(sub_from(current, w))
        current = quotient_by(current, w)

    total = tuple(sum(f.dims[v] for f in factors) for v in range(3))
    if total != rep.dims:
        raise VerificationError("JH factor dims do not add up")  # pragma: no cover
    if verify:
        for f in factors:
            v = king_test(f, theta, budget=budget, seed=seed)
            if v.verdict not in ("stable",):
                raise VerificationError(
                    f"JH factor of dims {f.dims} failed the stability check: {v.verdict}"
                )
    return factors


def s_equiv(
    a: QuiverRep,
    b: QuiverRep,
    theta: Sequence,
    budget: int = 12,
    seed: int = 0,
) -> bool:
    """S-equivalence: equality of JH factor multisets up to isomorphism."""
    fa = jh_factors(a, theta, budget=budget, seed=seed)
    fb = jh_factors(b, theta, budget=budget, seed=seed)
    if sorted(f.dims for f in fa) != sorted(f.dims for f in fb):
        return False
    unmatched = list(fb)
    for f in fa:
        hit = None
        for g in unmatched:
            if g.dims == f.dims and iso_test(f, g, seed=seed).isomorphic:
                hit = g
                break
        if hit is None:
            return False
        unmatched.remove(hit)
    return True


# ---------------------------------------------------------------------------
# random relation-satisfying modules (for tests and calibration)


def random_rep(algebra: str, field, dims: Sequence[int], rng: random.Random) -> QuiverRep:
    """A random module: random gammas, then deltas sampled from the kernel
    of the relation system (which is linear in delta once gamma is fixed)."""
    n0, n1, n2 = (int(x) for x in dims)

    def rand_entry():
        if isinstance(field, PrimeField):
            return rng.randrange(field.p)
        return Fraction(rng.randint(-3, 3))

    gamma = [[[rand_entry() for _ in range(n0)] for _ in range(n1)] for _ in range(3)]

    nvars = 3 * n2 * n1
    rows = []
    for (i, j) in _REL_PAIRS[algebra]:
        sign = field.one() if algebra == "B" else field.neg(field.one())
        for p in range(n2):
            for q0 in range(n0):
                row = [field.zero()] * nvars
                for q in range(n1):
                    # delta_j[p][q] * gamma_i[q][q0]
                    idx = j * n2 * n1 + p * n1 + q
                    row[idx] = field.add(row[idx], field.convert(gamma[i][q][q0]))
                    # +/- delta_i[p][q] * gamma_j[q][q0]
                    idx = i * n2 * n1 + p * n1 + q
                    row[idx] = field.add(row[idx], field.mul(sign, field.convert(gamma[j][q][q0])))
                rows.append(row)
    basis = right_kernel(field, rows, ncols=nvars) if nvars else []
    flat = [field.zero()] * nvars
    for vec in basis:
        c = rand_entry()
        flat = [field.add(x, field.mul(c, y)) for x, y in zip(flat, vec)]
    delta = [
        [[flat[j * n2 * n1 + p * n1 + q] for q in range(n1)] for p in range(n2)]
        for j in range(3)
    ]
    return require_relations(QuiverRep(algebra, field, (n0, n1, n2), gamma, delta))
