"""Point configurations in the projective plane and their quiver modules.

A length-n configuration of distinct points yields three modules:

* ``module_point(x)`` — the B-module of a single point, dims (1, 2, 1);
* ``module_ideal_A1(Z)`` — the B-module of the twisted ideal object in the
  tilted heart, dims (n, 2n+1, n), built by tilting an explicit B'-module
  of dims (n, n, n-1);
* ``module_ideal_A0(Z)`` — its analogue in the second heart presentation,
  dims (n, 2n, n-1), built from the point modules by a one-line quotient.

Point representatives are never rescaled; all constructions are
independent of the chosen representatives up to isomorphism (tested, not
assumed).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import InputError, VerificationError
from . import linalg
from .linalg import QQ, right_kernel, solve_right, transpose
from .ktheory import A0, ChernCharacter, chern_of_dimvec
from .quiver import (
    QuiverRep,
    closure,
    direct_sum,
    hom_space,
    iso_test,
    jh_factors,
    quotient_by,
    require_relations,
    simple,
    sub_from,
    tilt_Bprime_to_B,
    triple_dims,
)

Point = Tuple[Fraction, Fraction, Fraction]


def _cross(a: Point, b: Point) -> Point:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


@dataclass(frozen=True)
class PointConfig:
    """Finitely many pairwise-distinct points of P^2, with the coordinate
    representatives exactly as given."""

    points: Tuple[Point, ...]

    def __post_init__(self):
        pts = []
        for p in self.points:
            if len(p) != 3:
                raise InputError("points need three homogeneous coordinates")
            q = tuple(QQ.convert(c) for c in p)
            if all(c == 0 for c in q):
                raise InputError("the zero vector is not a projective point")
            pts.append(q)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if all(c == 0 for c in _cross(pts[i], pts[j])):
                    raise InputError(
                        f"points {i} and {j} coincide (non-reduced subscheme unsupported)"
                    )
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def matrix(self) -> List[List[Fraction]]:
        return [list(p) for p in self.points]

    def to_json(self) -> dict:
        return {"points": [[str(c) for c in p] for p in self.points]}

    @classmethod
    def from_json(cls, obj: dict) -> "PointConfig":
        try:
            raw = obj["points"]
        except (KeyError, TypeError) as exc:
            raise InputError("points JSON must have a 'points' array") from exc
        try:
            return cls(tuple(tuple(Fraction(str(c)) for c in p) for p in raw))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise InputError(f"bad point coordinates: {exc}") from exc


def _as_config(points) -> PointConfig:
    if isinstance(points, PointConfig):
        return points
    return PointConfig(tuple(tuple(Fraction(c) for c in p) for p in points))


# ---------------------------------------------------------------------------
# one point


def module_point(x: Sequence) -> QuiverRep:
    """The B-module of a single point, dims (1, 2, 1).

    Vertex 1 carries the kernel of evaluation-at-x on linear forms, in its
    canonical (rref right-kernel) basis; the deltas express the Koszul
    contraction in that basis.  Independent of the representative of x up
    to isomorphism.
    """
    x = tuple(QQ.convert(c) for c in x)
    if len(x) != 3 or all(c == 0 for c in x):
        raise InputError("need a nonzero coordinate triple")
    W = right_kernel(QQ, [list(x)], ncols=3)  # two rows w1, w2
    gamma = [[[W[0][i]], [W[1][i]]] for i in range(3)]
    Wt = transpose(W, ncols=3)  # 3 x 2, columns w1 w2
    delta = []
    for j in range(3):
        v = [Fraction(0)] * 3
        v[(j + 1) % 3] = x[(j + 2) % 3]
        v[(j + 2) % 3] = -x[(j + 1) % 3]
        c = solve_right(QQ, Wt, v)
        assert c is not None  # v . x = 0, so v lies in the kernel plane
        delta.append([c])
    return require_relations(QuiverRep("B", QQ, (1, 2, 1), gamma, delta))


# ---------------------------------------------------------------------------
# n points, second heart presentation (B'-side input)


def bprime_module_points(points) -> QuiverRep:
    """The B'-module of a configuration, dims (n, n, n-1): coordinatewise
    multiplication diag(x_i) at the first step and multiplication followed
    by the quotient killing the all-ones section at the second."""
    cfg = _as_config(points)
    n = len(cfg)
    if n == 0:
        raise InputError("empty configuration")
    pts = list(cfg)
    gamma = [
        [[pts[a][i] if a == b else Fraction(0) for b in range(n)] for a in range(n)]
        for i in range(3)
    ]
    # P : Q^n -> Q^{n-1}, c |-> (c_a - c_{n-1})_{a < n-1}
    delta = []
    for j in range(3):
        M = []
        for a in range(n - 1):
            row = [Fraction(0)] * n
            row[a] = pts[a][j]
            row[n - 1] = -pts[n - 1][j]
            M.append(row)
        delta.append(M)
    return require_relations(QuiverRep("Bprime", QQ, (n, n, n - 1), gamma, delta))


def module_ideal_A1(points) -> QuiverRep:
    """The B-module of the ideal-type object in the first tilted heart,
    dims (n, 2n+1, n), obtained by tilting the B'-module of the points."""
    cfg = _as_config(points)
    n = len(cfg)
    rep, flag = tilt_Bprime_to_B(bprime_module_points(cfg))
    if flag is not None:
        raise VerificationError(f"point-module tilt left the generic locus: {flag}")
    if rep.dims != (n, 2 * n + 1, n):
        raise VerificationError(f"unexpected tilt dims {rep.dims}")  # pragma: no cover
    return rep


def module_ideal_A0(points) -> QuiverRep:
    """The B-module of the ideal-type object in the second heart
    presentation, dims (n, 2n, n-1): the direct sum of the point modules,
    quotiented by the all-ones line at the last vertex (the section that
    evaluates to 1 at every point)."""
    cfg = _as_config(points)
    n = len(cfg)
    total = functools.reduce(direct_sum, (module_point(x) for x in cfg))
    if total.dims != (n, 2 * n, n):
        raise VerificationError("point modules summed to unexpected dims")  # pragma: no cover
    ones = [Fraction(1)] * n
    triple = closure(total, seeds2=[ones])
    if triple_dims(triple) != (0, 0, 1):
        raise VerificationError("all-ones line closed up unexpectedly")  # pragma: no cover
    quo = quotient_by(total, triple)
    # class bookkeeping: (0,0,1) + quotient dims must recover the sum dims
    if tuple(a + b for a, b in zip((0, 0, 1), quo.dims)) != total.dims:
        raise VerificationError("quotient dims do not account for the killed line")
    return quo


# ---------------------------------------------------------------------------
# collinearity


def collinear_test(points) -> bool:
    """Whether the configuration lies on a line.

    Decided by the rank of the coordinate matrix; for n >= 3 the module
    criterion dim Hom(C v_1, module_ideal_A0) != 0 is computed as well and
    the two answers are required to agree.
    """
    cfg = _as_config(points)
    n = len(cfg)
    if n <= 2:
        return True
    by_rank = linalg.rank(QQ, cfg.matrix()) <= 2
    homs = hom_space(simple("B", 1), module_ideal_A0(cfg))
    by_hom = len(homs) > 0
    if by_rank != by_hom:
        raise VerificationError(
            "rank test and Hom test disagree on collinearity"
        )  # pragma: no cover
    return by_rank


# ---------------------------------------------------------------------------
# wall filtration data


def hc_boundary_theta(n: int) -> Tuple[Fraction, Fraction, Fraction]:
    """Weight on the Hilbert-Chow wall for the (n, 2n+1, n) module."""
    return (Fraction(-n), Fraction(0), Fraction(n))


def zeta_boundary_theta(n: int) -> Tuple[Fraction, Fraction, Fraction]:
    """Weight on the line-contraction wall for the (n, 2n, n-1) module."""
    return (Fraction(1 - n), Fraction(0), Fraction(n))


WALLS = ("theta1_1", "theta0_0")


def wall_filtration_data(points, wall: str, budget: int = 12, seed: int = 0) -> dict:
    """What happens to the ideal-type module on a boundary wall.

    * ``theta1_1`` (Hilbert-Chow side): JH factors of module_ideal_A1 at
      the boundary weight, with each (1, 2, 1) factor matched to its
      support point by explicit isomorphism.
    * ``theta0_0`` (line-contraction side; collinear configurations only):
      the C v_1 submodule of module_ideal_A0 and the quotient, whose class
      is checked to be that of a shifted line bundle on the common line.
    """
    cfg = _as_config(points)
    n = len(cfg)
    if wall == "theta1_1":
        rep = module_ideal_A1(cfg)
        theta = hc_boundary_theta(n)
        factors = jh_factors(rep, theta, budget=budget, seed=seed)
        support: List[Optional[int]] = []
        v1_simples = 0
        for f in factors:
            if f.dims == (0, 1, 0):
                v1_simples += 1
                continue
            if f.dims != (1, 2, 1):
                raise VerificationError(f"unexpected JH factor dims {f.dims}")
            hit = None
            for k, x in enumerate(cfg):
                if iso_test(f, module_point(x), seed=seed).isomorphic:
                    hit = k
                    break
            support.append(hit)
        return {
            "wall": "theta1_1",
            "label": "Hilbert-Chow",
            "theta": theta,
            "factor_dims": sorted(f.dims for f in factors),
            "support": support,
            "v1_simple_count": v1_simples,
        }
    if wall == "theta0_0":
        if not collinear_test(cfg):
            raise InputError("requires collinear configuration")
        rep = module_ideal_A0(cfg)
        theta = zeta_boundary_theta(n)
        homs = hom_space(simple("B", 1), rep)
        if not homs:
            raise VerificationError("collinear configuration with no C v_1 map")
        u = [row[0] for row in homs[0][1]]  # image of the middle-vertex generator
        triple = closure(rep, seeds1=[u])
        if triple_dims(triple) != (0, 1, 0):
            raise VerificationError("C v_1 image not a vertex-simple submodule")
        quo = quotient_by(rep, triple)
        quo_ch = chern_of_dimvec(quo.dims, A0)
        expected = ChernCharacter(0, -1, Fraction(2 * n - 1, 2))
        if quo_ch != expected:
            raise VerificationError(
                f"quotient class {quo_ch} is not the shifted line-bundle class {expected}"
            )
        return {
            "wall": "theta0_0",
            "label": "zeta-contraction",
            "theta": theta,
            "sub_dims": (0, 1, 0),
            "quotient_dims": quo.dims,
            "quotient_class": quo_ch.triple(),
        }
    raise InputError(f"unknown wall {wall!r}; expected one of {WALLS}")


# ---------------------------------------------------------------------------
# composite identity for the tilted point modules


def composite_lines(points) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Check delta_j gamma_i = diag_x(l_ij(x)) on module_ideal_A1, where
    l_ij is x_{j+2}, -x_{j+1} or 0 according to i - j mod 3.

    Returns (ok, first failing (i, j)).
    """
    cfg = _as_config(points)
    n = len(cfg)
    rep = module_ideal_A1(cfg)
    pts = list(cfg)
    for i in range(3):
        for j in range(3):
            comp = linalg.mat_mul(QQ, rep.delta_m(j), rep.gamma_m(i))
            for a in range(n):
                for b in range(n):
                    if i % 3 == (j + 1) % 3:
                        want = pts[a][(j + 2) % 3] if a == b else Fraction(0)
                    elif i % 3 == (j + 2) % 3:
                        want = -pts[a][(j + 1) % 3] if a == b else Fraction(0)
                    else:
                        want = Fraction(0)
                    if comp[a][b] != want:
                        return (False, (i, j))
    return (True, None)
