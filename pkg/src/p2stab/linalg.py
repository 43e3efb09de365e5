"""Dense exact linear algebra over Q and over small prime fields.

Every matrix computation in the package funnels through this module.
Matrices are plain lists of row lists; entries are ``fractions.Fraction``
over the rationals or python ints reduced mod p over a prime field.  The
field object is passed explicitly so the same elimination code serves both
backends.  Nothing here is clever: the matrices are tiny (a few dozen rows
at most) and exactness beats speed everywhere in this package.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import InputError

Row = List
Matrix = List[Row]


class RationalField:
    """The rational field; elements are ``Fraction``."""

    kind = "rational"
    p: Optional[int] = None

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def convert(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, float):
            raise InputError("refusing to coerce a float into exact arithmetic")
        return Fraction(x)

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def elements(self):  # pragma: no cover - guarded by callers
        raise InputError("the rationals cannot be enumerated")

    def to_json(self) -> dict:
        return {"kind": "rational"}


class PrimeField:
    """The field F_p for a prime p; elements are ints in [0, p)."""

    kind = "prime"

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
            raise InputError(f"p must be prime, got {p}")
        self.p = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def convert(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, self.p - 2, self.p) % self.p
        if isinstance(x, str):
            return self.convert(Fraction(x))
        return int(x) % self.p

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def elements(self) -> range:
        return range(self.p)

    def to_json(self) -> dict:
        return {"kind": "prime", "p": self.p}


QQ = RationalField()


def field_from_json(obj: dict):
    if obj.get("kind") == "rational":
        return QQ
    if obj.get("kind") == "prime":
        return PrimeField(int(obj["p"]))
    raise InputError(f"unknown field description {obj!r}")


# ---------------------------------------------------------------------------
# basic matrix plumbing


def zeros(F, nrows: int, ncols: int) -> Matrix:
    z = F.zero()
    return [[z] * ncols for _ in range(nrows)]


def identity(F, n: int) -> Matrix:
    M = zeros(F, n, n)
    for i in range(n):
        M[i][i] = F.one()
    return M


def mat_copy(A: Matrix) -> Matrix:
    return [list(row) for row in A]


def shape(A: Matrix) -> Tuple[int, int]:
    return (len(A), len(A[0]) if A else 0)


def transpose(A: Matrix, ncols: Optional[int] = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def mat_mul(F, A: Matrix, B: Matrix) -> Matrix:
    """A @ B; zero-sized factors are handled (the result is a zero matrix)."""
    ra = len(A)
    ca = len(A[0]) if A else 0
    rb = len(B)
    cb = len(B[0]) if B else 0
    if ra == 0:
        # a 0-row matrix cannot carry its width, so trust the caller
        return []
    if ca != rb:
        raise InputError(f"dimension mismatch in product: {ra}x{ca} by {rb}x{cb}")
    if cb == 0:
        return [[] for _ in range(ra)]
    if ca == 0:
        return zeros(F, ra, cb)
    out = zeros(F, ra, cb)
    for i in range(ra):
        Ai = A[i]
        oi = out[i]
        for k in range(ca):
            a = Ai[k]
            if F.is_zero(a):
                continue
            Bk = B[k]
            for j in range(cb):
                oi[j] = F.add(oi[j], F.mul(a, Bk[j]))
    return out


def mat_vec(F, A: Matrix, v: Sequence) -> Row:
    return [row[0] for row in mat_mul(F, A, [[x] for x in v])]


def mat_add(F, A: Matrix, B: Matrix) -> Matrix:
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(F, A: Matrix, B: Matrix) -> Matrix:
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(F, A: Matrix) -> Matrix:
    return [[F.neg(a) for a in row] for row in A]


def mat_eq(F, A: Matrix, B: Matrix) -> bool:
    if shape(A) != shape(B):
        return False
    return all(F.is_zero(F.sub(a, b)) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero_matrix(F, A: Matrix) -> bool:
    return all(F.is_zero(a) for row in A for a in row)


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    rows = len(blocks[0])
    for b in blocks:
        if len(b) != rows:
            raise InputError("dimension mismatch in hstack")
    return [sum((list(b[i]) for b in blocks), []) for i in range(rows)]


def vstack(blocks: Sequence[Matrix], ncols: Optional[int] = None) -> Matrix:
    out: Matrix = []
    for b in blocks:
        out.extend(list(r) for r in b)
    if out and ncols is not None and len(out[0]) != ncols:
        raise InputError("dimension mismatch in vstack")
    return out


# ---------------------------------------------------------------------------
# elimination


def rref(F, A: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns (R, pivot column indices).

    Zero rows are dropped from R, so R doubles as a canonical basis of the
    row space.
    """
    M = mat_copy(A)
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not F.is_zero(M[i][c]):
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, x) for x in M[r]]
        for i in range(nrows):
            if i != r and not F.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M[:r], pivots


def rank(F, A: Matrix) -> int:
    return len(rref(F, A)[0])


def reduce_vector(F, R: Matrix, pivots: Sequence[int], v: Sequence) -> Row:
    """Residual of v after eliminating the pivot coordinates against the
    rref rows R; the residual is zero iff v lies in the row space."""
    w = list(v)
    for row, c in zip(R, pivots):
        f = w[c]
        if not F.is_zero(f):
            w = [F.sub(x, F.mul(f, y)) for x, y in zip(w, row)]
    return w


def in_row_space(F, R: Matrix, pivots: Sequence[int], v: Sequence) -> bool:
    return all(F.is_zero(x) for x in reduce_vector(F, R, pivots, v))


def row_space(F, vectors: Iterable[Sequence], ncols: int) -> Tuple[Matrix, List[int]]:
    """Canonical (rref) basis of the span of the given vectors."""
    vs = [list(v) for v in vectors]
    if not vs:
        return [], []
    for v in vs:
        if len(v) != ncols:
            raise InputError("dimension mismatch in row_space")
    return rref(F, vs)


def right_kernel(F, A: Matrix, ncols: Optional[int] = None) -> Matrix:
    """Basis of {x : A x = 0}, one vector per row, in the standard
    free-column parametrization of the rref (deterministic)."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A or ncols == 0:
        return identity(F, ncols)
    R, pivots = rref(F, A)
    free = [c for c in range(ncols) if c not in pivots]
    basis: Matrix = []
    for f in free:
        v = [F.zero()] * ncols
        v[f] = F.one()
        for row, c in zip(R, pivots):
            v[c] = F.neg(row[f])
        basis.append(v)
    return basis


def solve_right(F, A: Matrix, b: Sequence) -> Optional[Row]:
    """One solution x of A x = b, or None if inconsistent."""
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    if len(b) != nrows:
        raise InputError("dimension mismatch in solve_right")
    if ncols == 0:
        return [] if all(F.is_zero(x) for x in b) else None
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    R, pivots = rref(F, aug)
    x = [F.zero()] * ncols
    for row, c in zip(R, pivots):
        if c == ncols:
            return None
        x[c] = row[ncols]
    return x


def solve_matrix(F, A: Matrix, B: Matrix) -> Optional[Matrix]:
    """Solve A X = B column by column; None if any column is inconsistent."""
    cols = len(B[0]) if B else 0
    xs = []
    for j in range(cols):
        x = solve_right(F, A, [row[j] for row in B])
        if x is None:
            return None
        xs.append(x)
    return transpose(xs, ncols=len(A[0]) if A else 0)


def mat_inverse(F, A: Matrix) -> Optional[Matrix]:
    n = len(A)
    if n == 0:
        return []
    if len(A[0]) != n:
        raise InputError("inverse of a non-square matrix")
    aug = [list(row) + list(e) for row, e in zip(A, identity(F, n))]
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        return None
    return [row[n:] for row in R]


def det2(F, a, b, c, d):
    """Determinant of [[a, b], [c, d]]."""
    return F.sub(F.mul(a, d), F.mul(b, c))


# ---------------------------------------------------------------------------
# subspace arithmetic (subspaces carried as canonical rref row bases)


def intersect_row_spaces(F, A: Matrix, B: Matrix, ncols: int) -> Matrix:
    """Canonical basis of (row space of A) `intersect` (row space of B)."""
    if not A or not B:
        return []
    # x = a^T A = b^T B  <=>  (a, b) in ker [A^T | -B^T]
    At = transpose(A, ncols)
    Bt = transpose(B, ncols)
    stacked = hstack([At, mat_neg(F, Bt)])
    combos = right_kernel(F, stacked)
    vecs = []
    for c in combos:
        a = c[: len(A)]
        vecs.append([
            _dot(F, a, [row[j] for row in A]) for j in range(ncols)
        ])
    return row_space(F, vecs, ncols)[0]


def _dot(F, u: Sequence, v: Sequence):
    acc = F.zero()
    for a, b in zip(u, v):
        acc = F.add(acc, F.mul(a, b))
    return acc


def sum_row_spaces(F, A: Matrix, B: Matrix, ncols: int) -> Matrix:
    return row_space(F, list(A) + list(B), ncols)[0]


# ---------------------------------------------------------------------------
# integer utilities (wall planes, reductions mod p)


def clear_denominators(A: Matrix) -> List[List[int]]:
    """Scale a rational matrix to a primitive integer matrix (gcd 1).

    The zero matrix maps to itself.  Scaling a whole matrix by a nonzero
    rational does not change any kernel/image/submodule computation that
    consumes it, which is the only way this is used.
    """
    denlcm = 1
    for row in A:
        for x in row:
            denlcm = denlcm * x.denominator // math.gcd(denlcm, x.denominator)
    ints = [[int(x * denlcm) for x in row] for row in A]
    g = 0
    for row in ints:
        for x in row:
            g = math.gcd(g, x)
    if g > 1:
        ints = [[x // g for x in row] for row in ints]
    return ints


def primitive_vector(v: Sequence[Fraction]) -> List[int]:
    """Primitive integer vector on the same ray/line as v (sign untouched)."""
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def _exgcd(a: int, b: int) -> Tuple[int, int, int]:
    """g, x, y with a x + b y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def saturated_kernel_basis_3(d: Sequence[int]) -> List[List[int]]:
    """Basis of the saturated lattice {v in Z^3 : v . d = 0} for d != 0.

    Found by building a unimodular U with U d = (g, 0, 0)^T; the last two
    rows of U are the basis.  Deterministic.
    """
    d = [int(x) for x in d]
    if all(x == 0 for x in d):
        raise InputError("kernel of the zero vector is everything")
    U = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    vals = list(d)

    def combine(i, j):
        # zero out vals[j] against vals[i]
        g, x, y = _exgcd(vals[i], vals[j])
        if g == 0:
            return
        a, b = vals[i] // g, vals[j] // g
        row_i = [x * U[i][k] + y * U[j][k] for k in range(3)]
        row_j = [-b * U[i][k] + a * U[j][k] for k in range(3)]
        U[i], U[j] = row_i, row_j
        vals[i], vals[j] = g, 0

    combine(0, 1)
    combine(0, 2)
    assert vals[1] == 0 and vals[2] == 0
    return [U[1], U[2]]


def row_hnf_2xn(rows: List[List[int]]) -> List[List[int]]:
    """Row Hermite normal form of a rank-2 integer matrix with 2 rows.

    Pivots positive, entries above pivots reduced into [0, pivot).  Used to
    canonicalize wall-plane bases; deterministic.
    """
    a, b = [list(r) for r in rows]
    n = len(a)
    # first pivot column
    c0 = next(i for i in range(n) if a[i] != 0 or b[i] != 0)
    if a[c0] == 0:
        a, b = b, a
    g, x, y = _exgcd(a[c0], b[c0])
    na = [x * a[i] + y * b[i] for i in range(n)]
    nb = [(-b[c0] // g) * a[i] + (a[c0] // g) * b[i] for i in range(n)]
    a, b = na, nb
    c1 = next(i for i in range(n) if b[i] != 0)
    if b[c1] < 0:
        b = [-t for t in b]
    # reduce a above b's pivot
    q = a[c1] // b[c1]
    a = [s - q * t for s, t in zip(a, b)]
    if a[c0] < 0:
        a = [-t for t in a]
    return [a, b]


# ---------------------------------------------------------------------------
# subspace enumeration over a small prime field


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def galois_number(n: int, q: int) -> int:
    """Number of subspaces of F_q^n (all dimensions)."""
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def iter_subspaces(F: PrimeField, n: int) -> Iterator[Tuple[Matrix, Tuple[int, ...]]]:
    """All subspaces of F^n, one canonical rref basis each.

    Yields (rows, pivots).  Enumeration order: by dimension, then pivot
    pattern, then free entries — fully deterministic.
    """
    p = F.p
    yield [], ()
    for k in range(1, n + 1):
        for pivots in itertools.combinations(range(n), k):
            free_pos = [
                (i, j)
                for i in range(k)
                for j in range(pivots[i] + 1, n)
                if j not in pivots
            ]
            for assignment in itertools.product(range(p), repeat=len(free_pos)):
                rows = zeros(F, k, n)
                for i in range(k):
                    rows[i][pivots[i]] = 1
                for (i, j), val in zip(free_pos, assignment):
                    rows[i][j] = val
                yield rows, pivots
