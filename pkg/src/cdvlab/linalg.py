"""Exact dense linear algebra over Q and Q(sqrt(q)).

Kernels, ranks and inertias of the matrices certified elsewhere are all
decided here, exactly.  Rank uses fraction-free (Bareiss) elimination on
denominator-cleared rows; kernels go through a reduced row echelon form,
which doubles as the canonical representation of a subspace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .scalars import ZERO, ONE, FieldScalar, FieldTagError, parse_scalar


class NonSymmetricError(ValueError):
    """Inertia by congruence requires a symmetric input."""


def _coerce_row(row, width=None):
    out = tuple(FieldScalar.of(x) for x in row)
    if width is not None and len(out) != width:
        raise ValueError("ragged matrix rows")
    return out


class ExactMatrix:
    """Immutable rectangular matrix of FieldScalar entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        rows = [_coerce_row(r) for r in entries]
        width = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged matrix rows")
        self.entries = tuple(rows)
        self.rows = len(rows)
        self.cols = width
        # a single shared tag; FieldTagError surfaces mixed extensions
        tag = None
        for r in self.entries:
            for x in r:
                if x.q is not None:
                    if tag is None:
                        tag = x.q
                    elif tag != x.q:
                        raise FieldTagError(f"mixed field tags {tag} and {x.q}")

    @property
    def field_tag(self) -> int | None:
        for r in self.entries:
            for x in r:
                if x.q is not None:
                    return x.q
        return None

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r: int, c: int) -> "ExactMatrix":
        return ExactMatrix([[ZERO] * c for _ in range(r)])

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose().entries
        return ExactMatrix(
            [[_dot(r, c) for c in ot] for r in self.entries]
        )

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[self.entries[i][j] + other.entries[i][j] for j in range(self.cols)] for i in range(self.rows)]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other.scale(FieldScalar.of(-1))

    def scale(self, c) -> "ExactMatrix":
        c = FieldScalar.of(c)
        return ExactMatrix([[x * c for x in r] for r in self.entries])

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def _dot(u, v) -> FieldScalar:
    acc = ZERO
    for x, y in zip(u, v):
        if x.is_zero() or y.is_zero():
            continue
        acc = acc + x * y
    return acc


# -- elimination kernels ------------------------------------------------


def _rref(rows: list[list[FieldScalar]]) -> tuple[list[list[FieldScalar]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _clear_denominators(row) -> list[FieldScalar]:
    lcm = 1
    for x in row:
        for num in (x.a, x.b):
            if num.denominator != 1:
                lcm = lcm * num.denominator // _gcd(lcm, num.denominator)
    if lcm == 1:
        return list(row)
    f = FieldScalar.of(lcm)
    return [x * f for x in row]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def rank(M: ExactMatrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination.

    Rows are scaled to integer coordinates in Z[sqrt(q)] first; the
    Bareiss pivot divisions are then exact in that ring, which keeps
    intermediate entries polynomially bounded.
    """
    rows = [_clear_denominators(r) for r in M.entries]
    nrows, ncols = len(rows), M.cols
    if nrows == 0 or ncols == 0:
        return 0
    prev = ONE
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, nrows):
            ric = rows[i][c]
            rows[i] = [
                (piv * rows[i][j] - ric * rows[r][j]) / prev
                for j in range(ncols)
            ]
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


@dataclass(frozen=True)
class Inertia:
    n_neg: int
    n_zero: int
    n_pos: int

    def __post_init__(self):
        if min(self.n_neg, self.n_zero, self.n_pos) < 0:
            raise ValueError("negative count")


def inertia(M: ExactMatrix) -> Inertia:
    """Signature by symmetric congruence (no eigenvalues computed).

    Diagonal pivots are consumed first; when only off-diagonal entries
    remain, a 2x2 hyperbolic block contributes one negative and one
    positive index.
    """
    if not M.is_symmetric():
        raise NonSymmetricError("inertia requires a symmetric matrix")
    n = M.rows
    a = [list(r) for r in M.entries]
    active = list(range(n))
    neg = pos = zero = 0
    while active:
        k = next((i for i in active if not a[i][i].is_zero()), None)
        if k is not None:
            s = a[k][k].sign()
            if s > 0:
                pos += 1
            else:
                neg += 1
            active.remove(k)
            inv = a[k][k].inverse()
            for i in active:
                if a[i][k].is_zero():
                    continue
                f = a[i][k] * inv
                for j in active:
                    a[i][j] = a[i][j] - f * a[k][j]
            for i in active:
                a[i][k] = ZERO
                a[k][i] = ZERO
            continue
        pair = next(
            (
                (i, j)
                for ii, i in enumerate(active)
                for j in active[ii + 1:]
                if not a[i][j].is_zero()
            ),
            None,
        )
        if pair is None:
            zero += len(active)
            break
        i0, j0 = pair
        neg += 1
        pos += 1
        active.remove(i0)
        active.remove(j0)
        m_inv = a[i0][j0].inverse()
        for r in active:
            ri, rj = a[r][i0], a[r][j0]
            if ri.is_zero() and rj.is_zero():
                continue
            for c in active:
                a[r][c] = a[r][c] - (ri * a[j0][c] + rj * a[i0][c]) * m_inv
        for r in active:
            a[r][i0] = a[r][j0] = ZERO
            a[i0][r] = a[j0][r] = ZERO
    return Inertia(neg, zero, pos)


# -- subspaces ------------------------------------------------------------


class Subspace:
    """Linear subspace of R^n with an exact RREF basis (canonical form)."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, vectors):
        rows = [list(_coerce_row(v, ambient_dim)) for v in vectors]
        rows, pivots = _rref(rows)
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(r) for r in rows[: len(pivots)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def vector_from_coefficients(self, coeffs) -> tuple[FieldScalar, ...]:
        out = [ZERO] * self.ambient_dim
        for c, b in zip(coeffs, self.basis):
            c = FieldScalar.of(c)
            if c.is_zero():
                continue
            for i, x in enumerate(b):
                if not x.is_zero():
                    out[i] = out[i] + c * x
        return tuple(out)

    def coordinates_of(self, vector) -> tuple[FieldScalar, ...]:
        """Coefficients w.r.t. the RREF basis; raises if vector not in L."""
        vec = list(_coerce_row(vector, self.ambient_dim))
        pivots = [next(j for j, x in enumerate(b) if not x.is_zero()) for b in self.basis]
        coeffs = tuple(vec[p] for p in pivots)
        if self.vector_from_coefficients(coeffs) != tuple(vec):
            raise ValueError("vector not in subspace")
        return coeffs

    def contains(self, vector) -> bool:
        try:
            self.coordinates_of(vector)
            return True
        except ValueError:
            return False

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel_basis(M: ExactMatrix) -> Subspace:
    """Exact kernel of M as a canonical subspace of R^cols."""
    rows = [list(r) for r in M.entries]
    rows, pivots = _rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(M.cols) if c not in pivot_set]
    vectors = []
    for fc in free:
        v = [ZERO] * M.cols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        vectors.append(v)
    return Subspace(M.cols, vectors)


def constrain_subspace(L: Subspace, functionals) -> Subspace:
    """Vectors of L on which every linear functional vanishes.

    Functionals are ambient covectors; the constraint system is solved
    in basis coordinates of L.
    """
    if L.dim == 0:
        return L
    rows = []
    for f in functionals:
        f = _coerce_row(f, L.ambient_dim)
        rows.append([_dot(f, b) for b in L.basis])
    if not rows:
        return L
    coeff_kernel = kernel_basis(ExactMatrix(rows))
    vectors = [L.vector_from_coefficients(c) for c in coeff_kernel.basis]
    return Subspace(L.ambient_dim, vectors)


# -- JSON interchange ------------------------------------------------------


def matrix_to_json(M: ExactMatrix) -> dict:
    return {
        "rows": M.rows,
        "cols": M.cols,
        "q": M.field_tag,
        "entries": [[str(x) for x in r] for r in M.entries],
    }


def matrix_from_json(data) -> ExactMatrix:
    if isinstance(data, str):
        data = json.loads(data)
    q = data.get("q")
    entries = [
        [parse_scalar(cell, q_hint=q) for cell in row]
        for row in data["entries"]
    ]
    M = ExactMatrix(entries)
    if M.rows != data["rows"] or M.cols != data["cols"]:
        raise ValueError("matrix JSON dimensions do not match entries")
    return M
