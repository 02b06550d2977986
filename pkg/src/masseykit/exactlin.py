"""Exact linear algebra over the rationals and over prime fields.

Everything in this package eventually reduces to Gaussian elimination over
an exact field.  This module provides the two field implementations and the
elimination primitives: a dense :class:`Matrix` with rank/kernel/solve, a
sparse incremental span (:class:`SparseSpan`) used by the larger cochain
computations, a subquotient-dimension helper, and exact determinants of
linear pencils with point extraction off their zero sets.  All arithmetic
is exact;
rationals are `fractions.Fraction`, prime-field elements are ints reduced
modulo ``p``.  No floating point anywhere.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Iterator, Mapping, Sequence

Scalar = Fraction | int

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MAX_PRIME = 1 << 61


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, valid for all ``n < 2**61``."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Rationals:
    """The field of rational numbers; elements are `fractions.Fraction`."""

    char = 0

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def sub(self, a: Fraction, b: Fraction) -> Fraction:
        return a - b

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a: Fraction, b: Fraction) -> Fraction:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Fraction) -> bool:
        return a == 0

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def fmt(self, a: Fraction) -> str:
        return str(a)

    def random(self, rng: random.Random, *, nonzero: bool = False) -> Fraction:
        while True:
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            if not nonzero or a != 0:
                return a

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash(Rationals)

    def __repr__(self) -> str:
        return "Q"


class PrimeField:
    """The field with ``p`` elements; elements are ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2 or p >= _MAX_PRIME or not _is_prime(p):
            raise ValueError(f"characteristic must be a prime below 2**61, got {p!r}")
        self.p = p
        self.char = p

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1 % self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def parse(self, text: str) -> int:
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self.div(self.from_int(int(num)), self.from_int(int(den)))
        return self.from_int(int(text))

    def fmt(self, a: int) -> str:
        return str(a % self.p)

    def random(self, rng: random.Random, *, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.p)
        return rng.randrange(self.p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash((PrimeField, self.p))

    def __repr__(self) -> str:
        return f"F{self.p}"


Field = Rationals | PrimeField


class Matrix:
    """A dense, exact matrix over a fixed field, stored row-major."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Iterable[Iterable[Scalar]], ncols: int | None = None):
        self.field = field
        self.rows = [list(row) for row in rows]
        self.nrows = len(self.rows)
        if self.rows:
            ncols_seen = len(self.rows[0])
            if ncols is not None and ncols != ncols_seen:
                raise ValueError(f"expected {ncols} columns, got {ncols_seen}")
            ncols = ncols_seen
        elif ncols is None:
            raise ValueError("ncols is required for a matrix with no rows")
        self.ncols = ncols
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("rows have inconsistent lengths")

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        zero = field.zero()
        return cls(field, [[zero] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        mat = cls.zeros(field, n, n)
        one = field.one()
        for i in range(n):
            mat.rows[i][i] = one
        return mat

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence[Scalar]], nrows: int | None = None) -> "Matrix":
        columns = [list(col) for col in columns]
        if columns:
            nrows = len(columns[0])
        elif nrows is None:
            raise ValueError("nrows is required for a matrix with no columns")
        return cls(field, [[col[i] for col in columns] for i in range(nrows)], ncols=len(columns))

    def column(self, j: int) -> list[Scalar]:
        return [row[j] for row in self.rows]

    def transpose(self) -> "Matrix":
        return Matrix.from_columns(self.field, self.rows, nrows=self.ncols)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("matrices over different fields")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.ncols} columns vs {other.nrows} rows")
        f = self.field
        out = []
        for row in self.rows:
            acc_row = [f.zero()] * other.ncols
            for k, a in enumerate(row):
                if f.is_zero(a):
                    continue
                other_row = other.rows[k]
                for j in range(other.ncols):
                    b = other_row[j]
                    if not f.is_zero(b):
                        acc_row[j] = f.add(acc_row[j], f.mul(a, b))
            out.append(acc_row)
        return Matrix(f, out, ncols=other.ncols)

    def mul_vec(self, vec: Sequence[Scalar]) -> list[Scalar]:
        if len(vec) != self.ncols:
            raise ValueError(f"expected a vector of length {self.ncols}, got {len(vec)}")
        f = self.field
        out = []
        for row in self.rows:
            acc = f.zero()
            for a, x in zip(row, vec):
                if not (f.is_zero(a) or f.is_zero(x)):
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return out

    def trace(self) -> Scalar:
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        f = self.field
        acc = f.zero()
        for i in range(self.nrows):
            acc = f.add(acc, self.rows[i][i])
        return acc

    def _rref(self, rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
        """Reduce ``rows`` in place to reduced row-echelon form; return pivot columns."""
        f = self.field
        ncols = len(rows[0]) if rows else 0
        pivots: list[int] = []
        r = 0
        for c in range(ncols):
            pivot_row = next((i for i in range(r, len(rows)) if not f.is_zero(rows[i][c])), None)
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            inv = f.inv(rows[r][c])
            rows[r] = [f.mul(inv, v) for v in rows[r]]
            for i in range(len(rows)):
                if i != r and not f.is_zero(rows[i][c]):
                    factor = rows[i][c]
                    rows[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return rows, pivots

    def rank_and_kernel(self) -> tuple[int, list[list[Scalar]]]:
        """Return ``(rank, kernel_basis)``; kernel vectors have length ``ncols``."""
        f = self.field
        rows, pivots = self._rref([row[:] for row in self.rows])
        pivot_set = set(pivots)
        kernel = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vec = [f.zero()] * self.ncols
            vec[free] = f.one()
            for i, pc in enumerate(pivots):
                vec[pc] = f.neg(rows[i][free])
            kernel.append(vec)
        return len(pivots), kernel

    def rank(self) -> int:
        return self.rank_and_kernel()[0]

    def solve(self, b: Sequence[Scalar]) -> list[Scalar] | None:
        """Return some ``x`` with ``self @ x == b``, or None if inconsistent.

        Free variables are set to zero, so the answer is deterministic.
        """
        if len(b) != self.nrows:
            raise ValueError(f"expected a vector of length {self.nrows}, got {len(b)}")
        f = self.field
        augmented = [row[:] + [bi] for row, bi in zip(self.rows, b)]
        if not augmented:
            return [f.zero()] * self.ncols
        rows, pivots = self._rref(augmented)
        if pivots and pivots[-1] == self.ncols:
            return None
        x = [f.zero()] * self.ncols
        for i, pc in enumerate(pivots):
            x[pc] = rows[i][self.ncols]
        return x

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"


def subquotient_dim(
    field: Field,
    span_vectors: Sequence[Sequence[Scalar]],
    sub_vectors: Sequence[Sequence[Scalar]],
) -> int:
    """Dimension of ``span(span_vectors) / span(sub_vectors)``.

    Raises ValueError if the second span is not contained in the first.
    """
    total = SparseSpan(field)
    for vec in span_vectors:
        total.insert(_sparsify(field, vec))
    for vec in sub_vectors:
        if not total.contains(_sparsify(field, vec)):
            raise ValueError("sub_vectors do not span a subspace of span_vectors")
    sub = SparseSpan(field)
    for vec in sub_vectors:
        sub.insert(_sparsify(field, vec))
    return total.rank - sub.rank


def _sparsify(field: Field, vec: Sequence[Scalar]) -> dict[int, Scalar]:
    return {i: v for i, v in enumerate(vec) if not field.is_zero(v)}


class SparseSpan:
    """An incrementally built echelon span of sparse vectors.

    Vectors are dicts mapping coordinate index to a nonzero scalar.  Each
    stored row is normalized so its smallest coordinate (the pivot) has
    coefficient one; pivots are unique.  With ``track=True`` each row also
    remembers how it is expressed in the inserted generators, which makes
    :meth:`solve` return explicit combinations.
    """

    __slots__ = ("field", "track", "_rows", "_combos", "_count")

    def __init__(self, field: Field, *, track: bool = False):
        self.field = field
        self.track = track
        self._rows: dict[int, dict[int, Scalar]] = {}
        self._combos: dict[int, dict[object, Scalar]] = {}
        self._count = 0

    @property
    def rank(self) -> int:
        return self._count

    def _axpy(self, dst: dict, coeff: Scalar, src: dict) -> None:
        """In place ``dst -= coeff * src`` with zero-stripping."""
        f = self.field
        for key, val in src.items():
            new = f.sub(dst.get(key, f.zero()), f.mul(coeff, val))
            if f.is_zero(new):
                dst.pop(key, None)
            else:
                dst[key] = new

    def insert(self, vec: dict[int, Scalar], tag: object = None) -> bool:
        """Add ``vec`` to the span; return True if it was independent."""
        f = self.field
        residual = {k: v for k, v in vec.items() if not f.is_zero(v)}
        combo: dict[object, Scalar] = {tag: f.one()} if self.track else {}
        while residual:
            pivot = min(residual)
            row = self._rows.get(pivot)
            if row is None:
                inv = f.inv(residual[pivot])
                self._rows[pivot] = {k: f.mul(inv, v) for k, v in residual.items()}
                if self.track:
                    self._combos[pivot] = {t: f.mul(inv, c) for t, c in combo.items()}
                self._count += 1
                return True
            coeff = residual[pivot]
            self._axpy(residual, coeff, row)
            if self.track:
                self._axpy(combo, coeff, self._combos[pivot])
        return False

    def residual(self, vec: dict[int, Scalar]) -> dict[int, Scalar]:
        """Reduce ``vec`` against the span; empty result means membership."""
        f = self.field
        residual = {k: v for k, v in vec.items() if not f.is_zero(v)}
        while residual:
            pivot = min(residual)
            row = self._rows.get(pivot)
            if row is None:
                break
            self._axpy(residual, residual[pivot], row)
        return residual

    def contains(self, vec: dict[int, Scalar]) -> bool:
        return not self.residual(vec)

    def solve(self, vec: dict[int, Scalar]) -> dict[object, Scalar] | None:
        """Express ``vec`` in the inserted generators, or None if outside the span.

        Returns a dict mapping generator tags to coefficients.
        """
        if not self.track:
            raise ValueError("solve requires a span built with track=True")
        f = self.field
        residual = {k: v for k, v in vec.items() if not f.is_zero(v)}
        combo: dict[object, Scalar] = {}
        while residual:
            pivot = min(residual)
            row = self._rows.get(pivot)
            if row is None:
                return None
            coeff = residual[pivot]
            self._axpy(residual, coeff, row)
            self._axpy(combo, f.neg(coeff), self._combos[pivot])
        return combo


def kernel_from_columns(field: Field, columns: Sequence[dict[int, Scalar]]) -> list[dict[int, Scalar]]:
    """Kernel basis of the matrix whose ``j``-th column is ``columns[j]``.

    Each kernel vector is a dict over column indices.  The basis is the
    deterministic one in which every vector has coefficient one on its own
    free column and support only on earlier columns otherwise.
    """
    f = field
    span = SparseSpan(field, track=True)
    kernel: list[dict[int, Scalar]] = []
    for j, col in enumerate(columns):
        combo = span.solve(col)
        if combo is None:
            span.insert(col, tag=j)
            continue
        vec: dict[int, Scalar] = {j: f.one()}
        for tag, coeff in combo.items():
            if not f.is_zero(coeff):
                vec[tag] = f.neg(coeff)
        kernel.append(vec)
    return kernel


# --- linear pencils ---------------------------------------------------------------
#
# A linear pencil is a square matrix whose entries are linear forms in a set
# of variables, stored entrywise as ``{variable index: coefficient}``.  Its
# determinant is a multivariate polynomial, stored as a map from exponent
# tuples (one slot per variable) to nonzero coefficients; the helpers below
# compute that polynomial exactly, substitute values into it, and extract
# points where a nonzero polynomial does not vanish.

Poly = dict[tuple[int, ...], Scalar]


def linear_entry_det(
    field: Field, entries: Sequence[Sequence[Mapping[int, Scalar]]], nvars: int
) -> Poly:
    """Determinant of a square pencil of linear forms, as an exact polynomial.

    Laplace expansion along rows, memoized on the set of still-available
    columns, which keeps the work at one pass per subset instead of one per
    permutation.  The empty pencil has determinant one.
    """
    f = field
    size = len(entries)
    memo: dict[int, Poly] = {}

    def minor(mask: int) -> Poly:
        # mask: columns still available; the row to expand is determined by
        # how many columns have been consumed already.
        if mask == 0:
            return {(0,) * nvars: f.one()}
        cached = memo.get(mask)
        if cached is not None:
            return cached
        row = size - bin(mask).count("1")
        out: Poly = {}
        position = 0
        for j in range(size):
            bit = 1 << j
            if not mask & bit:
                continue
            linear = entries[row][j]
            if linear:
                sub = minor(mask & ~bit)
                negative = position % 2 == 1
                for exps, c in sub.items():
                    for k, ck in linear.items():
                        coeff = f.mul(c, ck)
                        if negative:
                            coeff = f.neg(coeff)
                        bumped = exps[:k] + (exps[k] + 1,) + exps[k + 1 :]
                        s = f.add(out.get(bumped, f.zero()), coeff)
                        if f.is_zero(s):
                            out.pop(bumped, None)
                        else:
                            out[bumped] = s
            position += 1
        memo[mask] = out
        return out

    return minor((1 << size) - 1)


def poly_substitute(field: Field, poly: Poly, var: int, value: Scalar) -> Poly:
    """Evaluate one variable of an exponent-tuple polynomial, dropping zeros."""
    f = field
    out: Poly = {}
    for exps, c in poly.items():
        coeff = c
        for _ in range(exps[var]):
            coeff = f.mul(coeff, value)
        flat = exps[:var] + (0,) + exps[var + 1 :]
        s = f.add(out.get(flat, f.zero()), coeff)
        if f.is_zero(s):
            out.pop(flat, None)
        else:
            out[flat] = s
    return out


def poly_nonzero_point(field: Field, poly: Poly, nvars: int) -> dict[int, Scalar]:
    """A point keeping a nonzero polynomial nonzero, one variable at a time.

    Each variable's degree bounds how many candidate values can fail, so
    scanning ``degree + 1`` small integers always finds a good one as long
    as they stay distinct in the field.  Sound whenever the field has more
    elements than every per-variable degree.
    """
    f = field
    point: dict[int, Scalar] = {}
    for var in range(nvars):
        degree = max(exps[var] for exps in poly)
        if degree == 0:
            continue
        for c in range(degree + 1):
            val = f.from_int(c)
            candidate = poly_substitute(f, poly, var, val)
            if candidate:
                poly = candidate
                if c:
                    point[var] = val
                break
        else:
            raise AssertionError("a nonzero polynomial vanished at more points than its degree")
    return point


def projective_vectors(field: PrimeField, m: int) -> Iterator[dict[int, Scalar]]:
    """All nonzero sparse vectors in ``field^m`` with first nonzero entry 1."""
    for lead in range(m):
        for tail in cartesian(range(field.p), repeat=m - lead - 1):
            vec: dict[int, Scalar] = {lead: field.one()}
            for offset, c in enumerate(tail):
                if c:
                    vec[lead + 1 + offset] = field.from_int(c)
            yield vec
