"""Hochschild cochains on graded algebras and their composition calculus.

A cochain of bidegree ``(p, q)`` is a multilinear map taking ``p`` algebra
inputs; its value on inputs of total degree ``D`` is homogeneous of degree
``D + q``.  Values are stored on tuples of basis indices.  The fundamental
operation is the insertion ``insert_at(c1, c2, i)`` with the sign

    (c1 o_i c2)(x_1, ..) = (-1)**X * c1(x_1, .., c2(x_i, ..), ..),
    X = (s-1)*(p-i) + t*(p-1 + deg(x_1) + .. + deg(x_{i-1})),

for ``c1`` of bidegree ``(p, q)`` and ``c2`` of bidegree ``(s, t)``.  From it
are built the pre-Lie product (sum over insertion slots), the graded bracket,
the square, the cup product, and the differential (bracket with the
multiplication cochain).

On a windowed algebra a cochain additionally carries ``sum_bound``: the
largest input-degree sum on which its values are known.  Binary operations
propagate these bounds so that every stored value is actually derivable from
known data; evaluation outside the known region raises
:class:`~masseykit.errors.WindowOverflow` instead of guessing zero.

The linear-algebra side (:class:`HochschildComplex`) works with the in-window
complex whose coordinates in bidegree ``(p, q)`` are the basis tuples with
input-degree sum at most ``top - max(q, 0)``.  That coordinate region is
closed under every term of the differential, so the matrices are exact,
``d o d == 0`` holds on the nose, and coboundary certificates are honest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

from masseykit.errors import WindowOverflow
from masseykit.exactlin import Field, Matrix, Scalar, SparseSpan, kernel_from_columns
from masseykit.galg import Element, GradedAlgebra, clean_element

Key = tuple[int, ...]


class Cochain:
    """A multilinear map of fixed arity with homogeneous values.

    ``values`` maps basis-index tuples to algebra elements; missing keys
    inside the known domain mean zero.  ``sum_bound`` (optional) is the
    largest input-degree sum on which the cochain is known; beyond it,
    evaluation raises :class:`WindowOverflow`.
    """

    __slots__ = ("algebra", "arity", "qdeg", "values", "sum_bound")

    def __init__(
        self,
        algebra: GradedAlgebra,
        arity: int,
        qdeg: int,
        values: Mapping[Key, Mapping[int, Scalar]] | None = None,
        *,
        sum_bound: int | None = None,
        validate: bool = True,
    ):
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        self.algebra = algebra
        self.arity = arity
        self.qdeg = qdeg
        self.sum_bound = sum_bound
        cleaned: dict[Key, Element] = {}
        for key, elem in (values or {}).items():
            entry = clean_element(algebra.field, elem)
            if entry:
                cleaned[tuple(key)] = entry
        self.values = cleaned
        if validate:
            self._validate()

    def _validate(self) -> None:
        a = self.algebra
        for key, elem in self.values.items():
            if len(key) != self.arity:
                raise ValueError(f"key {key} does not have arity {self.arity}")
            for i in key:
                a._check_index(i)
            input_sum = sum(a.degrees[i] for i in key)
            expected = input_sum + self.qdeg
            actual = a.element_degree(elem)
            if actual != expected:
                raise ValueError(
                    f"value on {key} has degree {actual}, expected {expected}"
                )
            if self.sum_bound is not None and input_sum > self.sum_bound:
                raise ValueError(f"key {key} lies beyond sum_bound={self.sum_bound}")

    @property
    def total_degree(self) -> int:
        return self.arity + self.qdeg

    def input_sum(self, key: Key) -> int:
        degs = self.algebra.degrees
        return sum(degs[i] for i in key)

    def value_degree(self, key: Key) -> int:
        return self.input_sum(key) + self.qdeg

    def value_on(self, key: Key) -> Element:
        """Value on a tuple of basis elements, as a sparse algebra element."""
        a = self.algebra
        input_sum = self.input_sum(key)
        vdeg = input_sum + self.qdeg
        if a.window is not None:
            lo, hi = a.window
            if vdeg > hi:
                raise WindowOverflow(
                    f"cochain value on {key} has degree {vdeg}, above window top {hi}"
                )
            if vdeg < lo:
                if a.floor_vanishes:
                    return {}
                raise WindowOverflow(
                    f"cochain value on {key} has degree {vdeg}, below window floor {lo}"
                )
        if self.sum_bound is not None and input_sum > self.sum_bound:
            raise WindowOverflow(
                f"cochain is only known for input-degree sums up to {self.sum_bound}, "
                f"got {input_sum}"
            )
        return dict(self.values.get(key, {}))

    def __call__(self, *args: Mapping[int, Scalar]) -> Element:
        """Multilinear evaluation on algebra elements."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        f = self.algebra.field
        out: Element = {}
        stack: list[tuple[Key, Scalar]] = [((), f.one())]
        for arg in args:
            stack = [
                (key + (i,), f.mul(coeff, c))
                for key, coeff in stack
                for i, c in arg.items()
                if not f.is_zero(c)
            ]
        for key, coeff in stack:
            for k, v in self.value_on(key).items():
                s = f.add(out.get(k, f.zero()), f.mul(coeff, v))
                if f.is_zero(s):
                    out.pop(k, None)
                else:
                    out[k] = s
        return out

    def is_zero(self) -> bool:
        return not self.values

    def support(self) -> list[Key]:
        return sorted(self.values)

    def _compatible(self, other: "Cochain") -> None:
        if self.algebra is not other.algebra:
            raise ValueError("cochains live over different algebras")
        if (self.arity, self.qdeg) != (other.arity, other.qdeg):
            raise ValueError(
                f"bidegree mismatch: ({self.arity},{self.qdeg}) vs ({other.arity},{other.qdeg})"
            )

    def add(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        a = self.algebra
        merged = {key: dict(elem) for key, elem in self.values.items()}
        for key, elem in other.values.items():
            merged[key] = a.add(merged.get(key, {}), elem)
        return Cochain(
            a, self.arity, self.qdeg, merged,
            sum_bound=_min_bound(self.sum_bound, other.sum_bound), validate=False,
        )

    def sub(self, other: "Cochain") -> "Cochain":
        return self.add(other.scale(self.algebra.field.neg(self.algebra.field.one())))

    def scale(self, coeff: Scalar) -> "Cochain":
        a = self.algebra
        if a.field.is_zero(coeff):
            return Cochain(a, self.arity, self.qdeg, {}, sum_bound=self.sum_bound, validate=False)
        values = {key: a.scale(coeff, elem) for key, elem in self.values.items()}
        return Cochain(a, self.arity, self.qdeg, values, sum_bound=self.sum_bound, validate=False)

    def neg(self) -> "Cochain":
        return self.scale(self.algebra.field.neg(self.algebra.field.one()))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cochain)
            and self.algebra is other.algebra
            and (self.arity, self.qdeg) == (other.arity, other.qdeg)
            and self.values == other.values
        )

    def __repr__(self) -> str:
        bound = f", sum_bound={self.sum_bound}" if self.sum_bound is not None else ""
        return f"Cochain(arity={self.arity}, qdeg={self.qdeg}, support={len(self.values)}{bound})"


def _min_bound(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# --- canonical cochains ------------------------------------------------------

def multiplication_cochain(algebra: GradedAlgebra) -> Cochain:
    """The product of the algebra as a cochain of bidegree ``(2, 0)``."""
    values = {}
    for key in domain_keys(algebra, 2, 0):
        prod = algebra.basis_product(key[0], key[1])
        if prod:
            values[key] = prod
    return Cochain(algebra, 2, 0, values, validate=False)


def identity_cochain(algebra: GradedAlgebra) -> Cochain:
    """The identity map as a cochain of bidegree ``(1, 0)``."""
    values = {(i,): algebra.basis_element(i) for i in range(algebra.total_dim)}
    return Cochain(algebra, 1, 0, values, validate=False)


def unit_cochain(algebra: GradedAlgebra) -> Cochain:
    """The unit as a cochain of bidegree ``(0, 0)``."""
    return Cochain(algebra, 0, 0, {(): algebra.one()}, validate=False)


# --- domains -----------------------------------------------------------------

def degree_extent(algebra: GradedAlgebra) -> tuple[int, int]:
    if algebra.window is not None:
        return algebra.window
    return min(algebra.degrees), max(algebra.degrees)


def budget_sum_cap(algebra: GradedAlgebra, qdeg: int) -> int | None:
    """Input-degree-sum cap of the self-contained in-window complex."""
    if algebra.window is None:
        return None
    return algebra.window[1] - max(qdeg, 0)


def domain_keys(
    algebra: GradedAlgebra,
    arity: int,
    qdeg: int,
    sum_bound: int | None = None,
    extent: tuple[int, int] | None = None,
) -> Iterator[Key]:
    """All basis tuples on which a ``(arity, qdeg)`` cochain can have a value.

    Yields, in lexicographic order, the tuples whose value degree lies in the
    representable range (``extent`` overrides the algebra's own, for maps
    into a different algebra), further capped by ``sum_bound`` on the
    input-degree sum.
    """
    lo, hi = degree_extent(algebra) if extent is None else extent
    sum_lo, sum_hi = lo - qdeg, hi - qdeg
    if sum_bound is not None:
        sum_hi = min(sum_hi, sum_bound)
    if arity == 0:
        if sum_lo <= 0 <= sum_hi:
            yield ()
        return
    degrees = algebra.degrees
    n = algebra.total_dim
    if n == 0:
        return
    dmin, dmax = min(degrees), max(degrees)
    key = [0] * arity

    def walk(pos: int, acc: int) -> Iterator[Key]:
        remaining = arity - pos
        if acc + remaining * dmin > sum_hi or acc + remaining * dmax < sum_lo:
            return
        if pos == arity:
            yield tuple(key)
            return
        for i in range(n):
            key[pos] = i
            yield from walk(pos + 1, acc + degrees[i])

    yield from walk(0, 0)


def _effective_sum_cap(c: Cochain) -> int | None:
    caps = []
    if c.sum_bound is not None:
        caps.append(c.sum_bound)
    if c.algebra.window is not None:
        caps.append(c.algebra.window[1] - c.qdeg)
    return min(caps) if caps else None


def _binary_result_cap(c1: Cochain, c2: Cochain, result_qdeg: int) -> int | None:
    """Largest input-degree sum of the result that both operands can serve.

    The monotonicity argument (sub-tuples have smaller degree sums) needs a
    nonnegative grading; for algebras with negative degrees the cap cannot be
    derived, so the result is computed on the full representable domain and
    evaluation raises loudly wherever an operand is unknown.
    """
    a = c1.algebra
    if min(a.degrees) < 0:
        if c1.sum_bound is not None or c2.sum_bound is not None:
            raise ValueError("sum-bounded cochains require a nonnegative grading")
        return None
    caps = []
    if a.window is not None:
        hi = a.window[1]
        caps.append(hi - result_qdeg)
        caps.append(hi - c2.qdeg)
    cap1 = _effective_sum_cap(c1)
    if cap1 is not None:
        caps.append(cap1 - c2.qdeg)
    cap2 = _effective_sum_cap(c2)
    if cap2 is not None:
        caps.append(cap2)
    return min(caps) if caps else None


# --- composition operations ----------------------------------------------------

def insert_at(c1: Cochain, c2: Cochain, index: int, *, keys: Sequence[Key] | None = None) -> Cochain:
    """Insert ``c2`` into the ``index``-th slot of ``c1`` (1-based)."""
    if c1.algebra is not c2.algebra:
        raise ValueError("cochains live over different algebras")
    p, q = c1.arity, c1.qdeg
    s, t = c2.arity, c2.qdeg
    if not 1 <= index <= p:
        raise ValueError(f"insertion slot {index} out of range 1..{p}")
    a = c1.algebra
    f = a.field
    big_arity, big_qdeg = p + s - 1, q + t
    cap = _binary_result_cap(c1, c2, big_qdeg)
    if keys is None:
        keys = domain_keys(a, big_arity, big_qdeg, sum_bound=cap)
    degrees = a.degrees
    tpar = t % 2
    base_parity = ((s - 1) * (p - index)) % 2
    values: dict[Key, Element] = {}
    for key in keys:
        prefix = key[: index - 1]
        mid = key[index - 1 : index - 1 + s]
        suffix = key[index - 1 + s :]
        inner = c2.value_on(mid)
        if not inner:
            continue
        prefix_sum = sum(degrees[i] for i in prefix)
        parity = (base_parity + tpar * (p - 1 + prefix_sum)) % 2
        acc: Element = {}
        for b, coeff in inner.items():
            outer = c1.value_on(prefix + (b,) + suffix)
            for k, v in outer.items():
                val = f.mul(coeff, v)
                tot = f.add(acc.get(k, f.zero()), val)
                if f.is_zero(tot):
                    acc.pop(k, None)
                else:
                    acc[k] = tot
        if not acc:
            continue
        if parity:
            acc = {k: f.neg(v) for k, v in acc.items()}
        values[key] = acc
    return Cochain(a, big_arity, big_qdeg, values, sum_bound=cap, validate=False)


def pre_lie(c1: Cochain, c2: Cochain, *, keys: Sequence[Key] | None = None) -> Cochain:
    """Sum of all insertions of ``c2`` into ``c1``."""
    if c1.algebra is not c2.algebra:
        raise ValueError("cochains live over different algebras")
    p, s = c1.arity, c2.arity
    if p == 0 and s == 0:
        raise ValueError("the pre-Lie product of two arity-0 cochains is undefined")
    a = c1.algebra
    big_arity, big_qdeg = p + s - 1, c1.qdeg + c2.qdeg
    cap = _binary_result_cap(c1, c2, big_qdeg)
    if keys is None:
        keys = list(domain_keys(a, big_arity, big_qdeg, sum_bound=cap))
    else:
        keys = list(keys)
    result = Cochain(a, big_arity, big_qdeg, {}, sum_bound=cap, validate=False)
    for index in range(1, p + 1):
        result = result.add(insert_at(c1, c2, index, keys=keys))
    return result


def bracket(c1: Cochain, c2: Cochain, *, keys: Sequence[Key] | None = None) -> Cochain:
    """Graded bracket ``{c1}{c2} - (-1)^(|c1|-1)(|c2|-1) {c2}{c1}``."""
    left = pre_lie(c1, c2, keys=keys)
    right = pre_lie(c2, c1, keys=keys)
    parity = ((c1.total_degree - 1) % 2) * ((c2.total_degree - 1) % 2)
    return left.sub(right) if parity == 0 else left.add(right)


def square(c: Cochain, *, keys: Sequence[Key] | None = None) -> Cochain:
    """Pre-Lie square ``{c}{c}``, of bidegree ``(2p-1, 2q)``."""
    return pre_lie(c, c, keys=keys)


def differential(c: Cochain, *, keys: Sequence[Key] | None = None, product: Cochain | None = None) -> Cochain:
    """Hochschild differential: bracket with the multiplication cochain."""
    if product is None:
        product = multiplication_cochain(c.algebra)
    return bracket(product, c, keys=keys)


def cup(c1: Cochain, c2: Cochain, *, keys: Sequence[Key] | None = None) -> Cochain:
    """Cup product ``(c1 u c2)(x_1..x_{p+s}) = +- c1(x_1..x_p) * c2(x_{p+1}..)``.

    The sign is ``(-1)**(p - 1 + q + t*(p + deg(x_1) + .. + deg(x_p)))``,
    which is the expansion of inserting both factors into the multiplication
    cochain; that equality is pinned by tests.
    """
    if c1.algebra is not c2.algebra:
        raise ValueError("cochains live over different algebras")
    a = c1.algebra
    f = a.field
    p, q = c1.arity, c1.qdeg
    s, t = c2.arity, c2.qdeg
    big_arity, big_qdeg = p + s, q + t
    caps = []
    if min(a.degrees) >= 0:
        if a.window is not None:
            hi = a.window[1]
            caps += [hi - big_qdeg, hi - q, hi - t]
        for c in (c1, c2):
            eff = _effective_sum_cap(c)
            if eff is not None:
                caps.append(eff)
    elif c1.sum_bound is not None or c2.sum_bound is not None:
        raise ValueError("sum-bounded cochains require a nonnegative grading")
    cap = min(caps) if caps else None
    if keys is None:
        keys = domain_keys(a, big_arity, big_qdeg, sum_bound=cap)
    degrees = a.degrees
    tpar = t % 2
    values: dict[Key, Element] = {}
    for key in keys:
        left_key, right_key = key[:p], key[p:]
        v1 = c1.value_on(left_key)
        if not v1:
            continue
        v2 = c2.value_on(right_key)
        if not v2:
            continue
        prod = a.mul(v1, v2)
        if not prod:
            continue
        left_sum = sum(degrees[i] for i in left_key)
        parity = (p - 1 + q + tpar * (p + left_sum)) % 2
        if parity:
            prod = {k: f.neg(v) for k, v in prod.items()}
        values[key] = prod
    return Cochain(a, big_arity, big_qdeg, values, sum_bound=cap, validate=False)


def suspension_parity(algebra: GradedAlgebra, key: Key) -> int:
    """Parity of the suspension sign: sum over slots of (p - j) * (deg - 1)."""
    p = len(key)
    total = 0
    for j, i in enumerate(key, start=1):
        total += (p - j) * (algebra.degrees[i] - 1)
    return total % 2


# --- linear-algebra core -------------------------------------------------------

@dataclass
class ClassReduction:
    """A cocycle expressed against the chosen basis of its cohomology group.

    ``coefficients`` are aligned with ``class_reps`` of the same complex and
    bidegree.  When the class vanishes, ``certificate`` holds a primitive
    whose differential equals the reduced cochain (as elements of the
    in-window complex); otherwise it is None.
    """

    coefficients: tuple[Scalar, ...]
    certificate: object | None

    @property
    def is_zero(self) -> bool:
        field_zero_like = [c for c in self.coefficients if c != 0]
        return not field_zero_like


class VectorComplex:
    """Shared exact linear algebra for cochain complexes.

    A concrete complex provides per-bidegree coordinate lists and the matrix
    columns of its differential; this core computes cohomology dimensions,
    class representatives, reductions with coboundary certificates, and
    preimage solves.  All vectors are sparse dicts over coordinate positions.
    """

    def __init__(
        self,
        field: Field,
        coords_fn: Callable[[int, int], list],
        diff_columns_fn: Callable[[int, int], list[dict[int, Scalar]]],
    ):
        self.field = field
        self._coords_fn = coords_fn
        self._diff_columns_fn = diff_columns_fn
        self._coords: dict[tuple[int, int], list] = {}
        self._columns: dict[tuple[int, int], list[dict[int, Scalar]]] = {}
        self._sites: dict[tuple[int, int], tuple[SparseSpan, int]] = {}

    def coords(self, p: int, q: int) -> list:
        if p < 0:
            return []
        site = (p, q)
        if site not in self._coords:
            self._coords[site] = self._coords_fn(p, q)
        return self._coords[site]

    def dim(self, p: int, q: int) -> int:
        return len(self.coords(p, q))

    def columns(self, p: int, q: int) -> list[dict[int, Scalar]]:
        if p < 0:
            return []
        site = (p, q)
        if site not in self._columns:
            self._columns[site] = self._diff_columns_fn(p, q)
        return self._columns[site]

    def _site(self, p: int, q: int) -> tuple[SparseSpan, int]:
        """Span of cocycles at ``(p, q)``: image rows first, then class reps."""
        site = (p, q)
        if site not in self._sites:
            span = SparseSpan(self.field, track=True)
            for i, col in enumerate(self.columns(p - 1, q)):
                span.insert(col, tag=("h", i))
            reps = 0
            for vec in kernel_from_columns(self.field, self.columns(p, q)):
                if span.insert(vec, tag=("r", reps)):
                    reps += 1
            self._sites[site] = (span, reps)
        return self._sites[site]

    def hh(self, p: int, q: int) -> int:
        return self._site(p, q)[1]

    def class_rep_vectors(self, p: int, q: int) -> list[dict[int, Scalar]]:
        """Kernel vectors representing the chosen cohomology basis, in order."""
        span = SparseSpan(self.field, track=False)
        for col in self.columns(p - 1, q):
            span.insert(col)
        reps = []
        for vec in kernel_from_columns(self.field, self.columns(p, q)):
            if span.insert(vec):
                reps.append(vec)
        return reps

    def reduce(self, p: int, q: int, vec: dict[int, Scalar]) -> tuple[list[Scalar], dict[int, Scalar] | None]:
        """Class coordinates of a cocycle vector, plus a certificate when zero.

        Returns ``(coefficients, certificate)``: the coefficients over the
        class representatives of ``(p, q)``, and, when they all vanish, a
        vector at ``(p-1, q)`` whose differential is ``vec``.
        """
        span, rep_count = self._site(p, q)
        combo = span.solve(vec)
        if combo is None:
            raise ValueError(f"vector at bidegree ({p},{q}) is not a cocycle of the complex")
        f = self.field
        coeffs: list[Scalar] = [f.zero()] * rep_count
        cert: dict[int, Scalar] = {}
        for (kind, i), coeff in combo.items():
            if f.is_zero(coeff):
                continue
            if kind == "r":
                coeffs[i] = coeff
            else:
                cert[i] = coeff
        if any(not f.is_zero(c) for c in coeffs):
            return coeffs, None
        return coeffs, cert

    def is_exact_sequence_at(self, p: int, q: int) -> bool:
        return self.hh(p, q) == 0


@dataclass
class MasseyReport:
    """Summary of the degree-shifting pairing induced by a fixed cocycle."""

    mu_bidegree: tuple[int, int]
    shift: tuple[int, int]
    square_class_zero: bool
    square_certificate: object | None
    dims: dict[tuple[int, int], int]
    maps: dict[tuple[int, int], Matrix]
    pairing_squares_to_zero: dict[tuple[int, int], bool]


def massey_complex(
    provider,
    mu,
    p_range: Sequence[int],
    q_range: Sequence[int],
) -> MasseyReport:
    """Study the pairing ``c -> [mu, c]`` on cohomology classes.

    ``provider`` is a complex object exposing ``hh``, ``class_reps``,
    ``reduce_to_class``, ``is_cocycle``, ``bracket`` and ``square`` for its
    own cochain type; ``mu`` is a cocycle of that type.  The report contains
    the in-range cohomology dimensions, the matrix of the pairing out of each
    bidegree, whether applying the pairing twice kills every class, and the
    reduction of the square of ``mu`` (whose class must vanish for the
    pairing to be a differential on cohomology).
    """
    if not provider.is_cocycle(mu):
        raise ValueError("mu is not a cocycle")
    p_mu, q_mu = mu.arity, mu.qdeg
    shift = (p_mu - 1, q_mu)
    sq = provider.square(mu)
    sq_reduction = provider.reduce_to_class(sq)
    dims: dict[tuple[int, int], int] = {}
    maps: dict[tuple[int, int], Matrix] = {}
    squares_zero: dict[tuple[int, int], bool] = {}
    field = provider.field
    for p in p_range:
        for q in q_range:
            dims[(p, q)] = provider.hh(p, q)
    for p in p_range:
        for q in q_range:
            target = (p + shift[0], q + shift[1])
            if target not in dims:
                continue
            reps = provider.class_reps(p, q)
            columns = []
            all_square_zero = True
            for rep in reps:
                image = provider.bracket(mu, rep)
                reduction = provider.reduce_to_class(image)
                columns.append(list(reduction.coefficients))
                twice = provider.bracket(mu, image)
                if not provider.reduce_to_class(twice).is_zero:
                    all_square_zero = False
            maps[(p, q)] = Matrix.from_columns(field, columns, nrows=dims[target])
            squares_zero[(p, q)] = all_square_zero
    return MasseyReport(
        mu_bidegree=(p_mu, q_mu),
        shift=shift,
        square_class_zero=sq_reduction.is_zero,
        square_certificate=sq_reduction.certificate,
        dims=dims,
        maps=maps,
        pairing_squares_to_zero=squares_zero,
    )


class HochschildComplex:
    """The in-window Hochschild cochain complex of a graded algebra.

    For a windowed algebra (nonnegative grading, vanishing floor required)
    the bidegree ``(p, q)`` coordinates are the basis tuples with input
    degree sum at most ``top - max(q, 0)`` paired with an output basis
    element of the matching degree; every reference the differential makes
    from such a coordinate stays inside the same region, so the complex is
    self-contained and certificates are exact.  For a fully known algebra
    the coordinates cover every representable value degree.
    """

    def __init__(self, algebra: GradedAlgebra):
        if algebra.window is not None:
            lo, _hi = algebra.window
            if lo != 0 or not algebra.floor_vanishes or min(algebra.degrees) < 0:
                raise ValueError(
                    "cohomology of a windowed algebra needs a nonnegative grading "
                    "with a vanishing floor at 0"
                )
        self.algebra = algebra
        self.field = algebra.field
        self._product = multiplication_cochain(algebra)
        self._core = VectorComplex(self.field, self._site_coords, self._site_columns)
        self._indices: dict[tuple[int, int], dict[tuple[Key, int], int]] = {}

    # --- coordinate bookkeeping ---------------------------------------------

    def budget(self, q: int) -> int | None:
        """Cap on input-degree sums used for the in-window complex."""
        return budget_sum_cap(self.algebra, q)

    def _site_coords(self, p: int, q: int) -> list[tuple[Key, int]]:
        a = self.algebra
        coords: list[tuple[Key, int]] = []
        for key in domain_keys(a, p, q, sum_bound=self.budget(q)):
            vdeg = sum(a.degrees[i] for i in key) + q
            for out in a.basis_indices(vdeg):
                coords.append((key, out))
        return coords

    def _index(self, p: int, q: int) -> dict[tuple[Key, int], int]:
        site = (p, q)
        if site not in self._indices:
            self._indices[site] = {cid: n for n, cid in enumerate(self._core.coords(p, q))}
        return self._indices[site]

    def _site_columns(self, p: int, q: int) -> list[dict[int, Scalar]]:
        a = self.algebra
        one = self.field.one()
        next_keys = list(dict.fromkeys(key for key, _ in self._core.coords(p + 1, q)))
        columns = []
        for key, out in self._core.coords(p, q):
            basis_cochain = Cochain(
                a, p, q, {key: {out: one}}, sum_bound=self.budget(q), validate=False
            )
            image = differential(basis_cochain, keys=next_keys, product=self._product)
            columns.append(self.cochain_vector(image, p + 1, q))
        return columns

    def cochain_vector(self, c: Cochain, p: int | None = None, q: int | None = None) -> dict[int, Scalar]:
        """Coordinates of a cochain in the in-window complex at its bidegree."""
        p = c.arity if p is None else p
        q = c.qdeg if q is None else q
        if (c.arity, c.qdeg) != (p, q):
            raise ValueError("cochain bidegree does not match the requested site")
        budget = self.budget(q)
        if budget is not None and c.sum_bound is not None and c.sum_bound < budget:
            raise ValueError(
                f"cochain is known only up to input sum {c.sum_bound}, but the "
                f"complex needs values up to {budget}"
            )
        index = self._index(p, q)
        vec: dict[int, Scalar] = {}
        for key, elem in c.values.items():
            for out, coeff in elem.items():
                pos = index.get((key, out))
                if pos is not None:
                    vec[pos] = coeff
        return vec

    def vector_cochain(self, vec: Mapping[int, Scalar], p: int, q: int) -> Cochain:
        coords = self._core.coords(p, q)
        values: dict[Key, Element] = {}
        for pos, coeff in vec.items():
            if self.field.is_zero(coeff):
                continue
            key, out = coords[pos]
            values.setdefault(key, {})[out] = coeff
        return Cochain(self.algebra, p, q, values, sum_bound=self.budget(q), validate=False)

    # --- public API -----------------------------------------------------------

    def coordinates(self, p: int, q: int) -> list[tuple[Key, int]]:
        """The ``(input key, output basis index)`` coordinates of the site."""
        return list(self._core.coords(p, q))

    def dim(self, p: int, q: int) -> int:
        return self._core.dim(p, q)

    def hh(self, p: int, q: int) -> int:
        return self._core.hh(p, q)

    def class_reps(self, p: int, q: int) -> list[Cochain]:
        return [self.vector_cochain(vec, p, q) for vec in self._core.class_rep_vectors(p, q)]

    def is_cocycle(self, c: Cochain) -> bool:
        image = differential(c, product=self._product)
        return not self.cochain_vector(image, c.arity + 1, c.qdeg)

    def reduce_to_class(self, c: Cochain) -> ClassReduction:
        coeffs, cert_vec = self._core.reduce(c.arity, c.qdeg, self.cochain_vector(c))
        certificate = None
        if cert_vec is not None:
            certificate = self.vector_cochain(cert_vec, c.arity - 1, c.qdeg)
        return ClassReduction(coefficients=tuple(coeffs), certificate=certificate)

    def solve_coboundary(self, target: Cochain) -> Cochain | None:
        """Find ``h`` with ``d(h) == target`` in the complex, or None."""
        try:
            reduction = self.reduce_to_class(target)
        except ValueError:
            return None
        return reduction.certificate

    # pairing-provider protocol -------------------------------------------------

    def bracket(self, c1: Cochain, c2: Cochain) -> Cochain:
        return bracket(c1, c2)

    def square(self, c: Cochain) -> Cochain:
        return square(c)

    def __repr__(self) -> str:
        return f"HochschildComplex({self.algebra!r})"


def hh(algebra: GradedAlgebra, p: int, q: int) -> int:
    """Dimension of the in-window Hochschild cohomology at bidegree ``(p, q)``."""
    return HochschildComplex(algebra).hh(p, q)
