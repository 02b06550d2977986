"""A-infinity structures: relations, obstructions, morphisms, gauge moves.

A structure is a family of operations ``m_n`` of bidegree ``(n, 2 - n)`` on
one graded algebra, minimal (no arity-1 part) with ``m_2`` the algebra's own
multiplication, subject to

    sum over p + s = n + 1 of  {m_p}{m_s}  = 0        for every n >= 3,

with ``{-}{-}`` the pre-Lie composition of :mod:`masseykit.hochschild`.  The
arity-3 relation is associativity of the product; the arity-``N``
extension problem for the higher operations is controlled by a cohomology
class in bidegree ``(N + 1, 2 - N)``.

Morphisms and gauge moves are computed in the suspended convention: an
input of degree ``g`` counts as ``g - 1``, every structure operation becomes
odd, and every morphism component becomes even, so the only Koszul signs
left are those of sliding an odd operation past leading inputs.  The
translation between the conventions is the involutive sign twist
:func:`suspend` / :func:`unsuspend`.

On a windowed algebra every computed cochain walks its domain in increasing
input-degree sum and stops honestly at the first level where an intermediate
value leaves the window; the reached level is recorded as the cochain's
``sum_bound`` (``None`` when every representable tuple was covered).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterator, Mapping

from masseykit.errors import InconclusiveWindow, WindowOverflow
from masseykit.exactlin import Matrix, Scalar
from masseykit.galg import Element, GradedAlgebra, clean_element
from masseykit.hochschild import (
    ClassReduction,
    Cochain,
    HochschildComplex,
    Key,
    VectorComplex,
    budget_sum_cap,
    degree_extent,
    domain_keys,
    multiplication_cochain,
    pre_lie,
    square,
    suspension_parity,
)


class MapCochain:
    """A multilinear map from tuples over one graded algebra into another.

    A map of bidegree ``(arity, qdeg)`` sends homogeneous inputs of total
    degree ``D`` to a codomain element of degree ``D + qdeg``.  The storage
    conventions match :class:`~masseykit.hochschild.Cochain`: values live on
    basis tuples of the domain, ``sum_bound`` is the largest input-degree
    sum on which the map is known, and evaluation outside the known region
    raises :class:`~masseykit.errors.WindowOverflow`.
    """

    __slots__ = ("domain", "codomain", "arity", "qdeg", "values", "sum_bound")

    def __init__(
        self,
        domain: GradedAlgebra,
        codomain: GradedAlgebra,
        arity: int,
        qdeg: int,
        values: Mapping[Key, Mapping[int, Scalar]] | None = None,
        *,
        sum_bound: int | None = None,
        validate: bool = True,
    ):
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        if domain.field != codomain.field:
            raise ValueError("domain and codomain have different base fields")
        self.domain = domain
        self.codomain = codomain
        self.arity = arity
        self.qdeg = qdeg
        self.sum_bound = sum_bound
        cleaned: dict[Key, Element] = {}
        for key, elem in (values or {}).items():
            entry = clean_element(codomain.field, elem)
            if entry:
                cleaned[tuple(key)] = entry
        self.values = cleaned
        if validate:
            self._validate()

    def _validate(self) -> None:
        dom, cod = self.domain, self.codomain
        for key, elem in self.values.items():
            if len(key) != self.arity:
                raise ValueError(f"key {key} does not have arity {self.arity}")
            for i in key:
                dom._check_index(i)
            input_sum = sum(dom.degrees[i] for i in key)
            expected = input_sum + self.qdeg
            actual = cod.element_degree(elem)
            if actual != expected:
                raise ValueError(
                    f"value on {key} has degree {actual}, expected {expected}"
                )
            if self.sum_bound is not None and input_sum > self.sum_bound:
                raise ValueError(f"key {key} lies beyond sum_bound={self.sum_bound}")

    @classmethod
    def identity(cls, algebra: GradedAlgebra) -> "MapCochain":
        values = {(i,): algebra.basis_element(i) for i in range(algebra.total_dim)}
        return cls(algebra, algebra, 1, 0, values, validate=False)

    @classmethod
    def from_cochain(cls, c: Cochain) -> "MapCochain":
        return cls(
            c.algebra, c.algebra, c.arity, c.qdeg, c.values,
            sum_bound=c.sum_bound, validate=False,
        )

    def to_cochain(self) -> Cochain:
        if self.domain is not self.codomain:
            raise ValueError("only an endo-map can be viewed as a cochain")
        return Cochain(
            self.domain, self.arity, self.qdeg, self.values,
            sum_bound=self.sum_bound, validate=False,
        )

    def input_sum(self, key: Key) -> int:
        degs = self.domain.degrees
        return sum(degs[i] for i in key)

    def value_on(self, key: Key) -> Element:
        """Value on a tuple of domain basis elements."""
        input_sum = self.input_sum(key)
        vdeg = input_sum + self.qdeg
        cod = self.codomain
        if cod.window is not None:
            lo, hi = cod.window
            if vdeg > hi:
                raise WindowOverflow(
                    f"map value on {key} has degree {vdeg}, above window top {hi}"
                )
            if vdeg < lo:
                if cod.floor_vanishes:
                    return {}
                raise WindowOverflow(
                    f"map value on {key} has degree {vdeg}, below window floor {lo}"
                )
        if self.sum_bound is not None and input_sum > self.sum_bound:
            raise WindowOverflow(
                f"map is only known for input-degree sums up to {self.sum_bound}, "
                f"got {input_sum}"
            )
        return dict(self.values.get(key, {}))

    def __call__(self, *args: Mapping[int, Scalar]) -> Element:
        """Multilinear evaluation on domain elements."""
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        f = self.codomain.field
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

    def _compatible(self, other: "MapCochain") -> None:
        if self.domain is not other.domain or self.codomain is not other.codomain:
            raise ValueError("maps have different (co)domains")
        if (self.arity, self.qdeg) != (other.arity, other.qdeg):
            raise ValueError(
                f"bidegree mismatch: ({self.arity},{self.qdeg}) vs ({other.arity},{other.qdeg})"
            )

    def add(self, other: "MapCochain") -> "MapCochain":
        self._compatible(other)
        cod = self.codomain
        merged = {key: dict(elem) for key, elem in self.values.items()}
        for key, elem in other.values.items():
            merged[key] = cod.add(merged.get(key, {}), elem)
        bound = self.sum_bound
        if bound is None or (other.sum_bound is not None and other.sum_bound < bound):
            bound = other.sum_bound
        return MapCochain(
            self.domain, cod, self.arity, self.qdeg, merged,
            sum_bound=bound, validate=False,
        )

    def scale(self, coeff: Scalar) -> "MapCochain":
        cod = self.codomain
        if cod.field.is_zero(coeff):
            values: dict[Key, Element] = {}
        else:
            values = {key: cod.scale(coeff, elem) for key, elem in self.values.items()}
        return MapCochain(
            self.domain, cod, self.arity, self.qdeg, values,
            sum_bound=self.sum_bound, validate=False,
        )

    def neg(self) -> "MapCochain":
        return self.scale(self.codomain.field.neg(self.codomain.field.one()))

    def sub(self, other: "MapCochain") -> "MapCochain":
        return self.add(other.neg())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MapCochain)
            and self.domain is other.domain
            and self.codomain is other.codomain
            and (self.arity, self.qdeg) == (other.arity, other.qdeg)
            and self.values == other.values
        )

    def __repr__(self) -> str:
        bound = f", sum_bound={self.sum_bound}" if self.sum_bound is not None else ""
        return f"MapCochain(arity={self.arity}, qdeg={self.qdeg}, support={len(self.values)}{bound})"


# --- suspended convention ------------------------------------------------------

def _sdeg(op: MapCochain) -> int:
    """Suspended degree: arity + qdeg - 1."""
    return op.arity + op.qdeg - 1


def _twist(op: Cochain | MapCochain) -> MapCochain:
    """Apply the suspension sign to every stored value (an involution)."""
    if isinstance(op, Cochain):
        domain = codomain = op.algebra
    else:
        domain, codomain = op.domain, op.codomain
    f = codomain.field
    values: dict[Key, Element] = {}
    for key, elem in op.values.items():
        if suspension_parity(domain, key):
            values[key] = {k: f.neg(v) for k, v in elem.items()}
        else:
            values[key] = dict(elem)
    return MapCochain(
        domain, codomain, op.arity, op.qdeg, values,
        sum_bound=op.sum_bound, validate=False,
    )


def suspend(op: Cochain | MapCochain) -> MapCochain:
    """The operation in the suspended convention (values sign-twisted)."""
    return _twist(op)


def unsuspend(op: MapCochain) -> MapCochain:
    """Back from the suspended convention; inverse of :func:`suspend`."""
    return _twist(op)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive integers with the given sum and length."""
    if parts < 1 or total < parts:
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# --- honest evaluation domains ---------------------------------------------------

def _graded_levels(
    domain: GradedAlgebra, arity: int, qdeg: int, extent: tuple[int, int]
) -> list[tuple[int, list[Key]]]:
    """Representable basis tuples grouped by input-degree sum, ascending."""
    degrees = domain.degrees
    levels: dict[int, list[Key]] = {}
    for key in domain_keys(domain, arity, qdeg, extent=extent):
        levels.setdefault(sum(degrees[i] for i in key), []).append(key)
    return sorted(levels.items())


def _evaluate_levels(
    domain: GradedAlgebra,
    arity: int,
    qdeg: int,
    extent: tuple[int, int],
    evaluate,
) -> tuple[dict[Key, Element], int | None]:
    """Evaluate a per-key function on every representable basis tuple.

    Keys are visited in increasing input-degree sum; the first level where
    some intermediate of ``evaluate`` leaves the window ends the walk, and
    the returned bound then records the last fully covered sum.  A ``None``
    bound means every representable key was evaluated.
    """
    values: dict[Key, Element] = {}
    for level, keys in _graded_levels(domain, arity, qdeg, extent):
        try:
            chunk = [(key, evaluate(key)) for key in keys]
        except WindowOverflow:
            return values, level - 1
        for key, elem in chunk:
            if elem:
                values[key] = elem
    return values, None


def _zero_cochain(algebra: GradedAlgebra, arity: int, qdeg: int) -> Cochain:
    return Cochain(algebra, arity, qdeg, {}, sum_bound=None, validate=False)


# --- structures ------------------------------------------------------------------

class AInfinityStructure:
    """A minimal family of operations ``m_n`` of bidegree ``(n, 2 - n)``.

    Operations start at arity 2, where the operation is always the algebra's
    own multiplication cochain; arities without a stored operation count as
    zero.  Validation checks bidegrees and the arity-2 identification, not
    the higher relations -- those are what :func:`verify_upto` decides.
    """

    __slots__ = ("algebra", "ops")

    def __init__(
        self,
        algebra: GradedAlgebra,
        ops: Mapping[int, Cochain],
        *,
        validate: bool = True,
    ):
        self.algebra = algebra
        self.ops: dict[int, Cochain] = {int(n): c for n, c in sorted(ops.items())}
        if validate:
            if 2 not in self.ops:
                raise ValueError("a structure needs its arity-2 operation")
            for n, c in self.ops.items():
                if n < 2:
                    raise ValueError(
                        f"operations start at arity 2 (minimal structure), got {n}"
                    )
                if c.algebra is not algebra:
                    raise ValueError(f"operation m_{n} lives over a different algebra")
                if (c.arity, c.qdeg) != (n, 2 - n):
                    raise ValueError(
                        f"operation m_{n} must have bidegree ({n}, {2 - n}), "
                        f"got ({c.arity}, {c.qdeg})"
                    )
            if self.ops[2] != multiplication_cochain(algebra):
                raise ValueError(
                    "the arity-2 operation must be the algebra's multiplication"
                )

    @classmethod
    def from_algebra(cls, algebra: GradedAlgebra) -> "AInfinityStructure":
        """The structure with just the algebra's own product."""
        return cls(algebra, {2: multiplication_cochain(algebra)})

    def op(self, n: int) -> Cochain:
        """The arity-``n`` operation (zero when absent)."""
        c = self.ops.get(n)
        if c is not None:
            return c
        return _zero_cochain(self.algebra, n, 2 - n)

    @property
    def max_arity(self) -> int:
        return max(self.ops, default=0)

    def with_op(self, n: int, c: Cochain) -> "AInfinityStructure":
        return AInfinityStructure(self.algebra, {**self.ops, n: c})

    def __repr__(self) -> str:
        arities = ",".join(str(n) for n in self.ops)
        return f"AInfinityStructure(arities=[{arities}])"


def mc_defect(S: AInfinityStructure, n: int) -> Cochain:
    """The arity-``n`` relation defect: sum of {m_p}{m_s} over p + s = n + 1.

    The structure satisfies its arity-``n`` relation exactly when this
    cochain (of bidegree ``(n, 3 - n)``) vanishes; on a windowed algebra it
    is evaluated level by level and its ``sum_bound`` records how far the
    window let the check reach.
    """
    a = S.algebra
    qdeg = 3 - n
    pairs = [
        (p, n + 1 - p)
        for p in range(2, n)
        if p in S.ops and (n + 1 - p) in S.ops
        and not S.ops[p].is_zero() and not S.ops[n + 1 - p].is_zero()
    ]
    if not pairs:
        return _zero_cochain(a, n, qdeg)
    values: dict[Key, Element] = {}
    bound: int | None = None
    for level, keys in _graded_levels(a, n, qdeg, degree_extent(a)):
        try:
            chunk: dict[Key, Element] = {}
            for p, s in pairs:
                part = pre_lie(S.ops[p], S.ops[s], keys=keys)
                for key, elem in part.values.items():
                    chunk[key] = a.add(chunk.get(key, {}), elem)
        except WindowOverflow:
            bound = level - 1
            break
        for key, elem in chunk.items():
            if elem:
                values[key] = elem
    return Cochain(a, n, qdeg, values, sum_bound=bound, validate=False)


@dataclass
class StructureReport:
    """Outcome of checking the structure relations arity by arity."""

    ok: bool
    checked_upto: int
    failures: tuple[int, ...]
    witnesses: dict[int, tuple[Key, Element]]
    checked_sums: dict[int, int | None]


def verify_upto(S: AInfinityStructure, upto: int) -> StructureReport:
    """Check the relations at every arity up to ``upto``.

    ``checked_sums`` records, per arity, the largest input-degree sum the
    window allowed the defect to be evaluated on (``None`` = every
    representable tuple).
    """
    failures: list[int] = []
    witnesses: dict[int, tuple[Key, Element]] = {}
    checked_sums: dict[int, int | None] = {}
    for n in range(3, upto + 1):
        defect = mc_defect(S, n)
        checked_sums[n] = defect.sum_bound
        if not defect.is_zero():
            failures.append(n)
            key = min(defect.values)
            witnesses[n] = (key, defect.values[key])
    return StructureReport(
        ok=not failures,
        checked_upto=upto,
        failures=tuple(failures),
        witnesses=witnesses,
        checked_sums=checked_sums,
    )


# --- obstruction theory ----------------------------------------------------------

@dataclass
class ObstructionReport:
    """The class controlling the arity-``arity`` extension problem."""

    arity: int
    bidegree: tuple[int, int]
    defect: Cochain
    vanishes: bool
    reduction: ClassReduction | None


def _check_relations_below(S: AInfinityStructure, arity: int, label: str) -> None:
    for a_ in range(3, arity + 1):
        defect = mc_defect(S, a_)
        if not defect.is_zero():
            key = min(defect.values)
            raise ValueError(
                f"{label}: the arity-{a_} relation fails at {key}"
            )


def obstruction_class(
    S: AInfinityStructure,
    arity: int,
    complex_: HochschildComplex | None = None,
) -> ObstructionReport:
    """Cohomology class obstructing a choice of ``m_arity``.

    For a structure whose relations hold at every arity up to ``arity``
    (these never involve an arity-``arity`` operation), the sum of
    {m_p}{m_s} over p + s = arity + 2 with p, s >= 3 is a cocycle of
    bidegree ``(arity + 1, 2 - arity)``; an ``m_arity`` continuing the
    structure exists exactly when its class vanishes.  The reduction is
    skipped entirely when the defect is already zero on the nose.
    """
    if arity < 3:
        raise ValueError("extension problems start at arity 3")
    _check_relations_below(S, arity, f"not an A_{arity - 1} structure")
    a = S.algebra
    n, qdeg = arity + 1, 2 - arity
    pairs = [
        (p, arity + 2 - p)
        for p in range(3, arity)
        if p in S.ops and (arity + 2 - p) in S.ops
        and not S.ops[p].is_zero() and not S.ops[arity + 2 - p].is_zero()
    ]
    values: dict[Key, Element] = {}
    bound: int | None = None
    for level, keys in _graded_levels(a, n, qdeg, degree_extent(a)):
        try:
            chunk: dict[Key, Element] = {}
            for p, s in pairs:
                part = pre_lie(S.ops[p], S.ops[s], keys=keys)
                for key, elem in part.values.items():
                    chunk[key] = a.add(chunk.get(key, {}), elem)
        except WindowOverflow:
            bound = level - 1
            break
        for key, elem in chunk.items():
            if elem:
                values[key] = elem
    omega = Cochain(a, n, qdeg, values, sum_bound=bound, validate=False)
    if omega.is_zero():
        return ObstructionReport(
            arity=arity, bidegree=(n, qdeg), defect=omega,
            vanishes=True, reduction=None,
        )
    if complex_ is None:
        complex_ = HochschildComplex(a)
    reduction = complex_.reduce_to_class(omega)
    return ObstructionReport(
        arity=arity, bidegree=(n, qdeg), defect=omega,
        vanishes=reduction.is_zero, reduction=reduction,
    )


def extend_step(
    S: AInfinityStructure,
    arity: int,
    complex_: HochschildComplex | None = None,
) -> AInfinityStructure | ObstructionReport:
    """Adjoin a solved ``m_arity``, or report why none exists.

    When the obstruction class vanishes the negated coboundary certificate
    is the new operation (the zero cochain when the defect vanishes on the
    nose) and the enlarged structure is returned; lower operations are
    reused untouched.  A nonzero class is returned as its
    :class:`ObstructionReport` instead.
    """
    report = obstruction_class(S, arity, complex_)
    if not report.vanishes:
        return report
    if report.reduction is None:
        new_op = _zero_cochain(S.algebra, arity, 2 - arity)
    else:
        new_op = report.reduction.certificate.neg()
    return S.with_op(arity, new_op)


# --- Massey-type classes -----------------------------------------------------------

def _first_operation_checked(
    S: AInfinityStructure,
    d: int,
    complex_: HochschildComplex | None,
) -> tuple[Cochain, HochschildComplex | None]:
    """Validations shared by the class-of-first-operation computations.

    On an algebra concentrated in degrees divisible by ``d`` an operation of
    bidegree ``(n, 2 - n)`` can only be nonzero when ``d`` divides ``2 - n``,
    so the first candidate arity is ``d + 2``.  The relations at arities up
    to ``2d + 2`` never involve later candidates and must hold on the nose
    (the one at arity ``d + 3`` says the operation is a cocycle); the
    arity-``2d + 3`` relation only requires the class of the pre-Lie square
    to vanish, which is asserted here.
    """
    if d < 1:
        raise ValueError("the sparsity step must be a positive integer")
    a = S.algebra
    if d > 1:
        bad = [g for g in a.degrees if g % d]
        if bad:
            raise ValueError(
                f"algebra is not {d}-sparse: it has a basis element of degree {bad[0]}"
            )
        for n, c in S.ops.items():
            if (2 - n) % d and not c.is_zero():
                raise ValueError(
                    f"an arity-{n} operation must vanish on a {d}-sparse algebra"
                )
    _check_relations_below(S, 2 * d + 2, "relations fail below the first class")
    m = S.op(d + 2)
    sq = square(m)
    if not sq.is_zero():
        if complex_ is None:
            complex_ = HochschildComplex(a)
        sq_reduction = complex_.reduce_to_class(sq)
        if not sq_reduction.is_zero:
            raise ValueError(
                "the square of the first-operation class is nonzero: "
                f"coefficients {tuple(sq_reduction.coefficients)}"
            )
    return m, complex_


def universal_massey(
    S: AInfinityStructure,
    complex_: HochschildComplex | None = None,
) -> ClassReduction:
    """Cohomology class of the arity-3 operation, squares checked.

    The arity-4 relation makes ``m_3`` a cocycle of bidegree ``(3, -1)``;
    the class of its pre-Lie square at ``(5, -2)`` must also vanish (the
    arity-5 relation bounds it), and a violation raises rather than
    returning a class.  The operation's class is gauge-invariant.
    """
    m3, complex_ = _first_operation_checked(S, 1, complex_)
    if complex_ is None:
        complex_ = HochschildComplex(S.algebra)
    return complex_.reduce_to_class(m3)


def d_sparse_massey(
    S: AInfinityStructure,
    d: int,
    complex_: HochschildComplex | None = None,
) -> ClassReduction:
    """Class of the first allowed higher operation on a ``d``-sparse algebra.

    With every basis degree divisible by ``d`` the first candidate arity is
    ``d + 2`` and the class lives in bidegree ``(d + 2, -d)``; the square's
    class at ``(2d + 3, -2d)`` is checked to vanish.  ``d = 1`` is the plain
    arity-3 case.
    """
    m, complex_ = _first_operation_checked(S, d, complex_)
    if complex_ is None:
        complex_ = HochschildComplex(S.algebra)
    return complex_.reduce_to_class(m)


class RestrictedComplex:
    """Cochains of the degree-0 subalgebra valued in a fixed component.

    The degree-0 basis elements span a subalgebra, and the degree
    ``-shift`` component of the same algebra is a bimodule over it.
    Cochains assign to tuples of degree-0 basis elements a value in that
    component; the grading plays no further role, so the differential is the
    classical alternating one: act on the left by the leading input, merge
    adjacent inputs with signs ``(-1)^i``, act on the right with sign
    ``(-1)^(n+1)``.
    """

    def __init__(self, algebra: GradedAlgebra, shift: int):
        if shift < 1:
            raise ValueError("the component shift must be positive")
        self.algebra = algebra
        self.shift = shift
        self.field = algebra.field
        degrees = algebra.degrees
        self.zero_basis = tuple(i for i, g in enumerate(degrees) if g == 0)
        self.module_basis = tuple(i for i, g in enumerate(degrees) if g == -shift)
        self._core = VectorComplex(self.field, self._coords, self._columns)
        self._indices: dict[int, dict[tuple[Key, int], int]] = {}

    def _coords(self, p: int, q: int) -> list[tuple[Key, int]]:
        return [
            (key, out)
            for key in cartesian(self.zero_basis, repeat=p)
            for out in self.module_basis
        ]

    def _index(self, p: int) -> dict[tuple[Key, int], int]:
        if p not in self._indices:
            self._indices[p] = {cid: k for k, cid in enumerate(self._core.coords(p, 0))}
        return self._indices[p]

    def diff(self, values: Mapping[Key, Element], p: int) -> dict[Key, Element]:
        """Classical differential of a ``p``-cochain given by its value table."""
        a = self.algebra
        f = self.field
        out: dict[Key, Element] = {}
        for key in cartesian(self.zero_basis, repeat=p + 1):
            acc: Element = {}
            head = values.get(key[1:])
            if head:
                acc = a.add(acc, a.mul(a.basis_element(key[0]), head))
            for i in range(1, p + 1):
                prod = a.basis_product(key[i - 1], key[i])
                term: Element = {}
                for j, cj in prod.items():
                    inner = values.get(key[: i - 1] + (j,) + key[i + 1 :])
                    if inner:
                        term = a.add(term, a.scale(cj, inner))
                if term and i % 2:
                    term = {k: f.neg(v) for k, v in term.items()}
                acc = a.add(acc, term)
            tail = values.get(key[:p])
            if tail:
                term = a.mul(tail, a.basis_element(key[p]))
                if term and (p + 1) % 2:
                    term = {k: f.neg(v) for k, v in term.items()}
                acc = a.add(acc, term)
            if acc:
                out[key] = acc
        return out

    def _columns(self, p: int, q: int) -> list[dict[int, Scalar]]:
        one = self.field.one()
        index = self._index(p + 1)
        columns = []
        for key, out in self._core.coords(p, 0):
            image = self.diff({key: {out: one}}, p)
            vec: dict[int, Scalar] = {}
            for k2, elem in image.items():
                for o2, coeff in elem.items():
                    vec[index[(k2, o2)]] = coeff
            columns.append(vec)
        return columns

    def dim(self, p: int) -> int:
        return self._core.dim(p, 0)

    def hh(self, p: int) -> int:
        return self._core.hh(p, 0)

    def reduce(self, values: Mapping[Key, Element], p: int) -> ClassReduction:
        """Class coordinates of a cocycle value table at arity ``p``.

        The certificate of a vanishing class is itself a value table, at
        arity ``p - 1``, whose differential is the input.
        """
        index = self._index(p)
        vec: dict[int, Scalar] = {}
        for key, elem in values.items():
            for out, coeff in elem.items():
                pos = index.get((tuple(key), out))
                if pos is None:
                    raise ValueError(
                        f"value table entry at {key} does not belong to the complex"
                    )
                vec[pos] = coeff
        coeffs, cert_vec = self._core.reduce(p, 0, vec)
        certificate = None
        if cert_vec is not None:
            coords = self._core.coords(p - 1, 0)
            table: dict[Key, Element] = {}
            for pos, coeff in cert_vec.items():
                if self.field.is_zero(coeff):
                    continue
                key, out = coords[pos]
                table.setdefault(key, {})[out] = coeff
            certificate = table
        return ClassReduction(coefficients=tuple(coeffs), certificate=certificate)


def restrict_to_degree_zero(c: Cochain, shift: int) -> dict[Key, Element]:
    """Value table of a cochain on degree-0 inputs.

    Only a cochain of net degree ``-shift`` restricts meaningfully: inputs
    of degree 0 then produce values in the degree ``-shift`` component, the
    coefficients of :class:`RestrictedComplex` with the same shift.
    """
    if c.qdeg != -shift:
        raise ValueError(
            f"a cochain of net degree {c.qdeg} does not restrict to shift {shift}"
        )
    a = c.algebra
    zero_basis = [i for i, g in enumerate(a.degrees) if g == 0]
    table: dict[Key, Element] = {}
    for key in cartesian(zero_basis, repeat=c.arity):
        val = c.value_on(key)
        if val:
            table[key] = val
    return table


def restricted_massey(
    S: AInfinityStructure,
    d: int,
    complex_: HochschildComplex | None = None,
) -> ClassReduction:
    """Class of the first higher operation restricted to degree-0 inputs.

    The arity-``d + 2`` operation, evaluated on degree-0 basis tuples, takes
    values in the degree ``-d`` component; the resulting value table is
    reduced in the coefficient complex of the degree-0 subalgebra.  The
    validations of :func:`d_sparse_massey` run first.
    """
    m, _ = _first_operation_checked(S, d, complex_)
    restricted = restrict_to_degree_zero(m, d)
    return RestrictedComplex(S.algebra, d).reduce(restricted, d + 2)


# --- morphisms ---------------------------------------------------------------------

class AInfinityMorphism:
    """A family ``f_n`` of bidegree ``(n, 1 - n)`` maps between structures."""

    __slots__ = ("source", "target", "components")

    def __init__(
        self,
        source: AInfinityStructure,
        target: AInfinityStructure,
        components: Mapping[int, MapCochain],
        *,
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.components: dict[int, MapCochain] = {
            int(n): c for n, c in sorted(components.items())
        }
        if validate:
            if 1 not in self.components:
                raise ValueError("a morphism needs an arity-1 component")
            for n, c in self.components.items():
                if c.domain is not source.algebra or c.codomain is not target.algebra:
                    raise ValueError(f"component f_{n} connects the wrong algebras")
                if (c.arity, c.qdeg) != (n, 1 - n):
                    raise ValueError(
                        f"component f_{n} must have bidegree ({n}, {1 - n}), "
                        f"got ({c.arity}, {c.qdeg})"
                    )

    def component(self, n: int) -> MapCochain | None:
        return self.components.get(n)

    @property
    def max_arity(self) -> int:
        return max(self.components, default=0)

    def __repr__(self) -> str:
        arities = ",".join(str(n) for n in self.components)
        return f"AInfinityMorphism(arities=[{arities}])"


def _suspended_ops(S: AInfinityStructure) -> dict[int, MapCochain]:
    return {n: suspend(c) for n, c in S.ops.items() if not c.is_zero()}


def _suspended_components(comps: Mapping[int, MapCochain]) -> dict[int, MapCochain]:
    return {n: suspend(c) for n, c in comps.items()}


def _lhs_value(
    domain: GradedAlgebra,
    codomain: GradedAlgebra,
    b_ops: Mapping[int, MapCochain],
    comps: Mapping[int, MapCochain],
    key: Key,
) -> Element:
    """Sum of F_{n-s+1}(1.. b_s ..1) on a basis tuple, suspended signs.

    Inserting the odd operation ``b_s`` after ``r`` leading inputs costs
    the Koszul sign (-1) to the sum of the suspended input degrees passed.
    """
    n = len(key)
    f = codomain.field
    degrees = domain.degrees
    out: Element = {}
    for s, b in b_ops.items():
        if s > n:
            continue
        outer = comps.get(n - s + 1)
        if outer is None:
            continue
        twist = _sdeg(b) % 2
        prefix_parity = 0
        for r in range(n - s + 1):
            inner = b.value_on(key[r : r + s])
            if inner:
                acc: Element = {}
                for mid, coeff in inner.items():
                    vals = outer.value_on(key[:r] + (mid,) + key[r + s :])
                    for k2, v in vals.items():
                        tot = f.add(acc.get(k2, f.zero()), f.mul(coeff, v))
                        if f.is_zero(tot):
                            acc.pop(k2, None)
                        else:
                            acc[k2] = tot
                if twist and prefix_parity:
                    acc = {k2: f.neg(v) for k2, v in acc.items()}
                out = codomain.add(out, acc)
            prefix_parity = (prefix_parity + degrees[key[r]] - 1) % 2
    return out


def _rhs_value(
    codomain: GradedAlgebra,
    outer_ops: Mapping[int, MapCochain],
    comps: Mapping[int, MapCochain],
    key: Key,
) -> Element:
    """Sum of outer_k(F_{i_1} .. F_{i_k}) over all block splittings.

    The components are even in the suspended convention, so distributing
    them over the inputs picks up no Koszul signs.
    """
    n = len(key)
    out: Element = {}
    for k, op in outer_ops.items():
        if not 1 <= k <= n:
            continue
        for split in _compositions(n, k):
            blocks: list[Element] | None = []
            pos = 0
            for size in split:
                comp = comps.get(size)
                if comp is None:
                    blocks = None
                    break
                val = comp.value_on(key[pos : pos + size])
                pos += size
                if not val:
                    blocks = None
                    break
                blocks.append(val)
            if blocks is None:
                continue
            out = codomain.add(out, op(*blocks))
    return out


def morphism_defect(phi: AInfinityMorphism, n: int) -> MapCochain:
    """Difference of the two sides of the arity-``n`` morphism equation.

    The equation, in the suspended convention, equates inserting each source
    operation into a component with applying a target operation to blocks of
    components; the difference is returned back in the plain convention as a
    map of bidegree ``(n, 2 - n)``.
    """
    dom, cod = phi.source.algebra, phi.target.algebra
    bs = _suspended_ops(phi.source)
    bt = _suspended_ops(phi.target)
    comps = _suspended_components(phi.components)
    qdeg = 2 - n

    def evaluate(key: Key) -> Element:
        lhs = _lhs_value(dom, cod, bs, comps, key)
        rhs = _rhs_value(cod, bt, comps, key)
        return cod.sub(lhs, rhs)

    values, bound = _evaluate_levels(dom, n, qdeg, degree_extent(cod), evaluate)
    result = MapCochain(dom, cod, n, qdeg, values, sum_bound=bound, validate=False)
    return unsuspend(result)


@dataclass
class MorphismReport:
    """Outcome of checking the morphism equations arity by arity."""

    ok: bool
    checked_upto: int
    failures: tuple[int, ...]
    witnesses: dict[int, tuple[Key, Element]]
    checked_sums: dict[int, int | None]


def verify_morphism(phi: AInfinityMorphism, upto: int) -> MorphismReport:
    """Check the morphism equations at every arity from 1 to ``upto``."""
    failures: list[int] = []
    witnesses: dict[int, tuple[Key, Element]] = {}
    checked_sums: dict[int, int | None] = {}
    for n in range(1, upto + 1):
        defect = morphism_defect(phi, n)
        checked_sums[n] = defect.sum_bound
        if not defect.is_zero():
            failures.append(n)
            key = min(defect.values)
            witnesses[n] = (key, defect.values[key])
    return MorphismReport(
        ok=not failures,
        checked_upto=upto,
        failures=tuple(failures),
        witnesses=witnesses,
        checked_sums=checked_sums,
    )


# --- gauge moves -------------------------------------------------------------------

def _check_gauge_components(
    algebra: GradedAlgebra, components: Mapping[int, MapCochain]
) -> dict[int, MapCochain]:
    out: dict[int, MapCochain] = {}
    for n, c in sorted(components.items()):
        n = int(n)
        if n == 1:
            if c != MapCochain.identity(algebra):
                raise ValueError("a gauge has the identity as arity-1 component")
            continue
        if c.domain is not algebra or c.codomain is not algebra:
            raise ValueError(f"gauge component g_{n} lives over the wrong algebra")
        if (c.arity, c.qdeg) != (n, 1 - n):
            raise ValueError(
                f"gauge component g_{n} must have bidegree ({n}, {1 - n}), "
                f"got ({c.arity}, {c.qdeg})"
            )
        out[n] = c
    return out


def gauge_transport(
    S: AInfinityStructure,
    components: Mapping[int, MapCochain],
    upto: int,
) -> AInfinityStructure:
    """Transport the structure along a gauge with identity linear part.

    Returns the unique structure ``S'`` (computed for arities up to
    ``upto``) making ``(id, g_2, g_3, ...)`` a morphism from ``S`` to
    ``S'``: its suspended arity-``n`` operation is the insertion side of
    the morphism equation minus the lower-arity block corrections.  A gauge
    with no nontrivial component returns the structure unchanged.
    """
    a = S.algebra
    gauges = _check_gauge_components(a, components)
    if all(c.is_zero() for c in gauges.values()):
        return S
    comps = {1: MapCochain.identity(a)}
    comps.update({n: suspend(c) for n, c in gauges.items()})
    bs = _suspended_ops(S)
    new_susp: dict[int, MapCochain] = {}
    new_ops: dict[int, Cochain] = {}
    for n in range(2, upto + 1):
        qdeg = 2 - n

        def evaluate(key: Key) -> Element:
            lhs = _lhs_value(a, a, bs, comps, key)
            corr = _rhs_value(a, new_susp, comps, key)
            return a.sub(lhs, corr)

        values, bound = _evaluate_levels(a, n, qdeg, degree_extent(a), evaluate)
        op = MapCochain(a, a, n, qdeg, values, sum_bound=bound, validate=False)
        if not op.is_zero():
            new_susp[n] = op
            new_ops[n] = unsuspend(op).to_cochain()
    return AInfinityStructure(a, new_ops)


def gauge_inverse(
    algebra: GradedAlgebra,
    components: Mapping[int, MapCochain],
    upto: int,
) -> dict[int, MapCochain]:
    """Components of the inverse gauge, arity by arity.

    The inverse is characterised by composing to the identity; its arity-n
    component is minus the sum of all nontrivial blocks of already-known
    inverse components fed into the original gauge.
    """
    gauges = _check_gauge_components(algebra, components)
    outer = {n: suspend(c) for n, c in gauges.items()}
    f = algebra.field
    inverse_susp: dict[int, MapCochain] = {1: MapCochain.identity(algebra)}
    for n in range(2, upto + 1):
        qdeg = 1 - n

        def evaluate(key: Key) -> Element:
            total = _rhs_value(algebra, outer, inverse_susp, key)
            return {k: f.neg(v) for k, v in total.items()}

        values, bound = _evaluate_levels(algebra, n, qdeg, degree_extent(algebra), evaluate)
        inverse_susp[n] = MapCochain(
            algebra, algebra, n, qdeg, values, sum_bound=bound, validate=False
        )
    return {n: unsuspend(c) for n, c in inverse_susp.items()}


def compose_morphisms(
    outer: Mapping[int, MapCochain],
    inner: Mapping[int, MapCochain],
    upto: int,
) -> dict[int, MapCochain]:
    """Components of the composite, up to the requested arity.

    The arity-n component feeds every block splitting of the inputs through
    the inner components and applies an outer component to the results; in
    the suspended convention no signs appear because all components are even.
    """
    if 1 not in outer or 1 not in inner:
        raise ValueError("morphism components need an arity-1 part")
    middle = inner[1].codomain
    final = outer[1].codomain
    domain = inner[1].domain
    for c in outer.values():
        if c.domain is not middle:
            raise ValueError("outer components do not start where the inner end")
    outer_susp = _suspended_components(outer)
    inner_susp = _suspended_components(inner)
    out: dict[int, MapCochain] = {}
    for n in range(1, upto + 1):
        qdeg = 1 - n

        def evaluate(key: Key) -> Element:
            return _rhs_value(final, outer_susp, inner_susp, key)

        values, bound = _evaluate_levels(domain, n, qdeg, degree_extent(final), evaluate)
        comp = MapCochain(domain, final, n, qdeg, values, sum_bound=bound, validate=False)
        if n == 1 or not comp.is_zero():
            out[n] = unsuspend(comp)
    return out


# --- moving structures along linear isomorphisms -----------------------------------

def _linear_inverse(iso: MapCochain) -> list[Element]:
    """Per-codomain-basis preimages of an invertible degree-0 linear map."""
    dom, cod = iso.domain, iso.codomain
    if (iso.arity, iso.qdeg) != (1, 0):
        raise ValueError("expected a linear map of bidegree (1, 0)")
    if dom.total_dim != cod.total_dim:
        raise ValueError("domain and codomain have different dimensions")
    f = dom.field
    n = dom.total_dim
    columns = [[iso.value_on((i,)).get(j, f.zero()) for j in range(n)] for i in range(n)]
    mat = Matrix.from_columns(f, columns, nrows=n)
    preimages: list[Element] = []
    for j in range(n):
        rhs = [f.one() if k == j else f.zero() for k in range(n)]
        sol = mat.solve(rhs)
        if sol is None:
            raise ValueError("linear map is not invertible")
        preimages.append(clean_element(f, dict(enumerate(sol))))
    return preimages


def _check_algebra_map(iso: MapCochain) -> None:
    dom, cod = iso.domain, iso.codomain
    if (iso.arity, iso.qdeg) != (1, 0):
        raise ValueError("expected a linear map of bidegree (1, 0)")
    if iso(dom.one()) != cod.one():
        raise ValueError("linear map does not preserve the unit")
    for i in range(dom.total_dim):
        for j in range(dom.total_dim):
            try:
                product = dom.basis_product(i, j)
            except WindowOverflow:
                continue
            lhs = iso(product)
            rhs = cod.mul(iso.value_on((i,)), iso.value_on((j,)))
            if lhs != rhs:
                raise ValueError(
                    f"linear map is not multiplicative on basis pair ({i}, {j})"
                )


def pushforward(S: AInfinityStructure, iso: MapCochain) -> AInfinityStructure:
    """Move a structure along an invertible algebra map of degree 0.

    The transported operation evaluates the original one on preimages and
    maps the result forward; since the map is even and degree-preserving no
    signs appear.  Knowledge bounds carry over: a key whose preimage
    evaluation leaves the source's known region ends the walk at that level.
    """
    if iso.domain is not S.algebra:
        raise ValueError("the map does not start at the structure's algebra")
    _check_algebra_map(iso)
    preimages = _linear_inverse(iso)
    cod = iso.codomain
    new_ops: dict[int, Cochain] = {}
    for n, c in S.ops.items():
        qdeg = 2 - n

        def evaluate(key: Key, _c: Cochain = c) -> Element:
            return iso(_c(*(preimages[i] for i in key)))

        values, bound = _evaluate_levels(cod, n, qdeg, degree_extent(cod), evaluate)
        new_ops[n] = Cochain(cod, n, qdeg, values, sum_bound=bound, validate=False)
    return AInfinityStructure(cod, new_ops)


# --- greedy gauge comparison --------------------------------------------------------

def _known_values(c: Cochain) -> dict[Key, Element]:
    """Value entries on keys the cochain actually vouches for.

    Sums and differences of cochains with different coverage keep raw
    entries beyond the merged ``sum_bound``; those are partial numbers that
    ``value_on`` already refuses to serve.  Comparisons must ignore them.
    """
    if c.sum_bound is None:
        return c.values
    degrees = c.algebra.degrees
    return {
        key: elem for key, elem in c.values.items()
        if sum(degrees[i] for i in key) <= c.sum_bound
    }


@dataclass
class GaugeSearchReport:
    """Outcome of the one-sided arity-by-arity gauge search."""

    verdict: str
    checked_upto: int
    gauge: AInfinityMorphism | None
    source_class: tuple[Scalar, ...]
    target_class: tuple[Scalar, ...]
    stalled_at: int | None
    stalled_class: tuple[Scalar, ...]


def greedy_gauge_equiv(
    S1: AInfinityStructure,
    S2: AInfinityStructure,
    upto: int,
    complex_: HochschildComplex | None = None,
) -> GaugeSearchReport:
    """Decide gauge equivalence one arity at a time, where possible.

    Both structures must live on the same algebra (they share the arity-2
    operation by construction).  The classes of the arity-3 operations are
    compared first: they are gauge invariants, so a mismatch certifies the
    verdict ``"distinct"``.  Matching classes start a greedy search: at each
    arity the difference of operations is reduced, a vanishing class yields
    the correcting lower-arity component, and the search moves on.  A
    nonzero class at a later arity only means this particular chain of
    choices stalls -- the correcting component was only ever determined up
    to a cocycle, and another representative might continue further -- so
    the verdict is then the honest ``"unknown"``, never ``"distinct"``.
    An ``"equivalent"`` verdict always carries the recovered gauge,
    re-verified against the morphism equations.

    On a windowed algebra, transported operations come with bounded
    coverage, so every comparison here happens on the keys both sides
    actually know (the same region class reduction sees); the verdict
    then holds as far as the window can tell, like every other check.
    """
    if S1.algebra is not S2.algebra:
        raise ValueError("gauge comparison needs two structures on one algebra")
    a = S1.algebra
    if complex_ is None:
        complex_ = HochschildComplex(a)
    for S in (S1, S2):
        defect = mc_defect(S, 4)
        if not defect.is_zero():
            raise ValueError(
                "the arity-3 operations must be cocycles (arity-4 relation)"
            )
    inv1 = tuple(complex_.reduce_to_class(S1.op(3)).coefficients)
    inv2 = tuple(complex_.reduce_to_class(S2.op(3)).coefficients)
    if inv1 != inv2:
        return GaugeSearchReport(
            verdict="distinct", checked_upto=upto, gauge=None,
            source_class=inv1, target_class=inv2,
            stalled_at=None, stalled_class=(),
        )
    gauge: dict[int, MapCochain] = {}
    for n in range(3, upto + 1):
        transported = gauge_transport(S1, gauge, upto=n)
        raw = S2.op(n).sub(transported.op(n))
        delta = Cochain(
            a, raw.arity, raw.qdeg, _known_values(raw),
            sum_bound=raw.sum_bound, validate=False,
        )
        if delta.is_zero():
            continue
        reduction = complex_.reduce_to_class(delta)
        if not reduction.is_zero:
            return GaugeSearchReport(
                verdict="unknown", checked_upto=upto, gauge=None,
                source_class=inv1, target_class=inv2,
                stalled_at=n, stalled_class=tuple(reduction.coefficients),
            )
        component = MapCochain.from_cochain(reduction.certificate.neg())
        gauge = {**gauge, n - 1: component}
        leftover = S2.op(n).sub(gauge_transport(S1, gauge, upto=n).op(n))
        if _known_values(leftover):
            raise RuntimeError(
                f"the correcting component failed to match arity {n}"
            )
    morphism = AInfinityMorphism(
        S1, S2, {1: MapCochain.identity(a), **gauge}
    )
    check = verify_morphism(morphism, upto)
    if not check.ok:
        raise RuntimeError(
            f"the recovered gauge fails the morphism equations at {check.failures}"
        )
    return GaugeSearchReport(
        verdict="equivalent", checked_upto=upto, gauge=morphism,
        source_class=inv1, target_class=inv2,
        stalled_at=None, stalled_class=(),
    )


# --- formality criterion -----------------------------------------------------------

@dataclass
class FormalityReport:
    """Outcome of the cohomological criterion for intrinsic formality."""

    intrinsically_formal: bool
    witnesses: tuple[tuple[int, int], ...]
    scanned: tuple[tuple[int, int], ...]
    horizon: int | None


def intrinsic_formality_check(
    algebra: GradedAlgebra,
    max_arity: int = 8,
    complex_: HochschildComplex | None = None,
) -> FormalityReport:
    """Decide the cohomological criterion for intrinsic formality, honestly.

    Every minimal structure on the algebra is gauge-trivial once the
    cohomology vanishes in all bidegrees ``(p + 2, -p)`` with ``p >= 1``.
    Degree bookkeeping can make that range provably finite: writing
    ``dmin``/``dmax`` for the extreme degrees of a basis of the non-unit
    part, candidate cochains at arity ``p + 2`` take values of degree at
    least ``(p + 2) dmin - p`` and at most ``(p + 2) dmax - p``, so with
    ``dmin >= 2`` the values eventually outgrow the representable range,
    with ``dmin == 1`` they all sit at degree 2 or above (enough whenever
    the range stops short of 2), and with ``dmax <= 0`` they eventually
    sink below it.  In each case the scan up to that horizon settles the
    criterion outright.  Otherwise a
    nonzero group found up to ``max_arity`` still refutes it, while an
    all-zero scan proves nothing about higher arities and raises
    :class:`~masseykit.errors.InconclusiveWindow`.
    """
    counts: dict[int, int] = {}
    for g in algebra.degrees:
        counts[g] = counts.get(g, 0) + 1
    if counts.get(0, 0) < 1 or algebra.element_degree(algebra.one()) != 0:
        raise ValueError("the criterion needs a unital algebra with a degree-0 unit")
    counts[0] -= 1
    nonunit = [g for g, k in counts.items() if k > 0]
    if not nonunit:
        return FormalityReport(
            intrinsically_formal=True, witnesses=(), scanned=(), horizon=1
        )
    dmin, dmax = min(nonunit), max(nonunit)
    ext_lo, ext_hi = degree_extent(algebra)
    horizons = []
    if dmin >= 2:
        horizons.append(max((ext_hi - 2 * dmin) // (dmin - 1) + 1, 1))
    elif dmin == 1 and ext_hi < 2:
        horizons.append(1)
    if dmax <= 0:
        horizons.append(max((ext_lo - 2 * dmax) // (dmax - 1) + 1, 1))
    horizon = min(horizons) if horizons else None
    limit = horizon - 1 if horizon is not None else max_arity - 2
    scanned: list[tuple[int, int]] = []
    if limit >= 1 and complex_ is None:
        complex_ = HochschildComplex(algebra)
    for p in range(1, limit + 1):
        site = (p + 2, -p)
        if complex_.hh(*site) > 0:
            return FormalityReport(
                intrinsically_formal=False, witnesses=(site,),
                scanned=tuple(scanned), horizon=horizon,
            )
        scanned.append(site)
    if horizon is not None:
        return FormalityReport(
            intrinsically_formal=True, witnesses=(),
            scanned=tuple(scanned), horizon=horizon,
        )
    raise InconclusiveWindow(
        f"all scanned bidegrees {scanned} vanish, but the degree bounds leave "
        f"arities above {max_arity} unchecked"
    )
