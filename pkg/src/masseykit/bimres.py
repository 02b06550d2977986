"""Minimal projective bimodule resolutions and the stable-isomorphism criterion.

A finite-dimensional algebra concentrated in degree 0, together with a
complete set of orthogonal primitive idempotents splitting its semisimple
quotient, determines a minimal projective resolution of the algebra as a
bimodule over itself.  This module computes that resolution stage by
stage — every projective is a sum of elementary bimodules built from
idempotent pairs, every cover is minimal in the radical sense, and every
syzygy is an explicit bimodule with its embedding — and uses it to decide
whether a cohomology class identifies a prescribed bimodule with a syzygy
in the stable sense.

The bridge between cohomology and the resolution is classical: cochains
with coefficients in a bimodule are the bimodule maps out of the bar
resolution, and a greedy degree-by-degree comparison map carries them onto
the minimal resolution.  Cohomologous cocycles induce maps that agree up
to maps factoring through a projective, so stable verdicts are well
defined; and because minimal syzygies of a Frobenius algebra are
projective-free, and the target is checked to be projective-free as well,
stable isomorphism is decided as plain bimodule isomorphism.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Mapping, Sequence

from masseykit.exactlin import (
    Field,
    Matrix,
    PrimeField,
    Rationals,
    Scalar,
    SparseSpan,
    kernel_from_columns,
    linear_entry_det,
    poly_nonzero_point,
    projective_vectors,
)
from masseykit.galg import (
    Bimodule,
    Element,
    FrobeniusCertificate,
    GradedAlgebra,
    TwistedLaurentAlgebra,
    clean_element,
    component_as_bimodule,
    is_d_sparse,
    is_frobenius,
)
from masseykit.hochschild import ClassReduction, VectorComplex

Key = tuple[int, ...]


# --- small vector plumbing ---------------------------------------------------------

def _sparse_vec(field: Field, vec: Sequence[Scalar]) -> dict[int, Scalar]:
    return {i: v for i, v in enumerate(vec) if not field.is_zero(v)}


def _dense_vec(field: Field, vec: Mapping[int, Scalar], n: int) -> list[Scalar]:
    out = [field.zero()] * n
    for i, v in vec.items():
        out[i] = v
    return out


def _combine_columns(
    field: Field, columns: Sequence[Mapping[int, Scalar]], coeffs: Mapping[int, Scalar]
) -> dict[int, Scalar]:
    """Sparse linear combination ``sum(coeffs[j] * columns[j])``."""
    out: dict[int, Scalar] = {}
    for j, c in coeffs.items():
        if field.is_zero(c):
            continue
        for k, v in columns[j].items():
            s = field.add(out.get(k, field.zero()), field.mul(c, v))
            if field.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
    return out


def _flatten(mat: Matrix) -> dict[int, Scalar]:
    """A matrix as a sparse row-major vector, for span arithmetic on maps."""
    f = mat.field
    out: dict[int, Scalar] = {}
    for r, row in enumerate(mat.rows):
        for c, v in enumerate(row):
            if not f.is_zero(v):
                out[r * mat.ncols + c] = v
    return out


# --- split basic input -------------------------------------------------------------

class SplitBasicAlgebraInput:
    """An algebra in degree 0 with a complete set of primitive idempotents.

    The idempotents are given as basis-expansion vectors; the constructor
    checks that they are orthogonal idempotents summing to the unit.
    Primitivity and completeness are what make the quotient by the radical
    split into one copy of the ground field per idempotent, and that is
    verified once the radical is known (:func:`jacobson_radical`).  An
    optional radical basis overrides the trace-form computation, which is
    what makes small positive characteristic usable.
    """

    __slots__ = ("algebra", "idempotents", "radical")

    def __init__(
        self,
        algebra: GradedAlgebra,
        idempotents: Sequence[Mapping[int, Scalar]],
        radical: Sequence[Mapping[int, Scalar]] | None = None,
    ):
        if set(algebra.degrees) != {0}:
            raise ValueError("the base algebra must be concentrated in degree 0")
        if algebra.window is not None:
            raise ValueError("the base algebra must be fully known, not windowed")
        f = algebra.field
        self.algebra = algebra
        self.idempotents = tuple(clean_element(f, e) for e in idempotents)
        self.radical = None if radical is None else tuple(clean_element(f, r) for r in radical)
        if not self.idempotents:
            raise ValueError("at least one idempotent is required")
        for t, e in enumerate(self.idempotents):
            if not e:
                raise ValueError(f"idempotent {t} is zero")
            if algebra.mul(e, e) != e:
                raise ValueError(f"idempotent {t} is not idempotent")
        for s, es in enumerate(self.idempotents):
            for t, et in enumerate(self.idempotents):
                if s != t and algebra.mul(es, et):
                    raise ValueError(f"idempotents {s} and {t} are not orthogonal")
        total = algebra.zero()
        for e in self.idempotents:
            total = algebra.add(total, e)
        if total != algebra.one():
            raise ValueError("the idempotents do not sum to the unit")

    def __repr__(self) -> str:
        return (
            f"SplitBasicAlgebraInput({self.algebra!r}, {len(self.idempotents)} idempotents)"
        )


def jacobson_radical(input_: SplitBasicAlgebraInput) -> tuple[Element, ...]:
    """Basis of the radical, verified nilpotent with a split semisimple quotient.

    Without a user-supplied radical the candidate is the kernel of the
    trace form of the left regular representation, which equals the
    radical in characteristic 0 or above the algebra's dimension.  Either
    way the result is verified to be a nilpotent two-sided ideal whose
    quotient is spanned by the idempotent classes; those checks are
    exactly what makes it the largest nilpotent ideal, so the output is
    correct independently of how the candidate was produced.
    """
    a = input_.algebra
    f = a.field
    m = a.total_dim
    if input_.radical is not None:
        candidate = list(input_.radical)
    else:
        if isinstance(f, PrimeField) and f.p <= m:
            raise ValueError(
                f"the characteristic {f.p} is too small for the trace-form radical "
                f"(need 0 or more than {m}); supply a radical basis"
            )
        gram = [
            [a.left_mul_matrix(a.basis_product(u, v)).trace() for u in range(m)]
            for v in range(m)
        ]
        _, kernel = Matrix(f, gram, ncols=m).rank_and_kernel()
        candidate = [clean_element(f, _sparse_vec(f, vec)) for vec in kernel]
    span = SparseSpan(f)
    basis = [r for r in candidate if span.insert(dict(r))]
    for r in basis:
        for b in range(m):
            x = a.basis_element(b)
            if not span.contains(a.mul(x, r)) or not span.contains(a.mul(r, x)):
                raise ValueError("the radical candidate is not a two-sided ideal")
    layer = list(basis)
    for _ in range(m + 1):
        if not layer:
            break
        step = SparseSpan(f)
        layer = [
            prod
            for x in layer
            for r in basis
            if (prod := a.mul(x, r)) and step.insert(dict(prod))
        ]
    else:
        raise ValueError("the radical candidate is not nilpotent")
    quotient = SparseSpan(f)
    for r in basis:
        quotient.insert(dict(r))
    for e in input_.idempotents:
        if not quotient.insert(dict(e)):
            raise ValueError("the quotient by the radical is not split over the given idempotents")
    if quotient.rank != m:
        raise ValueError("the quotient by the radical is not split over the given idempotents")
    return tuple(basis)


# --- bimodules from the algebra ------------------------------------------------------

def regular_bimodule(a: GradedAlgebra) -> Bimodule:
    """The algebra as a bimodule over itself, via its multiplication matrices."""
    left = tuple(a.left_mul_matrix(a.basis_element(i)) for i in range(a.total_dim))
    right = tuple(a.right_mul_matrix(a.basis_element(i)) for i in range(a.total_dim))
    return Bimodule(a, a.total_dim, tuple(a.names), left, right)


def sub_bimodule(
    ambient: Bimodule, columns: Sequence[Sequence[Scalar]]
) -> tuple[Bimodule, Matrix]:
    """A sub-bimodule spanned by independent columns, with its embedding.

    The columns must be linearly independent and closed under both
    actions; the returned bimodule carries the restricted actions in the
    columns' own coordinates.
    """
    f = ambient.base.field
    k = len(columns)
    embedding = Matrix.from_columns(f, columns, nrows=ambient.dimension)
    if embedding.rank() != k:
        raise ValueError("the spanning columns are not linearly independent")
    left = []
    right = []
    for actions, out in ((ambient.left_action, left), (ambient.right_action, right)):
        for mat in actions:
            cols = []
            for col in columns:
                coords = embedding.solve(mat.mul_vec(col))
                if coords is None:
                    raise ValueError("the spanning columns are not closed under the actions")
                cols.append(coords)
            out.append(Matrix.from_columns(f, cols, nrows=k))
    names = tuple(f"v{t}" for t in range(k))
    return Bimodule(ambient.base, k, names, tuple(left), tuple(right)), embedding


def _independent_columns(a: GradedAlgebra, mat: Matrix) -> list[Element]:
    """The first independent columns of a matrix, as sparse elements."""
    span = SparseSpan(a.field)
    out = []
    for j in range(mat.ncols):
        col = _sparse_vec(a.field, mat.column(j))
        if span.insert(dict(col)):
            out.append(col)
    return out


def _ideal_bases(
    input_: SplitBasicAlgebraInput,
) -> tuple[list[list[Element]], list[list[Element]]]:
    """Bases of the one-sided ideals cut out by each idempotent.

    Returns ``(left, right)`` where ``left[i]`` spans the left ideal of
    elements ending in the ``i``-th idempotent and ``right[i]`` spans the
    right ideal of elements starting with it.
    """
    a = input_.algebra
    left = [_independent_columns(a, a.right_mul_matrix(e)) for e in input_.idempotents]
    right = [_independent_columns(a, a.left_mul_matrix(e)) for e in input_.idempotents]
    return left, right


# --- elementary projectives and their sums ------------------------------------------

@dataclass
class ProjectiveBimodule:
    """A direct sum of elementary projective bimodules, realized explicitly.

    Each summand is an idempotent pair ``(i, j)`` standing for the tensor
    product of the left ideal at ``i`` with the right ideal at ``j``;
    repetition encodes multiplicity.  ``generators`` are the coordinates
    of each summand's canonical generator (the idempotent pair itself),
    and ``factors`` records, for every basis position, its summand and the
    two algebra elements whose tensor it is — which is what lets a map be
    extended from generator images by the two actions.
    """

    summands: tuple[tuple[int, int], ...]
    bimodule: Bimodule
    generators: tuple[dict[int, Scalar], ...]
    factors: tuple[tuple[int, Element, Element], ...]

    @property
    def dimension(self) -> int:
        return self.bimodule.dimension

    def multiplicities(self) -> dict[tuple[int, int], int]:
        """Multiplicity of each idempotent pair among the summands."""
        out: dict[tuple[int, int], int] = {}
        for pair in self.summands:
            out[pair] = out.get(pair, 0) + 1
        return out


def projective_bimodule(
    input_: SplitBasicAlgebraInput, summands: Sequence[tuple[int, int]]
) -> ProjectiveBimodule:
    """Realize a sum of elementary projectives with explicit action matrices."""
    a = input_.algebra
    f = a.field
    m = a.total_dim
    left_bases, right_bases = _ideal_bases(input_)
    left_solvers = []
    for basis in left_bases:
        span = SparseSpan(f, track=True)
        for t, u in enumerate(basis):
            span.insert(dict(u), tag=t)
        left_solvers.append(span)
    right_solvers = []
    for basis in right_bases:
        span = SparseSpan(f, track=True)
        for t, v in enumerate(basis):
            span.insert(dict(v), tag=t)
        right_solvers.append(span)

    positions: list[tuple[int, int, int]] = []
    offsets = []
    for s, (i, j) in enumerate(summands):
        offsets.append(len(positions))
        for ai in range(len(left_bases[i])):
            for bj in range(len(right_bases[j])):
                positions.append((s, ai, bj))
    dim = len(positions)
    names = tuple(f"{s}:{ai}x{bj}" for s, ai, bj in positions)
    factors = tuple(
        (s, left_bases[summands[s][0]][ai], right_bases[summands[s][1]][bj])
        for s, ai, bj in positions
    )

    def locate(s: int, ai: int, bj: int) -> int:
        return offsets[s] + ai * len(right_bases[summands[s][1]]) + bj

    left_action = []
    right_action = []
    for b in range(m):
        x = a.basis_element(b)
        left_cols = []
        right_cols = []
        for s, ai, bj in positions:
            i, j = summands[s]
            col: dict[int, Scalar] = {}
            coords = left_solvers[i].solve(a.mul(x, left_bases[i][ai]))
            if coords is None:
                raise AssertionError("a left ideal is not closed under left multiplication")
            for t, c in coords.items():
                if not f.is_zero(c):
                    col[locate(s, t, bj)] = c
            left_cols.append(_dense_vec(f, col, dim))
            col = {}
            coords = right_solvers[j].solve(a.mul(right_bases[j][bj], x))
            if coords is None:
                raise AssertionError("a right ideal is not closed under right multiplication")
            for t, c in coords.items():
                if not f.is_zero(c):
                    col[locate(s, ai, t)] = c
            right_cols.append(_dense_vec(f, col, dim))
        left_action.append(Matrix.from_columns(f, left_cols, nrows=dim))
        right_action.append(Matrix.from_columns(f, right_cols, nrows=dim))

    generators = []
    for s, (i, j) in enumerate(summands):
        gi = left_solvers[i].solve(dict(input_.idempotents[i]))
        gj = right_solvers[j].solve(dict(input_.idempotents[j]))
        if gi is None or gj is None:
            raise AssertionError("an idempotent does not lie in its own ideal")
        gen: dict[int, Scalar] = {}
        for ti, ci in gi.items():
            for tj, cj in gj.items():
                c = f.mul(ci, cj)
                if not f.is_zero(c):
                    gen[locate(s, ti, tj)] = c
        generators.append(gen)

    bim = Bimodule(a, dim, names, tuple(left_action), tuple(right_action))
    return ProjectiveBimodule(tuple(summands), bim, tuple(generators), factors)


def _extend_generator_images(
    P: ProjectiveBimodule, M: Bimodule, images: Sequence[Sequence[Scalar]]
) -> list[list[Scalar]]:
    """Columns of the bimodule map sending each summand generator to its image."""
    cols = []
    for s, u, v in P.factors:
        w = M.action_of(v, "right").mul_vec(images[s])
        cols.append(M.action_of(u, "left").mul_vec(w))
    return cols


def _corner_basis(M: Bimodule, ei: Element, ej: Element) -> list[list[Scalar]]:
    """Basis of the subspace cut out by an idempotent pair acting on both sides."""
    f = M.base.field
    projector = M.action_of(ei, "left").mul(M.action_of(ej, "right"))
    span = SparseSpan(f)
    out = []
    for j in range(M.dimension):
        col = projector.column(j)
        if span.insert(_sparse_vec(f, col)):
            out.append(col)
    return out


def hom_space(
    input_: SplitBasicAlgebraInput, P: ProjectiveBimodule, M: Bimodule
) -> list[Matrix]:
    """Basis of the bimodule maps from a projective sum into any bimodule.

    A map out of an elementary projective is freely determined by the
    image of its generator, which may be anything in the matching
    idempotent corner of the target; the basis enumerates summands and
    corner basis vectors.
    """
    f = input_.algebra.field
    out = []
    zero = [f.zero()] * M.dimension
    for s, (i, j) in enumerate(P.summands):
        for y in _corner_basis(M, input_.idempotents[i], input_.idempotents[j]):
            images: list[Sequence[Scalar]] = [zero] * len(P.summands)
            images[s] = y
            cols = _extend_generator_images(P, M, images)
            out.append(Matrix.from_columns(f, cols, nrows=M.dimension))
    return out


def _hom_basis(M: Bimodule, N: Bimodule) -> list[Matrix]:
    """Basis of all bimodule maps between two arbitrary bimodules.

    Solves the commutation constraints with both actions entrywise; this
    is the general (non-projective) counterpart of :func:`hom_space`.
    """
    f = M.base.field
    m, n = M.dimension, N.dimension
    r = M.base.total_dim
    columns = []
    for row in range(n):
        for colm in range(m):
            constraint: dict[int, Scalar] = {}
            for i in range(r):
                for side in range(2):
                    acts_m = M.left_action[i] if side == 0 else M.right_action[i]
                    acts_n = N.left_action[i] if side == 0 else N.right_action[i]
                    base = ((i * 2) + side) * n * m
                    for c2 in range(m):
                        v = acts_m.rows[colm][c2]
                        if not f.is_zero(v):
                            pos = base + row * m + c2
                            s = f.add(constraint.get(pos, f.zero()), v)
                            if f.is_zero(s):
                                constraint.pop(pos, None)
                            else:
                                constraint[pos] = s
                    for r2 in range(n):
                        v = acts_n.rows[r2][row]
                        if not f.is_zero(v):
                            pos = base + r2 * m + colm
                            s = f.sub(constraint.get(pos, f.zero()), v)
                            if f.is_zero(s):
                                constraint.pop(pos, None)
                            else:
                                constraint[pos] = s
            columns.append(constraint)
    basis = []
    for vec in kernel_from_columns(f, columns):
        rows = [[f.zero()] * m for _ in range(n)]
        for pos, v in vec.items():
            rows[pos // m][pos % m] = v
        basis.append(Matrix(f, rows, ncols=m))
    return basis


# --- the minimal resolution ----------------------------------------------------------

@dataclass
class ResolutionStage:
    """One stage of the minimal resolution of the diagonal bimodule.

    ``syzygy`` is the module this stage covers (the algebra itself at
    stage 0), embedded into the previous stage's projective by
    ``embedding`` (the identity at stage 0).  ``map_to_previous`` is the
    cover followed by the embedding, so consecutive stages compose to
    zero and each kernel is the next syzygy.
    """

    index: int
    projective: ProjectiveBimodule
    map_to_previous: Matrix
    syzygy: Bimodule
    embedding: Matrix


def _cover(
    input_: SplitBasicAlgebraInput,
    rad: Sequence[Element],
    ambient: Bimodule,
    columns: Sequence[Sequence[Scalar]],
) -> tuple[ProjectiveBimodule, list[list[Scalar]], list[dict[int, Scalar]]]:
    """Minimal projective cover of the span of ``columns`` inside ``ambient``.

    Returns the covering projective, the cover's columns in ambient
    coordinates, and its kernel in the projective's own coordinates.
    Generators are chosen greedily from the idempotent corners modulo the
    radical's action, which is exactly the minimality criterion.
    """
    a = input_.algebra
    f = a.field
    span = SparseSpan(f)
    for r in rad:
        for side in ("left", "right"):
            mat = ambient.action_of(r, side)
            for col in columns:
                span.insert(_sparse_vec(f, mat.mul_vec(col)))
    generators: list[tuple[tuple[int, int], list[Scalar]]] = []
    for i, ei in enumerate(input_.idempotents):
        left = ambient.action_of(ei, "left")
        for j, ej in enumerate(input_.idempotents):
            corner = left.mul(ambient.action_of(ej, "right"))
            for col in columns:
                candidate = corner.mul_vec(col)
                if span.insert(_sparse_vec(f, candidate)):
                    generators.append(((i, j), candidate))
    for col in columns:
        if not span.contains(_sparse_vec(f, col)):
            raise AssertionError("the corner generators do not span the module")
    P = projective_bimodule(input_, tuple(pair for pair, _ in generators))
    images = [vec for _, vec in generators]
    cols = _extend_generator_images(P, ambient, images) if generators else []
    cover_rank = SparseSpan(f)
    for col in cols:
        cover_rank.insert(_sparse_vec(f, col))
    if cover_rank.rank != len(columns):
        raise AssertionError("the projective cover does not surject onto the module")
    kernel = kernel_from_columns(f, [_sparse_vec(f, col) for col in cols])
    if kernel:
        radical_part = SparseSpan(f)
        for r in rad:
            for side in ("left", "right"):
                mat = P.bimodule.action_of(r, side)
                for t in range(P.dimension):
                    radical_part.insert(_sparse_vec(f, mat.column(t)))
        for vec in kernel:
            if not radical_part.contains(dict(vec)):
                raise AssertionError("the cover is not minimal: its kernel leaves the radical")
    return P, cols, kernel


def minimal_syzygies(input_: SplitBasicAlgebraInput, n_max: int) -> list[ResolutionStage]:
    """The minimal resolution of the diagonal bimodule up to stage ``n_max``.

    Stage ``n`` covers the ``n``-th syzygy: the algebra itself at stage 0,
    then each successive kernel, embedded into the previous projective.
    Both defining invariants — consecutive maps compose to zero and every
    kernel lies inside the radical of its projective — are asserted as
    the stages are built.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rad = jacobson_radical(input_)
    a = input_.algebra
    f = a.field
    diagonal = regular_bimodule(a)
    stages: list[ResolutionStage] = []
    ambient = diagonal
    syzygy = diagonal
    embedding = Matrix.identity(f, a.total_dim)
    for n in range(n_max + 1):
        columns = [embedding.column(t) for t in range(embedding.ncols)]
        P, cols, kernel = _cover(input_, rad, ambient, columns)
        d = Matrix.from_columns(f, cols, nrows=ambient.dimension)
        if stages:
            previous = stages[-1].map_to_previous
            if previous.mul(d) != Matrix.zeros(f, previous.nrows, d.ncols):
                raise AssertionError("consecutive resolution maps do not compose to zero")
        stages.append(ResolutionStage(n, P, d, syzygy, embedding))
        dense_kernel = [_dense_vec(f, vec, P.dimension) for vec in kernel]
        syzygy, embedding = sub_bimodule(P.bimodule, dense_kernel)
        ambient = P.bimodule
    return stages


# --- cochains with bimodule coefficients ---------------------------------------------

class CoefficientCochain:
    """A multilinear map from basis tuples of the algebra into a bimodule.

    ``values`` maps basis-index tuples to coefficient vectors over the
    module's basis; missing keys mean zero.  These cochains present the
    self-extensions of the diagonal bimodule with the given coefficients.
    """

    __slots__ = ("base", "module", "arity", "values")

    def __init__(
        self,
        base: GradedAlgebra,
        module: Bimodule,
        arity: int,
        values: Mapping[Key, Mapping[int, Scalar]] | None = None,
        *,
        validate: bool = True,
    ):
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        self.base = base
        self.module = module
        self.arity = arity
        f = base.field
        cleaned: dict[Key, dict[int, Scalar]] = {}
        for key, vec in (values or {}).items():
            entry = {t: c for t, c in vec.items() if not f.is_zero(c)}
            if entry:
                cleaned[tuple(key)] = entry
        self.values = cleaned
        if validate:
            self._validate()

    def _validate(self) -> None:
        for key, vec in self.values.items():
            if len(key) != self.arity:
                raise ValueError(f"key {key} does not have arity {self.arity}")
            for i in key:
                self.base._check_index(i)
            for t in vec:
                if not 0 <= t < self.module.dimension:
                    raise ValueError(f"coefficient position {t} is out of range")

    def value_on(self, key: Key) -> dict[int, Scalar]:
        return dict(self.values.get(tuple(key), {}))

    def is_zero(self) -> bool:
        return not self.values

    def support(self) -> list[Key]:
        return sorted(self.values)

    def _compatible(self, other: "CoefficientCochain") -> None:
        if self.base is not other.base or self.module is not other.module:
            raise ValueError("cochains live over different coefficients")
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def add(self, other: "CoefficientCochain") -> "CoefficientCochain":
        self._compatible(other)
        f = self.base.field
        merged = {key: dict(vec) for key, vec in self.values.items()}
        for key, vec in other.values.items():
            target = merged.setdefault(key, {})
            for t, c in vec.items():
                target[t] = f.add(target.get(t, f.zero()), c)
        return CoefficientCochain(self.base, self.module, self.arity, merged, validate=False)

    def scale(self, coeff: Scalar) -> "CoefficientCochain":
        f = self.base.field
        values = {
            key: {t: f.mul(coeff, c) for t, c in vec.items()}
            for key, vec in self.values.items()
        }
        return CoefficientCochain(self.base, self.module, self.arity, values, validate=False)

    def sub(self, other: "CoefficientCochain") -> "CoefficientCochain":
        return self.add(other.scale(self.base.field.neg(self.base.field.one())))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CoefficientCochain)
            and self.base is other.base
            and self.module is other.module
            and self.arity == other.arity
            and self.values == other.values
        )

    def __repr__(self) -> str:
        return f"CoefficientCochain(arity={self.arity}, support={len(self.values)})"


def coefficient_differential(c: CoefficientCochain) -> CoefficientCochain:
    """The Hochschild differential for bimodule coefficients.

    On a tuple of one more input, the value is the first input acting on
    the left, minus-alternating contractions of neighbours, and the last
    input acting on the right with the final alternating sign.  All
    inputs live in degree 0, so no suspension signs appear.
    """
    a = c.base
    M = c.module
    f = a.field
    m = a.total_dim
    p = c.arity
    out: dict[Key, dict[int, Scalar]] = {}

    def accumulate(key: Key, vec: Sequence[Scalar], sign: int) -> None:
        target = out.setdefault(key, {})
        for t, v in enumerate(vec):
            if f.is_zero(v):
                continue
            v = f.neg(v) if sign else v
            s = f.add(target.get(t, f.zero()), v)
            if f.is_zero(s):
                target.pop(t, None)
            else:
                target[t] = s

    for key, vec in c.values.items():
        dense = _dense_vec(f, vec, M.dimension)
        for x0 in range(m):
            acted = M.left_action[x0].mul_vec(dense)
            accumulate((x0,) + key, acted, 0)
        for xl in range(m):
            acted = M.right_action[xl].mul_vec(dense)
            accumulate(key + (xl,), acted, (p + 1) % 2)
    for key in cartesian(range(m), repeat=p + 1):
        for l in range(p):
            prod = a.basis_product(key[l], key[l + 1])
            if not prod:
                continue
            contribution: dict[int, Scalar] = {}
            for k, ck in prod.items():
                inner = c.value_on(key[:l] + (k,) + key[l + 2 :])
                for t, v in inner.items():
                    s = f.add(contribution.get(t, f.zero()), f.mul(ck, v))
                    if f.is_zero(s):
                        contribution.pop(t, None)
                    else:
                        contribution[t] = s
            if contribution:
                accumulate(key, _dense_vec(f, contribution, M.dimension), (l + 1) % 2)
    return CoefficientCochain(c.base, M, p + 1, out, validate=False)


class CoefficientComplex:
    """The cochain complex of an algebra with coefficients in a bimodule.

    Coordinates at arity ``p`` are basis tuples paired with module basis
    positions.  Cohomology here is the space of self-extensions of the
    diagonal bimodule with the given coefficients, which is what the
    syzygy machinery consumes.
    """

    def __init__(self, module: Bimodule):
        self.module = module
        self.base = module.base
        self.field = module.base.field
        self._core = VectorComplex(self.field, self._site_coords, self._site_columns)
        self._indices: dict[int, dict[tuple[Key, int], int]] = {}

    def _site_coords(self, p: int, q: int) -> list[tuple[Key, int]]:
        return [
            (key, t)
            for key in cartesian(range(self.base.total_dim), repeat=p)
            for t in range(self.module.dimension)
        ]

    def _index(self, p: int) -> dict[tuple[Key, int], int]:
        if p not in self._indices:
            self._indices[p] = {cid: n for n, cid in enumerate(self._core.coords(p, 0))}
        return self._indices[p]

    def _site_columns(self, p: int, q: int) -> list[dict[int, Scalar]]:
        one = self.field.one()
        columns = []
        for key, t in self._core.coords(p, 0):
            basis_cochain = CoefficientCochain(
                self.base, self.module, p, {key: {t: one}}, validate=False
            )
            columns.append(self.cochain_vector(coefficient_differential(basis_cochain)))
        return columns

    def cochain_vector(self, c: CoefficientCochain) -> dict[int, Scalar]:
        index = self._index(c.arity)
        vec: dict[int, Scalar] = {}
        for key, coeffs in c.values.items():
            for t, v in coeffs.items():
                vec[index[(key, t)]] = v
        return vec

    def vector_cochain(self, vec: Mapping[int, Scalar], p: int) -> CoefficientCochain:
        coords = self._core.coords(p, 0)
        values: dict[Key, dict[int, Scalar]] = {}
        for pos, coeff in vec.items():
            if self.field.is_zero(coeff):
                continue
            key, t = coords[pos]
            values.setdefault(key, {})[t] = coeff
        return CoefficientCochain(self.base, self.module, p, values, validate=False)

    def dim(self, p: int) -> int:
        return self._core.dim(p, 0)

    def ext(self, p: int) -> int:
        """Dimension of the degree-``p`` self-extension space."""
        return self._core.hh(p, 0)

    def class_reps(self, p: int) -> list[CoefficientCochain]:
        return [self.vector_cochain(vec, p) for vec in self._core.class_rep_vectors(p, 0)]

    def is_cocycle(self, c: CoefficientCochain) -> bool:
        return coefficient_differential(c).is_zero()

    def reduce_to_class(self, c: CoefficientCochain) -> ClassReduction:
        coeffs, cert_vec = self._core.reduce(c.arity, 0, self.cochain_vector(c))
        certificate = None
        if cert_vec is not None:
            certificate = self.vector_cochain(cert_vec, c.arity - 1)
        return ClassReduction(coefficients=tuple(coeffs), certificate=certificate)

    def zero_cochain(self, p: int) -> CoefficientCochain:
        return CoefficientCochain(self.base, self.module, p, {}, validate=False)

    def random_cochain(self, rng: random.Random, p: int) -> CoefficientCochain:
        f = self.field
        values = {
            key: {t: f.random(rng) for t in range(self.module.dimension)}
            for key in cartesian(range(self.base.total_dim), repeat=p)
        }
        return CoefficientCochain(self.base, self.module, p, values)

    def __repr__(self) -> str:
        return f"CoefficientComplex({self.module!r})"


# --- the bar resolution and the comparison lift --------------------------------------

def _bar_encode(m: int, t: Key) -> int:
    idx = 0
    for k in t:
        idx = idx * m + k
    return idx


def _bar_decode(m: int, idx: int, length: int) -> Key:
    out = []
    for _ in range(length):
        idx, k = divmod(idx, m)
        out.append(k)
    return tuple(reversed(out))


def _bar_differential(a: GradedAlgebra, n: int, vec: Mapping[int, Scalar]) -> dict[int, Scalar]:
    """One bar-resolution differential, on tuples of length ``n + 2``."""
    f = a.field
    m = a.total_dim
    out: dict[int, Scalar] = {}
    for idx, coeff in vec.items():
        t = _bar_decode(m, idx, n + 2)
        for l in range(n + 1):
            prod = a.basis_product(t[l], t[l + 1])
            negative = l % 2 == 1
            for k, ck in prod.items():
                c = f.mul(coeff, ck)
                if negative:
                    c = f.neg(c)
                pos = _bar_encode(m, t[:l] + (k,) + t[l + 2 :])
                s = f.add(out.get(pos, f.zero()), c)
                if f.is_zero(s):
                    out.pop(pos, None)
                else:
                    out[pos] = s
    return out


def _bar_act(
    a: GradedAlgebra, n: int, x: Element, vec: Mapping[int, Scalar], side: str
) -> dict[int, Scalar]:
    """Act by an algebra element on the outer slot of a bar-resolution vector."""
    f = a.field
    m = a.total_dim
    out: dict[int, Scalar] = {}
    for idx, coeff in vec.items():
        t = _bar_decode(m, idx, n + 2)
        if side == "left":
            prod = a.mul(x, a.basis_element(t[0]))
            rest = t[1:]
        else:
            prod = a.mul(a.basis_element(t[-1]), x)
            rest = t[:-1]
        for k, ck in prod.items():
            tup = (k,) + rest if side == "left" else rest + (k,)
            pos = _bar_encode(m, tup)
            s = f.add(out.get(pos, f.zero()), f.mul(coeff, ck))
            if f.is_zero(s):
                out.pop(pos, None)
            else:
                out[pos] = s
    return out


def _bar_corner_columns(
    a: GradedAlgebra,
    n: int,
    first: Sequence[Element],
    last: Sequence[Element],
) -> list[dict[int, Scalar]]:
    """Basis of an idempotent corner of a bar-resolution term.

    ``first`` spans the right ideal allowed in the outer left slot and
    ``last`` the left ideal allowed in the outer right slot; the middle
    slots run over all basis tuples.
    """
    f = a.field
    m = a.total_dim
    out = []
    for u in first:
        for mid in cartesian(range(m), repeat=n):
            for v in last:
                col: dict[int, Scalar] = {}
                for k0, c0 in u.items():
                    for kl, cl in v.items():
                        col[_bar_encode(m, (k0,) + mid + (kl,))] = f.mul(c0, cl)
                out.append(col)
    return out


@dataclass
class SyzygyClassMap:
    """A bimodule map out of a syzygy induced by a cohomology class.

    ``matrix`` maps the syzygy's coordinates to the target's.  The
    syzygy's ``embedding`` into the covering projective ``ambient`` is
    carried along because stable statements about the map quantify over
    maps factoring through that projective.
    """

    source: Bimodule
    target: Bimodule
    matrix: Matrix
    embedding: Matrix
    ambient: ProjectiveBimodule


def class_to_syzygy_map(
    eta: CoefficientCochain,
    input_: SplitBasicAlgebraInput,
    stages: Sequence[ResolutionStage],
    *,
    lift_variant: int = 0,
) -> SyzygyClassMap:
    """The bimodule map a cocycle induces on the syzygy of its arity.

    The cocycle is read as a map out of the bar resolution, a comparison
    map from the minimal resolution is lifted greedily stage by stage,
    and the composite factors through the syzygy exactly because the
    input is a cocycle.  Any comparison lift gives the same map up to
    maps factoring through the covering projective; ``lift_variant``
    selects a different valid lift when the lifting equations have more
    than one solution, which is useful for testing that independence.
    """
    a = input_.algebra
    f = a.field
    M = eta.module
    if eta.base is not a or M.base is not a:
        raise ValueError("the class must be a cochain over the resolution's base algebra")
    n = eta.arity
    if n < 1:
        raise ValueError("the class must have arity at least 1")
    if len(stages) <= n:
        raise ValueError(f"the resolution must be computed to stage {n}, got {len(stages) - 1}")
    if not coefficient_differential(eta).is_zero():
        raise ValueError("the class is not a cocycle")
    left_bases, right_bases = _ideal_bases(input_)

    previous: list[dict[int, Scalar]] | None = None  # comparison columns at stage t - 1
    for t in range(n + 1):
        stage = stages[t]
        d = stage.map_to_previous
        images: list[dict[int, Scalar]] = []
        for s, (i, j) in enumerate(stage.projective.summands):
            target_dense = d.mul_vec(_dense_vec(f, stage.projective.generators[s], d.ncols))
            if previous is None:
                target = _sparse_vec(f, target_dense)
            else:
                target = _combine_columns(f, previous, _sparse_vec(f, target_dense))
            corner = _bar_corner_columns(a, t, right_bases[i], left_bases[j])
            boundary = [_bar_differential(a, t, col) for col in corner]
            span = SparseSpan(f, track=True)
            for local, col in enumerate(boundary):
                span.insert(dict(col), tag=local)
            combo = span.solve(target)
            if combo is None:
                raise AssertionError("the comparison lifting equation has no corner solution")
            y = _combine_columns(f, corner, combo)
            if lift_variant:
                slack = kernel_from_columns(f, boundary)
                if slack:
                    y = _combine_columns(f, [y] + corner, {0: f.one(), **{
                        c + 1: v for c, v in slack[0].items()
                    }})
            images.append(y)
        columns = []
        for s, u, v in stage.projective.factors:
            columns.append(_bar_act(a, t, u, _bar_act(a, t, v, images[s], "right"), "left"))
        previous = columns

    def value_in_target(vec: Mapping[int, Scalar]) -> list[Scalar]:
        acc = [f.zero()] * M.dimension
        m = a.total_dim
        for idx, coeff in vec.items():
            tup = _bar_decode(m, idx, n + 2)
            inner = eta.value_on(tup[1:-1])
            if not inner:
                continue
            dense = M.right_action[tup[-1]].mul_vec(_dense_vec(f, inner, M.dimension))
            dense = M.left_action[tup[0]].mul_vec(dense)
            for t2, v in enumerate(dense):
                acc[t2] = f.add(acc[t2], f.mul(coeff, v))
        return acc

    assert previous is not None
    induced = [value_in_target(col) for col in previous]
    d_top = stages[n].map_to_previous
    sparse_cols = [_sparse_vec(f, d_top.column(j)) for j in range(d_top.ncols)]
    for vec in kernel_from_columns(f, sparse_cols):
        total = [f.zero()] * M.dimension
        for j, c in vec.items():
            for t2 in range(M.dimension):
                total[t2] = f.add(total[t2], f.mul(c, induced[j][t2]))
        if any(not f.is_zero(v) for v in total):
            raise AssertionError("a cocycle must vanish on the kernel of the cover")
    omega_cols = []
    embedding = stages[n].embedding
    for j in range(embedding.ncols):
        preimage = d_top.solve(embedding.column(j))
        if preimage is None:
            raise AssertionError("a syzygy vector is not in the image of its cover")
        col = [f.zero()] * M.dimension
        for t2, c in enumerate(preimage):
            if f.is_zero(c):
                continue
            for t3 in range(M.dimension):
                col[t3] = f.add(col[t3], f.mul(c, induced[t2][t3]))
        omega_cols.append(col)
    matrix = Matrix.from_columns(f, omega_cols, nrows=M.dimension)
    return SyzygyClassMap(stages[n].syzygy, M, matrix, embedding, stages[n - 1].projective)


def stably_zero(input_: SplitBasicAlgebraInput, scm: SyzygyClassMap) -> bool:
    """Whether a syzygy map factors through the covering projective.

    Maps factoring through a projective are exactly the stably trivial
    ones, so this decides whether the map is zero in the stable sense.
    """
    f = input_.algebra.field
    target = _flatten(scm.matrix)
    span = SparseSpan(f, track=True)
    for t, candidate in enumerate(hom_space(input_, scm.ambient, scm.target)):
        span.insert(_flatten(candidate.mul(scm.embedding)), tag=t)
    return span.solve(target) is not None


# --- isomorphism search ---------------------------------------------------------------

@dataclass
class IsoCertificate:
    """Outcome of a bimodule isomorphism search.

    ``exists`` is the verdict and ``map`` an explicit invertible bimodule
    map when one was found.  ``method`` names the deciding stage and
    ``detail`` says why the verdict is sound.
    """

    exists: bool
    map: Matrix | None
    method: str
    detail: str

    def __bool__(self) -> bool:
        return self.exists


def bimodule_iso_exists(M: Bimodule, N: Bimodule) -> IsoCertificate:
    """Search for an invertible bimodule map, with sound verdicts both ways.

    Dimension mismatch is an immediate no.  Otherwise the search runs
    over the space of bimodule maps: an identity shortcut, then seeded
    pseudorandom combinations, then a certificate pass — the symbolic
    determinant of the generic combination (for spaces of dimension at
    most 4), or exhaustive enumeration over a small prime field.  A
    negative answer is only ever returned with such a certificate.
    """
    if M.base is not N.base:
        raise ValueError("the bimodules live over different base algebras")
    f = M.base.field
    if M.dimension != N.dimension:
        return IsoCertificate(
            False, None, "dimension",
            f"the dimensions differ: {M.dimension} vs {N.dimension}",
        )
    n = M.dimension
    if n == 0:
        return IsoCertificate(
            True, Matrix.zeros(f, 0, 0), "identity", "both modules are zero, and the empty map is invertible"
        )
    if M.left_action == N.left_action and M.right_action == N.right_action:
        return IsoCertificate(
            True, Matrix.identity(f, n), "identity", "the modules carry identical actions"
        )
    basis = _hom_basis(M, N)
    if not basis:
        return IsoCertificate(
            False, None, "symbolic", "the space of bimodule maps is zero"
        )
    h = len(basis)

    def combination(coeffs: Mapping[int, Scalar]) -> Matrix:
        rows = [[f.zero()] * n for _ in range(n)]
        for t, c in coeffs.items():
            if f.is_zero(c):
                continue
            for r in range(n):
                source = basis[t].rows[r]
                target = rows[r]
                for s in range(n):
                    target[s] = f.add(target[s], f.mul(c, source[s]))
        return Matrix(f, rows, ncols=n)

    rng = random.Random(0)
    for _ in range(100):
        coeffs = {t: f.random(rng) for t in range(h)}
        candidate = combination(coeffs)
        if candidate.rank() == n:
            return IsoCertificate(
                True, candidate, "random",
                "a seeded pseudorandom combination of bimodule maps is invertible",
            )
    if isinstance(f, PrimeField) and f.p**h <= 1_000_000:
        count = (f.p**h - 1) // (f.p - 1)
        for vec in projective_vectors(f, h):
            candidate = combination(vec)
            if candidate.rank() == n:
                return IsoCertificate(
                    True, candidate, "exhaustive",
                    "an exhaustive scan of the map space found an invertible combination",
                )
        return IsoCertificate(
            False, None, "exhaustive",
            f"all {count} combinations of bimodule maps up to scaling are singular",
        )
    if h > 4:
        raise ValueError(
            "cannot certify that no isomorphism exists: the space of bimodule maps "
            f"has dimension {h} > 4 and no random combination was invertible"
        )
    entries = [
        [{t: basis[t].rows[r][c] for t in range(h) if not f.is_zero(basis[t].rows[r][c])}
         for c in range(n)]
        for r in range(n)
    ]
    det = linear_entry_det(f, entries, h)
    if not det:
        return IsoCertificate(
            False, None, "symbolic",
            "the determinant of the generic combination vanishes identically, "
            "so no combination of bimodule maps is invertible",
        )
    if isinstance(f, PrimeField) and f.p <= n:
        raise ValueError(
            "cannot certify the isomorphism: the determinant of the generic "
            "combination is nonzero but the field is too small to extract a witness"
        )
    point = poly_nonzero_point(f, det, h)
    candidate = combination(point)
    if candidate.rank() != n:
        raise AssertionError("the extracted point does not avoid the determinant's zero set")
    return IsoCertificate(
        True, candidate, "symbolic",
        "the generic determinant is nonzero and was evaluated off its zero set",
    )


# --- the stable-isomorphism criterion -------------------------------------------------

_REDUCTION_NOTE = (
    "stable isomorphism was decided as plain bimodule isomorphism after checking "
    "that the syzygy and the target are projective-free; this reduction is a "
    "choice of this implementation"
)


def projective_free(input_: SplitBasicAlgebraInput, M: Bimodule) -> tuple[bool, str]:
    """Whether no elementary projective splits off the bimodule.

    An elementary projective is a summand exactly when the identity of
    its (local) endomorphism ring is a sum of composites through the
    module, and by bilinearity that is a linear condition: the generator
    must lie in the span of all basis composites.  The check is exact
    over any field.
    """
    if M.dimension == 0:
        return True, "the zero module has no projective summands"
    f = input_.algebra.field
    count = len(input_.idempotents)
    for i in range(count):
        for j in range(count):
            P = projective_bimodule(input_, ((i, j),))
            if P.dimension > M.dimension:
                continue
            corner = _corner_basis(M, input_.idempotents[i], input_.idempotents[j])
            if not corner:
                continue
            maps_back = _hom_basis(M, P.bimodule)
            composites = SparseSpan(f)
            for back in maps_back:
                for y in corner:
                    composites.insert(_sparse_vec(f, back.mul_vec(y)))
            generator = dict(P.generators[0])
            if composites.contains(generator):
                return False, f"the module splits off the projective at idempotent pair ({i}, {j})"
    return True, "no idempotent-pair projective splits off"


def _verify_invertible_degree_element(
    extension: TwistedLaurentAlgebra | GradedAlgebra, d: int
) -> None:
    """Check that the extension algebra has an invertible element of degree ``d``.

    A twisted Laurent extension always has one — a power of its generator
    — and the check verifies that directly.  A fully known graded algebra
    can never have one in positive degree (multiplication by it is
    nilpotent), and a windowed algebra cannot certify invertibility at
    all, so both are refused with an explanation.
    """
    if isinstance(extension, TwistedLaurentAlgebra):
        if extension.d != d:
            raise ValueError(
                f"no invertible degree-{d} element exists: the twisted Laurent "
                f"components sit in multiples of {extension.d}, leaving degree {d} empty"
            )
        candidate = extension.generator(-1)
        inverse = extension.generator(1)
        if (
            extension.mul(candidate, inverse) != extension.one()
            or extension.mul(inverse, candidate) != extension.one()
        ):
            raise AssertionError("a twisted Laurent generator power is not invertible")
        return
    if extension.window is not None:
        raise ValueError(
            f"cannot certify an invertible degree-{d} element in a windowed algebra; "
            "use a twisted Laurent extension"
        )
    raise ValueError(
        f"no invertible degree-{d} element exists: multiplication by a positive-degree "
        "element of a fully known finite-dimensional graded algebra is nilpotent"
    )


@dataclass
class DaicReport:
    """Verdict of the stable-isomorphism criterion, with its reasoning.

    ``holds`` is the verdict; ``method`` records whether the semisimple
    shortcut or the projective-free reduction decided it, and
    ``reduction_note`` flags the reduction as this implementation's
    choice whenever it was used.
    """

    holds: bool
    method: str
    detail: str
    frobenius: FrobeniusCertificate
    syzygy_dim: int
    target_dim: int
    map_rank: int | None
    reduction_note: str

    def __bool__(self) -> bool:
        return self.holds


def daic_criterion(
    input_: SplitBasicAlgebraInput,
    extension: TwistedLaurentAlgebra | GradedAlgebra,
    d: int,
    eta: CoefficientCochain,
) -> DaicReport:
    """Decide whether a class identifies the top syzygy with the extension's component.

    The base must be Frobenius and the extension sparse with an
    invertible element in the generator degree; the class must be a
    cocycle of arity ``d + 2`` with coefficients in the extension's
    degree ``-d`` component.  Over a semisimple base every bimodule is
    projective and the criterion holds trivially.  Otherwise the induced
    map on the syzygy decides it: both sides are projective-free, so the
    map is a stable isomorphism exactly when it is a plain isomorphism.
    """
    a = input_.algebra
    rad = jacobson_radical(input_)
    frob = is_frobenius(a)
    if not frob:
        raise ValueError(f"the base algebra is not Frobenius: {frob.detail}")
    if not is_d_sparse(extension, d):
        raise ValueError(f"the extension algebra is not {d}-sparse")
    _verify_invertible_degree_element(extension, d)
    if isinstance(extension, TwistedLaurentAlgebra):
        if extension.base is not a:
            raise ValueError("the extension algebra is not built over the base algebra")
    target = component_as_bimodule(extension, -d)
    if target.base is not a:
        raise ValueError("the extension algebra is not built over the base algebra")
    if eta.arity != d + 2:
        raise ValueError(f"the class has arity {eta.arity}, expected d + 2 = {d + 2}")
    if (
        eta.module.base is not a
        or eta.module.dimension != target.dimension
        or eta.module.left_action != target.left_action
        or eta.module.right_action != target.right_action
    ):
        raise ValueError(
            "the class's coefficients are not the degree-(-d) component of the extension"
        )
    if not coefficient_differential(eta).is_zero():
        raise ValueError("the class is not a cocycle")
    if not rad:
        stages = minimal_syzygies(input_, 1)
        if stages[1].syzygy.dimension != 0:
            raise AssertionError("a semisimple algebra must have vanishing first syzygy")
        return DaicReport(
            True, "semisimple",
            "the radical vanishes, so every bimodule is projective and every map is "
            "a stable isomorphism",
            frob, 0, target.dimension, None, _REDUCTION_NOTE,
        )
    free, free_detail = projective_free(input_, target)
    if not free:
        raise ValueError(f"the target component is not projective-free: {free_detail}")
    stages = minimal_syzygies(input_, d + 2)
    syzygy = stages[d + 2].syzygy
    syz_free, syz_detail = projective_free(input_, syzygy)
    if not syz_free:
        raise AssertionError(f"a Frobenius minimal syzygy must be projective-free: {syz_detail}")
    scm = class_to_syzygy_map(eta, input_, stages)
    rank = scm.matrix.rank()
    if syzygy.dimension != target.dimension:
        holds = False
        detail = (
            f"the syzygy has dimension {syzygy.dimension} but the target has dimension "
            f"{target.dimension}; projective-free modules of different dimensions are "
            "never stably isomorphic"
        )
    elif rank == target.dimension:
        holds = True
        detail = "the induced map on the syzygy is invertible, hence a stable isomorphism"
    else:
        holds = False
        detail = (
            f"the induced map has rank {rank} on modules of dimension {target.dimension}, "
            "so it is not invertible and therefore not a stable isomorphism"
        )
    return DaicReport(
        holds, "reduction", detail, frob,
        syzygy.dimension, target.dimension, rank, _REDUCTION_NOTE,
    )
