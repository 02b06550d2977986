"""Finite-dimensional graded algebras with exact structure constants.

An algebra is described by a basis of named homogeneous elements, a table of
structure constants, and a distinguished unit.  Elements are sparse dicts
mapping basis index to a nonzero scalar.  An algebra may carry a degree
*window* ``(lo, hi)``: only components with degrees inside the window are
known.  A product that would land above ``hi`` is unknown and raises
:class:`~masseykit.errors.WindowOverflow` instead of silently returning
zero.  Below the window there are two honest options, chosen per algebra:
``floor_vanishes=True`` promises that the full algebra is zero below ``lo``
(true for the nonnegatively graded truncations in the model zoo, where
``lo == 0``), so products below the floor are zero; ``floor_vanishes=False``
treats both edges as unknown and raises on either side.

Around the core class the module provides report-style validation, degree
shifts, degree-sparsity and Frobenius tests (the latter with a sound
certificate either way), the twisted Laurent extension of a degree-0
algebra by an automorphism, and bimodule views of single degree components.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from masseykit.errors import WindowOverflow
from masseykit.exactlin import (
    Field,
    Matrix,
    PrimeField,
    Rationals,
    Scalar,
    linear_entry_det,
    poly_nonzero_point,
    projective_vectors,
)

Element = dict[int, Scalar]


def clean_element(field: Field, elem: Mapping[int, Scalar]) -> Element:
    """Copy of ``elem`` with zero coefficients stripped."""
    return {i: c for i, c in elem.items() if not field.is_zero(c)}


class GradedAlgebra:
    """A graded algebra given by structure constants over an exact field."""

    __slots__ = (
        "field",
        "names",
        "degrees",
        "window",
        "floor_vanishes",
        "unit",
        "_products",
        "_by_degree",
        "name_index",
    )

    def __init__(
        self,
        field: Field,
        names: Sequence[str],
        degrees: Sequence[int],
        products: Mapping[tuple[int, int], Mapping[int, Scalar]],
        unit: Mapping[int, Scalar],
        window: tuple[int, int] | None = None,
        *,
        floor_vanishes: bool = True,
    ):
        if len(names) != len(degrees):
            raise ValueError("names and degrees must have the same length")
        if len(set(names)) != len(names):
            raise ValueError("basis names must be distinct")
        self.field = field
        self.names = list(names)
        self.degrees = list(degrees)
        self.window = window
        self.floor_vanishes = floor_vanishes
        if window is not None:
            lo, hi = window
            if lo > hi:
                raise ValueError(f"empty window {window}")
            out = [n for n, d in zip(self.names, self.degrees) if not lo <= d <= hi]
            if out:
                raise ValueError(f"basis elements outside window {window}: {out}")
        self._products: dict[tuple[int, int], Element] = {}
        for (i, j), value in products.items():
            self._check_index(i)
            self._check_index(j)
            entry = clean_element(field, value)
            for k in entry:
                self._check_index(k)
            if entry:
                self._products[(i, j)] = entry
        self.unit = clean_element(field, unit)
        self._by_degree: dict[int, tuple[int, ...]] = {}
        for i, d in enumerate(self.degrees):
            self._by_degree[d] = self._by_degree.get(d, ()) + (i,)
        self.name_index = {name: i for i, name in enumerate(self.names)}

    def _check_index(self, i: int) -> None:
        if not 0 <= i < len(self.names):
            raise ValueError(f"basis index {i} out of range")

    # --- basic queries -----------------------------------------------------

    @property
    def total_dim(self) -> int:
        return len(self.names)

    def basis_indices(self, degree: int) -> tuple[int, ...]:
        return self._by_degree.get(degree, ())

    def degrees_present(self) -> list[int]:
        return sorted(self._by_degree)

    def dim(self, degree: int) -> int:
        return len(self.basis_indices(degree))

    def basis_product(self, i: int, j: int) -> Element:
        """Product of the ``i``-th and ``j``-th basis elements."""
        if self.window is not None:
            total = self.degrees[i] + self.degrees[j]
            lo, hi = self.window
            if total > hi:
                raise WindowOverflow(
                    f"product {self.names[i]}*{self.names[j]} has degree {total}, above window top {hi}"
                )
            if total < lo:
                if self.floor_vanishes:
                    return {}
                raise WindowOverflow(
                    f"product {self.names[i]}*{self.names[j]} has degree {total}, below window floor {lo}"
                )
        return dict(self._products.get((i, j), {}))

    # --- element arithmetic ------------------------------------------------

    def zero(self) -> Element:
        return {}

    def basis_element(self, i: int) -> Element:
        self._check_index(i)
        return {i: self.field.one()}

    def one(self) -> Element:
        return dict(self.unit)

    def add(self, x: Mapping[int, Scalar], y: Mapping[int, Scalar]) -> Element:
        f = self.field
        out = dict(x)
        for i, c in y.items():
            s = f.add(out.get(i, f.zero()), c)
            if f.is_zero(s):
                out.pop(i, None)
            else:
                out[i] = s
        return out

    def sub(self, x: Mapping[int, Scalar], y: Mapping[int, Scalar]) -> Element:
        return self.add(x, self.scale(self.field.neg(self.field.one()), y))

    def scale(self, c: Scalar, x: Mapping[int, Scalar]) -> Element:
        f = self.field
        if f.is_zero(c):
            return {}
        return {i: f.mul(c, v) for i, v in x.items()}

    def mul(self, x: Mapping[int, Scalar], y: Mapping[int, Scalar]) -> Element:
        f = self.field
        out: Element = {}
        for i, a in x.items():
            for j, b in y.items():
                coeff = f.mul(a, b)
                if f.is_zero(coeff):
                    continue
                for k, c in self.basis_product(i, j).items():
                    s = f.add(out.get(k, f.zero()), f.mul(coeff, c))
                    if f.is_zero(s):
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    def element_degree(self, x: Mapping[int, Scalar]) -> int | None:
        """Degree of a homogeneous element, None for zero; raises when mixed."""
        degs = {self.degrees[i] for i in x}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def homogeneous_components(self, x: Mapping[int, Scalar]) -> dict[int, Element]:
        out: dict[int, Element] = {}
        for i, c in x.items():
            out.setdefault(self.degrees[i], {})[i] = c
        return out

    def random_element(self, rng: random.Random, degree: int | None = None, *, nonzero: bool = False) -> Element:
        indices = self.basis_indices(degree) if degree is not None else range(self.total_dim)
        while True:
            elem = clean_element(self.field, {i: self.field.random(rng) for i in indices})
            if not nonzero or elem:
                return elem

    def fmt_element(self, x: Mapping[int, Scalar]) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            coeff = self.field.fmt(x[i])
            parts.append(self.names[i] if coeff == "1" else f"{coeff}*{self.names[i]}")
        return " + ".join(parts)

    # --- linear-algebra views ----------------------------------------------

    def _require_unwindowed(self, what: str) -> None:
        if self.window is not None:
            raise ValueError(f"{what} requires a fully known algebra, not a windowed one")

    def left_mul_matrix(self, x: Mapping[int, Scalar]) -> Matrix:
        """Matrix of ``y -> x*y`` in the full basis (unwindowed algebras only)."""
        self._require_unwindowed("a multiplication operator")
        cols = [self.mul(x, self.basis_element(j)) for j in range(self.total_dim)]
        return self._columns_to_matrix(cols)

    def right_mul_matrix(self, x: Mapping[int, Scalar]) -> Matrix:
        """Matrix of ``y -> y*x`` in the full basis (unwindowed algebras only)."""
        self._require_unwindowed("a multiplication operator")
        cols = [self.mul(self.basis_element(j), x) for j in range(self.total_dim)]
        return self._columns_to_matrix(cols)

    def _columns_to_matrix(self, cols: Sequence[Element]) -> Matrix:
        zero = self.field.zero()
        n = self.total_dim
        return Matrix.from_columns(
            self.field,
            [[col.get(i, zero) for i in range(n)] for col in cols],
            nrows=n,
        )

    # --- validation ----------------------------------------------------------

    def validate(self) -> None:
        """Raise on the first violation found by :func:`validate_algebra`."""
        report = validate_algebra(self)
        if report:
            raise ValueError(report[0])

    def __repr__(self) -> str:
        window = f", window={self.window}" if self.window is not None else ""
        return f"GradedAlgebra({self.field!r}, dim={self.total_dim}{window})"


# --- validation --------------------------------------------------------------------


def validate_algebra(a: GradedAlgebra | TwistedLaurentAlgebra) -> list[str]:
    """Violations of grading, unit laws, and associativity, as messages.

    An empty list means the algebra is valid.  For a windowed algebra each
    law is checked wherever the window allows it to be evaluated and
    unknowable products are skipped.  A twisted Laurent algebra holds its
    relations by construction; it is checked through a two-period
    materialization.
    """
    if isinstance(a, TwistedLaurentAlgebra):
        return validate_algebra(a.materialize(2))
    report: list[str] = []
    for (i, j), entry in sorted(a._products.items()):
        expected = a.degrees[i] + a.degrees[j]
        for k in sorted(entry):
            if a.degrees[k] != expected:
                report.append(
                    f"product {a.names[i]}*{a.names[j]} is not homogeneous: "
                    f"term {a.names[k]} has degree {a.degrees[k]}, expected {expected}"
                )
    try:
        unit_degree = a.element_degree(a.unit)
    except ValueError:
        report.append(f"unit is not homogeneous: degrees {sorted({a.degrees[i] for i in a.unit})}")
    else:
        if a.unit and unit_degree != 0:
            report.append(f"unit must live in degree 0, got degree {unit_degree}")
    for i in range(a.total_dim):
        b = a.basis_element(i)
        try:
            if a.mul(a.unit, b) != b or a.mul(b, a.unit) != b:
                report.append(f"unit law fails on basis element {a.names[i]}")
        except WindowOverflow:
            continue
    hi = a.window[1] if a.window is not None else None
    for i in range(a.total_dim):
        for j in range(a.total_dim):
            for k in range(a.total_dim):
                if hi is not None and a.degrees[i] + a.degrees[j] + a.degrees[k] > hi:
                    continue
                try:
                    left = a.mul(a.basis_product(i, j), a.basis_element(k))
                    right = a.mul(a.basis_element(i), a.basis_product(j, k))
                except WindowOverflow:
                    continue
                if left != right:
                    report.append(
                        "associativity fails on "
                        f"({a.names[i]}, {a.names[j]}, {a.names[k]}): "
                        f"{a.fmt_element(left)} != {a.fmt_element(right)}"
                    )
    return report


def is_d_sparse(a: GradedAlgebra | TwistedLaurentAlgebra, d: int) -> bool:
    """True when every degree carrying a basis element is a multiple of ``d``."""
    if d <= 0:
        raise ValueError("sparsity step must be a positive integer")
    if isinstance(a, TwistedLaurentAlgebra):
        return a.d % d == 0
    return all(degree % d == 0 for degree in a.degrees)


# --- degree shifts -----------------------------------------------------------------


@dataclass
class ShiftedModule:
    """A degree-shifted copy of a graded algebra's underlying space.

    Component ``i`` of the shifted object is component ``i + shift`` of the
    base, definitionally: the base's vector space is reused and only the
    degree bookkeeping moves.
    """

    base: GradedAlgebra
    shift: int

    def dim(self, degree: int) -> int:
        return self.base.dim(degree + self.shift)

    def basis_indices(self, degree: int) -> tuple[int, ...]:
        return self.base.basis_indices(degree + self.shift)

    def degrees_present(self) -> list[int]:
        return sorted(d - self.shift for d in self.base.degrees_present())


# --- degree-0 part -----------------------------------------------------------------


@dataclass
class Degree0Part:
    """The degree-0 subalgebra together with its recorded inclusion.

    ``inclusion[t]`` is the ambient basis index of the part's ``t``-th basis
    element, kept so restrictions along the inclusion can be formed without
    re-deriving the embedding.
    """

    algebra: GradedAlgebra
    inclusion: tuple[int, ...]


def degree0_part(a: GradedAlgebra | TwistedLaurentAlgebra) -> Degree0Part:
    """Subalgebra spanned by the degree-0 basis elements, with its inclusion."""
    if isinstance(a, TwistedLaurentAlgebra):
        return Degree0Part(a.base, tuple(range(a.base.total_dim)))
    indices = a.basis_indices(0)
    position = {i: t for t, i in enumerate(indices)}
    if not a.unit or any(i not in position for i in a.unit):
        raise ValueError("the algebra has no unit in degree 0")
    products: dict[tuple[int, int], Element] = {}
    for t1, i in enumerate(indices):
        for t2, j in enumerate(indices):
            value: Element = {}
            for k, c in a.basis_product(i, j).items():
                if k not in position:
                    raise ValueError(
                        f"product {a.names[i]}*{a.names[j]} leaves degree 0; "
                        "run validate_algebra first"
                    )
                value[position[k]] = c
            if value:
                products[(t1, t2)] = value
    part = GradedAlgebra(
        a.field,
        [a.names[i] for i in indices],
        [0] * len(indices),
        products,
        {position[i]: c for i, c in a.unit.items()},
    )
    return Degree0Part(part, tuple(indices))


# --- twisted Laurent extensions ----------------------------------------------------


def _apply_table(field: Field, table: Sequence[Element], x: Mapping[int, Scalar]) -> Element:
    """Linear extension of per-basis images to an arbitrary element."""
    out: Element = {}
    for i, c in x.items():
        for k, v in table[i].items():
            s = field.add(out.get(k, field.zero()), field.mul(c, v))
            if field.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
    return out


class TwistedLaurentAlgebra:
    """Laurent extension of a degree-0 algebra by a twisting automorphism.

    The extension adjoins an invertible generator ``i`` of degree ``-d``
    subject to ``i*x == twist(x)*i``.  The component in degree ``-k*d`` is a
    free rank-one module over the base on the generator power ``i^k``, and
    every degree outside those multiples is zero.  Elements are finite sums
    of such terms, stored as ``{power: base element}``; the algebra is
    infinite-dimensional and is never tabulated degreewise.  Cochains on the
    extension are meaningful only through their values on base tuples (the
    generator shifts determine the rest), so windowed snapshots from
    :meth:`materialize` are the entry point for machinery that needs a
    finite basis.
    """

    __slots__ = ("base", "d", "_images", "_inverse_images")

    def __init__(self, base: GradedAlgebra, twist_images: Sequence[Mapping[int, Scalar]], d: int):
        if d <= 0:
            raise ValueError("the generator's degree step must be a positive integer")
        if set(base.degrees) != {0}:
            raise ValueError("the base of a twisted Laurent extension must be concentrated in degree 0")
        if base.window is not None:
            raise ValueError("the base of a twisted Laurent extension must be fully known, not windowed")
        m = base.total_dim
        if len(twist_images) != m:
            raise ValueError(f"the twist must give an image for each of the {m} basis elements")
        f = base.field
        images = tuple(clean_element(f, dict(img)) for img in twist_images)
        matrix = Matrix.from_columns(
            f, [[images[j].get(r, f.zero()) for r in range(m)] for j in range(m)], nrows=m
        )
        inverse: list[Element] = []
        for j in range(m):
            target = [f.one() if r == j else f.zero() for r in range(m)]
            sol = matrix.solve(target)
            if sol is None:
                raise ValueError("the twist is not an automorphism: it is not invertible")
            inverse.append(clean_element(f, dict(enumerate(sol))))
        if _apply_table(f, images, base.unit) != base.unit:
            raise ValueError("the twist is not an automorphism: it does not fix the unit")
        for i in range(m):
            for j in range(m):
                lhs = _apply_table(f, images, base.basis_product(i, j))
                if lhs != base.mul(images[i], images[j]):
                    raise ValueError(
                        "the twist is not an automorphism: it is not multiplicative "
                        f"on ({base.names[i]}, {base.names[j]})"
                    )
        self.base = base
        self.d = d
        self._images = images
        self._inverse_images = tuple(inverse)

    # --- twisting ------------------------------------------------------------

    def twist(self, power: int, x: Mapping[int, Scalar]) -> Element:
        """The twisting automorphism iterated ``power`` times (inverse if negative)."""
        table = self._images if power >= 0 else self._inverse_images
        out = clean_element(self.base.field, dict(x))
        for _ in range(abs(power)):
            out = _apply_table(self.base.field, table, out)
        return out

    # --- elements ------------------------------------------------------------

    def zero(self) -> dict[int, Element]:
        return {}

    def one(self) -> dict[int, Element]:
        return {0: self.base.one()}

    def generator(self, power: int = 1) -> dict[int, Element]:
        """The generator power ``i^power``."""
        return {power: self.base.one()}

    def element(self, x: Mapping[int, Scalar], power: int = 0) -> dict[int, Element]:
        """The homogeneous element ``x * i^power``."""
        part = clean_element(self.base.field, dict(x))
        return {power: part} if part else {}

    def add(self, x: Mapping[int, Element], y: Mapping[int, Element]) -> dict[int, Element]:
        out = {k: dict(v) for k, v in x.items()}
        for k, v in y.items():
            s = self.base.add(out.get(k, {}), v)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def scale(self, c: Scalar, x: Mapping[int, Element]) -> dict[int, Element]:
        if self.base.field.is_zero(c):
            return {}
        return {k: self.base.scale(c, v) for k, v in x.items()}

    def sub(self, x: Mapping[int, Element], y: Mapping[int, Element]) -> dict[int, Element]:
        f = self.base.field
        return self.add(x, self.scale(f.neg(f.one()), y))

    def mul(self, x: Mapping[int, Element], y: Mapping[int, Element]) -> dict[int, Element]:
        out: dict[int, Element] = {}
        for ka, xa in x.items():
            for kb, yb in y.items():
                prod = self.base.mul(xa, self.twist(ka, yb))
                if not prod:
                    continue
                s = self.base.add(out.get(ka + kb, {}), prod)
                if s:
                    out[ka + kb] = s
                else:
                    out.pop(ka + kb, None)
        return out

    # --- components ----------------------------------------------------------

    def component_degree(self, power: int) -> int:
        return -power * self.d

    def dim(self, degree: int) -> int:
        return self.base.total_dim if degree % self.d == 0 else 0

    def fmt_element(self, x: Mapping[int, Element]) -> str:
        if not x:
            return "0"
        parts = []
        for k in sorted(x):
            lam = self.base.fmt_element(x[k])
            if k == 0:
                parts.append(lam)
            elif lam == "1":
                parts.append(f"i^{k}")
            else:
                parts.append(f"({lam})*i^{k}")
        return " + ".join(parts)

    def materialize(self, powers: int) -> GradedAlgebra:
        """Windowed snapshot of the generator powers ``-powers .. powers``.

        The window is honest: the true algebra continues on both sides, so
        the snapshot does not promise a vanishing floor and products leaving
        the covered powers raise instead of returning a wrong zero.
        """
        if powers < 1:
            raise ValueError("a materialization needs at least one generator power")
        base = self.base
        spread = range(-powers, powers + 1)
        index: dict[tuple[int, int], int] = {}
        names: list[str] = []
        degs: list[int] = []
        for k in spread:
            for i, name in enumerate(base.names):
                index[(k, i)] = len(names)
                names.append(name if k == 0 else f"{name}*i^{k}")
                degs.append(-k * self.d)
        products: dict[tuple[int, int], Element] = {}
        for ka in spread:
            twisted = [self.twist(ka, base.basis_element(j)) for j in range(base.total_dim)]
            for kb in spread:
                if ka + kb not in spread:
                    continue
                for i in range(base.total_dim):
                    for j in range(base.total_dim):
                        value = base.mul(base.basis_element(i), twisted[j])
                        entry = {index[(ka + kb, t)]: c for t, c in value.items()}
                        if entry:
                            products[(index[(ka, i)], index[(kb, j)])] = entry
        unit = {index[(0, i)]: c for i, c in base.unit.items()}
        return GradedAlgebra(
            base.field,
            names,
            degs,
            products,
            unit,
            window=(-powers * self.d, powers * self.d),
            floor_vanishes=False,
        )

    def __repr__(self) -> str:
        return f"TwistedLaurentAlgebra({self.base!r}, d={self.d})"


def twisted_laurent(
    base: GradedAlgebra, twist_images: Sequence[Mapping[int, Scalar]], d: int
) -> TwistedLaurentAlgebra:
    """Adjoin an invertible degree ``-d`` generator twisting by an automorphism.

    ``twist_images[i]`` is the image of the ``i``-th basis element under the
    twist; the construction verifies that the images define a unital,
    multiplicative, invertible map before accepting them.
    """
    return TwistedLaurentAlgebra(base, twist_images, d)


# --- bimodules ---------------------------------------------------------------------


@dataclass
class Bimodule:
    """A two-sided module over a degree-0 algebra, given by action matrices.

    ``left_action[i]`` and ``right_action[i]`` are the matrices of the
    ``i``-th basis element of ``base`` acting on the module, with columns
    indexed by the module basis.  :meth:`validate` checks that both actions
    are unital and associative and that they commute with each other.
    """

    base: GradedAlgebra
    dimension: int
    names: tuple[str, ...]
    left_action: tuple[Matrix, ...]
    right_action: tuple[Matrix, ...]

    def action_of(self, x: Mapping[int, Scalar], side: str = "left") -> Matrix:
        """Matrix of a general base element acting on the chosen side."""
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        actions = self.left_action if side == "left" else self.right_action
        f = self.base.field
        m = self.dimension
        rows = [[f.zero()] * m for _ in range(m)]
        for i, c in x.items():
            for r in range(m):
                source = actions[i].rows[r]
                target = rows[r]
                for s in range(m):
                    target[s] = f.add(target[s], f.mul(c, source[s]))
        return Matrix(f, rows, ncols=m)

    def validate(self) -> None:
        base = self.base
        f = base.field
        for actions in (self.left_action, self.right_action):
            if len(actions) != base.total_dim:
                raise ValueError("actions must give one matrix per base basis element")
            for mat in actions:
                if mat.nrows != self.dimension or mat.ncols != self.dimension:
                    raise ValueError(f"action matrices must be {self.dimension}x{self.dimension}")
        ident = Matrix.identity(f, self.dimension)
        if self.action_of(base.unit, "left") != ident:
            raise ValueError("the left action is not unital")
        if self.action_of(base.unit, "right") != ident:
            raise ValueError("the right action is not unital")
        for i in range(base.total_dim):
            for j in range(base.total_dim):
                prod = base.basis_product(i, j)
                if self.action_of(prod, "left") != self.left_action[i].mul(self.left_action[j]):
                    raise ValueError(
                        f"the left action is not associative on ({base.names[i]}, {base.names[j]})"
                    )
                if self.action_of(prod, "right") != self.right_action[j].mul(self.right_action[i]):
                    raise ValueError(
                        f"the right action is not associative on ({base.names[i]}, {base.names[j]})"
                    )
                lr = self.left_action[i].mul(self.right_action[j])
                if lr != self.right_action[j].mul(self.left_action[i]):
                    raise ValueError(
                        f"the actions do not commute on ({base.names[i]}, {base.names[j]})"
                    )


def _zero_bimodule(base: GradedAlgebra) -> Bimodule:
    empty = tuple(Matrix.zeros(base.field, 0, 0) for _ in range(base.total_dim))
    return Bimodule(base, 0, (), empty, empty)


def component_as_bimodule(a: GradedAlgebra | TwistedLaurentAlgebra, q: int) -> Bimodule:
    """The degree-``q`` component of ``a`` as a bimodule over its degree-0 part.

    For a twisted Laurent algebra the component in degree ``-k*d`` is the
    base acted on by plain multiplication from the left and by the ``k``-th
    twist power followed by multiplication from the right; components away
    from the generator degrees are zero.  An empty component gives the zero
    bimodule, but a windowed algebra refuses degrees outside its window
    rather than guessing.
    """
    if isinstance(a, TwistedLaurentAlgebra):
        base = a.base
        if q % a.d != 0:
            return _zero_bimodule(base)
        power = -q // a.d
        names = tuple(
            name if power == 0 else f"{name}*i^{power}" for name in base.names
        )
        left = tuple(base.left_mul_matrix(base.basis_element(i)) for i in range(base.total_dim))
        right = tuple(
            base.right_mul_matrix(a.twist(power, base.basis_element(i)))
            for i in range(base.total_dim)
        )
        return Bimodule(base, base.total_dim, names, left, right)
    part = degree0_part(a)
    base = part.algebra
    if a.window is not None and not a.window[0] <= q <= a.window[1]:
        raise WindowOverflow(f"degree {q} lies outside the window {a.window}; its component is unknown")
    component = a.basis_indices(q)
    if not component:
        return _zero_bimodule(base)
    spot = {c: s for s, c in enumerate(component)}
    f = a.field
    m = len(component)

    def action_matrix(ambient: int, side: str) -> Matrix:
        cols = []
        for c in component:
            if side == "left":
                value = a.mul(a.basis_element(ambient), a.basis_element(c))
            else:
                value = a.mul(a.basis_element(c), a.basis_element(ambient))
            col = [f.zero()] * m
            for k, coeff in value.items():
                if k not in spot:
                    raise ValueError(
                        f"the degree-{q} component is not closed under the degree-0 action; "
                        "run validate_algebra first"
                    )
                col[spot[k]] = coeff
            cols.append(col)
        return Matrix.from_columns(f, cols, nrows=m)

    left = tuple(action_matrix(i, "left") for i in part.inclusion)
    right = tuple(action_matrix(i, "right") for i in part.inclusion)
    return Bimodule(base, m, tuple(a.names[c] for c in component), left, right)


# --- Frobenius forms ---------------------------------------------------------------


@dataclass
class FrobeniusCertificate:
    """Outcome of the Frobenius-form search, with its evidence.

    ``form`` maps basis index ``i`` to the functional's value on that basis
    element; it is present exactly when ``frobenius`` is true, and the
    pairing ``(a, b) -> form(a*b)`` is then nondegenerate.  ``method`` names
    the search stage that settled the verdict and ``detail`` says why it is
    sound.
    """

    frobenius: bool
    form: Element | None
    method: str
    detail: str

    def __bool__(self) -> bool:
        return self.frobenius


def _pairing_rank(a: GradedAlgebra, prods: list[list[Element]], form: Element) -> int:
    f = a.field
    m = a.total_dim
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            entry = prods[i][j]
            acc = f.zero()
            for k, c in form.items():
                v = entry.get(k)
                if v is not None:
                    acc = f.add(acc, f.mul(v, c))
            row.append(acc)
        rows.append(row)
    return Matrix(f, rows, ncols=m).rank()


def _generic_pairing_det(a: GradedAlgebra) -> dict[tuple[int, ...], Scalar]:
    """Determinant of the pairing of an indeterminate functional.

    The result is a polynomial in one variable per basis element (variable
    ``k`` is the functional's value on basis element ``k``), stored as a map
    from exponent tuples to nonzero coefficients.  The algebra is Frobenius
    over an infinite field exactly when this polynomial is nonzero.
    """
    m = a.total_dim
    entries = [[a.basis_product(i, j) for j in range(m)] for i in range(m)]
    return linear_entry_det(a.field, entries, m)


def is_frobenius(a: GradedAlgebra) -> FrobeniusCertificate:
    """Search for a linear form whose multiplication pairing is nondegenerate.

    The search is deterministic and the verdict is sound either way:
    dual-basis functionals first, then 50 seeded pseudorandom forms, and if
    none of those certify, the determinant of the generic pairing decides.
    A vanishing determinant rules every functional out over any field; a
    nonvanishing one yields an explicit witness whenever the field has more
    elements than the determinant's degree, and over a smaller prime field
    the candidates are enumerated exhaustively up to scaling.
    """
    if set(a.degrees) != {0}:
        raise ValueError("the Frobenius test needs an algebra concentrated in degree 0")
    if a.window is not None:
        raise ValueError("the Frobenius test needs a fully known algebra, not a windowed one")
    f = a.field
    m = a.total_dim
    prods = [[a.basis_product(i, j) for j in range(m)] for i in range(m)]
    for t in range(m):
        form: Element = {t: f.one()}
        if _pairing_rank(a, prods, form) == m:
            return FrobeniusCertificate(
                True, form, "dual-basis",
                f"the functional dual to {a.names[t]} gives a nondegenerate pairing",
            )
    rng = random.Random(0)
    for _ in range(50):
        form = clean_element(f, {i: f.random(rng) for i in range(m)})
        if form and _pairing_rank(a, prods, form) == m:
            return FrobeniusCertificate(
                True, form, "random",
                "a seeded pseudorandom functional gives a nondegenerate pairing",
            )
    det = _generic_pairing_det(a)
    if not det:
        return FrobeniusCertificate(
            False, None, "symbolic",
            "the determinant of the generic pairing vanishes identically, "
            "so every functional pairs degenerately",
        )
    if isinstance(f, Rationals) or (isinstance(f, PrimeField) and f.p > m):
        form = poly_nonzero_point(f, det, m)
        if _pairing_rank(a, prods, form) != m:
            raise AssertionError("the extracted point does not avoid the determinant's zero set")
        return FrobeniusCertificate(
            True, form, "symbolic",
            "the generic pairing determinant is nonzero and was evaluated off its zero set",
        )
    # Over a prime field smaller than the determinant's degree a nonzero
    # polynomial can still vanish at every rational point, so enumerate.
    count = (f.p**m - 1) // (f.p - 1)
    if count > 500_000:
        raise ValueError(
            "cannot certify the Frobenius property: the field is too small for the "
            "determinant argument and the functional space is too large to enumerate"
        )
    for form in projective_vectors(f, m):
        if _pairing_rank(a, prods, form) == m:
            return FrobeniusCertificate(
                True, form, "exhaustive", "an exhaustive scan found a nondegenerate functional"
            )
    return FrobeniusCertificate(
        False, None, "exhaustive",
        f"all {count} functionals up to scaling give degenerate pairings",
    )
