"""Minimal models of differential graded algebras by homotopy transfer.

A differential turns a graded algebra into a dg algebra; its cohomology
carries, beyond the induced product, transferred higher operations that
remember how cocycles multiply up to coboundary.  This module computes a
homotopy retraction of a dg algebra onto its cohomology, transfers the
minimal structure along it together with the components of a
quasi-isomorphism back into the algebra, and compares the minimal models
produced by different retraction choices.

The recursion runs in the suspended convention of :mod:`masseykit.ainfty`,
where morphism components are even and the only Koszul signs are the ones
:func:`~masseykit.ainfty.suspend` folds into the operations:

    tree_n = sum over j + k = n of  product(F_j tensor F_k),
    op_n   = project o tree_n,      F_n = correct o tree_n,     F_1 = include,

with ``correct`` the negated homotopy -- with the retraction identity
written ``id - include o project = d h + h d``, it is ``-h`` that makes the
signless tree sum close.  The convention is validated rather than trusted:
re-running the structure relations and the morphism equations on a
transferred model is cheap, and a sign error fails both deterministically.

On a windowed algebra the cohomology is computed on the degrees the window
fully determines (kernels need the differential out of a degree, images
need it into one), the retraction maps carry the matching coverage, and
every transferred operation records how far its tree evaluations reached
as its ``sum_bound`` -- the same graceful degradation the rest of the
package uses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from masseykit.ainfty import (
    AInfinityStructure,
    GaugeSearchReport,
    MapCochain,
    MorphismReport,
    _evaluate_levels,
    _graded_levels,
    _lhs_value,
    _rhs_value,
    _suspended_components,
    _suspended_ops,
    greedy_gauge_equiv,
    pushforward,
    suspend,
    unsuspend,
)
from masseykit.errors import InconclusiveWindow, WindowOverflow
from masseykit.exactlin import Scalar, SparseSpan, kernel_from_columns
from masseykit.galg import Element, GradedAlgebra
from masseykit.hochschild import (
    Cochain,
    HochschildComplex,
    Key,
    degree_extent,
    multiplication_cochain,
)

__all__ = [
    "DGAlgebra",
    "HodgeData",
    "MinimalModel",
    "cohomology_algebra",
    "cohomology_comparison",
    "minimal_models_agree",
    "model_map_defect",
    "transfer_structure",
    "verify_model_map",
    "zero_differential",
]


# --- dg algebras -------------------------------------------------------------------

def zero_differential(algebra: GradedAlgebra) -> MapCochain:
    """The zero map as a differential, making the algebra its own model."""
    return MapCochain(algebra, algebra, 1, 1, {}, validate=False)


class DGAlgebra:
    """A graded algebra with a square-zero derivation of degree one.

    Validation checks the bidegree, that the unit is closed, that the
    differential squares to zero, and the Leibniz rule on basis pairs --
    each wherever the window allows the check to be evaluated.
    """

    __slots__ = ("algebra", "differential")

    def __init__(
        self,
        algebra: GradedAlgebra,
        differential: MapCochain,
        *,
        validate: bool = True,
    ):
        self.algebra = algebra
        self.differential = differential
        if validate:
            self._validate()

    def _validate(self) -> None:
        a, d = self.algebra, self.differential
        if d.domain is not a or d.codomain is not a:
            raise ValueError("the differential must map the algebra to itself")
        if (d.arity, d.qdeg) != (1, 1):
            raise ValueError(
                f"a differential has bidegree (1, 1), got ({d.arity}, {d.qdeg})"
            )
        f = a.field
        try:
            if d(a.one()):
                raise ValueError("the differential does not vanish on the unit")
        except WindowOverflow:
            pass
        for i in range(a.total_dim):
            try:
                if d(d.value_on((i,))):
                    raise ValueError(
                        f"the differential does not square to zero on {a.names[i]}"
                    )
            except WindowOverflow:
                continue
        for i in range(a.total_dim):
            xi = a.basis_element(i)
            sign = f.neg(f.one()) if a.degrees[i] % 2 else f.one()
            for j in range(a.total_dim):
                xj = a.basis_element(j)
                try:
                    lhs = d(a.mul(xi, xj))
                    rhs = a.add(
                        a.mul(d.value_on((i,)), xj),
                        a.scale(sign, a.mul(xi, d.value_on((j,)))),
                    )
                except WindowOverflow:
                    continue
                if lhs != rhs:
                    raise ValueError(
                        f"the Leibniz rule fails on ({a.names[i]}, {a.names[j]})"
                    )

    def __repr__(self) -> str:
        kind = "zero" if not self.differential.values else "nonzero"
        return f"DGAlgebra(dim={self.algebra.total_dim}, {kind} differential)"


def _check_transfer_window(a: GradedAlgebra) -> None:
    if not a.unit or a.element_degree(a.unit) != 0:
        raise ValueError(
            "homotopy transfer needs a unital algebra with its unit in degree zero"
        )
    if a.window is None:
        return
    lo, hi = a.window
    if not a.floor_vanishes:
        raise InconclusiveWindow(
            "cohomology needs a window with vanishing floor: without known "
            "zeroes below the window, no kernel or image is determined"
        )
    if hi - 1 < lo:
        raise InconclusiveWindow(
            f"window ({lo}, {hi}) determines no cohomological degree: kernels "
            "at the top degree need the differential beyond it"
        )
    if hi - 1 < 0:
        raise InconclusiveWindow(
            f"window ({lo}, {hi}) does not determine degree zero, "
            "so the unit class is out of reach"
        )


def _shifted(
    a: GradedAlgebra, rng: random.Random, base: Element, shifts: list[Element]
) -> Element:
    """The base vector moved by a random combination of the given shifts."""
    out: Element = dict(base)
    for vec in shifts:
        c = a.field.random(rng)
        if not a.field.is_zero(c):
            out = a.add(out, a.scale(c, vec))
    return out


# --- homotopy retractions ----------------------------------------------------------

class HodgeData:
    """A homotopy retraction of a dg algebra onto its cohomology.

    The three maps -- ``include`` selecting a cocycle for each class,
    ``project`` reading off the class of a cocycle, and the degree ``-1``
    ``homotopy`` -- satisfy the retraction identities

        project o include = id,
        id - include o project = d o homotopy + homotopy o d,

    and the side conditions ``homotopy o include = 0``,
    ``project o homotopy = 0``, ``homotopy o homotopy = 0``.  Validation
    asserts all five on basis elements, skipping only compositions the
    window leaves undetermined.
    """

    __slots__ = ("dg", "cohomology", "include", "project", "homotopy")

    def __init__(
        self,
        dg: DGAlgebra,
        cohomology: GradedAlgebra,
        include: MapCochain,
        project: MapCochain,
        homotopy: MapCochain,
        *,
        validate: bool = True,
    ):
        self.dg = dg
        self.cohomology = cohomology
        self.include = include
        self.project = project
        self.homotopy = homotopy
        if validate:
            self._validate()

    def _validate(self) -> None:
        a, H = self.dg.algebra, self.cohomology
        i, p, h = self.include, self.project, self.homotopy
        for name, m, dom, cod, qdeg in (
            ("include", i, H, a, 0),
            ("project", p, a, H, 0),
            ("homotopy", h, a, a, -1),
        ):
            if m.domain is not dom or m.codomain is not cod:
                raise ValueError(f"the {name} map connects the wrong algebras")
            if (m.arity, m.qdeg) != (1, qdeg):
                raise ValueError(
                    f"the {name} map must have bidegree (1, {qdeg}), "
                    f"got ({m.arity}, {m.qdeg})"
                )
        for c in range(H.total_dim):
            cocycle = i.value_on((c,))
            if p(cocycle) != H.basis_element(c):
                raise ValueError(
                    f"the retraction does not fix the class {H.names[c]}"
                )
            if h(cocycle):
                raise ValueError(
                    f"the homotopy does not vanish on the selected cocycle "
                    f"of {H.names[c]}"
                )
        d = self.dg.differential
        for e in range(a.total_dim):
            basis = a.basis_element(e)
            correction = h.value_on((e,))
            if p(correction):
                raise ValueError(
                    f"the projection does not vanish on the homotopy image "
                    f"of {a.names[e]}"
                )
            if h(correction):
                raise ValueError(
                    f"the homotopy does not square to zero on {a.names[e]}"
                )
            try:
                retracted = a.add(d(correction), h(d.value_on((e,))))
                residual = a.sub(a.sub(basis, i(p(basis))), retracted)
            except WindowOverflow:
                continue
            if residual:
                raise ValueError(
                    f"the retraction identity fails on {a.names[e]}"
                )

    def __repr__(self) -> str:
        return f"HodgeData(classes={self.cohomology.total_dim})"


def cohomology_algebra(
    dg: DGAlgebra,
    rng: random.Random | None = None,
    cohomology: GradedAlgebra | None = None,
) -> tuple[GradedAlgebra, HodgeData]:
    """The cohomology of a dg algebra together with a homotopy retraction.

    Each degree splits as boundaries, chosen class representatives, and a
    complement mapped isomorphically onto the next degree's boundaries;
    the homotopy inverts the differential on boundaries and vanishes on
    the rest, so the retraction identities hold on the nose.  The unit's
    class is always the chosen representative of the unit of cohomology,
    selected back to the algebra's unit exactly.

    The canonical choice is deterministic; passing ``rng`` moves each
    class representative by a random coboundary and each complement vector
    by a random cocycle.  The class basis itself does not depend on these
    choices, so retractions produced with different generators present the
    same cohomology algebra: pass an earlier result as ``cohomology`` to
    reuse that object, which lets transferred models be compared directly.

    On a windowed algebra only the degrees strictly below the window top
    have determined cohomology (the kernel at the top needs the
    differential beyond it); the cohomology window records that, and the
    projection refuses degrees it does not cover, while the homotopy is
    fully determined everywhere in the window.
    """
    a = dg.algebra
    _check_transfer_window(a)
    f = a.field
    d = dg.differential
    windowed = a.window is not None
    top = a.window[1] if windowed else None

    class_degrees: list[int] = []
    class_reps: list[Element] = []
    unit_class: int | None = None
    p_rows: dict[int, dict[int, Scalar]] = {}
    h_rows: dict[int, Element] = {}

    degrees_present = [q for q in a.degrees]
    walk_lo, walk_hi = min(degrees_present), max(degrees_present)
    carried: list[tuple[Element, Element]] = []  # (complement vector, its boundary)
    for q in range(walk_lo, walk_hi + 1):
        idx = a.basis_indices(q)
        boundaries = [(image, pre) for pre, image in carried]
        carried = []
        if not idx:
            if boundaries:
                raise RuntimeError("a boundary landed in an empty degree")
            continue
        kernel_known = not windowed or q < top

        z_vectors: list[Element] = []
        if kernel_known:
            columns = [d.value_on((e,)) for e in idx]
            for local in kernel_from_columns(f, columns):
                z_vectors.append({idx[pos]: c for pos, c in local.items()})

        span = SparseSpan(f, track=True)
        for t, (image, _) in enumerate(boundaries):
            if not span.insert(image, tag=("b", t)):
                raise RuntimeError("boundary vectors are not independent")

        reps: list[Element] = []
        if kernel_known:
            picker = SparseSpan(f)
            for image, _ in boundaries:
                picker.insert(image)
            candidates = list(z_vectors)
            if q == 0:
                candidates.insert(0, dict(a.unit))
            for k, vec in enumerate(candidates):
                if not picker.insert(vec):
                    if q == 0 and k == 0:
                        raise ValueError(
                            "the unit is a coboundary: the cohomology has "
                            "no unit class"
                        )
                    continue
                is_unit_rep = q == 0 and k == 0
                if rng is not None and boundaries and not is_unit_rep:
                    vec = _shifted(a, rng, vec, [im for im, _ in boundaries])
                if is_unit_rep:
                    unit_class = len(class_degrees)
                class_degrees.append(q)
                class_reps.append(vec)
                reps.append(vec)

            complement: list[Element] = []
            filler = SparseSpan(f)
            for zv in z_vectors:
                filler.insert(zv)
            for e in idx:
                vec = {e: f.one()}
                if filler.insert(vec):
                    if rng is not None and z_vectors:
                        vec = _shifted(a, rng, vec, z_vectors)
                    complement.append(vec)
            if len(boundaries) + len(reps) + len(complement) != len(idx):
                raise RuntimeError("the degree does not split as expected")
            first_class = len(class_degrees) - len(reps)
            for t, vec in enumerate(reps):
                span.insert(vec, tag=("r", first_class + t))
            for t, vec in enumerate(complement):
                span.insert(vec, tag=("w", t))
                image = d(vec)
                if not image:
                    raise RuntimeError(
                        "a complement vector has no boundary image"
                    )
                carried.append((vec, image))
        else:
            for e in idx:
                span.insert({e: f.one()}, tag=("c", e))

        preimages = [pre for _, pre in boundaries]
        for e in idx:
            combo = span.solve({e: f.one()})
            if combo is None:
                raise RuntimeError("the degree splitting misses a basis vector")
            h_val: Element = {}
            p_val: dict[int, Scalar] = {}
            for tag, coeff in combo.items():
                kind, t = tag
                if kind == "b":
                    h_val = a.add(h_val, a.scale(coeff, preimages[t]))
                elif kind == "r":
                    p_val[t] = coeff
            if h_val:
                h_rows[e] = h_val
            if kernel_known and p_val:
                p_rows[e] = p_val

    names: list[str] = []
    per_degree: dict[int, int] = {}
    for q in class_degrees:
        per_degree[q] = per_degree.get(q, 0) + 1
    seen: dict[int, int] = {}
    for c, q in enumerate(class_degrees):
        k = seen.get(q, 0)
        seen[q] = k + 1
        if c == unit_class:
            names.append("1")
        elif per_degree[q] == 1:
            names.append(f"e{q}")
        else:
            names.append(f"e{q}_{k}")

    h_top = top - 1 if windowed else None
    products: dict[tuple[int, int], dict[int, Scalar]] = {}
    for x in range(len(class_reps)):
        for y in range(len(class_reps)):
            tdeg = class_degrees[x] + class_degrees[y]
            if windowed and tdeg > h_top:
                continue
            prod = a.mul(class_reps[x], class_reps[y])
            entry: dict[int, Scalar] = {}
            for e, coeff in prod.items():
                for c, pc in p_rows.get(e, {}).items():
                    s = f.add(entry.get(c, f.zero()), f.mul(coeff, pc))
                    if f.is_zero(s):
                        entry.pop(c, None)
                    else:
                        entry[c] = s
            if entry:
                products[(x, y)] = entry

    built = GradedAlgebra(
        f,
        names,
        class_degrees,
        products,
        {unit_class: f.one()},
        window=(a.window[0], h_top) if windowed else None,
    )
    if cohomology is not None:
        dim = built.total_dim
        same = (
            cohomology.field == f
            and cohomology.degrees == built.degrees
            and cohomology.window == built.window
            and cohomology.unit == built.unit
            and all(
                cohomology.basis_product(x, y) == built.basis_product(x, y)
                for x in range(dim)
                for y in range(dim)
                if built.window is None
                or built.degrees[x] + built.degrees[y] <= built.window[1]
            )
        )
        if not same:
            raise ValueError(
                "the provided cohomology algebra does not match the computed one"
            )
        built = cohomology

    include = MapCochain(
        built, a, 1, 0,
        {(c,): rep for c, rep in enumerate(class_reps)},
        validate=False,
    )
    project = MapCochain(
        a, built, 1, 0,
        {(e,): row for e, row in p_rows.items()},
        validate=False,
    )
    homotopy = MapCochain(
        a, a, 1, -1,
        {(e,): val for e, val in h_rows.items()},
        validate=False,
    )
    return built, HodgeData(dg, built, include, project, homotopy)


def cohomology_comparison(first: HodgeData, second: HodgeData) -> MapCochain:
    """The canonical identification between two cohomology presentations.

    Composing the first retraction's cocycle selection with the second's
    projection gives, on cohomology, the identity map written in the two
    chosen bases -- the change of basis along which models transferred
    through the first retraction push forward onto the second.
    """
    if (
        first.dg.algebra is not second.dg.algebra
        or first.dg.differential != second.dg.differential
    ):
        raise ValueError("the retractions present different dg algebras")
    H1 = first.cohomology
    values = {
        (c,): second.project(first.include.value_on((c,)))
        for c in range(H1.total_dim)
    }
    return MapCochain(H1, second.cohomology, 1, 0, values, validate=False)


# --- transfer ----------------------------------------------------------------------

@dataclass
class MinimalModel:
    """A transferred minimal structure with its quasi-isomorphism data.

    The ``inclusion`` components (plain sign convention, arity ``n`` with
    net degree ``1 - n``) assemble the morphism from the minimal structure
    back into the dg algebra whose linear part is the retraction's cocycle
    selection; :func:`verify_model_map` checks them against the morphism
    equations.
    """

    structure: AInfinityStructure
    inclusion: dict[int, MapCochain]
    hodge: HodgeData


def _check_hodge_source(dg: DGAlgebra, hodge: HodgeData) -> None:
    if (
        hodge.dg.algebra is not dg.algebra
        or hodge.dg.differential != dg.differential
    ):
        raise ValueError("the retraction does not present this dg algebra")


def transfer_structure(dg: DGAlgebra, hodge: HodgeData, upto: int) -> MinimalModel:
    """The minimal model of a dg algebra along a homotopy retraction.

    Operations and morphism components are built together, arity by arity
    up to ``upto``: the two-leaf trees of each arity are summed with the
    already known components, then projected to give the operation and
    corrected with the (negated) homotopy to give the next component.  On
    a windowed algebra each arity walks its inputs in increasing degree
    sum and records how far the window let the trees reach; beyond that
    bound the operation reports itself unknown rather than zero.

    The result satisfies the structure relations and morphism equations up
    to ``upto`` wherever the window determines them; re-verification is a
    test away and is how the sign conventions here are certified.
    """
    if upto < 2:
        raise ValueError("a minimal model starts at arity 2")
    _check_hodge_source(dg, hodge)
    a = dg.algebra
    H = hodge.cohomology
    f = a.field
    extent = degree_extent(a)
    product = suspend(multiplication_cochain(a))
    correct = MapCochain(
        a, a, 1, -1,
        {key: {e: f.neg(v) for e, v in elem.items()}
         for key, elem in hodge.homotopy.values.items()},
        sum_bound=hodge.homotopy.sum_bound,
        validate=False,
    )
    comps: dict[int, MapCochain] = {1: hodge.include}
    ops: dict[int, Cochain] = {2: multiplication_cochain(H)}
    for n in range(2, upto + 1):
        op_vals: dict[Key, Element] = {}
        comp_vals: dict[Key, Element] = {}
        op_cut: int | None = None
        comp_cut: int | None = None
        op_done = comp_done = False
        op_top = None if H.window is None else H.window[1] - (2 - n)
        # The walk covers the operation's domain and, one level further up,
        # the component's: a tree of input sum s projects to degree s + 2 - n
        # but corrects to degree s + 1 - n, so the component stays meaningful
        # on one more level than the operation.
        for level, keys in _graded_levels(H, n, 2 - n, (extent[0], extent[1] + 1)):
            if not op_done and op_top is not None and level > op_top:
                op_done = True
            if op_done and comp_done:
                break
            try:
                trees = [(key, _rhs_value(a, {2: product}, comps, key)) for key in keys]
            except WindowOverflow:
                if not op_done:
                    op_cut = level - 1
                if not comp_done:
                    comp_cut = level - 1
                break
            if not op_done:
                try:
                    chunk = [(key, hodge.project(val)) for key, val in trees]
                except WindowOverflow:
                    op_cut, op_done = level - 1, True
                else:
                    for key, elem in chunk:
                        if elem:
                            op_vals[key] = elem
            if not comp_done:
                try:
                    chunk = [(key, correct(val)) for key, val in trees]
                except WindowOverflow:
                    comp_cut, comp_done = level - 1, True
                else:
                    for key, elem in chunk:
                        if elem:
                            comp_vals[key] = elem
        if n >= 3 and (op_vals or op_cut is not None):
            suspended = MapCochain(
                H, H, n, 2 - n, op_vals, sum_bound=op_cut, validate=False
            )
            ops[n] = unsuspend(suspended).to_cochain()
        comps[n] = MapCochain(
            H, a, n, 1 - n, comp_vals, sum_bound=comp_cut, validate=False
        )
    return MinimalModel(
        structure=AInfinityStructure(H, ops),
        inclusion={n: unsuspend(c) for n, c in comps.items()},
        hodge=hodge,
    )


# --- quasi-isomorphism checks ------------------------------------------------------

def _check_model_components(
    H: GradedAlgebra, a: GradedAlgebra, components: Mapping[int, MapCochain]
) -> dict[int, MapCochain]:
    comps = {int(n): c for n, c in sorted(components.items())}
    if 1 not in comps:
        raise ValueError("a morphism needs an arity-1 component")
    for n, c in comps.items():
        if c.domain is not H or c.codomain is not a:
            raise ValueError(f"component f_{n} connects the wrong algebras")
        if (c.arity, c.qdeg) != (n, 1 - n):
            raise ValueError(
                f"component f_{n} must have bidegree ({n}, {1 - n}), "
                f"got ({c.arity}, {c.qdeg})"
            )
    return comps


def model_map_defect(
    dg: DGAlgebra,
    structure: AInfinityStructure,
    components: Mapping[int, MapCochain],
    n: int,
) -> MapCochain:
    """The arity-``n`` morphism defect of a map from a model into a dg algebra.

    Zero exactly when the equation holds at arity ``n``: inserting the
    model's operations before the components agrees with the dg algebra's
    differential and product applied after them.  At arity one this is the
    statement that the linear component lands in cocycles.
    """
    a = dg.algebra
    H = structure.algebra
    comps = _suspended_components(_check_model_components(H, a, components))
    inner = _suspended_ops(structure)
    outer = {
        1: suspend(dg.differential),
        2: suspend(multiplication_cochain(a)),
    }

    def evaluate(key: Key) -> Element:
        return a.sub(
            _lhs_value(H, a, inner, comps, key),
            _rhs_value(a, outer, comps, key),
        )

    values, bound = _evaluate_levels(H, n, 2 - n, degree_extent(a), evaluate)
    defect = MapCochain(H, a, n, 2 - n, values, sum_bound=bound, validate=False)
    return unsuspend(defect)


def verify_model_map(
    dg: DGAlgebra,
    structure: AInfinityStructure,
    components: Mapping[int, MapCochain],
    upto: int,
) -> MorphismReport:
    """Check the morphism equations into a dg algebra up to arity ``upto``."""
    failures: list[int] = []
    witnesses: dict[int, tuple[Key, Element]] = {}
    checked_sums: dict[int, int | None] = {}
    for n in range(1, upto + 1):
        defect = model_map_defect(dg, structure, components, n)
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


# --- comparing models --------------------------------------------------------------

def minimal_models_agree(
    dg: DGAlgebra,
    first: HodgeData,
    second: HodgeData,
    upto: int,
    complex_: HochschildComplex | None = None,
) -> GaugeSearchReport:
    """Compare the minimal models produced by two retraction choices.

    Both retractions present the same dg algebra, so the two transferred
    structures are gauge equivalent; the comparison transfers twice,
    identifies the cohomology bases when the retractions do not already
    share one algebra object, and runs the greedy gauge search.  The
    verdict is ``"equivalent"`` when the search completes and the honest
    ``"unknown"`` when it stalls -- never ``"distinct"``, short of handing
    the function retractions of genuinely different dg algebras.
    """
    _check_hodge_source(dg, first)
    _check_hodge_source(dg, second)
    model1 = transfer_structure(dg, first, upto)
    model2 = transfer_structure(dg, second, upto)
    if first.cohomology is second.cohomology:
        return greedy_gauge_equiv(model1.structure, model2.structure, upto, complex_)
    identify = cohomology_comparison(first, second)
    moved = pushforward(model1.structure, identify)
    return greedy_gauge_equiv(moved, model2.structure, upto, complex_)
