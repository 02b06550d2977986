"""Tests for homotopy retractions and transferred minimal models."""

import random
from functools import cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from masseykit.ainfty import (
    AInfinityStructure,
    MapCochain,
    greedy_gauge_equiv,
    universal_massey,
    verify_upto,
)
from masseykit.errors import InconclusiveWindow, WindowOverflow
from masseykit.exactlin import Rationals
from masseykit.galg import GradedAlgebra
from masseykit.transfer import (
    DGAlgebra,
    HodgeData,
    cohomology_algebra,
    cohomology_comparison,
    minimal_models_agree,
    model_map_defect,
    transfer_structure,
    verify_model_map,
    zero_differential,
)

from helpers import (
    acyclic_cone,
    cone_tensor,
    eps_t_window,
    trivial_extension,
    windowed_cone_tensor,
)

Q = Rationals()


@cache
def _formal_dg():
    algebra = trivial_extension(Q)
    return DGAlgebra(algebra, zero_differential(algebra))


@cache
def _formal_retraction():
    return cohomology_algebra(_formal_dg())


@cache
def _windowed_dg():
    algebra = eps_t_window(Q, 8)
    return DGAlgebra(algebra, zero_differential(algebra))


@cache
def _windowed_retraction():
    return cohomology_algebra(_windowed_dg())


@cache
def _cone_dg():
    return acyclic_cone(Q)


@cache
def _cone_retraction():
    return cohomology_algebra(_cone_dg())


@cache
def _tensor_dg():
    return cone_tensor(Q)


@cache
def _tensor_retraction():
    return cohomology_algebra(_tensor_dg())


@cache
def _tensor_model():
    hodge = _tensor_retraction()[1]
    return transfer_structure(_tensor_dg(), hodge, 6)


@cache
def _tensor_random_retraction():
    """A second retraction of the cone tensor, perturbed but class-compatible."""
    return cohomology_algebra(
        _tensor_dg(), rng=random.Random(5), cohomology=_tensor_retraction()[0]
    )


@cache
def _tensor_random_model():
    return transfer_structure(_tensor_dg(), _tensor_random_retraction()[1], 5)


@cache
def _truncated_dg():
    return windowed_cone_tensor(Q)


@cache
def _truncated_retraction():
    return cohomology_algebra(_truncated_dg())


@cache
def _truncated_model():
    return transfer_structure(_truncated_dg(), _truncated_retraction()[1], 4)


# --- a zero differential transfers to the algebra itself ----------------------

def test_zero_differential_cohomology_is_the_algebra():
    dg = _formal_dg()
    H, hodge = _formal_retraction()
    assert H.total_dim == dg.algebra.total_dim
    assert H.degrees == [-1, -1, 0, 0]
    assert "1" in H.names
    assert not hodge.homotopy.values


def test_zero_differential_model_is_formal():
    dg = _formal_dg()
    model = transfer_structure(dg, _formal_retraction()[1], 5)
    assert set(model.structure.ops) == {2}
    assert all(not model.inclusion[n].values for n in range(2, 6))
    assert verify_upto(model.structure, 5).ok
    report = verify_model_map(dg, model.structure, model.inclusion, 5)
    assert report.ok and report.checked_upto == 5
    assert universal_massey(model.structure).is_zero


def test_relabelled_cohomology_basis_gives_an_equivalent_model():
    # A hand-made second retraction onto the same classes in another order;
    # comparing models crosses distinct cohomology objects on purpose.
    dg = _formal_dg()
    H, hodge = _formal_retraction()
    a = dg.algebra
    perm = [3, 2, 1, 0]
    shuffled = GradedAlgebra(
        Q,
        [f"s{k}" for k in range(4)],
        [H.degrees[p] for p in perm],
        {
            (i, j): {
                perm.index(c): coeff
                for c, coeff in H.basis_product(perm[i], perm[j]).items()
            }
            for i in range(4)
            for j in range(4)
            if H.basis_product(perm[i], perm[j])
        },
        {perm.index(H.name_index["1"]): Q.one()},
    )
    include = MapCochain(
        shuffled, a, 1, 0,
        {(c,): hodge.include.value_on((perm[c],)) for c in range(4)},
    )
    project = MapCochain(
        a, shuffled, 1, 0,
        {
            (e,): {
                perm.index(c): coeff
                for c, coeff in hodge.project.value_on((e,)).items()
            }
            for e in range(a.total_dim)
        },
    )
    other = HodgeData(dg, shuffled, include, project, MapCochain(a, a, 1, -1, {}))
    assert minimal_models_agree(dg, hodge, other, 4).verdict == "equivalent"


# --- zero differential on a windowed algebra ----------------------------------

def test_windowed_cohomology_drops_the_top_degree():
    dg = _windowed_dg()
    H, _ = _windowed_retraction()
    assert H.window == (0, 7)
    assert H.total_dim == dg.algebra.total_dim - 1
    assert sorted(H.degrees) == list(range(8))


def test_windowed_transfer_verifies_with_bounded_checks():
    dg = _windowed_dg()
    model = transfer_structure(dg, _windowed_retraction()[1], 4)
    assert all(model.structure.op(n).is_zero() for n in (3, 4))
    report = verify_model_map(dg, model.structure, model.inclusion, 4)
    assert report.ok
    assert any(bound is not None for bound in report.checked_sums.values())
    assert verify_upto(model.structure, 4).ok


def test_windowed_retractions_reuse_and_agree():
    dg = _windowed_dg()
    H, hodge = _windowed_retraction()
    H2, hodge2 = cohomology_algebra(dg, cohomology=H)
    assert H2 is H
    assert minimal_models_agree(dg, hodge, hodge2, 4).verdict == "equivalent"


# --- an acyclic cone ------------------------------------------------------------

def test_acyclic_cone_has_one_class():
    H, hodge = _cone_retraction()
    assert H.total_dim == 1 and H.degrees == [0]
    assert hodge.homotopy.value_on((1,)) == {2: Q.one()}


def test_acyclic_cone_model_is_formal():
    dg = _cone_dg()
    model = transfer_structure(dg, _cone_retraction()[1], 6)
    assert set(model.structure.ops) == {2}
    assert verify_model_map(dg, model.structure, model.inclusion, 6).ok


# --- the cone tensor pins the sign conventions -----------------------------------

def test_tensor_cohomology_is_the_exterior_square():
    H, _ = _tensor_retraction()
    assert H.total_dim == 4
    assert sorted(H.degrees) == [0, 1, 2, 3]


def test_tensor_transfer_verifies_to_arity_six():
    dg = _tensor_dg()
    model = _tensor_model()
    assert verify_upto(model.structure, 6).ok
    assert verify_model_map(dg, model.structure, model.inclusion, 6).ok
    assert model_map_defect(dg, model.structure, model.inclusion, 2).is_zero()


def test_tensor_model_is_formal():
    model = _tensor_model()
    assert universal_massey(model.structure).is_zero
    formal = AInfinityStructure.from_algebra(_tensor_retraction()[0])
    assert greedy_gauge_equiv(model.structure, formal, 5).verdict == "equivalent"


def test_perturbed_retraction_has_corrections_and_verifies():
    dg = _tensor_dg()
    assert _tensor_random_retraction()[0] is _tensor_retraction()[0]
    model = _tensor_random_model()
    assert model.inclusion[2].values
    assert verify_upto(model.structure, 5).ok
    assert verify_model_map(dg, model.structure, model.inclusion, 5).ok


def test_sign_flipped_component_fails_the_morphism_equations():
    # The negative control for the correction sign: negating a genuinely
    # nonzero arity-2 component must break the equations at the next arity.
    dg = _tensor_dg()
    model = _tensor_random_model()
    components = dict(model.inclusion)
    f2 = components[2]
    components[2] = MapCochain(
        f2.domain, f2.codomain, 2, -1,
        {k: {e: Q.neg(v) for e, v in elem.items()} for k, elem in f2.values.items()},
    )
    report = verify_model_map(dg, model.structure, components, 3)
    assert not report.ok and 2 in report.failures


def test_two_retractions_give_equivalent_models():
    dg = _tensor_dg()
    hodge = _tensor_retraction()[1]
    hodge2 = _tensor_random_retraction()[1]
    assert minimal_models_agree(dg, hodge, hodge2, 5).verdict == "equivalent"


def test_comparison_across_distinct_cohomology_objects():
    dg = _tensor_dg()
    H, hodge = _tensor_retraction()
    H3, hodge3 = cohomology_algebra(dg, rng=random.Random(11))
    assert H3 is not H
    ident = cohomology_comparison(hodge, hodge3)
    assert ident.value_on((H.name_index["1"],)) == {H3.name_index["1"]: Q.one()}
    assert minimal_models_agree(dg, hodge, hodge3, 4).verdict == "equivalent"


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_every_retraction_transfers_a_verifying_model(seed):
    dg = _tensor_dg()
    H = _tensor_retraction()[0]
    hodge = cohomology_algebra(dg, rng=random.Random(seed), cohomology=H)[1]
    model = transfer_structure(dg, hodge, 4)
    assert verify_upto(model.structure, 4).ok
    assert verify_model_map(dg, model.structure, model.inclusion, 4).ok


# --- truncation keeps the transfer honest ----------------------------------------

def test_truncated_transfer_records_its_coverage():
    model = _truncated_model()
    assert model.structure.op(3).sum_bound is None
    assert model.structure.op(4).sum_bound == 3
    assert all(model.inclusion[n].sum_bound == 3 for n in (2, 3, 4))


def test_truncated_component_refuses_the_unknowable_key():
    # The arity-2 correction in output degree 3 would need a product in
    # degree 4, one above the window: asking for it must raise, not read 0.
    H = _truncated_retraction()[0]
    model = _truncated_model()
    (t,) = [c for c in range(H.total_dim) if H.degrees[c] == 2]
    with pytest.raises(WindowOverflow, match="input-degree sums up to 3"):
        model.inclusion[2].value_on((t, t))


def test_truncated_transfer_verifies_and_agrees():
    dg = _truncated_dg()
    H, hodge = _truncated_retraction()
    assert H.window == (0, 2) and sorted(H.degrees) == [0, 1, 2]
    model = _truncated_model()
    assert verify_upto(model.structure, 4).ok
    report = verify_model_map(dg, model.structure, model.inclusion, 4)
    assert report.ok
    assert report.checked_sums[2] == 2
    hodge2 = cohomology_algebra(dg, rng=random.Random(3), cohomology=H)[1]
    assert minimal_models_agree(dg, hodge, hodge2, 4).verdict == "equivalent"


# --- validation ------------------------------------------------------------------

def test_differential_must_be_a_differential():
    algebra = trivial_extension(Q)
    with pytest.raises(ValueError, match="bidegree"):
        DGAlgebra(algebra, MapCochain(algebra, algebra, 1, 0, {}))
    other = eps_t_window(Q, 8)
    with pytest.raises(ValueError, match="map the algebra to itself"):
        DGAlgebra(algebra, zero_differential(other))


def test_differential_must_square_to_zero():
    one = Q.one()
    algebra = GradedAlgebra(
        Q, ["1", "a", "b", "c"], [0, 0, 1, 2],
        {(0, i): {i: one} for i in range(4)}
        | {(i, 0): {i: one} for i in range(1, 4)},
        {0: one},
    )
    d = MapCochain(algebra, algebra, 1, 1, {(1,): {2: one}, (2,): {3: one}})
    with pytest.raises(ValueError, match="square to zero on a"):
        DGAlgebra(algebra, d)


def test_differential_must_satisfy_leibniz():
    one = Q.one()
    algebra = GradedAlgebra(
        Q, ["1", "x", "y"], [0, 0, 1],
        {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one},
         (0, 2): {2: one}, (2, 0): {2: one}, (1, 1): {1: one}},
        {0: one},
    )
    d = MapCochain(algebra, algebra, 1, 1, {(1,): {2: one}})
    with pytest.raises(ValueError, match="Leibniz rule fails on \\(x, x\\)"):
        DGAlgebra(algebra, d)


def test_retraction_data_is_checked():
    dg = _cone_dg()
    H, hodge = _cone_retraction()
    a = dg.algebra
    with pytest.raises(ValueError, match="retraction identity fails"):
        HodgeData(dg, H, hodge.include, hodge.project, MapCochain(a, a, 1, -1, {}))
    tensor = _tensor_dg()
    Ht, hodget = _tensor_retraction()
    ta = tensor.algebra
    leak = ta.names.index("e|w")
    values = {key: dict(elem) for key, elem in hodget.project.values.items()}
    values[(leak,)] = {Ht.name_index["1"]: Q.one()}
    bad_project = MapCochain(ta, Ht, 1, 0, values)
    with pytest.raises(ValueError, match="projection does not vanish"):
        HodgeData(tensor, Ht, hodget.include, bad_project, hodget.homotopy)


def test_unit_must_survive_to_cohomology():
    one = Q.one()
    algebra = GradedAlgebra(
        Q, ["1", "w"], [0, -1],
        {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}},
        {0: one},
    )
    d = MapCochain(algebra, algebra, 1, 1, {(1,): {0: one}})
    with pytest.raises(ValueError, match="unit is a coboundary"):
        cohomology_algebra(DGAlgebra(algebra, d))


def test_window_must_determine_at_least_degree_zero():
    one = Q.one()
    tiny = GradedAlgebra(Q, ["1"], [0], {(0, 0): {0: one}}, {0: one}, window=(0, 0))
    with pytest.raises(InconclusiveWindow, match="determines no cohomological degree"):
        cohomology_algebra(DGAlgebra(tiny, zero_differential(tiny)))
    hovering = GradedAlgebra(
        Q, ["1", "y"], [0, 1],
        {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}},
        {0: one},
        window=(0, 1),
        floor_vanishes=False,
    )
    with pytest.raises(InconclusiveWindow, match="vanishing floor"):
        cohomology_algebra(DGAlgebra(hovering, zero_differential(hovering)))


def test_mismatched_wiring_is_rejected():
    dg = _formal_dg()
    hodge = _formal_retraction()[1]
    with pytest.raises(ValueError, match="does not match the computed one"):
        cohomology_algebra(_tensor_dg(), cohomology=_cone_retraction()[0])
    with pytest.raises(ValueError, match="does not present this dg algebra"):
        transfer_structure(dg, _tensor_retraction()[1], 4)
    with pytest.raises(ValueError, match="starts at arity 2"):
        transfer_structure(dg, hodge, 1)
    with pytest.raises(ValueError, match="different dg algebras"):
        cohomology_comparison(hodge, _tensor_retraction()[1])
