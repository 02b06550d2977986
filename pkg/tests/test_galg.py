"""Tests for graded algebras: windows, validation reports, shifts, bimodules,
Frobenius certificates, and twisted Laurent extensions."""

import random

from fractions import Fraction

import pytest

from masseykit.errors import WindowOverflow
from masseykit.exactlin import Matrix, PrimeField, Rationals
from masseykit.galg import (
    GradedAlgebra,
    ShiftedModule,
    component_as_bimodule,
    degree0_part,
    is_d_sparse,
    is_frobenius,
    twisted_laurent,
    validate_algebra,
)

Q = Rationals()


def poly_quotient(field, ell, var_degree=1):
    """k[x]/(x^ell) with basis 1, x, ..., x^(ell-1)."""
    names = ["1"] + [f"x{i}" if i > 1 else "x" for i in range(1, ell)]
    degrees = [i * var_degree for i in range(ell)]
    products = {(i, j): {i + j: field.one()} for i in range(ell) for j in range(ell) if i + j < ell}
    return GradedAlgebra(field, names, degrees, products, {0: field.one()})


def windowed_powers(field, top):
    """Truncation of k[t] (|t| = 2) to the degree window [0, top]."""
    count = top // 2 + 1
    names = ["1"] + [f"t{i}" if i > 1 else "t" for i in range(1, count)]
    degrees = [2 * i for i in range(count)]
    products = {(i, j): {i + j: field.one()} for i in range(count) for j in range(count) if i + j < count}
    return GradedAlgebra(field, names, degrees, products, {0: field.one()}, window=(0, top))


def test_truncated_polynomial_is_valid_and_multiplies():
    alg = poly_quotient(Q, 3)
    alg.validate()
    x = alg.basis_element(1)
    assert alg.mul(x, x) == {2: Fraction(1)}
    assert alg.mul(alg.mul(x, x), x) == {}
    assert alg.mul(alg.one(), x) == x
    assert alg.total_dim == 3
    assert alg.dim(1) == 1 and alg.basis_indices(1) == (1,)


def test_validate_rejects_broken_grading():
    products = {(0, 0): {0: Fraction(1)}, (1, 1): {1: Fraction(1)}}
    alg = GradedAlgebra(Q, ["1", "x"], [0, 1], products, {0: Fraction(1)})
    with pytest.raises(ValueError, match="not homogeneous"):
        alg.validate()


def test_validate_rejects_broken_associativity():
    products = {(i, j): {i + j: Fraction(1)} for i in range(4) for j in range(4) if i + j < 4}
    products[(1, 2)] = {3: Fraction(2)}  # x*x2 = 2*x3 while x2*x = x3 breaks (x,x,x)
    bad = GradedAlgebra(Q, ["1", "x", "x2", "x3"], [0, 1, 2, 3], products, {0: Fraction(1)})
    with pytest.raises(ValueError, match="associativity"):
        bad.validate()


def test_validate_rejects_broken_unit():
    products = {(0, 0): {0: Fraction(1)}, (0, 1): {1: Fraction(2)}, (1, 0): {1: Fraction(1)}}
    alg = GradedAlgebra(Q, ["1", "x"], [0, 1], products, {0: Fraction(1)})
    with pytest.raises(ValueError, match="unit law"):
        alg.validate()


def test_window_overflow_above_top():
    alg = windowed_powers(Q, 4)
    alg.validate()
    t, t2 = alg.basis_element(1), alg.basis_element(2)
    assert alg.mul(t, t) == t2
    with pytest.raises(WindowOverflow):
        alg.mul(t, t2)


def test_window_floor_behaviour_is_explicit():
    # Laurent-style fixture: degrees on both sides of zero, nothing vanishes.
    names = ["u", "1", "v"]
    degrees = [-1, 0, 1]
    one = Fraction(1)
    products = {
        (1, 0): {0: one}, (0, 1): {0: one},
        (1, 1): {1: one},
        (1, 2): {2: one}, (2, 1): {2: one},
        (0, 2): {1: one}, (2, 0): {1: one},  # u*v == v*u == 1
    }
    alg = GradedAlgebra(Q, names, degrees, products, {1: one}, window=(-1, 1), floor_vanishes=False)
    alg.validate()
    u, v = alg.basis_element(0), alg.basis_element(2)
    assert alg.mul(u, v) == alg.one()
    with pytest.raises(WindowOverflow):
        alg.mul(u, u)
    with pytest.raises(WindowOverflow):
        alg.mul(v, v)


def test_window_floor_zero_when_promised():
    alg = windowed_powers(Q, 4)
    # A vanishing floor is the default; products never reach it here, but the
    # flag is what cochain evaluation relies on for negative value degrees.
    assert alg.floor_vanishes
    assert alg.window == (0, 4)


def test_basis_outside_window_rejected():
    with pytest.raises(ValueError, match="outside window"):
        GradedAlgebra(Q, ["1", "t"], [0, 5], {}, {0: Fraction(1)}, window=(0, 4))


def test_element_helpers():
    alg = poly_quotient(Q, 3)
    x = alg.basis_element(1)
    mixed = alg.add(x, alg.one())
    assert alg.element_degree(x) == 1
    assert alg.element_degree({}) is None
    with pytest.raises(ValueError, match="not homogeneous"):
        alg.element_degree(mixed)
    comps = alg.homogeneous_components(mixed)
    assert comps == {0: {0: Fraction(1)}, 1: {1: Fraction(1)}}
    assert alg.sub(mixed, alg.one()) == x
    assert alg.scale(Fraction(0), mixed) == {}
    assert alg.fmt_element(alg.add(alg.scale(Fraction(3, 2), x), alg.one())) == "1 + 3/2*x"
    assert alg.fmt_element({}) == "0"


def test_random_element_degrees():
    import random

    alg = poly_quotient(Q, 4)
    rng = random.Random(0)
    elem = alg.random_element(rng, degree=2, nonzero=True)
    assert alg.element_degree(elem) == 2


def test_left_and_right_multiplication_matrices():
    alg = poly_quotient(Q, 3)
    x = alg.basis_element(1)
    left = alg.left_mul_matrix(x)
    # x * (1, x, x2) = (x, x2, 0): columns are images.
    assert left.column(0) == [Fraction(0), Fraction(1), Fraction(0)]
    assert left.column(1) == [Fraction(0), Fraction(0), Fraction(1)]
    assert left.column(2) == [Fraction(0), Fraction(0), Fraction(0)]
    assert alg.right_mul_matrix(x) == left  # commutative
    with pytest.raises(ValueError, match="windowed"):
        windowed_powers(Q, 4).left_mul_matrix({1: Fraction(1)})


def test_prime_field_algebra():
    F2 = PrimeField(2)
    alg = poly_quotient(F2, 2)
    alg.validate()
    x = alg.basis_element(1)
    assert alg.add(x, x) == {}


def eps_t(field):
    """k[e,t]/(e^2, t^2) with |e| = 1, |t| = 2 (so degrees 0..3, no window)."""
    names = ["1", "e", "t", "et"]
    degrees = [0, 1, 2, 3]
    products = {}
    for i in range(4):
        products[(0, i)] = {i: field.one()}
        products[(i, 0)] = {i: field.one()}
    products[(1, 2)] = {3: field.one()}
    products[(2, 1)] = {3: field.one()}
    return GradedAlgebra(field, names, degrees, products, {0: field.one()})


def upper_triangular(field):
    """Upper-triangular 2x2 matrices on the basis e11, e12, e22, all in degree 0."""
    one = field.one()
    products = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 2): {1: one}, (2, 2): {2: one}}
    return GradedAlgebra(field, ["e11", "e12", "e22"], [0, 0, 0], products, {0: one, 2: one})


# --- report-style validation --------------------------------------------------------


def test_validate_algebra_empty_report_means_valid():
    assert validate_algebra(poly_quotient(Q, 3)) == []
    assert validate_algebra(poly_quotient(Q, 2, var_degree=0)) == []
    assert validate_algebra(windowed_powers(Q, 4)) == []


def test_validate_algebra_names_homogeneity_violation():
    products = {(0, 0): {0: Fraction(1)}, (1, 1): {1: Fraction(1)}}
    broken = GradedAlgebra(Q, ["1", "x"], [0, 1], products, {0: Fraction(1)})
    report = validate_algebra(broken)
    assert any("x*x is not homogeneous" in line for line in report)


def test_validate_algebra_names_witness_triple():
    products = {(i, j): {i + j: Fraction(1)} for i in range(4) for j in range(4) if i + j < 4}
    products[(1, 2)] = {3: Fraction(2)}
    broken = GradedAlgebra(Q, ["1", "x", "x2", "x3"], [0, 1, 2, 3], products, {0: Fraction(1)})
    report = validate_algebra(broken)
    assert any("associativity fails on (x, x, x)" in line for line in report)


def test_validate_algebra_reports_unit_law():
    products = {(0, 0): {0: Fraction(1)}, (0, 1): {1: Fraction(2)}, (1, 0): {1: Fraction(1)}}
    broken = GradedAlgebra(Q, ["1", "x"], [0, 1], products, {0: Fraction(1)})
    report = validate_algebra(broken)
    assert any("unit law fails on basis element x" in line for line in report)


# --- degree sparsity ----------------------------------------------------------------


def test_degree_sparsity():
    assert is_d_sparse(eps_t(Q), 1)
    assert not is_d_sparse(eps_t(Q), 2)
    assert is_d_sparse(windowed_powers(Q, 4), 2)
    with pytest.raises(ValueError, match="positive"):
        is_d_sparse(eps_t(Q), 0)


# --- degree shifts ------------------------------------------------------------------


def test_shifted_module_is_definitional():
    base = eps_t(Q)
    shifted = ShiftedModule(base, 2)
    assert shifted.degrees_present() == [-2, -1, 0, 1]
    for degree in range(-3, 4):
        assert shifted.dim(degree) == base.dim(degree + 2)
        assert shifted.basis_indices(degree) == base.basis_indices(degree + 2)


# --- degree-0 part ------------------------------------------------------------------


def test_degree0_part_collapses_to_scalars():
    part = degree0_part(eps_t(Q))
    assert part.algebra.total_dim == 1
    assert part.inclusion == (0,)
    assert validate_algebra(part.algebra) == []


def test_degree0_part_of_degree_zero_algebra_is_itself():
    alg = poly_quotient(Q, 2, var_degree=0)
    part = degree0_part(alg)
    assert part.algebra.names == alg.names
    assert part.inclusion == (0, 1)
    x = part.algebra.basis_element(1)
    assert part.algebra.mul(x, x) == {}


def test_degree0_part_requires_a_degree_zero_unit():
    odd = GradedAlgebra(Q, ["u"], [1], {}, {0: Fraction(1)})
    with pytest.raises(ValueError, match="no unit in degree 0"):
        degree0_part(odd)


# --- twisted Laurent extensions -----------------------------------------------------


def scalars(field):
    return GradedAlgebra(field, ["1"], [0], {(0, 0): {0: field.one()}}, {0: field.one()})


def test_laurent_extension_of_scalars():
    laurent = twisted_laurent(scalars(Q), [{0: Fraction(1)}], 1)
    assert laurent.mul(laurent.generator(1), laurent.generator(-1)) == laurent.one()
    assert laurent.dim(5) == 1 and laurent.dim(-3) == 1
    assert laurent.component_degree(2) == -2
    assert is_d_sparse(laurent, 1)


def test_identity_twist_makes_the_generator_central():
    base = poly_quotient(Q, 2, var_degree=0)
    ident = twisted_laurent(base, [{0: Fraction(1)}, {1: Fraction(1)}], 2)
    x = ident.element({1: Fraction(1)})
    assert ident.mul(ident.generator(), x) == ident.mul(x, ident.generator())


def sign_twisted(field):
    base = poly_quotient(field, 2, var_degree=0)
    minus = field.neg(field.one())
    return twisted_laurent(base, [{0: field.one()}, {1: minus}], 2)


def test_sign_twist_slides_past_the_generator():
    tl = sign_twisted(Q)
    x = tl.element({1: Fraction(1)})
    slid = tl.mul(tl.generator(), x)
    assert slid == tl.scale(Fraction(-1), tl.mul(x, tl.generator()))
    assert tl.twist(2, {1: Fraction(1)}) == {1: Fraction(1)}
    assert tl.mul(x, x) == {}
    assert is_d_sparse(tl, 2) and not is_d_sparse(tl, 4)


def test_twist_must_be_an_automorphism():
    base = poly_quotient(Q, 2, var_degree=0)
    one = Fraction(1)
    with pytest.raises(ValueError, match="not invertible"):
        twisted_laurent(base, [{0: one}, {}], 2)
    with pytest.raises(ValueError, match="not multiplicative"):
        twisted_laurent(base, [{0: one}, {0: one, 1: one}], 2)
    with pytest.raises(ValueError, match="does not fix the unit"):
        twisted_laurent(base, [{0: Fraction(2)}, {1: one}], 2)
    with pytest.raises(ValueError, match="concentrated in degree 0"):
        twisted_laurent(poly_quotient(Q, 2), [{0: one}, {1: one}], 2)


def test_materialized_window_is_honest():
    tl = sign_twisted(Q)
    snapshot = tl.materialize(1)
    assert snapshot.window == (-2, 2) and not snapshot.floor_vanishes
    assert validate_algebra(snapshot) == []
    generator = snapshot.basis_element(snapshot.name_index["1*i^1"])
    x = snapshot.basis_element(snapshot.name_index["x"])
    assert snapshot.mul(generator, x) == {snapshot.name_index["x*i^1"]: Fraction(-1)}
    with pytest.raises(WindowOverflow):
        snapshot.mul(generator, generator)


def test_validate_algebra_accepts_twisted_laurent():
    assert validate_algebra(sign_twisted(Q)) == []


def test_degree0_part_of_twisted_laurent_is_the_base():
    tl = sign_twisted(Q)
    part = degree0_part(tl)
    assert part.algebra is tl.base
    assert part.inclusion == (0, 1)


def test_twisted_laurent_formatting():
    tl = sign_twisted(Q)
    elem = tl.add(tl.one(), tl.element({1: Fraction(1)}, 2))
    assert tl.fmt_element(elem) == "1 + (x)*i^2"
    assert tl.fmt_element(tl.zero()) == "0"


# --- component bimodules ------------------------------------------------------------


def test_component_bimodule_of_twisted_laurent():
    tl = sign_twisted(Q)
    bimodule = component_as_bimodule(tl, -2)
    bimodule.validate()
    assert bimodule.dimension == 2
    assert bimodule.names == ("1*i^1", "x*i^1")
    # The right action is plain right multiplication after one twist.
    assert bimodule.right_action[1] == bimodule.action_of({1: Fraction(-1)}, "left")
    for i in range(tl.base.total_dim):
        image = tl.twist(1, tl.base.basis_element(i))
        assert bimodule.left_action[i] == bimodule.action_of(image, "right")


def test_identity_twist_gives_the_diagonal_bimodule():
    base = poly_quotient(Q, 2, var_degree=0)
    ident = twisted_laurent(base, [{0: Fraction(1)}, {1: Fraction(1)}], 2)
    bimodule = component_as_bimodule(ident, -2)
    bimodule.validate()
    assert all(bimodule.left_action[i] == bimodule.right_action[i] for i in range(2))


def test_component_bimodule_zero_cases():
    tl = sign_twisted(Q)
    off = component_as_bimodule(tl, -1)
    off.validate()
    assert off.dimension == 0
    assert component_as_bimodule(eps_t(Q), 5).dimension == 0


def test_component_bimodule_of_graded_algebra():
    one = Fraction(1)
    products = {
        (0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one},
        (0, 2): {2: one}, (2, 0): {2: one}, (0, 3): {3: one}, (3, 0): {3: one},
        (1, 2): {3: one}, (2, 1): {3: one},
    }
    wide = GradedAlgebra(Q, ["1", "x", "w", "xw"], [0, 0, 1, 1], products, {0: one})
    assert validate_algebra(wide) == []
    bimodule = component_as_bimodule(wide, 1)
    bimodule.validate()
    assert bimodule.dimension == 2
    assert bimodule.names == ("w", "xw")
    assert bimodule.left_action[1].rows == [[Fraction(0), Fraction(0)], [Fraction(1), Fraction(0)]]
    assert bimodule.left_action[1] == bimodule.right_action[1]


def test_component_bimodule_refuses_unknown_degrees():
    windowed = windowed_powers(Q, 4)
    with pytest.raises(WindowOverflow, match="outside the window"):
        component_as_bimodule(windowed, 6)


def test_bimodule_validate_rejects_noncommuting_actions():
    base = poly_quotient(Q, 2, var_degree=0)
    zero, one = Fraction(0), Fraction(1)
    ident = Matrix.identity(Q, 2)
    lower = Matrix(Q, [[zero, zero], [one, zero]])
    upper = Matrix(Q, [[zero, one], [zero, zero]])
    from masseykit.galg import Bimodule

    broken = Bimodule(base, 2, ("a", "b"), (ident, lower), (ident, upper))
    with pytest.raises(ValueError, match="do not commute"):
        broken.validate()


# --- Frobenius certificates ---------------------------------------------------------


def test_scalars_are_frobenius():
    certificate = is_frobenius(scalars(Q))
    assert certificate
    assert certificate.form == {0: Fraction(1)}
    assert certificate.method == "dual-basis"


def test_dual_numbers_are_frobenius_via_the_top_coefficient():
    certificate = is_frobenius(poly_quotient(Q, 2, var_degree=0))
    assert certificate.frobenius
    assert certificate.form == {1: Fraction(1)}
    # Independent check: the pairing of coefficient-of-x is the swap matrix.
    pairing = Matrix(Q, [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]])
    assert pairing.rank() == 2


def test_upper_triangular_matrices_are_not_frobenius():
    certificate = is_frobenius(upper_triangular(Q))
    assert not certificate
    assert certificate.form is None
    assert certificate.method == "symbolic"
    assert "vanishes identically" in certificate.detail


def test_frobenius_over_prime_fields():
    assert is_frobenius(poly_quotient(PrimeField(5), 2, var_degree=0)).frobenius
    certificate = is_frobenius(upper_triangular(PrimeField(5)))
    assert not certificate and certificate.method == "symbolic"


def test_frobenius_requires_degree_zero():
    with pytest.raises(ValueError, match="degree 0"):
        is_frobenius(poly_quotient(Q, 3))
    with pytest.raises(ValueError, match="windowed"):
        is_frobenius(GradedAlgebra(Q, ["1"], [0], {(0, 0): {0: Fraction(1)}}, {0: Fraction(1)}, window=(0, 0)))


def change_basis(alg, cols):
    """The same algebra presented on the basis whose columns are ``cols``."""
    f = alg.field
    m = alg.total_dim
    P = Matrix.from_columns(f, cols, nrows=m)
    inverse_cols = []
    for j in range(m):
        target = [f.one() if r == j else f.zero() for r in range(m)]
        solution = P.solve(target)
        assert solution is not None
        inverse_cols.append(solution)
    Pinv = Matrix.from_columns(f, inverse_cols, nrows=m)
    products = {}
    for i in range(m):
        for j in range(m):
            fi = {r: c for r, c in enumerate(P.column(i)) if not f.is_zero(c)}
            fj = {r: c for r, c in enumerate(P.column(j)) if not f.is_zero(c)}
            dense = [alg.mul(fi, fj).get(r, f.zero()) for r in range(m)]
            entry = {r: c for r, c in enumerate(Pinv.mul_vec(dense)) if not f.is_zero(c)}
            if entry:
                products[(i, j)] = entry
    unit_dense = [alg.unit.get(r, f.zero()) for r in range(m)]
    unit = {r: c for r, c in enumerate(Pinv.mul_vec(unit_dense)) if not f.is_zero(c)}
    return GradedAlgebra(f, [f"f{i}" for i in range(m)], [0] * m, products, unit)


def random_invertible_columns(rng, field, m):
    while True:
        cols = [[field.random(rng) for _ in range(m)] for _ in range(m)]
        if Matrix.from_columns(field, cols, nrows=m).rank() == m:
            return cols


def test_frobenius_is_invariant_under_basis_change():
    rng = random.Random(7)
    dual = poly_quotient(Q, 2, var_degree=0)
    upper = upper_triangular(Q)
    for _ in range(3):
        moved = change_basis(dual, random_invertible_columns(rng, Q, 2))
        assert validate_algebra(moved) == []
        assert is_frobenius(moved).frobenius
        moved = change_basis(upper, random_invertible_columns(rng, Q, 3))
        assert validate_algebra(moved) == []
        assert not is_frobenius(moved)
