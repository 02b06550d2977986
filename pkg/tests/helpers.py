"""Shared fixture builders for the test suite."""

from masseykit.ainfty import MapCochain
from masseykit.galg import GradedAlgebra
from masseykit.hochschild import Cochain, domain_keys
from masseykit.transfer import DGAlgebra


def ungraded(field, names, products, unit_index=0):
    """An algebra concentrated in degree zero, from a named product table."""
    index = {name: i for i, name in enumerate(names)}
    table = {}
    for (a, b), value in products.items():
        table[(index[a], index[b])] = {index[c]: coeff for c, coeff in value.items()}
    return GradedAlgebra(field, names, [0] * len(names), table, {unit_index: field.one()})


def poly_zero(field, ell):
    """k[x]/(x^ell) concentrated in degree zero."""
    names = ["1"] + [f"x{i}" if i > 1 else "x" for i in range(1, ell)]
    products = {(i, j): {i + j: field.one()} for i in range(ell) for j in range(ell) if i + j < ell}
    return GradedAlgebra(field, names, [0] * ell, products, {0: field.one()})


def matrix_algebra_2x2(field):
    """The 2x2 matrix algebra in degree zero."""
    names = ["e11", "e12", "e21", "e22"]
    pos = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    products = {}
    for (a, b), i in pos.items():
        for (c, d), j in pos.items():
            if b == c:
                products[(i, j)] = {pos[(a, d)]: field.one()}
    unit = {0: field.one(), 3: field.one()}
    return GradedAlgebra(field, names, [0, 0, 0, 0], products, unit)


def product_of_fields(field):
    """k x k in degree zero."""
    return ungraded(
        field,
        ["e1", "e2"],
        {("e1", "e1"): {"e1": field.one()}, ("e2", "e2"): {"e2": field.one()}},
    )


def exterior_graded(field):
    """k[e]/(e^2) with the generator in degree one."""
    one = field.one()
    return GradedAlgebra(
        field,
        ["1", "e"],
        [0, 1],
        {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}},
        {0: one},
    )


def eps_t_window(field, top):
    """Truncation of k[eps, t]/(eps^2), |eps| = 1, |t| = 2, to degrees [0, top]."""
    names, degrees = [], []
    position = {}
    for a in (0, 1):
        for i in range(top + 1):
            degree = a + 2 * i
            if degree > top:
                break
            position[(a, i)] = len(names)
            if a == 0 and i == 0:
                names.append("1")
            elif a == 0:
                names.append(f"t{i}" if i > 1 else "t")
            elif i == 0:
                names.append("eps")
            else:
                names.append(f"eps_t{i}" if i > 1 else "eps_t")
            degrees.append(degree)
    one = field.one()
    products = {}
    for (a, i), m in position.items():
        for (b, j), n in position.items():
            if a + b >= 2:
                continue
            target = (a + b, i + j)
            if target in position:
                products[(m, n)] = {position[target]: one}
    return GradedAlgebra(field, names, degrees, products, {0: one}, window=(0, top))


def random_cochain(algebra, arity, qdeg, rng, density=0.7):
    """A random cochain on the full representable domain."""
    values = {}
    for key in domain_keys(algebra, arity, qdeg):
        if rng.random() > density:
            continue
        vdeg = sum(algebra.degrees[i] for i in key) + qdeg
        if not algebra.basis_indices(vdeg):
            continue
        values[key] = algebra.random_element(rng, degree=vdeg)
    return Cochain(algebra, arity, qdeg, values)


def even_truncated(field, ell):
    """k[x]/(x^ell) with the generator in degree two (2-sparse, not windowed)."""
    names = ["1"] + [f"x{i}" if i > 1 else "x" for i in range(1, ell)]
    degrees = [2 * i for i in range(ell)]
    products = {(i, j): {i + j: field.one()} for i in range(ell) for j in range(ell) if i + j < ell}
    return GradedAlgebra(field, names, degrees, products, {0: field.one()})


def trivial_extension(field):
    """k[x]/(x^2) in degree zero extended by a free rank-one line in degree -1."""
    one = field.one()
    products = {
        (0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one},
        (0, 2): {2: one}, (2, 0): {2: one},
        (0, 3): {3: one}, (3, 0): {3: one},
        (1, 2): {3: one}, (2, 1): {3: one},
    }
    return GradedAlgebra(field, ["1", "x", "u", "xu"], [0, 0, -1, -1], products, {0: one})


def triple_product_model(field, top):
    """The nonformal model on the window-[0, top] truncation of k[eps, t]/(eps^2).

    The arity-3 operation sends (eps t^a, eps t^b, eps t^c) to t^(1+a+b+c)
    whenever that power survives the truncation; together with the product
    it satisfies the structure relations at every arity.
    """
    from masseykit.ainfty import AInfinityStructure
    from masseykit.hochschild import multiplication_cochain

    algebra = eps_t_window(field, top)
    index = {name: i for i, name in enumerate(algebra.names)}

    def eps_pow(k):
        return index["eps" if k == 0 else ("eps_t" if k == 1 else f"eps_t{k}")]

    def t_pow(k):
        return index["1" if k == 0 else (f"t{k}" if k > 1 else "t")]

    values = {}
    kmax = (top - 1) // 2
    for a in range(kmax + 1):
        for b in range(kmax + 1):
            for c in range(kmax + 1):
                if 2 * (1 + a + b + c) > top:
                    continue
                values[(eps_pow(a), eps_pow(b), eps_pow(c))] = {
                    t_pow(1 + a + b + c): field.one()
                }
    m3 = Cochain(algebra, 3, -1, values)
    structure = AInfinityStructure(
        algebra, {2: multiplication_cochain(algebra), 3: m3}
    )
    return algebra, structure


def known_values(cochain):
    """Value entries on keys within the cochain's coverage bound."""
    if cochain.sum_bound is None:
        return dict(cochain.values)
    degrees = cochain.algebra.degrees
    return {
        key: elem for key, elem in cochain.values.items()
        if sum(degrees[i] for i in key) <= cochain.sum_bound
    }


def acyclic_cone(field):
    """span(1, x, w) with d(w) = x: one cohomology class, in degree zero."""
    one = field.one()
    algebra = GradedAlgebra(
        field, ["1", "x", "w"], [0, 0, -1],
        {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one},
         (0, 2): {2: one}, (2, 0): {2: one}},
        {0: one},
    )
    d = MapCochain(algebra, algebra, 1, 1, {(2,): {1: one}})
    return DGAlgebra(algebra, d)


def cone_tensor(field):
    """k[e,t]/(e^2, t^2) tensored with the acyclic cone: formal, 12-dim.

    Basis (b, u) at index 3 * b + u pairs a monomial of the first factor
    with 1, x, or w of the cone; the differential kills each b|w against
    b|x with the sign of |b|.
    """
    one = field.one()
    b_names = ["1", "e", "t", "et"]
    b_degs = [0, 1, 2, 3]
    b_prod = {}
    for i in range(4):
        b_prod[(0, i)] = {i: one}
        b_prod[(i, 0)] = {i: one}
    b_prod[(1, 2)] = {3: one}
    b_prod[(2, 1)] = {3: one}
    k_names = ["1", "x", "w"]
    k_degs = [0, 0, -1]
    k_prod = {}
    for i in range(3):
        k_prod[(0, i)] = {i: one}
        k_prod[(i, 0)] = {i: one}
    names = [f"{bn}|{un}" for bn in b_names for un in k_names]
    degrees = [bd + kd for bd in b_degs for kd in k_degs]
    products = {}
    for b1 in range(4):
        for u1 in range(3):
            for b2 in range(4):
                for u2 in range(3):
                    bb = b_prod.get((b1, b2))
                    uu = k_prod.get((u1, u2))
                    if not bb or not uu:
                        continue
                    sign = -1 if (k_degs[u1] % 2 and b_degs[b2] % 2) else 1
                    entry = {}
                    for bi, bc in bb.items():
                        for ui, uc in uu.items():
                            entry[3 * bi + ui] = field.mul(
                                field.from_int(sign), field.mul(bc, uc)
                            )
                    products[(3 * b1 + u1, 3 * b2 + u2)] = entry
    algebra = GradedAlgebra(field, names, degrees, products, {0: one})
    d_vals = {}
    for b in range(4):
        sign = -1 if b_degs[b] % 2 else 1
        d_vals[(3 * b + 2,)] = {3 * b + 1: field.from_int(sign)}
    d = MapCochain(algebra, algebra, 1, 1, d_vals)
    return DGAlgebra(algebra, d)


def windowed_cone_tensor(field, top=3):
    """k[e,t]/(e^2, t^2) tensored with a degree-raising cone, cut at ``top``.

    Here the cone is span(1, w, x) with |w| = 0 and d(w) = x in degree one,
    so the tensor lives in degrees [0, top + 1] and the truncation to the
    window [0, top] loses both products and differentials at the top.
    """
    one = field.one()
    b_names = ["1", "e", "t", "et"]
    b_degs = [0, 1, 2, 3]
    b_prod = {}
    for i in range(4):
        b_prod[(0, i)] = {i: one}
        b_prod[(i, 0)] = {i: one}
    b_prod[(1, 2)] = {3: one}
    b_prod[(2, 1)] = {3: one}
    k_names = ["1", "w", "x"]
    k_degs = [0, 0, 1]
    k_prod = {}
    for i in range(3):
        k_prod[(0, i)] = {i: one}
        k_prod[(i, 0)] = {i: one}
    pairs = [(b, u) for b in range(4) for u in range(3)
             if b_degs[b] + k_degs[u] <= top]
    index = {p: k for k, p in enumerate(pairs)}
    names = [f"{b_names[b]}|{k_names[u]}" for b, u in pairs]
    degrees = [b_degs[b] + k_degs[u] for b, u in pairs]
    products = {}
    for (b1, u1) in pairs:
        for (b2, u2) in pairs:
            bb = b_prod.get((b1, b2))
            uu = k_prod.get((u1, u2))
            if not bb or not uu:
                continue
            sign = -1 if (k_degs[u1] % 2 and b_degs[b2] % 2) else 1
            entry = {}
            for bi, bc in bb.items():
                for ui, uc in uu.items():
                    if (bi, ui) in index:
                        entry[index[(bi, ui)]] = field.mul(
                            field.from_int(sign), field.mul(bc, uc)
                        )
            if entry:
                products[(index[(b1, u1)], index[(b2, u2)])] = entry
    algebra = GradedAlgebra(
        field, names, degrees, products, {0: one}, window=(0, top)
    )
    d_vals = {}
    for (b, u) in pairs:
        if u != 1:
            continue
        sign = -1 if b_degs[b] % 2 else 1
        if (b, 2) in index:
            d_vals[(index[(b, u)],)] = {index[(b, 2)]: field.from_int(sign)}
    d = MapCochain(algebra, algebra, 1, 1, d_vals)
    return DGAlgebra(algebra, d)
