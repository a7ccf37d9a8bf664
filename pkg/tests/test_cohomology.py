import random

import pytest

import oracles as O
from ipw import cohomology as C
from ipw import example_names, example_path, linalg, load_problem
from ipw.infinitesimal import AffineElement, affine_bracket, dy, extract
from ipw.multivector import Multivector
from ipw.polyring import Poly, VarContext, parse_poly

# the same structures, typed out again for the sympy oracles
ORACLE_INPUT = {
    "so3_origin": ([], ["y1", "y2", "y3"], {("y1", "y2"): "y3", ("y2", "y3"): "y1",
                                            ("y1", "y3"): "-y2"}, 0, 3),
    "sl2_origin": ([], ["h", "e", "f"], {("h", "e"): "2*e", ("h", "f"): "-2*f",
                                         ("e", "f"): "h"}, 0, 3),
    "abelian2_point": ([], ["y1", "y2"], {}, 0, 3),
    "rank1_curvature": (["x1", "x2"], ["y1"], {("x1", "x2"): "1+y1"}, 0, 3),
    "rank1_connection": (["x1", "x2"], ["y1"], {("x1", "x2"): "x2", ("x1", "y1"): "y1"}, 0, 3),
    "so3_leaf": (["x1", "x2"], ["y1", "y2", "y3"], {("x1", "x2"): "1", ("y1", "y2"): "y3",
                                                    ("y2", "y3"): "y1", ("y1", "y3"): "-y2"}, 2, 2),
}


def data_of(name):
    pr = load_problem(example_path(name))
    return extract(pr.pi, pr.ctx)


def from_bivector(base, normal, comps):
    ctx = VarContext(base, normal)
    pi = Multivector(ctx, 2, {(ctx.index(a), ctx.index(b)): parse_poly(t, ctx)
                              for (a, b), t in comps.items()})
    return extract(pi, ctx)


def pair(d):
    return d["cocycles"], d["coboundaries"]


def test_oracle_table_covers_bundled_examples():
    assert sorted(ORACLE_INPUT) == example_names()


@pytest.mark.parametrize("name", sorted(ORACLE_INPUT))
def test_dims_match_dense_oracle(name):
    base, normal, pi, nu, w_max = ORACLE_INPUT[name]
    model = O.Model(base, normal, pi, nu)
    data = data_of(name)
    assert C.Grading.for_data(data).nu == nu
    report = C.exact_sequence_report(data, w_max)
    for w in range(-1, w_max + 1):
        row = report.per_weight[w]
        assert pair(row["h1_direct"]) == O.h1_algebra(model, w), w
        assert pair(row["poisson_h1"]) == O.poisson_h1(model, w), w
        assert pair(row["linear_derivations_mod_inner"]) == O.linear_derivations(model, w), w
        assert pair(row["partialD_h1"]) == O.center_complex_h1(model, w), w
        assert row["center"] == O.center_dim(model, w - nu), w


# ------------------------------------------------------------ components

def test_contravariant_differential():
    d = from_bivector([], ["y1", "y2"], {})
    assert C.contravariant_differential(d, C.EValued(d.ctx, 0, {(): dy(d.ctx, 0)})).is_zero()
    d = data_of("rank1_curvature")
    ctx = d.ctx
    x1 = parse_poly("x1", ctx)
    assert C.contravariant_differential(d, C.EValued(ctx, 0, {(): dy(ctx, 0)})).is_zero()
    dQ = C.contravariant_differential(d, C.EValued(ctx, 0, {(): (x1,)}))
    # (d_D Q)(dx_i) = {x_i, x1} dy1: zero for i = 1, -1 for i = 2
    assert dQ.get((0,)) == (Poly.zero(ctx),) and dQ.get((1,)) == (Poly.const(ctx, -1),)
    for name in example_names():
        d = data_of(name)
        for z in C.center_sections(d, 1):
            z0 = C.EValued(d.ctx, 0, {(): z})
            dd = C.contravariant_differential(d, C.contravariant_differential(d, z0))
            assert dd.is_zero()


def test_center():
    assert all(not v for v in C.center_basis(data_of("so3_origin"), 3).values())
    assert len(C.center_basis(data_of("abelian2_point"), 0)[0]) == 2
    assert len(C.center_basis(data_of("rank1_curvature"), 0)[0]) == 1


def test_poisson_h1_reference_examples():
    symp = from_bivector(["x1", "x2"], [], {("x1", "x2"): "1"})
    assert all(d.quotient == 0 for d in C.poisson_h1(symp.psi, 3).values())
    line = from_bivector(["x1"], [], {})
    dims = C.poisson_h1(line.psi, 3)
    assert all(dims[w].quotient == 1 for w in range(-1, 4))
    point = data_of("so3_origin")
    assert all(d.quotient == 0 for d in C.poisson_h1(point.psi, 3).values())


def test_linear_derivations_reference_examples():
    assert C.linear_derivations_mod_inner(data_of("so3_origin"), 0)[0].quotient == 0
    assert C.linear_derivations_mod_inner(data_of("abelian2_point"), 0)[0].quotient == 4
    symp = from_bivector(["x1", "x2"], [], {("x1", "x2"): "1"})
    assert all(d.quotient == 0 for d in C.linear_derivations_mod_inner(symp, 2).values())


def test_partialD_reference_examples():
    assert all(d.quotient == 0 for d in C.partialD_h1(data_of("so3_origin"), 3).values())
    assert all(d.cocycles == 0 for d in C.partialD_h1(data_of("abelian2_point"), 3).values())


def test_m_space_reference_examples():
    ms = C.m_space(data_of("so3_origin"), 2)
    dims = ms[0].dims
    assert dims["M"] == 3 and dims["Inn"] == 3
    assert dims["M_mod_C_Inn"] == dims["M0_mod_C0_Inn"] == dims["im_sigma_mod_Ham"] == 0
    for name in example_names():
        d = data_of(name)
        for deg in range(3):
            assert C.hamiltonian_witnesses(d, deg), (name, deg)


def test_lemma_checks_and_abelian_accounting():
    for name, (_, _, _, _, w_max) in ORACLE_INPUT.items():
        report = C.exact_sequence_report(data_of(name), w_max)
        assert report.checks == {"lemma3_additivity": True, "lemma4_bound": True}
    row = C.exact_sequence_report(data_of("abelian2_point"), 1).per_weight[0]
    assert row["m_space"]["M0_mod_C0_Inn"] == 4 == row["h1_direct"]["quotient"]
    assert row["h1_direct"]["quotient"] == row["linear_derivations_mod_inner"]["quotient"]


# ------------------------------------------------------------ invariants

@pytest.mark.parametrize("name", sorted(ORACLE_INPUT))
def test_hamiltonians_are_cocycles(name):
    d = data_of(name)
    g = C.Grading.for_data(d)
    for s in range(-2, 3):
        for phi in C.affine_basis(d.ctx, g, s):
            assert C.derivation_defect(d, C.hamiltonian_derivation(d, phi)) == {}


@pytest.mark.parametrize("name", ["rank1_curvature", "rank1_connection", "abelian2_point",
                                  "so3_leaf"])
def test_generator_constraints_suffice(name):
    """Cocycles found from generator pairs are derivations on arbitrary pairs."""
    d = data_of(name)
    g = C.Grading.for_data(d)
    rng = random.Random(7)
    basis = C.affine_basis(d.ctx, g, 0) + C.affine_basis(d.ctx, g, 1) + C.affine_basis(d.ctx, g, 2)
    for w in range(-1, 2):
        keys = C.derivation_keys(d.ctx, g, [w])
        kernel = linalg.kernel_vectors(
            keys, lambda k: C.derivation_defect(d, C.DerivationPair.from_vector(d.ctx, {k: 1})))
        for vec in kernel:
            X = C.DerivationPair.from_vector(d.ctx, vec)
            for _ in range(4):
                u = rng.choice(basis).scale(rng.randint(-3, 3)) + rng.choice(basis)
                v = rng.choice(basis) + rng.choice(basis).scale(rng.randint(-3, 3))
                lhs = X.apply(affine_bracket(d, u, v))
                rhs = affine_bracket(d, X.apply(u), v) + affine_bracket(d, u, X.apply(v))
                assert lhs == rhs


def test_symbol_map_is_a_morphism():
    d = data_of("rank1_connection")
    ctx = d.ctx
    ms = C.m_space(d, 1)
    pairs = [C.DerivationPair.from_vector(ctx, v) for w in (-1, 0, 1) for v in ms[w].M]
    fs = [parse_poly(t, ctx) for t in ("x1", "x2", "x1*x2 + x2^2")]
    for X in pairs:
        for Y in pairs:
            comm = lambda eta: tuple(a - b for a, b in zip(X.apply_delta(Y.apply_delta(eta)),
                                                           Y.apply_delta(X.apply_delta(eta))))
            sym = lambda f: X.symbol(Y.symbol(f)) - Y.symbol(X.symbol(f))
            for f in fs:
                eta = dy(ctx, 0)
                lhs = comm(tuple(f * e for e in eta))
                rhs = tuple(f * a + sym(f) * e for a, e in zip(comm(eta), eta))
                assert lhs == rhs


@pytest.mark.parametrize("name", sorted(ORACLE_INPUT))
def test_weight_stability(name):
    d = data_of(name)
    assert C.weight_stability(d, 1)


def test_window_is_truncated_for_inhomogeneous_data():
    d = from_bivector(["x1", "x2"], ["y1"], {("x1", "x2"): "1 + x1"})
    g = C.Grading.for_data(d)
    assert g.truncated
    report = C.exact_sequence_report(d, 1)
    assert report.as_dict()["truncated"] is True
    v = C.theorem1_check(d, 1)
    assert v.as_dict()["truncated"] is True


# ------------------------------------------------------------ verdicts

def test_theorem1_verdicts():
    v = C.theorem1_check(data_of("so3_origin"), 3)
    assert v.verdict == "trivial: conditions (i)(ii)(iii) hold; H1 = 0 (verified directly)"
    assert v.theorem1_holds and v.h1_vanishes
    v = C.theorem1_check(data_of("abelian2_point"), 1)
    assert not v.conditions["iii_centerless"] and v.verdict.startswith("inconclusive")
    assert v.h1_direct[0]["quotient"] == 4
    v = C.theorem1_check(data_of("rank1_curvature"), 2)
    assert v.conditions["i_poisson_h1_trivial"]
    assert not v.conditions["ii_linear_derivations_inner"] and not v.conditions["iii_centerless"]
    v = C.theorem1_check(data_of("so3_leaf"), 1)
    assert v.theorem1_holds and v.h1_vanishes


def test_guards(monkeypatch):
    d = data_of("so3_origin")
    fake = {w: C.WeightDims(1, 0) for w in range(-1, 2)}
    monkeypatch.setattr(C, "h1_direct", lambda data, w: fake)
    with pytest.raises(C.TheoremViolation):
        C.theorem1_check(d, 1)
    with pytest.raises(C.InconsistencyError):
        C.exact_sequence_report(d, 1)
