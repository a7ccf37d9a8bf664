import dataclasses

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from ipw import example_names, example_path, load_problem
from ipw.infinitesimal import (AffineElement, NotPoissonSubmanifold, affine_bracket,
                               affine_generators, affine_jacobiator, affine_product,
                               check_poisson_submanifold, dy, extract, first_order_check,
                               verify_pt)
from ipw.multivector import Multivector
from ipw.polyring import Poly, VarContext, parse_poly

EXAMPLES = example_names()


def load(name):
    pr = load_problem(example_path(name))
    return pr.ctx, pr.pi, extract(pr.pi, pr.ctx)


def bivector(base, normal, comps):
    ctx = VarContext(base, normal)
    return ctx, Multivector(ctx, 2, {(ctx.index(a), ctx.index(b)): parse_poly(t, ctx)
                                     for (a, b), t in comps.items()})


def test_poisson_submanifold_condition():
    ctx, pi = bivector(["x1", "x2"], ["y1"], {("x1", "x2"): "1 + y1"})
    assert check_poisson_submanifold(pi, ctx) == (True, [])
    ctx, pi = bivector(["x1"], ["y1"], {("x1", "y1"): "1"})
    ok, offending = check_poisson_submanifold(pi, ctx)
    assert not ok and offending == [("x1", "y1")]
    with pytest.raises(NotPoissonSubmanifold):
        extract(pi, ctx)


def test_extract_reference_examples():
    ctx, pi, d = load("rank1_curvature")
    assert d.psi[(0, 1)] == 1 and d.kappa[0][1][0] == 1 and d.kappa[1][0][0] == -1
    assert all(p.is_zero() for row in d.gamma for col in row for p in col)
    ctx, pi, d = load("so3_origin")
    assert d.psi.is_zero() and d.m == 0
    assert d.c[0][1][2] == 1 and d.c[1][2][0] == 1 and d.c[2][0][1] == 1
    ctx, pi = bivector(["x1", "x2"], [], {("x1", "x2"): "1"})
    d = extract(pi, ctx)
    assert d.q == 0 and d.psi[(0, 1)] == 1 and d.c == () and d.kappa == (((), ()), ((), ()))


@pytest.mark.parametrize("name", EXAMPLES)
def test_extract_matches_sympy_derivatives(name):
    ctx, pi, d = load(name)
    z = sp.symbols(ctx.names)
    m, q = ctx.m, ctx.q
    S = {z[m + a]: 0 for a in range(q)}

    def comp(i, j):
        return sp.sympify(str(pi[(i, j)]).replace("^", "**"), locals=dict(zip(ctx.names, z)))

    def same(poly, expr):
        return sp.expand(sp.sympify(str(poly).replace("^", "**"),
                                    locals=dict(zip(ctx.names, z))) - expr) == 0

    for a in range(q):
        for b in range(q):
            for c in range(q):
                assert same(d.c[a][b][c], sp.diff(comp(m + a, m + b), z[m + c]).subs(S))
    for i in range(m):
        for a in range(q):
            for b in range(q):
                assert same(d.gamma[i][a][b], sp.diff(comp(i, m + a), z[m + b]).subs(S))
        for j in range(m):
            assert same(d.psi[(i, j)], comp(i, j).subs(S))
            for a in range(q):
                assert same(d.kappa[i][j][a], sp.diff(comp(i, j), z[m + a]).subs(S))


@pytest.mark.parametrize("name", EXAMPLES)
def test_compatibility_relations_hold(name):
    report = verify_pt(load(name)[2])
    assert report.ok and report.residuals == {}


def test_corrupted_data_is_caught():
    ctx, pi, d = load("so3_origin")
    c = [[list(col) for col in row] for row in d.c]
    c[1][0][2] = Poly.zero(ctx)          # break antisymmetry of c
    bad = dataclasses.replace(d, c=tuple(tuple(tuple(col) for col in row) for row in c))
    report = verify_pt(bad)
    assert not report.ok and report.residuals


def test_affine_product():
    ctx = VarContext(["x1", "x2"], ["y1"])
    A = lambda t: AffineElement.parse(t, ctx)
    assert affine_product(A("1"), A("x2 + x1*y1")) == A("x2 + x1*y1")
    assert affine_product(A("y1"), A("x1*y1")).is_zero()
    assert affine_product(A("x1 + y1"), A("x2")) == A("x1*x2 + x2*y1")
    with pytest.raises(ValueError):
        A("y1^2")


def test_affine_bracket_reference_examples():
    ctx, pi, d = load("rank1_curvature")
    A = lambda t: AffineElement.parse(t, ctx)
    assert str(affine_bracket(d, A("x1"), A("x2"))) == "1 + y1"
    assert first_order_check(pi, ctx, A("x1"), A("x2"))
    ctx, pi, d = load("so3_origin")
    assert affine_bracket(d, AffineElement.fiber(dy(ctx, 0), ctx),
                          AffineElement.fiber(dy(ctx, 1), ctx)) == AffineElement.parse("y3", ctx)
    one = AffineElement.parse("1", ctx)
    assert all(affine_bracket(d, one, g).is_zero() for g in affine_generators(ctx))


@pytest.mark.parametrize("name", EXAMPLES)
def test_generator_axioms(name):
    ctx, pi, d = load(name)
    gens = affine_generators(ctx, include_unit=True)
    for u in gens:
        for v in gens:
            assert affine_bracket(d, u, v) == -affine_bracket(d, v, u)
            assert first_order_check(pi, ctx, u, v, d)
            for w in gens:
                assert affine_jacobiator(d, u, v, w).is_zero()
                lhs = affine_bracket(d, u, affine_product(v, w))
                rhs = (affine_product(affine_bracket(d, u, v), w)
                       + affine_product(v, affine_bracket(d, u, w)))
                assert lhs == rhs


def affine_elements(ctx):
    mon = st.sampled_from(["0", "1", "x1", "x2", "x1*x2", "x1^2", "-2*x2^2", "1/3*x1"])

    def build(parts):
        f, etas = parts[0], parts[1:]
        text = " + ".join([f"({f})"] + [f"({e})*{y}" for e, y in zip(etas, ctx.names[ctx.m:])])
        return AffineElement.parse(text, ctx)

    return st.lists(mon, min_size=1 + ctx.q, max_size=1 + ctx.q).map(build)


@pytest.mark.parametrize("name", ["rank1_curvature", "rank1_connection", "so3_leaf"])
def test_random_affine_axioms(name):
    ctx, pi, d = load(name)

    @settings(max_examples=15, deadline=None)
    @given(affine_elements(ctx), affine_elements(ctx), affine_elements(ctx))
    def check(u, v, w):
        assert affine_bracket(d, u, v) == -affine_bracket(d, v, u)
        assert first_order_check(pi, ctx, u, v, d)
        assert affine_jacobiator(d, u, v, w).is_zero()
        assert (affine_bracket(d, u, affine_product(v, w))
                == affine_product(affine_bracket(d, u, v), w)
                + affine_product(v, affine_bracket(d, u, w)))

    check()
