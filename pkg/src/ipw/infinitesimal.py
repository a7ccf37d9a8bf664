"""
Infinitesimal Poisson algebra of a coordinate Poisson submanifold S = {y = 0}.

Conventions (coordinate splitting ``h(dx_i) = dx_i|_S``, identity exponential):

* ``psi^{ij}   = pi^{x_i x_j}|_S``                     induced Poisson structure on S
* ``c^c_{ab}  = d pi^{y_a y_b} / d y_c |_S``           ``[dy_a, dy_b]_1 = c^c_{ab} dy_c``
* ``Gamma^b_{ia} = d pi^{x_i y_a} / d y_b |_S``        ``D_{dx_i} dy_a = Gamma^b_{ia} dy_b``
* ``K^a_{ij}  = d pi^{x_i x_j} / d y_a |_S``           ``K(dx_i, dx_j) = K^a_{ij} dy_a``

A conormal section ``eta = eta^a dy_a`` is identified with the fiberwise linear
function ``eta^a y_a``, so an :class:`AffineElement` ``f + eta`` is the
polynomial ``f(x) + eta^a(x) y_a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .multivector import (Multivector, NotPoissonError, bracket_of, jacobi_check)
from .polyring import Poly, VarContext, fiber_component, parse_poly, restrict_to_S


class NotPoissonSubmanifold(ValueError):
    def __init__(self, message, offending=()):
        super().__init__(message)
        self.offending = list(offending)


# sections of E* are tuples of q y-free polynomials

def zero_section(ctx):
    return tuple(Poly.zero(ctx) for _ in range(ctx.q))


def sec_add(*secs):
    out = list(secs[0])
    for s in secs[1:]:
        for a, p in enumerate(s):
            out[a] = out[a] + p
    return tuple(out)


def sec_neg(s):
    return tuple(-p for p in s)


def sec_sub(s, t):
    return sec_add(s, sec_neg(t))


def sec_scale(s, f):
    return tuple(p * f for p in s)


def sec_is_zero(s):
    return all(p.is_zero() for p in s)


def dy(ctx, a):
    return tuple(Poly.const(ctx, 1 if b == a else 0) for b in range(ctx.q))


@dataclass(frozen=True)
class AffineElement:
    """A fiberwise affine function ``f + eta^a y_a``."""

    f: Poly
    eta: tuple

    def __post_init__(self):
        ctx = self.f.ctx
        if len(self.eta) != ctx.q:
            raise ValueError(f"expected {ctx.q} conormal coefficients, got {len(self.eta)}")
        if not self.f.is_y_free() or not all(p.is_y_free() for p in self.eta):
            raise ValueError("affine element parts must be y-free")

    @property
    def ctx(self) -> VarContext:
        return self.f.ctx

    @classmethod
    def base(cls, f: Poly):
        return cls(f, zero_section(f.ctx))

    @classmethod
    def fiber(cls, eta, ctx=None):
        eta = tuple(eta)
        ctx = ctx or eta[0].ctx
        return cls(Poly.zero(ctx), eta)

    @classmethod
    def from_poly(cls, p: Poly) -> "AffineElement":
        ctx = p.ctx
        if any(k > 1 for k in p.fiber_degrees()):
            raise ValueError(f"{p} is not fiberwise affine")
        f = fiber_component(p, 0)
        lin = fiber_component(p, 1)
        m = ctx.m
        eta = [dict() for _ in range(ctx.q)]
        for e, c in lin.items():
            a = next(k for k in range(ctx.q) if e[m + k])
            e2 = e[:m + a] + (0,) + e[m + a + 1:]
            eta[a][e2] = c
        return cls(f, tuple(Poly(ctx, t) for t in eta))

    @classmethod
    def parse(cls, text: str, ctx: VarContext) -> "AffineElement":
        return cls.from_poly(parse_poly(text, ctx))

    def to_poly(self) -> Poly:
        ctx = self.ctx
        out = self.f
        for a, p in enumerate(self.eta):
            out = out + p * Poly.var(ctx, ctx.m + a)
        return out

    def __add__(self, other):
        return AffineElement(self.f + other.f, sec_add(self.eta, other.eta))

    def __sub__(self, other):
        return AffineElement(self.f - other.f, sec_sub(self.eta, other.eta))

    def __neg__(self):
        return AffineElement(-self.f, sec_neg(self.eta))

    def scale(self, c):
        return AffineElement(self.f * c, sec_scale(self.eta, c))

    def is_zero(self):
        return self.f.is_zero() and sec_is_zero(self.eta)

    def __str__(self):
        return str(self.to_poly())


@dataclass(frozen=True)
class InfinitesimalData:
    """Extracted ``(psi, c, Gamma, K)``; index layout ``c[a][b][c]``,
    ``gamma[i][a][b]``, ``kappa[i][j][a]`` (see module docstring)."""

    ctx: VarContext
    psi: Multivector
    c: tuple
    gamma: tuple
    kappa: tuple

    @property
    def m(self):
        return self.ctx.m

    @property
    def q(self):
        return self.ctx.q

    def psi_ij(self, i, j) -> Poly:
        return self.psi[(i, j)]

    def psi_bracket(self, f: Poly, g: Poly) -> Poly:
        return bracket_of(self.psi, f, g)

    def fiber_bracket(self, eta, xi):
        ctx = self.ctx
        out = [Poly.zero(ctx) for _ in range(self.q)]
        for a, ea in enumerate(eta):
            if not ea:
                continue
            for b, xb in enumerate(xi):
                if not xb:
                    continue
                prod = ea * xb
                for cc in range(self.q):
                    s = self.c[a][b][cc]
                    if s:
                        out[cc] = out[cc] + prod * s
        return tuple(out)

    def ad(self, eta):
        """Matrix of ``[eta, .]_1``: ``ad[a][b]`` = coefficient of dy_b in ``[eta, dy_a]``."""
        return [list(self.fiber_bracket(eta, dy(self.ctx, a))) for a in range(self.q)]

    def D_dx(self, i, eta):
        """``D_{dx_i} eta``, Leibniz rule through ``{x_i, eta^b}_psi``."""
        ctx = self.ctx
        out = [Poly.zero(ctx) for _ in range(self.q)]
        for a, ea in enumerate(eta):
            if not ea:
                continue
            for b in range(self.q):
                g = self.gamma[i][a][b]
                if g:
                    out[b] = out[b] + ea * g
        for b, eb in enumerate(eta):
            if not eb:
                continue
            for j in range(self.m):
                pij = self.psi_ij(i, j)
                if pij:
                    out[b] = out[b] + pij * eb.diff(j)
        return tuple(out)

    def D_df(self, f: Poly, eta):
        out = zero_section(self.ctx)
        for i in range(self.m):
            fi = f.diff(i)
            if fi:
                out = sec_add(out, sec_scale(self.D_dx(i, eta), fi))
        return out

    def K_ij(self, i, j):
        return tuple(self.kappa[i][j])

    def K_df_dg(self, f: Poly, g: Poly):
        out = zero_section(self.ctx)
        for i in range(self.m):
            fi = f.diff(i)
            if not fi:
                continue
            for j in range(self.m):
                gj = g.diff(j)
                if gj and i != j:
                    out = sec_add(out, sec_scale(self.K_ij(i, j), fi * gj))
        return out

    def K_dx_dg(self, i, g: Poly):
        out = zero_section(self.ctx)
        for r in range(self.m):
            gr = g.diff(r)
            if gr and r != i:
                out = sec_add(out, sec_scale(self.K_ij(i, r), gr))
        return out


def check_poisson_submanifold(pi: Multivector, ctx: VarContext):
    """``(ok, offending)``: every component with a normal index must vanish on S."""
    ok, residual = jacobi_check(pi)
    if not ok:
        raise NotPoissonError("ambient bivector fails the Jacobi identity", residual)
    offending = []
    for (i, j), p in sorted(pi.items()):
        if (ctx.is_normal(i) or ctx.is_normal(j)) and restrict_to_S(p):
            offending.append((ctx.names[i], ctx.names[j]))
    return not offending, offending


def extract(pi: Multivector, ctx: VarContext) -> InfinitesimalData:
    ok, offending = check_poisson_submanifold(pi, ctx)
    if not ok:
        raise NotPoissonSubmanifold("S = {y = 0} is not a Poisson submanifold", offending)
    m, q = ctx.m, ctx.q

    def d_y(p, b):
        return restrict_to_S(p.diff(m + b))

    psi = Multivector(ctx, 2, {(i, j): restrict_to_S(pi[(i, j)])
                               for i, j in combinations(range(m), 2)}, on_S=True)
    c = tuple(tuple(tuple(d_y(pi[(m + a, m + b)], cc) for cc in range(q))
                    for b in range(q)) for a in range(q))
    gamma = tuple(tuple(tuple(d_y(pi[(i, m + a)], b) for b in range(q))
                        for a in range(q)) for i in range(m))
    kappa = tuple(tuple(tuple(d_y(pi[(i, j)], a) for a in range(q))
                        for j in range(m)) for i in range(m))
    return InfinitesimalData(ctx, psi, c, gamma, kappa)


@dataclass
class PTReport:
    """Symbolic check of the compatibility relations between ``[.,.]_1``, D and K.

    ``structure`` collects the standing assumptions (c antisymmetric with
    Jacobi, K antisymmetric, psi Poisson); residual maps hold nonzero sections.
    """

    pt1: bool
    pt2: bool
    pt3: bool
    structure: bool = True
    residuals: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.pt1 and self.pt2 and self.pt3 and self.structure


def verify_pt(data: InfinitesimalData) -> PTReport:
    ctx, m, q = data.ctx, data.m, data.q
    gens = [dy(ctx, a) for a in range(q)]
    res1, res2, res3, res_s = {}, {}, {}, {}

    # D_a [eta, xi]_1 = [D_a eta, xi]_1 + [eta, D_a xi]_1
    for i in range(m):
        for a in range(q):
            for b in range(q):
                lhs = data.D_dx(i, data.fiber_bracket(gens[a], gens[b]))
                rhs = sec_add(data.fiber_bracket(data.D_dx(i, gens[a]), gens[b]),
                              data.fiber_bracket(gens[a], data.D_dx(i, gens[b])))
                r = sec_sub(lhs, rhs)
                if not sec_is_zero(r):
                    res1[(i, a, b)] = r

    # Curv(dx_i, dx_j) = [K(dx_i, dx_j), .]_1
    for i, j in combinations(range(m), 2):
        dpsi = data.psi_ij(i, j)
        for a in range(q):
            curv = sec_sub(data.D_dx(i, data.D_dx(j, gens[a])),
                           data.D_dx(j, data.D_dx(i, gens[a])))
            curv = sec_sub(curv, data.D_df(dpsi, gens[a]))
            r = sec_sub(curv, data.fiber_bracket(data.K_ij(i, j), gens[a]))
            if not sec_is_zero(r):
                res2[(i, j, a)] = r

    # cyclic sum of D_a K(b, c) + K(a, [b, c]_psi)
    for i, j, k in combinations(range(m), 3):
        total = zero_section(ctx)
        for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)):
            total = sec_add(total, data.D_dx(a, data.K_ij(b, cc)),
                            data.K_dx_dg(a, data.psi_ij(b, cc)))
        if not sec_is_zero(total):
            res3[(i, j, k)] = total

    for a in range(q):
        for b in range(q):
            r = sec_add(tuple(data.c[a][b]), tuple(data.c[b][a]))
            if not sec_is_zero(r):
                res_s[("c_antisymmetry", a, b)] = r
    for a, b, cc in combinations(range(q), 3):
        e = [gens[a], gens[b], gens[cc]]
        total = zero_section(ctx)
        for u, v, w in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            total = sec_add(total, data.fiber_bracket(e[u], data.fiber_bracket(e[v], e[w])))
        if not sec_is_zero(total):
            res_s[("c_jacobi", a, b, cc)] = total
    for i in range(m):
        for j in range(m):
            r = sec_add(data.K_ij(i, j), data.K_ij(j, i))
            if not sec_is_zero(r):
                res_s[("K_antisymmetry", i, j)] = r
    psi_ok, psi_res = jacobi_check(data.psi)
    if not psi_ok:
        res_s[("psi_jacobi",)] = psi_res

    residuals = {}
    for name, res in (("pt1", res1), ("pt2", res2), ("pt3", res3), ("structure", res_s)):
        if res:
            residuals[name] = res
    return PTReport(not res1, not res2, not res3, not res_s, residuals)


def affine_product(u: AffineElement, v: AffineElement) -> AffineElement:
    """``(f + eta)(g + xi) = fg + (f xi + g eta)``."""
    return AffineElement(u.f * v.f, sec_add(sec_scale(v.eta, u.f), sec_scale(u.eta, v.f)))


def affine_bracket(data: InfinitesimalData, u: AffineElement, v: AffineElement) -> AffineElement:
    f, eta, g, xi = u.f, u.eta, v.f, v.eta
    base = data.psi_bracket(f, g)
    fib = sec_add(data.D_df(f, xi), sec_neg(data.D_df(g, eta)),
                  data.fiber_bracket(eta, xi), data.K_df_dg(f, g))
    return AffineElement(base, fib)


def full_bracket(pi: Multivector, u: Poly, v: Poly) -> Poly:
    return bracket_of(pi, u, v)


def first_order_check(pi: Multivector, ctx: VarContext, u: AffineElement,
                      v: AffineElement, data: InfinitesimalData | None = None) -> bool:
    """Fiber degrees 0 and 1 of ``{u, v}_pi`` agree with the affine bracket."""
    data = data or extract(pi, ctx)
    full = full_bracket(pi, u.to_poly(), v.to_poly())
    truncated = fiber_component(full, 0) + fiber_component(full, 1)
    return truncated == affine_bracket(data, u, v).to_poly()


def affine_generators(ctx: VarContext, include_unit=False):
    gens = [AffineElement.base(Poly.var(ctx, i)) for i in range(ctx.m)]
    gens += [AffineElement.fiber(dy(ctx, a), ctx) for a in range(ctx.q)]
    if include_unit:
        gens.insert(0, AffineElement.base(Poly.const(ctx, 1)))
    return gens


def affine_jacobiator(data, u, v, w) -> AffineElement:
    br = lambda a, b: affine_bracket(data, a, b)
    return br(u, br(v, w)) + br(v, br(w, u)) + br(w, br(u, v))
