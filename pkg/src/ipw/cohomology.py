"""
Weight-graded first cohomologies of the infinitesimal Poisson algebra.

Grading: ``x_i`` has weight 1 and ``d/dx_i`` weight -1; the normal
coordinates ``y_a`` get a common weight ``nu >= 0`` (and ``d/dy_a`` weight
``-nu``), chosen as the smallest value making ``psi, c, Gamma, K`` homogeneous.
Under ``eta <-> eta^a y_a`` a coefficient of x-degree ``d`` contributes

* weight ``d`` to a function on S or to an endomorphism ``delta`` of E*,
* weight ``d + nu`` to a conormal section,
* weight ``d - 1`` to a vector field on S, ``d + nu - 1`` to an E*-valued one.

A derivation ``X = X_delta + X_Q`` of weight ``w`` thus has ``delta`` of
x-degree ``w``, symbol ``u`` of x-degree ``w + 1`` and ``Q`` of x-degree
``w + 1 - nu``. For homogeneous data of weight ``p`` every differential shifts
weight by ``p`` and per-weight dimensions are exact. Otherwise the data is
*truncated*: cocycles are counted exactly in the window of weights ``<= w``,
coboundaries are those of potentials that stay inside the window (a lower
bound), and every figure is cumulative over the window.

Reported weights run from -1 (constant vector fields) to ``w_max``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import linalg
from .infinitesimal import (AffineElement, InfinitesimalData, affine_bracket,
                            affine_generators, dy, sec_add, sec_is_zero, sec_neg,
                            sec_sub, zero_section)
from .multivector import Multivector, NotPoissonError, jacobi_check, schouten
from .polyring import Poly, monomials

MIN_WEIGHT = -1
MAX_FIBER_WEIGHT = 8


class InconsistencyError(RuntimeError):
    """Internal cross-check failed; indicates a bug, never bad input."""


class TheoremViolation(InconsistencyError):
    pass


# ---------------------------------------------------------------- weights

def data_weights(data: InfinitesimalData, nu: int = 0) -> set:
    """Weights of the terms of ``psi, c, Gamma, K`` when ``y`` has weight ``nu``."""
    ws = set()
    for _, p in data.psi.items():
        ws |= {d - 2 for d in p.x_degrees()}
    for block, shift in ((data.c, -nu), (data.gamma, -1), (data.kappa, nu - 2)):
        for row in block:
            for col in row:
                for p in col:
                    ws |= {d + shift for d in p.x_degrees()}
    return ws


def bivector_weights(psi: Multivector) -> set:
    ws = set()
    for _, p in psi.items():
        ws |= {d - 2 for d in p.x_degrees()}
    return ws


# x-degree of a coefficient of each kind of unknown is w + offset + nu_shift*nu
_X_OFFSET = {"d": 0, "f": 0, "u": 1, "Q": 1, "Qt": 1, "z": 0}
_NU_SHIFT = {"d": 0, "f": 0, "u": 0, "Q": -1, "Qt": -1, "z": -1}


@dataclass(frozen=True)
class Grading:
    """Fiber weight ``nu`` and the weights ``shifts`` of the structure terms."""

    nu: int
    shifts: tuple

    @classmethod
    def for_data(cls, data: InfinitesimalData) -> "Grading":
        for nu in range(MAX_FIBER_WEIGHT + 1):
            ws = data_weights(data, nu)
            if len(ws) <= 1:
                return cls(nu, tuple(ws))
        return cls(0, tuple(sorted(data_weights(data, 0))))

    @classmethod
    def for_bivector(cls, psi: Multivector) -> "Grading":
        return cls(0, tuple(sorted(bivector_weights(psi))))

    @property
    def homogeneous(self):
        return len(self.shifts) <= 1

    @property
    def truncated(self):
        return not self.homogeneous

    @property
    def p(self):
        return self.shifts[0] if self.shifts else 0

    def xdeg(self, kind, w):
        return w + _X_OFFSET[kind] + _NU_SHIFT[kind] * self.nu

    def key_weight(self, key):
        kind = key[0]
        return sum(key[-1]) - _X_OFFSET[kind] - _NU_SHIFT[kind] * self.nu

    def potential_weights(self, w):
        """Weights of potentials whose image reaches weight ``w`` (window ``<= w``)."""
        if self.homogeneous:
            return [w - self.p]
        return list(range(MIN_WEIGHT - self.nu, w - min(self.shifts) + 1))

    def unknown_weights(self, w):
        return [w] if self.homogeneous else list(range(MIN_WEIGHT, w + 1))

    def window(self, w):
        if self.homogeneous:
            return lambda key: self.key_weight(key) == w
        return lambda key: self.key_weight(key) <= w

    def describe(self):
        return {"fiber_weight": self.nu,
                "weight_shift": self.p if self.homogeneous else list(self.shifts),
                "truncated": self.truncated}


# ------------------------------------------------------- polynomial vectors

def _poly_items(p: Poly, prefix):
    return {prefix + (e,): c for e, c in p.items()}


def _section_vec(sec, prefix=()):
    out = {}
    for a, p in enumerate(sec):
        out.update(_poly_items(p, prefix + (a,)))
    return out


def _mono(ctx, exps):
    return Poly.monomial(ctx, exps)


def _base_monomials(ctx, degree):
    m = ctx.m
    return [e[:m] + (0,) * ctx.q for e in monomials(ctx, degree)]


def _section_basis(ctx, degree):
    out = []
    for e in _base_monomials(ctx, degree):
        for a in range(ctx.q):
            out.append(tuple(_mono(ctx, e) if b == a else Poly.zero(ctx) for b in range(ctx.q)))
    return out


# ------------------------------------------------------- E*-valued k-vectors

class EValued:
    """E*-valued k-vector field on S: ``{(i1<...<ik): section}``."""

    def __init__(self, ctx, k, comps=None):
        self.ctx = ctx
        self.k = k
        self.comps = {}
        for idx, sec in (comps or {}).items():
            if not sec_is_zero(sec):
                self.comps[tuple(idx)] = tuple(sec)

    def get(self, idx):
        idx = tuple(idx)
        if len(set(idx)) < len(idx):
            return zero_section(self.ctx)
        order = sorted(range(len(idx)), key=lambda t: idx[t])
        sec = self.comps.get(tuple(idx[t] for t in order))
        if sec is None:
            return zero_section(self.ctx)
        inv = sum(1 for s in range(len(order)) for t in range(s + 1, len(order))
                  if order[s] > order[t])
        return sec_neg(sec) if inv & 1 else sec

    def eval_exact(self, g: Poly, rest):
        """``Q(dg, dx_rest...)``."""
        out = zero_section(self.ctx)
        for r in range(self.ctx.m):
            gr = g.diff(r)
            if gr:
                out = sec_add(out, tuple(p * gr for p in self.get((r,) + tuple(rest))))
        return out

    def is_zero(self):
        return not self.comps

    def vector(self, tag="E"):
        out = {}
        for idx, sec in self.comps.items():
            for a, p in enumerate(sec):
                for e, c in p.items():
                    out[(tag, idx, a, e)] = c
        return out


def contravariant_differential(data: InfinitesimalData, Q: EValued) -> EValued:
    """``d_D`` on E*-valued k-vectors, evaluated on coordinate differentials."""
    m, k = data.m, Q.k
    comps = {}
    for J in combinations(range(m), k + 1):
        total = zero_section(data.ctx)
        for i in range(k + 1):
            rest = J[:i] + J[i + 1:]
            t = data.D_dx(J[i], Q.get(rest))
            total = sec_add(total, sec_neg(t) if i & 1 else t)
        for i, l in combinations(range(k + 1), 2):
            rest = tuple(J[t] for t in range(k + 1) if t not in (i, l))
            t = Q.eval_exact(data.psi_ij(J[i], J[l]), rest)
            total = sec_add(total, sec_neg(t) if (i + l) & 1 else t)
        comps[J] = total
    return EValued(data.ctx, k + 1, comps)


def _evalued1_from_vector(ctx, vec):
    """E*-valued 1-vector from keys ``(kind, a, i, exps)``."""
    comps = {}
    for key, c in vec.items():
        _, a, i, e = key
        sec = list(comps.get((i,), zero_section(ctx)))
        sec[a] = sec[a] + Poly.monomial(ctx, e, c)
        comps[(i,)] = tuple(sec)
    return EValued(ctx, 1, comps)


def _evalued1_vector(Q: EValued, kind="Q"):
    vec = {}
    for (i,), sec in Q.comps.items():
        for a, p in enumerate(sec):
            vec.update(_poly_items(p, (kind, a, i)))
    return vec


# ------------------------------------------------------------- derivations

@dataclass
class DerivationPair:
    """``X = X_delta + X_Q``: ``delta[a][b]`` is the dy_b-coefficient of
    ``delta(dy_a)``, ``u[i]`` the symbol, ``Q[a][i]`` the dy_a-coefficient of
    ``Q(dx_i)``."""

    delta: list
    u: list
    Q: list

    @classmethod
    def zero(cls, ctx):
        z = Poly.zero(ctx)
        return cls([[z] * ctx.q for _ in range(ctx.q)], [z] * ctx.m,
                   [[z] * ctx.m for _ in range(ctx.q)])

    @classmethod
    def from_vector(cls, ctx, vec):
        X = cls.zero(ctx)
        for key, c in vec.items():
            kind = key[0]
            mono = Poly.monomial(ctx, key[-1], c)
            if kind == "d":
                X.delta[key[1]][key[2]] += mono
            elif kind == "u":
                X.u[key[1]] += mono
            elif kind == "Q":
                X.Q[key[1]][key[2]] += mono
            else:
                raise KeyError(key)
        return X

    def vector(self):
        out = {}
        for a, row in enumerate(self.delta):
            for b, p in enumerate(row):
                out.update(_poly_items(p, ("d", a, b)))
        for i, p in enumerate(self.u):
            out.update(_poly_items(p, ("u", i)))
        for a, row in enumerate(self.Q):
            for i, p in enumerate(row):
                out.update(_poly_items(p, ("Q", a, i)))
        return out

    def symbol(self, f: Poly) -> Poly:
        out = Poly.zero(f.ctx)
        for i, ui in enumerate(self.u):
            if ui:
                out = out + ui * f.diff(i)
        return out

    def apply_delta(self, eta):
        """The derivative endomorphism: ``delta(eta^a dy_a) = u(eta^a) dy_a + eta^a delta(dy_a)``."""
        out = [self.symbol(p) for p in eta]
        for a, ea in enumerate(eta):
            if ea:
                for b, d in enumerate(self.delta[a]):
                    if d:
                        out[b] = out[b] + ea * d
        return tuple(out)

    def apply(self, v: AffineElement) -> AffineElement:
        fib = self.apply_delta(v.eta)
        qdf = []
        for a in range(len(self.Q)):
            s = Poly.zero(v.ctx)
            for i, qai in enumerate(self.Q[a]):
                if qai:
                    s = s + qai * v.f.diff(i)
            qdf.append(s)
        return AffineElement(self.symbol(v.f), sec_add(fib, tuple(qdf)))


def decompose(ctx, X) -> DerivationPair:
    """Read off ``(delta, u, Q)`` from a derivation given as a callable."""
    pair = DerivationPair.zero(ctx)
    for i in range(ctx.m):
        img = X(AffineElement.base(Poly.var(ctx, i)))
        pair.u[i] = img.f
        for a in range(ctx.q):
            pair.Q[a][i] = img.eta[a]
    for a in range(ctx.q):
        img = X(AffineElement.fiber(dy(ctx, a), ctx))
        if not img.f.is_zero():
            raise InconsistencyError("derivation does not vanish on S along conormal sections")
        pair.delta[a] = list(img.eta)
    return pair


def derivation_keys(ctx, grading: Grading, weights, q_kind="Q"):
    keys = []
    for w in weights:
        for e in _base_monomials(ctx, grading.xdeg("d", w)):
            for a in range(ctx.q):
                for b in range(ctx.q):
                    keys.append(("d", a, b, e))
        for e in _base_monomials(ctx, grading.xdeg("u", w)):
            for i in range(ctx.m):
                keys.append(("u", i, e))
        for e in _base_monomials(ctx, grading.xdeg(q_kind, w)):
            for a in range(ctx.q):
                for i in range(ctx.m):
                    keys.append((q_kind, a, i, e))
    return keys


def derivation_defect(data: InfinitesimalData, X: DerivationPair) -> dict:
    """``X{g,h} - {Xg,h} - {g,Xh}`` on all generator pairs, flattened."""
    gens = affine_generators(data.ctx)
    images = [X.apply(g) for g in gens]
    out = {}
    for s, t in combinations(range(len(gens)), 2):
        g, h = gens[s], gens[t]
        r = X.apply(affine_bracket(data, g, h))
        r = r - affine_bracket(data, images[s], h) - affine_bracket(data, g, images[t])
        out.update(_poly_items(r.f, (s, t, "f")))
        out.update(_section_vec(r.eta, (s, t, "eta")))
    return out


def hamiltonian_derivation(data, phi: AffineElement) -> DerivationPair:
    return decompose(data.ctx, lambda v: affine_bracket(data, phi, v))


def affine_basis(ctx, grading: Grading, weight):
    """Monomial basis of affine elements of the given weight."""
    out = [AffineElement.base(_mono(ctx, e))
           for e in _base_monomials(ctx, grading.xdeg("f", weight))]
    out += [AffineElement.fiber(sec, ctx)
            for sec in _section_basis(ctx, grading.xdeg("z", weight))]
    return out


# ----------------------------------------------------------- bookkeeping

@dataclass(frozen=True)
class WeightDims:
    cocycles: int
    coboundaries: int

    @property
    def quotient(self):
        return self.cocycles - self.coboundaries

    def as_dict(self):
        return {"cocycles": self.cocycles, "coboundaries": self.coboundaries,
                "quotient": self.quotient}


def _quotient_dims(cocycle_basis, coboundary_vectors, in_window, label):
    """Dims of cocycles / (coboundaries inside the window), checking containment."""
    cob = linalg.intersect_zero(coboundary_vectors, lambda k: not in_window(k))
    z = len(cocycle_basis)
    b = linalg.rank(cob)
    if linalg.rank(list(cocycle_basis) + cob) != z:
        raise InconsistencyError(f"{label}: coboundaries are not cocycles")
    return WeightDims(z, b)


def _weights(w_max):
    return range(MIN_WEIGHT, w_max + 1)


# ------------------------------------------------------ Poisson cohomology

def poisson_h1(psi: Multivector, w_max: int) -> dict:
    """``{weight: WeightDims}`` of H^1 of ``(S, psi)`` for weights -1..w_max."""
    ok, _ = jacobi_check(psi)
    if not ok:
        raise NotPoissonError("psi fails the Jacobi identity")
    grading = Grading.for_bivector(psi)
    ctx = psi.ctx

    def constraint(key):
        X = Multivector(ctx, 1, {(key[1],): _mono(ctx, key[2])}, on_S=True)
        vec = {}
        for idx, p in schouten(psi, X).items():
            vec.update(_poly_items(p, (idx,)))
        return vec

    out = {}
    for w in _weights(w_max):
        keys = [("u", i, e) for ww in grading.unknown_weights(w)
                for e in _base_monomials(ctx, grading.xdeg("u", ww)) for i in range(ctx.m)]
        cocycles = linalg.kernel_vectors(keys, constraint)
        cob = []
        if not psi.is_zero():
            for s in grading.potential_weights(w):
                for e in _base_monomials(ctx, grading.xdeg("f", s)):
                    d = schouten(psi, Multivector.function(_mono(ctx, e), on_S=True))
                    vec = {}
                    for (i,), p in d.items():
                        vec.update(_poly_items(p, ("u", i)))
                    cob.append(vec)
        out[w] = _quotient_dims(cocycles, cob, grading.window(w), "poisson_h1")
    return out


# ------------------------------------------------------------- the center

def _center_constraint(data, key):
    _, a, e = key
    z = tuple(_mono(data.ctx, e) if b == a else Poly.zero(data.ctx) for b in range(data.q))
    out = {}
    for b in range(data.q):
        out.update(_section_vec(data.fiber_bracket(z, dy(data.ctx, b)), (b,)))
    return out


def center_sections(data: InfinitesimalData, degree: int) -> list:
    """Basis of central sections whose coefficients have x-degree ``degree``."""
    keys = [("z", a, e) for e in _base_monomials(data.ctx, degree) for a in range(data.q)]
    out = []
    for vec in linalg.kernel_vectors(keys, lambda k: _center_constraint(data, k)):
        sec = [Poly.zero(data.ctx)] * data.q
        for key, c in vec.items():
            sec[key[1]] = sec[key[1]] + Poly.monomial(data.ctx, key[-1], c)
        out.append(tuple(sec))
    return out


def center_basis(data: InfinitesimalData, w_max: int) -> dict:
    """``{weight: [central sections]}`` for weights -1..w_max."""
    grading = Grading.for_data(data)
    return {w: center_sections(data, grading.xdeg("z", w)) for w in _weights(w_max)}


# ------------------------------------------- C-linear derivations of G

def _linear_action(ctx, delta, eta):
    out = [Poly.zero(ctx)] * ctx.q
    for a, ea in enumerate(eta):
        if ea:
            for b in range(ctx.q):
                if delta[a][b]:
                    out[b] = out[b] + ea * delta[a][b]
    return tuple(out)


def _linear_derivation_defect(data, delta):
    """``delta[dy_a, dy_b] - [delta dy_a, dy_b] - [dy_a, delta dy_b]``."""
    ctx = data.ctx
    act = lambda eta: _linear_action(ctx, delta, eta)
    out = {}
    for a in range(data.q):
        for b in range(a + 1, data.q):
            ea, eb = dy(ctx, a), dy(ctx, b)
            r = sec_sub(act(data.fiber_bracket(ea, eb)),
                        sec_add(data.fiber_bracket(act(ea), eb),
                                data.fiber_bracket(ea, act(eb))))
            out.update(_section_vec(r, (a, b)))
    return out


def _inner_vector(data, eta):
    vec = {}
    for a in range(data.q):
        img = data.fiber_bracket(eta, dy(data.ctx, a))
        for b, p in enumerate(img):
            vec.update(_poly_items(p, ("d", a, b)))
    return vec


def linear_derivations_mod_inner(data: InfinitesimalData, w_max: int) -> dict:
    """C(S)-linear derivations of G modulo inner ones, per weight."""
    grading = Grading.for_data(data)
    ctx = data.ctx

    def constraint(key):
        delta = [[Poly.zero(ctx)] * ctx.q for _ in range(ctx.q)]
        delta[key[1]][key[2]] = _mono(ctx, key[-1])
        return _linear_derivation_defect(data, delta)

    out = {}
    for w in _weights(w_max):
        keys = [("d", a, b, e) for ww in grading.unknown_weights(w)
                for e in _base_monomials(ctx, grading.xdeg("d", ww))
                for a in range(ctx.q) for b in range(ctx.q)]
        cocycles = linalg.kernel_vectors(keys, constraint)
        inner = [_inner_vector(data, eta) for s in grading.potential_weights(w)
                 for eta in _section_basis(ctx, grading.xdeg("z", s))]
        out[w] = _quotient_dims(cocycles, inner, grading.window(w), "linear_derivations")
    return out


# ------------------------------------------ H^1 of the center complex

def partialD_h1(data: InfinitesimalData, w_max: int, check_square: bool = True) -> dict:
    """H^1 of the center-valued complex: central 1-vectors killed by ``d_D``
    modulo ``d_D`` of central sections. Also checks ``d_D^2 = 0`` there."""
    grading = Grading.for_data(data)
    ctx, m, q = data.ctx, data.m, data.q

    def centrality(key):
        Q = _evalued1_from_vector(ctx, {key: 1})
        vec = {}
        for (i,), sec in Q.comps.items():
            for b in range(q):
                vec.update(_section_vec(data.fiber_bracket(sec, dy(ctx, b)), ("c", i, b)))
        return vec

    def constraint(key):
        vec = centrality(key)
        dQ = contravariant_differential(data, _evalued1_from_vector(ctx, {key: 1}))
        vec.update(dQ.vector("dQ"))
        return vec

    out = {}
    for w in _weights(w_max):
        keys = [("Q", a, i, e) for ww in grading.unknown_weights(w)
                for e in _base_monomials(ctx, grading.xdeg("Q", ww))
                for a in range(q) for i in range(m)]
        if check_square:
            for vec in linalg.kernel_vectors(keys, centrality):
                Q = _evalued1_from_vector(ctx, vec)
                if not contravariant_differential(
                        data, contravariant_differential(data, Q)).is_zero():
                    raise InconsistencyError("d_D^2 does not vanish on center-valued 1-vectors")
        cocycles = linalg.kernel_vectors(keys, constraint)
        cob = []
        for s in grading.potential_weights(w):
            for z in center_sections(data, grading.xdeg("z", s)):
                dz = contravariant_differential(data, EValued(ctx, 0, {(): z}))
                if check_square and not contravariant_differential(data, dz).is_zero():
                    raise InconsistencyError("d_D^2 does not vanish on the center")
                cob.append(_evalued1_vector(dz))
        out[w] = _quotient_dims(cocycles, cob, grading.window(w), "partialD_h1")
    return out


# ------------------------------------------------ direct H^1 of the algebra

def h1_direct(data: InfinitesimalData, w_max: int) -> dict:
    """Bracket derivations of the affine algebra modulo Hamiltonian ones."""
    grading = Grading.for_data(data)
    ctx = data.ctx
    constraint = lambda k: derivation_defect(data, DerivationPair.from_vector(ctx, {k: 1}))
    out = {}
    for w in _weights(w_max):
        keys = derivation_keys(ctx, grading, grading.unknown_weights(w))
        cocycles = linalg.kernel_vectors(keys, constraint)
        hams = [hamiltonian_derivation(data, phi).vector()
                for s in grading.potential_weights(w)
                for phi in affine_basis(ctx, grading, s)]
        out[w] = _quotient_dims(cocycles, hams, grading.window(w), "h1_direct")
    return out


# ------------------------------------------------- the spaces M, C, M0, C0

def _D_df_vector(data, f):
    """``(delta, u)`` of ``D_{df}`` as a vector over keys ``d`` and ``u``."""
    vec = {}
    for a in range(data.q):
        img = data.D_df(f, dy(data.ctx, a))
        for b, p in enumerate(img):
            vec.update(_poly_items(p, ("d", a, b)))
    for j in range(data.m):
        vec.update(_poly_items(data.psi_bracket(f, Poly.var(data.ctx, j)), ("u", j)))
    return vec


def mspace_equations(data, pair: DerivationPair, Qt: EValued) -> dict:
    """Defining equations of M(P) for ``(delta, u)`` with auxiliary ``Q~``."""
    ctx, m, q = data.ctx, data.m, data.q
    out = {}
    gens = [dy(ctx, a) for a in range(q)]
    # delta is a derivation of [.,.]_1
    for a in range(q):
        for b in range(a + 1, q):
            r = sec_sub(pair.apply_delta(data.fiber_bracket(gens[a], gens[b])),
                        sec_add(data.fiber_bracket(pair.apply_delta(gens[a]), gens[b]),
                                data.fiber_bracket(gens[a], pair.apply_delta(gens[b]))))
            out.update(_section_vec(r, ("der", a, b)))
    # the symbol is a Poisson vector field
    u = Multivector(ctx, 1, {(i,): p for i, p in enumerate(pair.u)}, on_S=True)
    for idx, p in schouten(data.psi, u).items():
        out.update(_poly_items(p, ("pois", idx)))
    # D_{dx_i} delta - delta D_{dx_i} + D_{d u^i} = [Q~(dx_i), .]_1
    for i in range(m):
        for a in range(q):
            r = sec_sub(data.D_dx(i, pair.apply_delta(gens[a])),
                        pair.apply_delta(data.D_dx(i, gens[a])))
            r = sec_add(r, data.D_df(pair.u[i], gens[a]))
            r = sec_sub(r, data.fiber_bracket(Qt.get((i,)), gens[a]))
            out.update(_section_vec(r, ("conn", i, a)))
    # delta K_ij - K(d u^i, dx_j) - K(dx_i, d u^j) + (d_D Q~)_ij = 0
    dQt = contravariant_differential(data, Qt)
    for i, j in combinations(range(m), 2):
        r = pair.apply_delta(data.K_ij(i, j))
        r = sec_add(r, data.K_dx_dg(j, pair.u[i]))
        r = sec_sub(r, data.K_dx_dg(i, pair.u[j]))
        r = sec_add(r, dQt.get((i, j)))
        out.update(_section_vec(r, ("curv", i, j)))
    return out


def _mspace_defect(data, vec) -> dict:
    pair = DerivationPair.from_vector(
        data.ctx, {k: c for k, c in vec.items() if k[0] in ("d", "u")})
    Qt = _evalued1_from_vector(data.ctx, {k: c for k, c in vec.items() if k[0] == "Qt"})
    return mspace_equations(data, pair, Qt)


def _is_u_key(k):
    return k[0] == "u"


@dataclass
class MSpace:
    """Bases (as key-indexed vectors over ``delta``/``u`` keys) in one weight."""

    weight: int
    M: list
    C: list
    Inn: list
    M0: list
    C0: list
    image_sigma: list
    Ham: list

    @property
    def dims(self):
        dim_M, dim_M0, dim_im = len(self.M), len(self.M0), len(self.image_sigma)
        dim_ham = linalg.rank(self.Ham)
        return {
            "M": dim_M, "C": linalg.rank(self.C), "Inn": linalg.rank(self.Inn),
            "M0": dim_M0, "C0": linalg.rank(self.C0),
            "im_sigma": dim_im, "Ham": dim_ham,
            "M_mod_C_Inn": dim_M - linalg.rank(self.C + self.Inn),
            "M0_mod_C0_Inn": dim_M0 - linalg.rank(self.C0 + self.Inn),
            "im_sigma_mod_Ham": dim_im - dim_ham,
        }


def m_space(data: InfinitesimalData, w_max: int) -> dict:
    """Per weight: M(P), C(P), Inn G, M0(P), C0(P), Im sigma|_M and Ham(S, psi)."""
    grading = Grading.for_data(data)
    ctx = data.ctx
    out = {}
    for w in _weights(w_max):
        outside = (lambda win: (lambda k: not win(k)))(grading.window(w))
        keys = derivation_keys(ctx, grading, grading.unknown_weights(w), q_kind="Qt")
        kernel = linalg.kernel_vectors(keys, lambda k: _mspace_defect(data, {k: 1}))
        M = linalg.span_basis({k: c for k, c in v.items() if k[0] in ("d", "u")}
                              for v in kernel)
        M0 = linalg.intersect_zero(M, _is_u_key)
        image_sigma = linalg.span_basis({k: c for k, c in v.items() if k[0] == "u"} for v in M)

        C, Inn, Ham = [], [], []
        for s in grading.potential_weights(w):
            for e in _base_monomials(ctx, grading.xdeg("f", s)):
                vec = _D_df_vector(data, _mono(ctx, e))
                C.append(vec)
                Ham.append({k: c for k, c in vec.items() if k[0] == "u"})
            for eta in _section_basis(ctx, grading.xdeg("z", s)):
                Inn.append(_inner_vector(data, eta))
        C = linalg.intersect_zero(C, outside)
        Inn = linalg.intersect_zero(Inn, outside)
        Ham = linalg.intersect_zero(Ham, outside)
        C0 = linalg.intersect_zero(C, _is_u_key)

        if linalg.rank(M + C + Inn) != len(M):
            raise InconsistencyError(f"weight {w}: C(P) + Inn G is not contained in M(P)")
        if linalg.rank(M0 + Inn) != len(M0):
            raise InconsistencyError(f"weight {w}: Inn G is not contained in M0(P)")
        if linalg.rank(image_sigma + Ham) != len(image_sigma):
            raise InconsistencyError(f"weight {w}: Ham(S, psi) is not contained in Im sigma")
        out[w] = MSpace(w, M, C, Inn, M0, C0, image_sigma, Ham)
    return out


def hamiltonian_witnesses(data: InfinitesimalData, degree: int) -> bool:
    """``delta = D_df`` with ``Q~ = -K(df, .)`` solves the M(P) equations for
    every monomial ``f`` of the given x-degree."""
    ctx = data.ctx
    for e in _base_monomials(ctx, degree):
        f = _mono(ctx, e)
        pair = DerivationPair.from_vector(ctx, _D_df_vector(data, f))
        Qt = EValued(ctx, 1, {(i,): sec_neg(data.K_df_dg(f, Poly.var(ctx, i)))
                              for i in range(data.m)})
        if mspace_equations(data, pair, Qt):
            return False
    return True


# ------------------------------------------------------------- reporting

@dataclass
class CohomologyReport:
    w_max: int
    grading: Grading
    per_weight: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def truncated(self):
        return self.grading.truncated

    def as_dict(self):
        out = {"w_max": self.w_max}
        out.update(self.grading.describe())
        out["per_weight"] = {str(w): self.per_weight[w] for w in sorted(self.per_weight)}
        out["checks"] = self.checks
        return out


def exact_sequence_report(data: InfinitesimalData, w_max: int) -> CohomologyReport:
    """Assemble every per-weight dimension and check the two exact sequences."""
    grading = Grading.for_data(data)
    centers = center_basis(data, w_max)
    ph1 = poisson_h1(data.psi, w_max)
    lin = linear_derivations_mod_inner(data, w_max)
    pd = partialD_h1(data, w_max)
    ms = m_space(data, w_max)
    direct = h1_direct(data, w_max)

    report = CohomologyReport(w_max, grading)
    lemma3 = lemma4 = True
    for w in _weights(w_max):
        mdims = ms[w].dims
        add_ok = mdims["M_mod_C_Inn"] == mdims["M0_mod_C0_Inn"] + mdims["im_sigma_mod_Ham"]
        bound_ok = direct[w].quotient <= pd[w].quotient + mdims["M_mod_C_Inn"]
        report.per_weight[w] = {
            "center": len(centers[w]),
            "poisson_h1": ph1[w].as_dict(),
            "linear_derivations_mod_inner": lin[w].as_dict(),
            "partialD_h1": pd[w].as_dict(),
            "m_space": mdims,
            "h1_direct": direct[w].as_dict(),
            "lemma3_additivity": add_ok,
            "lemma4_bound": bound_ok,
        }
        lemma3 &= add_ok
        lemma4 &= bound_ok
    report.checks = {"lemma3_additivity": lemma3, "lemma4_bound": lemma4}
    if grading.homogeneous and not (lemma3 and lemma4):
        raise InconsistencyError(f"exact sequence accounting failed: {report.checks}")
    return report


@dataclass
class Verdict:
    w_max: int
    grading: Grading
    conditions: dict
    generalized: dict
    h1_direct: dict
    verdict: str

    @property
    def truncated(self):
        return self.grading.truncated

    @property
    def theorem1_holds(self):
        return all(self.conditions.values())

    @property
    def generalized_holds(self):
        return all(self.generalized.values())

    @property
    def h1_vanishes(self):
        return all(d["quotient"] == 0 for d in self.h1_direct.values())

    def as_dict(self):
        out = {"w_max": self.w_max}
        out.update(self.grading.describe())
        out.update({
            "conditions": self.conditions,
            "generalized": self.generalized,
            "h1_direct": {str(w): d for w, d in sorted(self.h1_direct.items())},
            "verdict": self.verdict,
        })
        return out


def theorem1_check(data: InfinitesimalData, w_max: int) -> Verdict:
    """Evaluate both vanishing criteria in the window and confirm directly.

    Condition (iii) inspects central sections of every weight up to
    ``w_max + nu``, which covers the values of center-valued 1-vectors of
    weight ``<= w_max``. A passing criterion with nonzero direct H^1 raises
    :class:`TheoremViolation` (for truncated data the verdict says so instead).
    """
    grading = Grading.for_data(data)
    ph1 = poisson_h1(data.psi, w_max)
    lin = linear_derivations_mod_inner(data, w_max)
    top = max(grading.xdeg("Q", w_max), 0)
    centerless = all(not center_sections(data, d) for d in range(0, top + 1))
    pd = partialD_h1(data, w_max)
    direct = h1_direct(data, w_max)

    cond = {
        "i_poisson_h1_trivial": all(d.quotient == 0 for d in ph1.values()),
        "ii_linear_derivations_inner": all(d.quotient == 0 for d in lin.values()),
        "iii_centerless": centerless,
    }
    gen = {
        "poisson_h1_trivial": cond["i_poisson_h1_trivial"],
        "lie_algebra_h1_trivial": cond["ii_linear_derivations_inner"],
        "center_complex_h1_trivial": all(d.quotient == 0 for d in pd.values()),
    }
    dims_text = ", ".join(f"w{w}:{d.quotient}" for w, d in sorted(direct.items()))
    h1_zero = all(d.quotient == 0 for d in direct.values())

    if all(cond.values()) or all(gen.values()):
        if not h1_zero:
            msg = f"criterion passed but H1 is nonzero ({dims_text})"
            if grading.homogeneous:
                raise TheoremViolation(msg)
            text = f"inconclusive (truncated window): {msg}"
        elif all(cond.values()):
            text = "trivial: conditions (i)(ii)(iii) hold; H1 = 0 (verified directly)"
        else:
            text = ("trivial: Poisson, Lie algebra and center-complex H1 vanish; "
                    "H1 = 0 (verified directly)")
    else:
        failed = ",".join(f"({k.split('_')[0]})" for k, v in cond.items() if not v)
        text = f"inconclusive: condition(s) {failed} fail; direct H1 dims {dims_text}"
    return Verdict(w_max, grading, cond, gen,
                   {w: d.as_dict() for w, d in direct.items()}, text)


def weight_stability(data: InfinitesimalData, w_max: int) -> bool:
    """Reports at ``w_max`` and ``w_max + 1`` agree on their shared weights."""
    a = exact_sequence_report(data, w_max).per_weight
    b = exact_sequence_report(data, w_max + 1).per_weight
    return all(a[w] == b[w] for w in a)
