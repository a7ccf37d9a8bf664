"""
Multivector fields with polynomial coefficients and the Schouten-Nijenhuis bracket.

A k-vector is stored sparsely as ``{(i1 < ... < ik): Poly}``, the key standing
for ``d/dz_i1 ^ ... ^ d/dz_ik``. Internally the bracket is computed in the
superfunction picture where ``d/dz_i`` is an odd variable ``theta_i``::

    [A, B] = sum_i (A <d/dtheta_i) (d/dz_i B)
             - (-1)^((a-1)(b-1)) (B <d/dtheta_i) (d/dz_i A)

with ``<d/dtheta`` the right derivative. This is the standard bracket: graded
antisymmetric, graded Jacobi, a biderivation of the wedge product,
``[X, f] = X(f)`` and ``[X, Y]`` the Lie bracket of vector fields.

Sign convention: for a bivector ``pi`` the Poisson bracket is
``{f, g} = pi(df, dg) = sum pi^{ij} d_i f d_j g`` and the Hamiltonian vector
field is ``X_f = pi(df, .)``, so that ``X_f(g) = {f, g}``. With the bracket
above, ``[pi, f] = -X_f``. The Lichnerowicz differential is ``d = [pi, .]``.
"""

from __future__ import annotations

from itertools import combinations

from .polyring import Poly, VarContext


class NotPoissonError(ValueError):
    """Raised when a bivector fails the Jacobi identity."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def _merge(I, J):
    """Sign and sorted union of theta_I * theta_J (sign 0 if they overlap)."""
    inversions = 0
    for i in I:
        for j in J:
            if i == j:
                return 0, None
            if i > j:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(I + J))


class Multivector:
    """A homogeneous k-vector field on the ambient space or on S.

    ``on_S`` multivectors only use the first ``ctx.m`` (base) coordinates and
    must have y-free coefficients.
    """

    __slots__ = ("ctx", "grade", "on_S", "_comps")

    def __init__(self, ctx: VarContext, grade: int, comps=None, on_S: bool = False):
        if grade < 0:
            raise ValueError("grade must be nonnegative")
        self.ctx = ctx
        self.grade = grade
        self.on_S = on_S
        dim = ctx.m if on_S else ctx.n
        clean = {}
        for idx, p in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != grade:
                raise ValueError(f"index {idx} does not have length {grade}")
            if any(not 0 <= i < dim for i in idx):
                raise ValueError(f"index {idx} out of range for dimension {dim}")
            if not isinstance(p, Poly):
                p = Poly.const(ctx, p)
            if p.ctx != ctx:
                raise ValueError("coefficient from a different variable context")
            if on_S and not p.is_y_free():
                raise ValueError("multivector on S needs y-free coefficients")
            # bring the index to increasing order, tracking the sign
            order = sorted(range(grade), key=lambda k: idx[k])
            srt = tuple(idx[k] for k in order)
            if len(set(srt)) < grade:
                continue
            sign = _perm_sign(order)
            p = p if sign > 0 else -p
            if srt in clean:
                p = clean[srt] + p
            if p:
                clean[srt] = p
            else:
                clean.pop(srt, None)
        self._comps = clean

    @property
    def dim(self) -> int:
        return self.ctx.m if self.on_S else self.ctx.n

    @classmethod
    def function(cls, f: Poly, on_S=False):
        return cls(f.ctx, 0, {(): f} if f else {}, on_S)

    @classmethod
    def basis_vector(cls, ctx, i, on_S=False):
        return cls(ctx, 1, {(i,): Poly.const(ctx, 1)}, on_S)

    @classmethod
    def zero(cls, ctx, grade, on_S=False):
        return cls(ctx, grade, {}, on_S)

    def components(self):
        return dict(self._comps)

    def items(self):
        return self._comps.items()

    def __getitem__(self, idx):
        """Component for an arbitrary (not necessarily sorted) index tuple."""
        idx = tuple(idx)
        if len(set(idx)) < len(idx):
            return Poly.zero(self.ctx)
        order = sorted(range(len(idx)), key=lambda k: idx[k])
        p = self._comps.get(tuple(idx[k] for k in order))
        if p is None:
            return Poly.zero(self.ctx)
        return p if _perm_sign(order) > 0 else -p

    def is_zero(self):
        return not self._comps

    def __bool__(self):
        return bool(self._comps)

    def _check(self, other):
        if not isinstance(other, Multivector):
            raise TypeError("expected a Multivector")
        if other.ctx != self.ctx or other.on_S != self.on_S:
            raise ValueError("multivectors from different contexts")

    def __add__(self, other):
        self._check(other)
        if other.grade != self.grade:
            raise ValueError("cannot add multivectors of different grades")
        comps = dict(self._comps)
        for k, p in other._comps.items():
            s = comps[k] + p if k in comps else p
            if s:
                comps[k] = s
            else:
                comps.pop(k, None)
        return self._new(self.grade, comps)

    def __neg__(self):
        return self._new(self.grade, {k: -p for k, p in self._comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, Poly):
            return self._new(self.grade, {k: p * c for k, p in self._comps.items() if p * c})
        return self._new(self.grade, {k: p.scale(c) for k, p in self._comps.items() if c})

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.ctx == other.ctx
        return (self.ctx == other.ctx and self.grade == other.grade
                and self._comps == other._comps)

    def __hash__(self):
        return hash((self.grade, frozenset(self._comps.items())))

    def _new(self, grade, comps):
        mv = object.__new__(Multivector)
        mv.ctx = self.ctx
        mv.grade = grade
        mv.on_S = self.on_S
        mv._comps = {k: p for k, p in comps.items() if p}
        return mv

    def diff(self, i):
        return self._new(self.grade, {k: p.diff(i) for k, p in self._comps.items()})

    def right_dtheta(self, i):
        comps = {}
        for I, p in self._comps.items():
            if i in I:
                pos = I.index(i)
                rest = I[:pos] + I[pos + 1:]
                comps[rest] = -p if (len(I) - 1 - pos) & 1 else p
        return self._new(self.grade - 1, comps)

    def __str__(self):
        if not self._comps:
            return "0"
        names = self.ctx.names
        parts = []
        for I in sorted(self._comps):
            p = self._comps[I]
            basis = "^".join(f"d{names[i]}" for i in I) or "1"
            parts.append(f"({p})*{basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Multivector(grade={self.grade}, {self})"


def _perm_sign(order):
    sign = 1
    seen = list(order)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


def wedge(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    comps: dict = {}
    for I, p in a.items():
        for J, r in b.items():
            sign, K = _merge(I, J)
            if not sign:
                continue
            t = p * r
            if sign < 0:
                t = -t
            comps[K] = comps[K] + t if K in comps else t
    return a._new(a.grade + b.grade, comps)


def schouten(a: Multivector, b: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket, grade ``a.grade + b.grade - 1``."""
    a._check(b)
    k, l = a.grade, b.grade
    if k + l == 0:
        return Multivector.zero(a.ctx, 0, a.on_S)
    sign = -1 if ((k - 1) * (l - 1)) & 1 else 1
    result = Multivector.zero(a.ctx, k + l - 1, a.on_S)
    for i in range(a.dim):
        if k:
            result = result + wedge(a.right_dtheta(i), b.diff(i))
        if l:
            t = wedge(b.right_dtheta(i), a.diff(i))
            result = result - t if sign > 0 else result + t
    return result


def jacobi_check(pi: Multivector):
    """``(True, residual)`` iff ``[pi, pi] = 0``."""
    if pi.grade != 2:
        raise ValueError("jacobi_check needs a bivector")
    residual = schouten(pi, pi)
    return residual.is_zero(), residual


def lichnerowicz_d(psi: Multivector, a: Multivector) -> Multivector:
    """``[psi, a]``; refuses to act with a non-Poisson ``psi``."""
    ok, residual = jacobi_check(psi)
    if not ok:
        raise NotPoissonError("bivector fails the Jacobi identity", residual)
    return schouten(psi, a)


def bracket_of(pi: Multivector, f: Poly, g: Poly) -> Poly:
    """``{f, g} = pi(df, dg)``."""
    out = Poly.zero(f.ctx)
    for (i, j), p in pi.items():
        fi, fj = f.diff(i), f.diff(j)
        gi, gj = g.diff(i), g.diff(j)
        if (fi and gj) or (fj and gi):
            out = out + p * (fi * gj - fj * gi)
    return out


def hamiltonian_vector_field(pi: Multivector, f: Poly) -> Multivector:
    """``X_f = pi(df, .)``, i.e. ``X_f(g) = {f, g}``."""
    comps = {}
    for j in range(pi.dim):
        xj = Poly.var(pi.ctx, j)
        comps[(j,)] = bracket_of(pi, f, xj)
    return Multivector(pi.ctx, 1, comps, pi.on_S)


def apply_vector_field(X: Multivector, f: Poly) -> Poly:
    out = Poly.zero(f.ctx)
    for (i,), p in X.items():
        out = out + p * f.diff(i)
    return out


def bivector_from_components(ctx, comps, on_S=False) -> Multivector:
    return Multivector(ctx, 2, comps, on_S)


def index_tuples(dim, grade):
    return list(combinations(range(dim), grade))
