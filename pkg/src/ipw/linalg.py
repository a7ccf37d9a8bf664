"""
Exact sparse linear algebra over Q.

Vectors are dicts ``{key: Fraction}`` with arbitrary hashable keys. Elimination
is fraction-free: rows are scaled to integers, combined as
``p*row - a*pivot_row`` and divided by their content. Pivots are chosen by
column order, where columns are numbered by first appearance, so results are
reproducible for deterministic inputs.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _to_int_row(vec, col_index):
    den = 1
    for v in vec.values():
        if v:
            den = lcm(den, Fraction(v).denominator)
    row = {}
    for k, v in vec.items():
        if v:
            v = Fraction(v) * den
            row[col_index(k)] = v.numerator
    return _normalize(row)


def _normalize(row):
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _combine(row, prow, col):
    """Eliminate ``col`` from ``row`` using pivot row ``prow``."""
    p, a = prow[col], row[col]
    out = {k: p * v for k, v in row.items()}
    for k, v in prow.items():
        s = out.get(k, 0) - a * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return _normalize(out)


class Echelon:
    """Incrementally built row echelon form (one pivot row per column)."""

    def __init__(self):
        self.columns: dict = {}
        self.pivots: dict = {}

    def col(self, key):
        idx = self.columns.get(key)
        if idx is None:
            idx = self.columns[key] = len(self.columns)
        return idx

    def reduce(self, row):
        while row:
            lead = min(row)
            prow = self.pivots.get(lead)
            if prow is None:
                return row
            row = _combine(row, prow, lead)
        return row

    def add(self, vec) -> bool:
        """Insert a vector; return True if it was independent."""
        row = self.reduce(_to_int_row(vec, self.col))
        if row:
            self.pivots[min(row)] = row
            return True
        return False

    def contains(self, vec) -> bool:
        if any(k not in self.columns for k, v in vec.items() if v):
            return False
        row = _to_int_row(vec, self.columns.__getitem__)
        return not self.reduce(row)

    @property
    def rank(self):
        return len(self.pivots)


def rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def span_basis(vectors) -> list:
    """An independent subset of ``vectors`` spanning the same space (first-come)."""
    ech = Echelon()
    return [dict(v) for v in vectors if ech.add(v)]


def in_span(vectors, v) -> bool:
    ech = Echelon()
    for u in vectors:
        ech.add(u)
    return ech.contains(v)


def nullspace(columns) -> list:
    """Basis of ``{c : sum_j c_j columns[j] = 0}`` as dicts ``{j: Fraction}``."""
    n = len(columns)
    rows: dict = {}
    for j, colvec in enumerate(columns):
        for k, v in colvec.items():
            if v:
                rows.setdefault(k, {})[j] = Fraction(v)
    ech = Echelon()
    for j in range(n):
        ech.col(j)
    for r in rows.values():
        row = ech.reduce(_to_int_row(r, ech.col))
        if row:
            ech.pivots[min(row)] = row
    # back substitution to reduced form
    order = sorted(ech.pivots)
    for pc in reversed(order):
        prow = ech.pivots[pc]
        for oc in order:
            if oc < pc:
                orow = ech.pivots[oc]
                if pc in orow:
                    ech.pivots[oc] = _combine(orow, prow, pc)
    free = [j for j in range(n) if j not in ech.pivots]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for pc, prow in ech.pivots.items():
            e = prow.get(f)
            if e:
                vec[pc] = Fraction(-e, prow[pc])
        basis.append(vec)
    return basis


def combine(coeffs, vectors) -> dict:
    """``sum_j coeffs[j] * vectors[j]``."""
    out: dict = {}
    for j, c in coeffs.items():
        for k, v in vectors[j].items():
            s = out.get(k, 0) + c * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def restrict(vec, keep) -> dict:
    return {k: v for k, v in vec.items() if keep(k)}


def intersect_zero(vectors, is_constrained) -> list:
    """Basis of ``span(vectors)`` intersected with ``{v[k] = 0 for constrained k}``."""
    vectors = list(vectors)
    cols = [restrict(v, is_constrained) for v in vectors]
    kernel = nullspace(cols)
    return span_basis(combine(c, vectors) for c in kernel)


def kernel_vectors(keys, constraint) -> list:
    """Kernel of a linear map given on basis keys, as key-indexed vectors."""
    columns = [constraint(k) for k in keys]
    return [{keys[j]: c for j, c in vec.items()} for vec in nullspace(columns)]
