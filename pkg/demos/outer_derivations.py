"""Where Theorem 1 fails: fibers with a center or outer derivations.

For each Lie-Poisson structure at a point, compare the direct H^1 of the
infinitesimal algebra with the outer derivations of the fiber. The
nonabelian two-dimensional algebra aff(1) is centerless with only inner
derivations, so the criterion applies to it although it is not semisimple.

Run: python3 demos/outer_derivations.py
"""

from ipw.cohomology import linear_derivations_mod_inner, theorem1_check
from ipw.infinitesimal import extract
from ipw.multivector import Multivector
from ipw.polyring import VarContext, parse_poly

ALGEBRAS = {
    "so(3)": (3, {("y1", "y2"): "y3", ("y2", "y3"): "y1", ("y1", "y3"): "-y2"}),
    "sl(2)": (3, {("y1", "y2"): "2*y2", ("y1", "y3"): "-2*y3", ("y2", "y3"): "y1"}),
    "heisenberg": (3, {("y1", "y2"): "y3"}),
    "aff(1)": (2, {("y1", "y2"): "y2"}),
    "aff(1) + R": (3, {("y1", "y2"): "y2"}),
    "abelian R^3": (3, {}),
}

for name, (q, brackets) in ALGEBRAS.items():
    ctx = VarContext([], [f"y{a + 1}" for a in range(q)])
    pi = Multivector(ctx, 2, {(ctx.index(a), ctx.index(b)): parse_poly(t, ctx)
                              for (a, b), t in brackets.items()})
    data = extract(pi, ctx)
    outer = linear_derivations_mod_inner(data, 0)[0].quotient
    verdict = theorem1_check(data, 0)
    print(f"{name:>12}: outer derivations {outer}, direct H1 {verdict.h1_direct[0]['quotient']}, "
          f"centerless {verdict.conditions['iii_centerless']}")
