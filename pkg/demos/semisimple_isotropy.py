"""Compact semisimple isotropy: the so(3) Lie-Poisson structure at the origin,
and the same fiber over a symplectic plane.

Run: python3 demos/semisimple_isotropy.py
"""

from ipw import example_path, load_problem
from ipw.cohomology import Grading, theorem1_check
from ipw.infinitesimal import extract

for name, w_max in (("so3_origin", 3), ("so3_leaf", 2)):
    problem = load_problem(example_path(name))
    data = extract(problem.pi, problem.ctx)
    grading = Grading.for_data(data)
    verdict = theorem1_check(data, w_max)
    print(f"{name}: fiber weight {grading.nu}, weight shift {grading.p}")
    for k, ok in verdict.conditions.items():
        print(f"  {k}: {ok}")
    dims = {w: d["quotient"] for w, d in verdict.h1_direct.items()}
    print(f"  direct H1 by weight: {dims}")
    print(f"  {verdict.verdict}")
