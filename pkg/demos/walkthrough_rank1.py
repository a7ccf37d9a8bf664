"""Walk through the pipeline on pi = (1 + y1) dx1^dx2 with S = {y1 = 0}.

Run: python3 demos/walkthrough_rank1.py
"""

from ipw import example_path, load_problem
from ipw.cohomology import exact_sequence_report, theorem1_check
from ipw.infinitesimal import AffineElement, affine_bracket, extract, verify_pt

problem = load_problem(example_path("rank1_curvature"))
ctx, pi = problem.ctx, problem.pi
print("pi =", pi)

data = extract(pi, ctx)
print("psi =", data.psi)
print("K(dx1, dx2) =", [str(p) for p in data.K_ij(0, 1)])
print("compatibility relations:", verify_pt(data).ok)

x1, x2 = AffineElement.parse("x1", ctx), AffineElement.parse("x2", ctx)
print("{x1, x2}_aff =", affine_bracket(data, x1, x2))

# The normal direction is an abelian rank-one fiber, so the center is nonzero
# and Theorem 1 does not apply. The direct computation finds one class in
# weight 0 that the exact sequences attribute to M0 / (C0 + Inn).
report = exact_sequence_report(data, 2)
for w, row in report.per_weight.items():
    print(f"weight {w:>2}: center {row['center']}, H1(P) {row['h1_direct']['quotient']}, "
          f"M0/(C0+Inn) {row['m_space']['M0_mod_C0_Inn']}")
print(theorem1_check(data, 2).verdict)
