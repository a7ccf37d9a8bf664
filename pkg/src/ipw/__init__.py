"""Exact computations for the infinitesimal Poisson algebra of a coordinate
Poisson submanifold ``S = {y = 0}``."""

from importlib import resources

from .cohomology import (CohomologyReport, DerivationPair, InconsistencyError,
                         TheoremViolation, Verdict, center_basis,
                         contravariant_differential, exact_sequence_report,
                         h1_direct, linear_derivations_mod_inner, m_space,
                         partialD_h1, poisson_h1, theorem1_check, weight_stability)
from .infinitesimal import (AffineElement, InfinitesimalData, NotPoissonSubmanifold,
                            affine_bracket, check_poisson_submanifold, extract,
                            first_order_check, verify_pt)
from .multivector import (Multivector, NotPoissonError, jacobi_check,
                          lichnerowicz_d, schouten, wedge)
from .polyring import ExponentOverflow, ParseError, Poly, VarContext, parse_poly
from .problem import Problem, ProblemError, load_problem, parse_problem

__version__ = "0.1.0"


def example_path(name: str):
    """Path of a bundled problem file, e.g. ``example_path("so3_origin")``."""
    return resources.files(__name__) / "data" / f"{name}.ipw"


def example_names():
    return sorted(p.name[:-4] for p in (resources.files(__name__) / "data").iterdir()
                  if p.name.endswith(".ipw"))
