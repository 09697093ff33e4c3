"""gnlab: a numerical laboratory for functional inequalities on graphs.

Finite weighted graphs play the role of metric measure spaces: vertex
measures and edge weights define Lebesgue norms, gradient moduli, a
heat semigroup, decreasing rearrangements, and the smoothness scales
built from them.  On top of those objects the ``ineq`` module measures
empirical constants of interpolation, symmetrization, and embedding
inequalities over reproducible corpora of test functions, and the
``gnlab`` command line drives suites of such checks.
"""

__version__ = "0.1.0"

from .corpus import Corpus, generate
from .funcnorms import (
    besov_norm,
    gradient_modulus,
    hessian_modulus,
    lp_norm,
    maximal_function,
    morrey_norm,
    sobolev_norm,
    triebel_sup,
)
from .heat import Semigroup
from .ineq import CheckReport, REPORT_SCHEMA, exponents, lorentz_exponents
from .kprime import (
    Decomposition,
    equivalence_report,
    kprime_convex_solve,
    kprime_lower,
    kprime_upper,
)
from .rearrange import (
    StepFunction,
    decreasing_rearrangement,
    distribution,
    double_star,
    k_functional_Lq_Linf,
    lorentz_norm,
    qstar_powers,
    step_product_integral,
)
from .space import (
    Space,
    build_builtin,
    build_from_file,
    doubling_constant,
    doubling_profile,
    growth_exponent,
)

__all__ = [
    "Corpus",
    "generate",
    "besov_norm",
    "gradient_modulus",
    "hessian_modulus",
    "lp_norm",
    "maximal_function",
    "morrey_norm",
    "sobolev_norm",
    "triebel_sup",
    "Semigroup",
    "CheckReport",
    "REPORT_SCHEMA",
    "exponents",
    "lorentz_exponents",
    "Decomposition",
    "equivalence_report",
    "kprime_convex_solve",
    "kprime_lower",
    "kprime_upper",
    "StepFunction",
    "decreasing_rearrangement",
    "distribution",
    "double_star",
    "k_functional_Lq_Linf",
    "lorentz_norm",
    "qstar_powers",
    "step_product_integral",
    "Space",
    "build_builtin",
    "build_from_file",
    "doubling_constant",
    "doubling_profile",
    "growth_exponent",
    "__version__",
]
