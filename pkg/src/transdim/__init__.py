"""Exact transseries arithmetic, differential polynomials, dimension rules,
constant creation for first-order equations and a finite co-analysis lab."""

from .coanalysis import (
    CoAnalysisCertificate,
    FiniteStructure,
    check_certificate,
    coanalyzable_bounded,
    fiberable_bounded,
    tee_fiberability_demo,
)
from .codim_rank import TransMatrix, codim_lower_bound, jacobian_at, minor_rank, strongly_d_independent_at
from .constant_param import build_certificate, decide_creation, hermite_reduce, residues, verify_certificate
from .diffpoly import DiffPolynomial, evaluate, order_vector, partial, separant, total_derive
from .dimension import dim_eval, discreteness_flag, member
from .errors import TransdimError
from .exact_algebra import RatFunc, UniPoly, poly_gcd, rational_roots, resultant, squarefree_decomp
from .parser import parse_descriptor, parse_diffpoly, parse_transseries
from .transseries import (
    Transseries,
    dagger,
    derive,
    dominant_monomial,
    exp_large,
    lambda_member,
    omega_member,
    sign,
    truncated_div,
)

__version__ = "0.1.0"
