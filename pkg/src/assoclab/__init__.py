"""assoclab: exact and high-precision workbench for truncated associators
and multiple zeta value identities."""

__version__ = "0.1.0"

from .scalars import Rational, QuadExt, BigFloat, rational_normalize, quadext_mul, to_decimal
from .ncseries import (
    NCSeries,
    index_to_word,
    word_to_index,
    zeta_of,
    shuffle_words,
    is_grouplike,
    antipode,
    series_inverse,
    series_exp,
    series_log,
    pi_project,
    regularized_coeff,
    series_from_admissible,
    duality_partner,
    grt_mul,
    substitute,
    random_grouplike,
)
from .braid import (
    BraidElement,
    AssociatorCandidate,
    pentagon_residual,
    hexagon_residuals,
    two_cycle_residual,
    is_degenerate_associator,
)
from .mzv import mzv_partial_sum, mzv_eval, mzv_table, MZVCache
from .kz import KZTruncation, build_kz, check_kz
from .solver import constraints_at_degree, solve_generic, mu_from_phi
from . import relations
