"""Sharp norm of the weighted Bergman projection on the unit ball of C^n.

Closed-form constants, Monte Carlo and hypergeometric evidence for the
operator ``P_sigma : L^1(B, dlambda) -> B_1``.
"""

from .ball_geometry import (
    as_point,
    identity_residual,
    inner_product,
    moebius_map,
    norm_sq,
    real_jacobian,
    unit_vector,
)
from .bergman_ops import (
    ExtremalFunction,
    Monomial,
    MultiIndex,
    ProjectionParams,
    WeightedMonomial,
    besov_seminorm,
    enumerate_multiindices,
    extremal_g,
    kernel,
    l1_lambda_norm,
    maximizer_g,
    pairing_lambda,
    pairing_v,
    project,
    q_conj,
    q_op,
    shipped_family,
    shipped_pairs,
)
from .certification import (
    TOLERANCES,
    NormCertificate,
    boundary_limit,
    certify,
    closed_constant,
    divergence_probe,
    inequality_spotcheck,
    lower_bound_sweep,
    upper_bound_profile,
)
from .errors import (
    DegenerateParameterError,
    DivergenceError,
    DomainError,
    InadmissibleIntegrandError,
    NumericError,
    UnboundedOperatorError,
)
from .quadrature import (
    IntegralEstimate,
    QuadratureConfig,
    integrate_lambda,
    integrate_pullback,
    integrate_radial,
    integrate_v,
    j_numeric,
)
from .special_functions import (
    JIntegralSpec,
    gamma_ratio,
    gauss_2f1,
    gauss_2f1_at_one,
    j_boundary,
    j_closed_form,
    j_limit,
    log_gamma,
)

__version__ = "0.1.0"
