"""Jacobi polynomials with a degree-proportional parameter, P_n^(an+alpha, beta)(1 - 2 lam^2).

The quantity computed throughout is the scaled value

    S_n = lam^(an+alpha) (1 - lam^2)^beta P_n^(an+alpha, beta)(1 - 2 lam^2)

by three independent routes: an extended-precision explicit sum
(:mod:`varjacobi.exact`), a two-integral contour representation evaluated by
quadrature (:mod:`varjacobi.contour`) and regime-wise asymptotic formulas and
bounds (:mod:`varjacobi.asymptotics`).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BreakdownWarning,
    CertificateRefused,
    ConfigError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    InsufficientData,
    IntegerGammaError,
    PrecisionWarning,
    RegimeError,
    SaturationWarning,
    VarJacobiError,
)
from .params import (  # noqa: E402
    EvalPoint,
    ParamSet,
    Regime,
    RegimeTag,
    classify,
    h_laplace,
    h_phase,
    laplace_data,
    stationary_data,
)
from .exact import PrecisionConfig, ScaledValue, jacobi_general, scaled_exact  # noqa: E402
from .contour import IntegralParts, QuadratureConfig, scaled_via_integrals  # noqa: E402
from .asymptotics import (  # noqa: E402
    AsymptoticEstimate,
    BoundCertificate,
    bound_certificate,
    estimate,
    estimate_darboux,
)
