"""Riemannian geometry of p-Gaussian distribution families."""

from .errors import (
    DegenerateMetricError,
    DomainError,
    EmbeddingError,
    FisherNonexistenceError,
    InfoGeoError,
    NonConvergenceError,
    NotRiemannianError,
    NotSPDError,
    NumericalError,
    ParseError,
    StepFailure,
    StepSizeError,
)
from .family import (
    EntropyValue,
    FamilyParams,
    Point,
    covariance,
    density,
    density_power_integral,
    log_density,
    normalization_constant,
    renyi_entropy,
    sample,
    shannon_entropy,
    tsallis_entropy,
)
from .metric import (
    LMR,
    CalvoOller,
    Fisher,
    KuboMori,
    Largest,
    MetricParams,
    Renyi,
    Tangent,
    Tsallis,
    Unified,
    as_unified,
    named_eval,
    signature,
    unified_eval,
)
from .geometry import (
    ClosedGeodesic,
    GeodesicState,
    GeodesicTrace,
    covariant_derivative,
    distance_alpha0,
    distance_special_normal,
    geodesic_alpha0,
    geodesic_bvp_shoot,
    geodesic_diagonal_family,
    geodesic_ivp,
    geodesic_n1,
    geodesic_special_normal,
    path_length,
    shooting_distance,
)
from .curvature import (
    ball_volume,
    fisher_scalar_extended,
    ricci,
    ricci_operator,
    riemann,
    scalar_full,
    scalar_special,
)

__version__ = "0.1.0"
