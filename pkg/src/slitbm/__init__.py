"""Hitting laws, Green functions and Monte Carlo checks for planar Brownian motion
absorbed on the negative horizontal half-axis."""

__version__ = "0.1.0"

from .conventions import VAR1T, VAR2T, Convention  # noqa: E402
from .errors import (  # noqa: E402
    ConsistencyError,
    DivergenceError,
    DomainError,
    RangeError,
    SingularityError,
    ToleranceError,
)
from .slit import (  # noqa: E402
    HitSample,
    Point,
    conditional_gauge,
    hit_place_cdf_axis,
    hit_place_density,
    hit_place_density_axis,
    joint_density_axis,
    joint_density_general,
    joint_laplace_general,
    level_hit_density,
    sample_hit_axis,
    sample_hit_place_exact,
)
from .mc import MCConfig, MCEstimate, simulate_hits  # noqa: E402

__all__ = [
    "__version__",
    "VAR1T",
    "VAR2T",
    "Convention",
    "ConsistencyError",
    "DivergenceError",
    "DomainError",
    "RangeError",
    "SingularityError",
    "ToleranceError",
    "HitSample",
    "Point",
    "conditional_gauge",
    "hit_place_cdf_axis",
    "hit_place_density",
    "hit_place_density_axis",
    "joint_density_axis",
    "joint_density_general",
    "joint_laplace_general",
    "level_hit_density",
    "sample_hit_axis",
    "sample_hit_place_exact",
    "MCConfig",
    "MCEstimate",
    "simulate_hits",
]
