"""Bootstrap percolation toolkit: dynamics, estimators, bounds, certificates.

The process: vertices of [n]^d (torus or open grid) are infected or
healthy; a healthy vertex becomes infected once at least r of its lattice
neighbors are infected, and infection is permanent. The package simulates
the dynamics exactly, estimates percolation probabilities and times from
seeded Bernoulli initial sets, evaluates the closed-form bounds governing
percolation time, and checks the combinatorial certificates (empty
rectangles, extremal blocking sets, staircase paths, seam events) that
the theory builds on, with an exact enumeration oracle as ground truth
at desk scale.
"""

from .bounds import LAMBDA_2D, BoundParams
from .engine import (
    CubeClass,
    InfectionSchedule,
    ProcessParams,
    classify_cube,
    evolve_step,
    evolve_until_fixation,
    is_internally_spanned,
    percolation_time,
    span,
    uninfected_at,
)
from .errors import CapacityError, InternalFault
from .lattice import (
    Boundary,
    LatticeShape,
    Region,
    Site,
    SiteSet,
    ball,
    buffers,
    cube,
    enumerate_region,
    interior,
    neighbors,
    perm_orbit,
    sides,
    sides_of,
    subcube_partition,
)
from .sampler import (
    EstimateResult,
    TrialPlan,
    bernoulli_field,
    derive_seed,
    estimate_eta,
    estimate_pc,
    estimate_percolation,
    time_quantiles,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "BoundParams",
    "CapacityError",
    "CubeClass",
    "EstimateResult",
    "InfectionSchedule",
    "InternalFault",
    "LAMBDA_2D",
    "LatticeShape",
    "ProcessParams",
    "Region",
    "Site",
    "SiteSet",
    "TrialPlan",
    "ball",
    "bernoulli_field",
    "buffers",
    "classify_cube",
    "cube",
    "derive_seed",
    "enumerate_region",
    "estimate_eta",
    "estimate_pc",
    "estimate_percolation",
    "evolve_step",
    "evolve_until_fixation",
    "interior",
    "is_internally_spanned",
    "neighbors",
    "percolation_time",
    "perm_orbit",
    "sides",
    "sides_of",
    "span",
    "subcube_partition",
    "time_quantiles",
    "uninfected_at",
    "wilson_interval",
]
