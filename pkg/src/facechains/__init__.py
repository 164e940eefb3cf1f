"""Face-chain excess analysis for oriented permutahedra, associahedra, simplices and cubes."""

from .core import (
    CapExceededError,
    FaceChain,
    InputError,
    LengthEstimateRow,
    LengthEstimates,
    LengthPoint,
    MinExcessReport,
    OrientedPolytope,
    ShortnessReport,
    alpha_from_beta,
    alpha_upper_bound,
    beta_from_alpha,
    chain_excess,
    face_leq,
    face_polytope,
    facet_bound,
    length_estimates,
    min_excess,
    shortness_report,
    total_length_bound,
)

__version__ = "0.1.0"
