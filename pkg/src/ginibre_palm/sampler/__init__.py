from .rng import RngStream, as_generator, make_rng
from .radial import (
    radial_horizon,
    sample_radial_dpp,
    sample_radial_ginibre,
    sample_radial_indices,
    sample_radial_palm,
)
from .projection import (
    REJECTION_BUDGET,
    anchor_basis,
    feature_row,
    sample_ginibre_n,
    sample_palm_ginibre_n,
)

__all__ = [
    "RngStream",
    "as_generator",
    "make_rng",
    "radial_horizon",
    "sample_radial_dpp",
    "sample_radial_ginibre",
    "sample_radial_indices",
    "sample_radial_palm",
    "REJECTION_BUDGET",
    "anchor_basis",
    "feature_row",
    "sample_ginibre_n",
    "sample_palm_ginibre_n",
]
