"""Weighted sequence-space interpolation toolbox.

Thin re-export of the compiled module: spaces and couples, the K-functional
and its dense oracle, real- and complex-route interpolation norms, sign
averages, and sectoriality scans.
"""

from ._interplab import (
    Couple,
    Params,
    Space,
    __version__,
    interp_norm,
    k_functional,
    k_oracle,
    r_bound_lower,
    rademacher_average,
    resolvent_sup,
    sectoriality_angle,
    strip_norm_upper,
    weighted_equivalence_check,
)

__all__ = [
    "Couple",
    "Params",
    "Space",
    "__version__",
    "interp_norm",
    "k_functional",
    "k_oracle",
    "r_bound_lower",
    "rademacher_average",
    "resolvent_sup",
    "sectoriality_angle",
    "strip_norm_upper",
    "weighted_equivalence_check",
]
