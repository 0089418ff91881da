"""Conformal kNN rescaling, fuzzy graph weights and cross-entropy embedding."""

from conformap._core import (
    DataError,
    NumericError,
    UsageError,
    adjusted_mutual_info,
    adjusted_rand,
    dbscan,
    embed,
    fit_curve,
    fuzzy_weights,
    kernel_eval,
    low_dim_weight,
    silhouette,
    vr_weights,
)

__all__ = [
    "DataError",
    "NumericError",
    "UsageError",
    "adjusted_mutual_info",
    "adjusted_rand",
    "dbscan",
    "embed",
    "fit_curve",
    "fuzzy_weights",
    "kernel_eval",
    "low_dim_weight",
    "silhouette",
    "vr_weights",
]

__version__ = "0.1.0"
