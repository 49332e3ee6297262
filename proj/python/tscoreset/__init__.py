"""Coreset construction and mixture fitting for panel time-series data.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from tscoreset._core import (
    Component,
    Coreset,
    MixtureParams,
    __version__,
    align_components,
    aligned_mean_error,
    build_coreset,
    condition_ratio,
    coreset_kernel_nll,
    fit,
    generate,
    pooled_coreset,
    set_thread_count,
    theoretical_sizes,
    total_nll,
    uniform_coreset,
)

__all__ = [
    "Component",
    "Coreset",
    "MixtureParams",
    "__version__",
    "align_components",
    "aligned_mean_error",
    "build_coreset",
    "condition_ratio",
    "coreset_kernel_nll",
    "fit",
    "generate",
    "pooled_coreset",
    "set_thread_count",
    "theoretical_sizes",
    "total_nll",
    "uniform_coreset",
]
