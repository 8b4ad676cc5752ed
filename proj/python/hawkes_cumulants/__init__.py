"""Exact cumulants of exponential-kernel Hawkes processes.

Thin python surface over the C++ core: Bell polynomials, Borel cumulants,
the conditional-cumulant recursion for N_t, intensity moments, and the
seeded Monte Carlo verification harness.
"""

from ._core import (
    CumulantVector,
    GridPointStats,
    SampleStats,
    bell_number,
    borel_cumulants,
    borel_pmf,
    borel_sample,
    closed_form_reference,
    complete_bell,
    cumulants,
    cumulants_from_moments,
    enumerate_partitions,
    intensity_count_moment,
    k_statistics,
    mean_intensity,
    moments_from_cumulants,
    partial_bell,
    partition_term_count,
    run_simulation,
)

__all__ = [
    "CumulantVector",
    "GridPointStats",
    "SampleStats",
    "bell_number",
    "borel_cumulants",
    "borel_pmf",
    "borel_sample",
    "closed_form_reference",
    "complete_bell",
    "cumulants",
    "cumulants_from_moments",
    "enumerate_partitions",
    "intensity_count_moment",
    "k_statistics",
    "mean_intensity",
    "moments_from_cumulants",
    "partial_bell",
    "partition_term_count",
    "run_simulation",
]

__version__ = "0.1.0"
