"""stripfront: boundary estimation from strip-wise extreme values.

Estimates the upper edge of a planar region from uniform samples by
kernel-smoothing per-strip maxima, simulates the coupled Poisson
envelope ("sandwich") construction around a sample, and ships a Monte
Carlo harness that checks the estimator's asymptotic behaviour
(Gaussian limit of the standardized error, pathwise envelope ordering,
envelope failure-probability and gap-rate bounds, weight-sum
convergence) at finite n.

Hot loops run in a compiled extension when available, with a NumPy
fallback selected at import; see ``stripfront._backend``.
"""

from ._backend import BACKEND
from .estimator import (EstimatorParams, ExponentPlan, StripMaxima, estimate,
                        estimate_oracle, plan_sequences, strip_maxima, weights)
from .experiments import (CltReport, RateReport, SandwichReport, ks_distance,
                          normal_cdf, run_clt, run_gap_rate, run_sandwich,
                          run_weight_sum)
from .model import (Frontier, Kernel, kernel, sigma_theoretical,
                    FRONTIER_FAMILIES, KERNEL_FAMILIES)
from .sim import (Point, SampleSet, SandwichTriple, poisson_draw,
                  sample_poisson_process, sample_sandwich, sample_uniform)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    "Frontier", "Kernel", "kernel", "sigma_theoretical",
    "FRONTIER_FAMILIES", "KERNEL_FAMILIES",
    "Point", "SampleSet", "SandwichTriple",
    "sample_uniform", "sample_poisson_process", "sample_sandwich",
    "poisson_draw",
    "EstimatorParams", "StripMaxima", "ExponentPlan",
    "strip_maxima", "weights", "estimate", "estimate_oracle",
    "plan_sequences",
    "run_clt", "run_sandwich", "run_gap_rate", "run_weight_sum",
    "normal_cdf", "ks_distance",
    "CltReport", "SandwichReport", "RateReport",
]
