"""Adaptive robust confidence intervals for a location parameter under Huber contamination."""

from .adversarial import AdversarialPair, AdversaryKind, build_adversary, max_valid_r, numeric_tv
from .distributions import FamilyKind, LocationFamily, cdf, density, parse_family, quantile, sample
from .empirical import SortedSample, dkw_radius, empirical_quantile, median, median_and_mad, read_sample
from .errors import (
    ConfigError,
    ConstructionError,
    DensityValidationError,
    DomainError,
    HuberbandError,
    InvalidSeparation,
)
from .gaussian_arci import (
    EpsMaxMode,
    GaussianArciConfig,
    Interval,
    arci,
    arci_gaussian,
    arci_gaussian_049,
    arci_gaussian_small_epsmax,
    conservative_interval,
    median_interval,
    t_epsilon,
)
from .general_arci import arci_general, q_bar, q_under, r_bar, r_down, r_under, r_up, rate_quantities, theoretical_rate
from .harness import ContaminationSpec, ExperimentSpec, MethodSpec, SimulationReport, generate_contaminated, run_coverage_experiment
from .list_decodable import ConfidenceSet, confidence_set, list_decode
from .robust_testing import Decision, Direction, Regime, TestSpec, invert_tests, run_test

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
