"""Heavy-tailed distribution families, fitting, binning, and model checks."""

from .families import (
    DPLN,
    DegenerateDataError,
    DiscretePowerLaw,
    DiscreteWeibull2,
    PowerLawExpCutoff,
    PowerLawLognormalCutoff,
)
from .binning import BinnedDensity, equal_count_bin, log_bin, log_bin_values
from .fitting import (
    FitResult,
    PowerLawRegression,
    fit_mle,
    fit_power_law_regression,
)
from .stats import (
    CollapseResult,
    GTestResult,
    KSResult,
    g_test,
    hazard_empirical,
    kendall_tau,
    ks_distance,
    ks_test,
    likelihood_ratio,
    loglog_slope,
    scale_collapse,
)

__all__ = [
    "DPLN",
    "DegenerateDataError",
    "DiscretePowerLaw",
    "DiscreteWeibull2",
    "PowerLawExpCutoff",
    "PowerLawLognormalCutoff",
    "BinnedDensity",
    "equal_count_bin",
    "log_bin",
    "log_bin_values",
    "FitResult",
    "PowerLawRegression",
    "fit_mle",
    "fit_power_law_regression",
    "likelihood_ratio",
    "CollapseResult",
    "GTestResult",
    "KSResult",
    "g_test",
    "hazard_empirical",
    "kendall_tau",
    "ks_distance",
    "ks_test",
    "loglog_slope",
    "scale_collapse",
]
