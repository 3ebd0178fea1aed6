"""Maximum-likelihood fitting entry points, plus the binned-regression fit.

The regression fit exists to demonstrate what goes wrong when a power law is
fitted to binned heights by least squares instead of by maximum likelihood;
it should never be used for actual inference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..counts import CountHistogram
from .binning import BinnedDensity
from .families import (
    FAMILIES,
    DegenerateDataError,
    DiscretePowerLaw,
    DiscreteWeibull2,
)
from .stats import loglog_slope


@dataclass
class FitResult:
    model: object
    loglik: float
    family: str


def _check_size(n: int, min_size: int) -> None:
    if n < min_size:
        raise ValueError(f"data size {n} is below the minimum {min_size}")


def fit_mle(
    family: str,
    data,
    min_size: int = 100,
    x_min=None,
    restarts: int = 3,
    seed: int = 0,
) -> FitResult:
    """Fit one of the named families by maximum likelihood.

    Discrete families ('pl', 'dw2') take a CountHistogram or integer values;
    continuous families ('plln', 'dpln', 'plexp') take raw samples.  Raises
    DegenerateDataError when the data cannot identify parameters (e.g. a
    constant sample) and ValueError for undersized data.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    cls = FAMILIES[family]

    if cls.is_discrete:
        hist = data if isinstance(data, CountHistogram) else CountHistogram.from_values(data)
        _check_size(hist.total, min_size)
        if len(hist) < 2:
            raise DegenerateDataError("constant data cannot identify a distribution")
        if family == "pl":
            model = DiscretePowerLaw.fit(hist, x_min=x_min)
            tail = CountHistogram(
                {c: f for c, f in hist.entries.items() if c >= model.x_min}
            )
            ll = float(np.dot(*_loglik_terms(model, tail)))
        else:
            model = DiscreteWeibull2.fit(hist, restarts=restarts, seed=seed)
            ll = float(np.dot(*_loglik_terms(model, hist)))
        return FitResult(model=model, loglik=ll, family=family)

    values = np.asarray(data, dtype=np.float64)
    _check_size(values.size, min_size)
    if np.unique(values).size < 2:
        raise DegenerateDataError("constant data cannot identify a distribution")
    kwargs = {"restarts": restarts, "seed": seed}
    if family in ("plln", "plexp"):
        kwargs["x_min"] = x_min
    model = cls.fit(values, **kwargs)
    ll = float(model.log_density(values).sum())
    return FitResult(model=model, loglik=ll, family=family)


def _loglik_terms(model, hist: CountHistogram):
    values, freqs = hist.arrays()
    return freqs.astype(np.float64), model.log_density(values)


# ---------------------------------------------------------------------------
# Binned least-squares power law (the method under critique)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawRegression:
    """Power law obtained by least squares on binned log-densities.

    Carries enough to serve as a G-test reference model.  n_params counts
    slope and intercept.
    """

    alpha: float
    amplitude: float
    x_min: float

    n_params = 2
    is_discrete = False

    def density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return self.amplitude * x ** (-self.alpha)

    def log_density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return math.log(self.amplitude) - self.alpha * np.log(x)

    def bin_mass(self, lo: float, hi: float) -> float:
        lo = max(lo, self.x_min)
        if hi <= lo:
            return 0.0
        a = self.alpha
        if abs(a - 1.0) < 1e-12:
            return self.amplitude * math.log(hi / lo)
        return self.amplitude * (hi ** (1.0 - a) - lo ** (1.0 - a)) / (1.0 - a)


def fit_power_law_regression(binned: BinnedDensity, x_min: float = 1.0) -> PowerLawRegression:
    """Least-squares line through log(height) vs log(center), centers >= x_min."""
    centers = binned.centers
    keep = (centers >= x_min) & (binned.counts > 0)
    if keep.sum() < 2:
        raise ValueError("need at least two occupied bins past x_min")
    slope, intercept = loglog_slope(centers[keep], binned.heights[keep])
    return PowerLawRegression(alpha=-slope, amplitude=math.exp(intercept), x_min=x_min)
