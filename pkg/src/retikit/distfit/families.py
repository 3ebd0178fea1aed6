"""Parametric families for heavy-tailed count and duration data.

Two discrete families (power law, Type-II discrete Weibull) operate on
integer support; three continuous families (power law with lognormal cutoff,
double Pareto-lognormal, power law with exponential cutoff) operate on
positive reals.  Every family exposes log densities stable far into the
tail, exact CDFs, inverse-transform samplers, and a maximum-likelihood fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special, stats

from ..counts import CountHistogram

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class DegenerateDataError(ValueError):
    """Raised when the data cannot identify the family's parameters."""


def _log_ndtr(z):
    return special.log_ndtr(z)


def _as_hist(data) -> CountHistogram:
    if isinstance(data, CountHistogram):
        return data
    return CountHistogram.from_values(data)


def _as_values(data) -> np.ndarray:
    if isinstance(data, CountHistogram):
        return data.expand().astype(np.float64)
    return np.asarray(data, dtype=np.float64)


# ---------------------------------------------------------------------------
# Discrete power law
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscretePowerLaw:
    """pmf(x) = x^(-alpha) / zeta(alpha, x_min) on integers x >= x_min."""

    alpha: float
    x_min: int = 1

    name = "pl"
    n_params = 2
    is_discrete = True

    def __post_init__(self):
        if self.alpha <= 1.0:
            raise ValueError("alpha must exceed 1 for a normalizable pmf")
        if self.x_min < 1:
            raise ValueError("x_min must be >= 1")

    @property
    def _log_norm(self) -> float:
        return math.log(special.zeta(self.alpha, self.x_min))

    def log_pmf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = -self.alpha * np.log(x) - self._log_norm
        return np.where(x >= self.x_min, out, -np.inf)

    def pmf(self, x) -> np.ndarray:
        return np.exp(self.log_pmf(x))

    log_density = log_pmf
    density = pmf

    def sf(self, x) -> np.ndarray:
        """P(X >= x)."""
        x = np.asarray(x, dtype=np.float64)
        return np.where(
            x <= self.x_min, 1.0, special.zeta(self.alpha, np.maximum(x, self.x_min))
            / special.zeta(self.alpha, self.x_min),
        )

    def cdf(self, x) -> np.ndarray:
        x = np.floor(np.asarray(x, dtype=np.float64))
        return 1.0 - self.sf(x + 1.0)

    def bin_mass(self, lo: float, hi: float) -> float:
        """Probability of integers in [lo, hi)."""
        a = max(self.x_min, int(math.ceil(lo)))
        b = int(math.ceil(hi))
        if b <= a:
            return 0.0
        return float(self.sf(a) - self.sf(b))

    def sample(self, n: int, rng: np.random.Generator, table_size: int = 4096) -> np.ndarray:
        """Exact inverse-transform sampling via the discrete survival function."""
        v = 1.0 - rng.random(n)  # in (0, 1]
        xs = np.arange(self.x_min, self.x_min + table_size + 1, dtype=np.float64)
        sf_table = self.sf(xs)
        # X = max{x : sf(x) >= v}; table covers v >= sf_table[-1]
        idx = np.searchsorted(-sf_table, -v, side="right") - 1
        out = self.x_min + idx.astype(np.int64)
        big = v < sf_table[-1]
        if np.any(big):
            out[big] = self._sample_tail(v[big])
        return out

    def _sample_tail(self, v: np.ndarray) -> np.ndarray:
        lo = np.full(v.shape, float(self.x_min))
        hi = np.full(v.shape, float(self.x_min * 2 + 2))
        while True:
            need = self.sf(hi) >= v
            if not np.any(need):
                break
            hi[need] *= 2.0
        # invariant: sf(lo) >= v > sf(hi)
        while np.any(hi - lo > 1.0):
            mid = np.floor((lo + hi) / 2.0)
            take = self.sf(mid) >= v
            lo = np.where(take, mid, lo)
            hi = np.where(take, hi, mid)
        return lo.astype(np.int64)

    # -- fitting ---------------------------------------------------------

    @staticmethod
    def loglik(hist: CountHistogram, alpha: float, x_min: int) -> float:
        counts, freqs = hist.arrays()
        mask = counts >= x_min
        counts, freqs = counts[mask], freqs[mask]
        n = freqs.sum()
        if n == 0:
            return -np.inf
        return float(
            -alpha * np.dot(freqs, np.log(counts))
            - n * math.log(special.zeta(alpha, x_min))
        )

    @classmethod
    def fit_alpha(cls, hist: CountHistogram, x_min: int) -> "DiscretePowerLaw":
        """MLE of alpha with x_min held fixed."""
        res = optimize.minimize_scalar(
            lambda a: -cls.loglik(hist, a, x_min),
            bounds=(1.0 + 1e-7, 25.0),
            method="bounded",
            options={"xatol": 1e-9},
        )
        return cls(alpha=float(res.x), x_min=x_min)

    @classmethod
    def fit(cls, data, x_min: int | None = None, max_candidates: int = 50) -> "DiscretePowerLaw":
        """MLE; when x_min is not given, scan candidates for minimal KS distance."""
        hist = _as_hist(data)
        if len(hist) < 2:
            raise DegenerateDataError("need at least two distinct values")
        if x_min is not None:
            return cls.fit_alpha(hist, x_min)
        counts, freqs = hist.arrays()
        distinct = counts[:-1]  # keep at least 2 distinct tail values
        if len(distinct) > max_candidates:
            picks = np.unique(
                np.geomspace(distinct[0], distinct[-1], max_candidates).astype(np.int64)
            )
            distinct = np.intersect1d(distinct, picks)
            if distinct.size == 0:
                distinct = counts[:-1][:max_candidates]
        best = None
        for cand in distinct:
            model = cls.fit_alpha(hist, int(cand))
            tail = CountHistogram(
                {int(c): int(f) for c, f in zip(counts, freqs) if c >= cand}
            )
            d = _discrete_ks(tail, model)
            if best is None or d < best[0]:
                best = (d, model)
        return best[1]


def _discrete_ks(hist: CountHistogram, model) -> float:
    counts, freqs = hist.arrays()
    n = freqs.sum()
    edf_hi = np.cumsum(freqs) / n
    edf_lo = edf_hi - freqs / n
    cdf_hi = model.cdf(counts)
    cdf_lo = cdf_hi - np.exp(model.log_pmf(counts))
    return float(
        max(np.max(np.abs(edf_hi - cdf_hi)), np.max(np.abs(edf_lo - cdf_lo)))
    )


# ---------------------------------------------------------------------------
# Type-II discrete Weibull: power-law hazard h(x) = c * x^(beta - 1)
# ---------------------------------------------------------------------------


class DiscreteWeibull2:
    """Discrete lifetimes whose stopping hazard decays as a power of x.

    hazard(x) = c / x^(1-beta) with beta in [0, 1), c in (0, 1];
    pmf(x) = hazard(x) * prod_{n<x} (1 - hazard(n)).  beta < 1 makes the
    cumulative hazard diverge, so the pmf sums to one.
    """

    name = "dw2"
    n_params = 2
    is_discrete = True

    TABLE_CAP = 1 << 23  # exact log-survival table up to ~8.4e6

    def __init__(self, beta: float, c: float):
        if not (0.0 <= beta < 1.0):
            raise ValueError("beta must be in [0, 1)")
        if not (0.0 < c <= 1.0):
            raise ValueError("c must be in (0, 1]")
        self.beta = float(beta)
        self.c = float(c)
        self._log_surv = np.zeros(1)  # _log_surv[k] = log S(k+1); S(1) = 1

    def __repr__(self):
        return f"DiscreteWeibull2(beta={self.beta}, c={self.c})"

    def hazard(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return self.c * x ** (self.beta - 1.0)

    def _extend_table(self, upto: int) -> None:
        have = len(self._log_surv)
        if upto <= have:
            return
        upto = min(int(upto), self.TABLE_CAP)
        n = np.arange(have, upto, dtype=np.float64)  # hazard at x = have..upto-1
        inc = np.log1p(-self.c * n ** (self.beta - 1.0))
        ext = self._log_surv[-1] + np.cumsum(inc)
        self._log_surv = np.concatenate([self._log_surv, ext])

    def log_survival(self, x) -> np.ndarray:
        """log P(X >= x), exact from the table, Euler-Maclaurin beyond it."""
        shape = np.shape(x)
        x = np.atleast_1d(np.asarray(x, dtype=np.int64))
        out = np.empty(x.shape, dtype=np.float64)
        small = x <= self.TABLE_CAP
        if np.any(small):
            self._extend_table(int(x[small].max()))
            out[small] = self._log_surv[x[small] - 1]
        if np.any(~small):
            self._extend_table(self.TABLE_CAP)
            anchor = self.TABLE_CAP
            base = self._log_surv[anchor - 1]
            out[~small] = [base + self._tail_sum(anchor, int(xi)) for xi in x[~small]]
        return out.reshape(shape)

    def _tail_sum(self, a: int, b: int) -> float:
        """sum_{n=a}^{b-1} log(1 - h(n)) via Euler-Maclaurin."""
        if b <= a:
            return 0.0
        f = lambda t: np.log1p(-self.c * t ** (self.beta - 1.0))

        def fprime(t):
            h = self.c * t ** (self.beta - 1.0)
            return self.c * (1.0 - self.beta) * t ** (self.beta - 2.0) / (1.0 - h)

        integral, _ = integrate.quad(
            lambda s: f(math.exp(s)) * math.exp(s), math.log(a), math.log(b), limit=200
        )
        return integral + 0.5 * (f(a) - f(b)) + (fprime(b) - fprime(a)) / 12.0

    def log_pmf(self, x) -> np.ndarray:
        x = np.asarray(x)
        xi = np.atleast_1d(x).astype(np.int64)
        if np.any(xi < 1):
            raise ValueError("support starts at 1")
        out = np.log(self.hazard(xi)) + self.log_survival(xi)
        return out.reshape(np.shape(x)) if np.shape(x) else float(out[0])

    def pmf(self, x) -> np.ndarray:
        return np.exp(self.log_pmf(x))

    log_density = log_pmf
    density = pmf

    def sf(self, x) -> np.ndarray:
        return np.exp(self.log_survival(np.asarray(x, dtype=np.int64)))

    def cdf(self, x) -> np.ndarray:
        x = np.floor(np.asarray(x, dtype=np.float64)).astype(np.int64)
        x = np.maximum(x, 0)
        return 1.0 - np.exp(self.log_survival(x + 1))

    def bin_mass(self, lo: float, hi: float) -> float:
        a = max(1, int(math.ceil(lo)))
        b = max(a, int(math.ceil(hi)))
        if b <= a:
            return 0.0
        return float(np.exp(self.log_survival(np.array([a])))[0]
                     - np.exp(self.log_survival(np.array([b])))[0])

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Inverse transform on the survival table (exact)."""
        v = 1.0 - rng.random(n)  # target survival levels in (0, 1]
        neg_log_v = -np.log(v)
        upper = 1 << 12
        while True:
            self._extend_table(upper)
            neg = -self._log_surv
            if neg[-1] >= neg_log_v.max() or len(self._log_surv) >= self.TABLE_CAP:
                break
            upper *= 4
        # X = min{x >= 1 : -log S(x+1) >= -log v};  -log S(x+1) = neg[x]
        idx = np.searchsorted(neg[1:], neg_log_v, side="left")
        out = idx + 1
        over = out > len(neg) - 1
        if np.any(over):  # astronomically rare unless beta ~ 1
            out[over] = [self._sample_far_tail(t) for t in neg_log_v[over]]
        return out.astype(np.int64)

    def _sample_far_tail(self, neg_log_v: float) -> int:
        lo, hi = self.TABLE_CAP, self.TABLE_CAP * 4
        while -float(self.log_survival(np.array([hi + 1]))[0]) < neg_log_v:
            lo, hi = hi, hi * 4
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if -float(self.log_survival(np.array([mid + 1]))[0]) >= neg_log_v:
                hi = mid
            else:
                lo = mid
        return hi

    # -- fitting ---------------------------------------------------------

    @staticmethod
    def loglik(hist: CountHistogram, beta: float, c: float) -> float:
        """Histogram log-likelihood via the hazard/survivor decomposition.

        sum_x n_x log h(x) + sum_n (survivors past n) log(1 - h(n)):
        the second sum runs over every n below the largest observation.
        """
        counts, freqs = hist.arrays()
        total = freqs.sum()
        haz_term = float(
            np.dot(freqs, math.log(c) + (beta - 1.0) * np.log(counts))
        )
        x_max = int(counts[-1])
        cum = np.cumsum(freqs)
        surv_term = 0.0
        chunk = 1 << 22
        for start in range(1, x_max, chunk):
            stop = min(start + chunk, x_max)
            n = np.arange(start, stop, dtype=np.float64)
            # survivors strictly past n = total - #(samples <= n)
            pos = np.searchsorted(counts, np.arange(start, stop), side="right")
            seen = np.where(pos > 0, cum[np.maximum(pos - 1, 0)], 0)
            survivors = total - seen
            surv_term += float(np.dot(survivors, np.log1p(-c * n ** (beta - 1.0))))
        return haz_term + surv_term

    @classmethod
    def fit(cls, data, restarts: int = 3, seed: int = 0) -> "DiscreteWeibull2":
        hist = _as_hist(data)
        if len(hist) < 2:
            raise DegenerateDataError("need at least two distinct values")
        rng = np.random.default_rng(seed)

        def neg(params):
            beta, c = params
            if not (0.0 <= beta < 1.0) or not (0.0 < c <= 1.0):
                return np.inf
            return -cls.loglik(hist, beta, c)

        counts, freqs = hist.arrays()
        c0 = min(0.95, max(0.02, freqs[0] / freqs.sum() if counts[0] == 1 else 0.3))
        starts = [(0.2, c0), (0.05, min(0.9, c0 * 2)), (0.5, c0 / 2)]
        starts += [(rng.uniform(0, 0.9), rng.uniform(0.05, 0.95)) for _ in range(max(0, restarts - 3))]
        best = None
        for s in starts[: max(restarts, 1)]:
            res = optimize.minimize(
                neg, s, method="Nelder-Mead",
                bounds=[(0.0, 1.0 - 1e-9), (1e-9, 1.0)],
                options={"xatol": 1e-8, "fatol": 1e-8, "maxiter": 2000},
            )
            if best is None or res.fun < best.fun:
                best = res
        return cls(beta=float(best.x[0]), c=float(best.x[1]))


# ---------------------------------------------------------------------------
# Power law with lognormal cutoff (continuous)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawLognormalCutoff:
    """pdf(x) ~ x^(-beta) * Phi_c((ln x - mu) / sigma) on [x_min, inf).

    Phi_c is the standard normal complementary CDF: a power law of exponent
    beta that rolls off lognormally around exp(mu) with width sigma.
    """

    beta: float
    mu: float
    sigma: float
    x_min: float = 1.0

    name = "plln"
    n_params = 3
    is_discrete = False

    def __post_init__(self):
        # any beta is normalizable on [x_min, inf) thanks to the cutoff
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.x_min <= 0:
            raise ValueError("x_min must be positive")

    def _upper_integral(self, y) -> np.ndarray:
        """G(y) = integral_y^inf e^((1-beta) s) Phi_c((s - mu)/sigma) ds."""
        y = np.asarray(y, dtype=np.float64)
        a = 1.0 - self.beta
        z = (y - self.mu) / self.sigma
        if abs(a) < 1e-12:
            phi = np.exp(-0.5 * z * z - LOG_SQRT_2PI)
            return self.sigma * (phi - z * special.ndtr(-z))
        t1 = np.exp(a * self.mu + 0.5 * a * a * self.sigma**2 + _log_ndtr(-(z - a * self.sigma)))
        t2 = np.exp(a * y + _log_ndtr(-z))
        return (t1 - t2) / a

    @property
    def c_norm(self) -> float:
        """Normalizing constant c with pdf = c x^(-beta) Phi_c(.)."""
        return float(1.0 / self._upper_integral(math.log(self.x_min)))

    def log_pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        z = (np.log(x) - self.mu) / self.sigma
        out = math.log(self.c_norm) - self.beta * np.log(x) + _log_ndtr(-z)
        return np.where(x >= self.x_min, out, -np.inf)

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.log_pdf(x))

    log_density = log_pdf
    density = pdf

    def cdf(self, x) -> np.ndarray:
        x = np.maximum(np.asarray(x, dtype=np.float64), self.x_min)
        return 1.0 - self._upper_integral(np.log(x)) * self.c_norm

    def bin_mass(self, lo: float, hi: float) -> float:
        lo = max(lo, self.x_min)
        if hi <= lo:
            return 0.0
        return float(self.cdf(hi) - self.cdf(lo))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        v = 1.0 - rng.random(n)  # target upper-tail mass
        Z = self._upper_integral(math.log(self.x_min))
        lo = np.full(n, math.log(self.x_min))
        hi = np.full(n, max(math.log(self.x_min), self.mu) + 50.0 * self.sigma)
        target = v * Z
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            above = self._upper_integral(mid) > target
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        return np.exp(0.5 * (lo + hi))

    @classmethod
    def fit(cls, data, x_min: float | None = None, restarts: int = 3, seed: int = 0) -> "PowerLawLognormalCutoff":
        x = _as_values(data)
        if np.unique(x).size < 3:
            raise DegenerateDataError("need at least three distinct values")
        xm = float(x.min()) if x_min is None else float(x_min)
        logx = np.log(x)
        rng = np.random.default_rng(seed)

        def neg(params):
            beta, mu, log_sigma = params
            sigma = math.exp(log_sigma)
            try:
                model = cls(beta=beta, mu=mu, sigma=sigma, x_min=xm)
            except ValueError:
                return np.inf
            ll = model.log_pdf(x)
            return -float(ll.sum())

        mu0 = float(np.quantile(logx, 0.9))
        starts = [
            (1.1, mu0, 0.0),
            (0.8, float(np.quantile(logx, 0.75)), math.log(0.5)),
            (1.5, mu0 + 1.0, math.log(2.0)),
        ]
        starts += [
            (rng.uniform(0.5, 2.0), rng.uniform(mu0 - 2, mu0 + 2), rng.uniform(-1, 1))
            for _ in range(max(0, restarts - 3))
        ]
        best = None
        for s in starts[: max(restarts, 1)]:
            res = optimize.minimize(
                neg, s, method="Nelder-Mead",
                bounds=[(-3.0, 8.0), (mu0 - 15.0, mu0 + 15.0), (math.log(0.02), math.log(8.0))],
                options={"xatol": 1e-7, "fatol": 1e-7, "maxiter": 4000},
            )
            if best is None or res.fun < best.fun:
                best = res
        beta, mu, log_sigma = best.x
        return cls(beta=float(beta), mu=float(mu), sigma=float(math.exp(log_sigma)), x_min=xm)


# ---------------------------------------------------------------------------
# Double Pareto-lognormal (continuous, support (0, inf))
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DPLN:
    """Mixture of right and left Pareto-lognormal densities.

    Arises as geometric Brownian motion with lognormal initial state observed
    at an exponentially distributed time; alpha and beta are the positive and
    negative characteristic roots, nu and tau the initial lognormal location
    and scale.  The lower tail can never fall steeper than x^(-1) as x -> 0.
    """

    alpha: float
    beta: float
    nu: float
    tau: float

    name = "dpln"
    n_params = 4
    is_discrete = False

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    def _branch_logs(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        a, b, nu, tau = self.alpha, self.beta, self.nu, self.tau
        lx = np.log(x)
        log_f1 = (
            math.log(a)
            + (-a - 1.0) * lx
            + (a * nu + 0.5 * a * a * tau * tau)
            + _log_ndtr((lx - nu - a * tau * tau) / tau)
        )
        log_f2 = (
            math.log(b)
            + (b - 1.0) * lx
            + (-b * nu + 0.5 * b * b * tau * tau)
            + _log_ndtr(-(lx - nu + b * tau * tau) / tau)
        )
        return log_f1, log_f2

    def log_pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        log_f1, log_f2 = self._branch_logs(x)
        a, b = self.alpha, self.beta
        w1 = math.log(b / (a + b))
        w2 = math.log(a / (a + b))
        out = np.logaddexp(w1 + log_f1, w2 + log_f2)
        return np.where(x > 0, out, -np.inf)

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.log_pdf(x))

    log_density = log_pdf
    density = pdf

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        a, b, nu, tau = self.alpha, self.beta, self.nu, self.tau
        lx = np.log(np.maximum(x, 1e-300))
        z = (lx - nu) / tau
        F1 = special.ndtr(z) - np.exp(
            -a * lx + (a * nu + 0.5 * a * a * tau * tau) + _log_ndtr(z - a * tau)
        )
        F2 = special.ndtr(z) + np.exp(
            b * lx + (-b * nu + 0.5 * b * b * tau * tau) + _log_ndtr(-(z + b * tau))
        )
        out = (b / (a + b)) * F1 + (a / (a + b)) * F2
        return np.where(x > 0, np.clip(out, 0.0, 1.0), 0.0)

    def bin_mass(self, lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        return float(self.cdf(hi) - self.cdf(lo))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Exact generative sampling: lognormal component times double Pareto."""
        a, b = self.alpha, self.beta
        normal = rng.normal(self.nu, self.tau, size=n)
        pos = rng.random(n) < b / (a + b)
        w = np.where(pos, rng.exponential(1.0 / a, size=n), -rng.exponential(1.0 / b, size=n))
        return np.exp(normal + w)

    @classmethod
    def fit(cls, data, restarts: int = 3, seed: int = 0) -> "DPLN":
        x = _as_values(data)
        if np.unique(x).size < 4:
            raise DegenerateDataError("need at least four distinct values")
        rng = np.random.default_rng(seed)
        logx = np.log(x)
        nu0, tau0 = float(np.median(logx)), float(logx.std() * 0.5 + 0.1)

        def neg(params):
            la, lb, nu, ltau = params
            try:
                model = cls(alpha=math.exp(la), beta=math.exp(lb), nu=nu, tau=math.exp(ltau))
            except (ValueError, OverflowError):
                return np.inf
            return -float(model.log_pdf(x).sum())

        starts = [
            (math.log(2.0), math.log(1.0), nu0, math.log(tau0)),
            (math.log(1.0), math.log(0.8), nu0 + 1.0, math.log(max(tau0 * 2, 0.2))),
            (math.log(3.0), math.log(2.0), nu0 - 1.0, math.log(max(tau0 * 0.5, 0.1))),
        ]
        starts += [
            (rng.uniform(-1, 2), rng.uniform(-1, 2), nu0 + rng.uniform(-2, 2), rng.uniform(-2, 1))
            for _ in range(max(0, restarts - 3))
        ]
        best = None
        for s in starts[: max(restarts, 1)]:
            res = optimize.minimize(
                neg, s, method="Nelder-Mead",
                bounds=[(math.log(0.02), math.log(60.0))] * 2
                + [(nu0 - 20.0, nu0 + 20.0), (math.log(0.02), math.log(10.0))],
                options={"xatol": 1e-7, "fatol": 1e-7, "maxiter": 6000},
            )
            if best is None or res.fun < best.fun:
                best = res
        la, lb, nu, ltau = best.x
        return cls(alpha=float(math.exp(la)), beta=float(math.exp(lb)),
                   nu=float(nu), tau=float(math.exp(ltau)))


# ---------------------------------------------------------------------------
# Power law with exponential cutoff (continuous)
# ---------------------------------------------------------------------------


def upper_incomplete_gamma(s: float, x) -> np.ndarray:
    """Gamma(s, x) for any real s (recurrence lifts s <= 0), x > 0."""
    x = np.asarray(x, dtype=np.float64)
    if s > 0:
        return special.gammaincc(s, x) * special.gamma(s)
    k = int(math.ceil(-s)) + 1
    s_top = s + k  # lands in [1, 2), clear of the gamma poles
    g = special.gammaincc(s_top, x) * special.gamma(s_top)
    cur_s = s_top
    for _ in range(k):
        cur_s -= 1.0
        if abs(cur_s) < 1e-12:
            g = special.exp1(x)
            continue
        g = (g - x ** cur_s * np.exp(-x)) / cur_s
    return g


@dataclass(frozen=True)
class PowerLawExpCutoff:
    """pdf(x) ~ x^(-alpha) exp(-x / tau_c) on [x_min, inf)."""

    alpha: float
    tau_c: float
    x_min: float = 1.0

    name = "plexp"
    n_params = 2
    is_discrete = False

    def __post_init__(self):
        if self.tau_c <= 0 or self.x_min <= 0:
            raise ValueError("tau_c and x_min must be positive")

    def _norm(self) -> float:
        s = 1.0 - self.alpha
        g = float(upper_incomplete_gamma(s, np.array([self.x_min / self.tau_c]))[0])
        return self.tau_c**s * g

    def log_pdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = -math.log(self._norm()) - self.alpha * np.log(x) - x / self.tau_c
        return np.where(x >= self.x_min, out, -np.inf)

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.log_pdf(x))

    log_density = log_pdf
    density = pdf

    def sf(self, x) -> np.ndarray:
        x = np.maximum(np.asarray(x, dtype=np.float64), self.x_min)
        s = 1.0 - self.alpha
        norm = float(upper_incomplete_gamma(s, np.array([self.x_min / self.tau_c]))[0])
        return upper_incomplete_gamma(s, x / self.tau_c) / norm

    def cdf(self, x) -> np.ndarray:
        return 1.0 - self.sf(x)

    def bin_mass(self, lo: float, hi: float) -> float:
        lo = max(lo, self.x_min)
        if hi <= lo:
            return 0.0
        return float(self.cdf(hi) - self.cdf(lo))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        v = 1.0 - rng.random(n)
        lo = np.full(n, self.x_min)
        hi = np.full(n, self.x_min)
        remaining = np.ones(n, dtype=bool)
        while np.any(remaining):
            hi[remaining] = hi[remaining] * 2.0 + self.tau_c
            remaining &= self.sf(hi) >= v
        lo_log, hi_log = np.log(np.full(n, self.x_min)), np.log(hi)
        for _ in range(70):
            mid = 0.5 * (lo_log + hi_log)
            above = self.sf(np.exp(mid)) >= v
            lo_log = np.where(above, mid, lo_log)
            hi_log = np.where(above, hi_log, mid)
        return np.exp(0.5 * (lo_log + hi_log))

    @classmethod
    def fit(cls, data, x_min: float | None = None, restarts: int = 3, seed: int = 0) -> "PowerLawExpCutoff":
        x = _as_values(data)
        if np.unique(x).size < 3:
            raise DegenerateDataError("need at least three distinct values")
        xm = float(x.min()) if x_min is None else float(x_min)
        rng = np.random.default_rng(seed)
        mean = float(x.mean())

        def neg(params):
            alpha, log_tau = params
            try:
                model = cls(alpha=alpha, tau_c=math.exp(log_tau), x_min=xm)
            except (ValueError, OverflowError):
                return np.inf
            ll = model.log_pdf(x)
            return -float(ll.sum())

        starts = [
            (0.8, math.log(mean * 2)),
            (0.3, math.log(mean)),
            (1.5, math.log(mean * 5)),
        ]
        starts += [
            (rng.uniform(0.05, 2.5), math.log(mean) + rng.uniform(-2, 3))
            for _ in range(max(0, restarts - 3))
        ]
        best = None
        for s in starts[: max(restarts, 1)]:
            res = optimize.minimize(
                neg, s, method="Nelder-Mead",
                bounds=[(-2.0, 6.0), (math.log(mean) - 8.0, math.log(mean) + 12.0)],
                options={"xatol": 1e-7, "fatol": 1e-7, "maxiter": 4000},
            )
            if best is None or res.fun < best.fun:
                best = res
        return cls(alpha=float(best.x[0]), tau_c=float(math.exp(best.x[1])), x_min=xm)


FAMILIES = {
    "pl": DiscretePowerLaw,
    "dw2": DiscreteWeibull2,
    "plln": PowerLawLognormalCutoff,
    "dpln": DPLN,
    "plexp": PowerLawExpCutoff,
}
