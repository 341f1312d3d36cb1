"""Poissonian count emulation for error bars on the correlation metrics.

Rates are per pump pulse, taken from the Gaussian moments in the low-gain
regime: singles from detected mean photon numbers, coincidences from
``g2 * p_s * p_i``. The heralded chain uses herald singles, herald-signal
two-folds, and a multi-photon term scaled so that the analytic counts return
the model's heralded ``g2``. This is an emulation convention for plausible
fluctuations, not a detector model.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .squeezer import squeeze_param_from_heralding


@dataclass(frozen=True)
class CountingEmulation:
    integration_time_s: float = 1.0
    trials: int = 20
    rep_rate_hz: float = 80e6

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.integration_time_s <= 0 or self.rep_rate_hz <= 0:
            raise ValueError("integration time and repetition rate must be positive")

    @property
    def pulses(self):
        return self.integration_time_s * self.rep_rate_hz


@dataclass(frozen=True)
class EventRates:
    """Per-pulse event probabilities for one (port, z) cell."""

    singles_s: float
    singles_i: float
    coincidences: float
    herald_signal: float
    herald_multi: float

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 0:
                raise ValueError(f"{name} rate must be non-negative, got {value}")


def rates_for(report, singles_s, singles_i):
    """Event rates consistent with ``report`` and detected singles probabilities."""
    coinc = report.g2_cross * singles_s * singles_i
    two_fold = singles_i * report.eta_H
    multi = report.g2_heralded * two_fold**2 / singles_i if singles_i > 0 else 0.0
    return EventRates(singles_s, singles_i, coinc, two_fold, multi)


def emulate_counts(report, rates, emulation, rng):
    """Sample counts and attach ``{metric: (mean, std)}`` to the report."""
    pulses = emulation.pulses
    lam = np.array(
        [
            rates.singles_s,
            rates.singles_i,
            rates.coincidences,
            rates.herald_signal,
            rates.herald_multi,
        ]
    ) * pulses
    counts = rng.poisson(lam, size=(emulation.trials, lam.size)).astype(float)
    s, i, c, c2, c3 = counts.T

    undefined = bool(np.any(s == 0) or np.any(i == 0))
    if undefined:
        warnings.warn(
            f"zero singles counts at port {report.port}, z={report.z} mm; g2 undefined",
            RuntimeWarning,
            stacklevel=2,
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        g2 = np.where((s > 0) & (i > 0), c * pulses / (s * i), np.nan)
        eta_h = np.where(i > 0, c2 / i, np.nan)
        g2_h = np.where(c2 > 0, c3 * i / c2**2, np.nan)
    lam_sq = np.array(
        [
            squeeze_param_from_heralding(gh, eh) if (eh > 0 and np.isfinite(gh)) else np.nan
            for gh, eh in zip(g2_h, eta_h)
        ]
    )

    def stats(x):
        x = x[np.isfinite(x)]
        if x.size == 0:
            return (float("nan"), float("nan"))
        return (float(x.mean()), float(x.std(ddof=1)) if x.size > 1 else 0.0)

    unc = {
        "g2_cross": stats(g2),
        "g2_heralded": stats(g2_h),
        "eta_H": stats(eta_h),
        "lambda_sq": stats(lam_sq),
        "undefined": undefined,
        "trials": emulation.trials,
    }
    return replace(report, uncertainty=unc)


def relative_fluctuation(values):
    values = np.asarray(values, dtype=float)
    return float(values.std(ddof=1) / abs(values.mean())) if values.size > 1 else math.nan
