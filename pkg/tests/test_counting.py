import warnings

import numpy as np
import pytest

from topsqueeze.counting import CountingEmulation, EventRates, emulate_counts, rates_for, relative_fluctuation
from topsqueeze.squeezer import CorrelationReport


def report(**kw):
    base = dict(port=1, z=35.0, g2_cross=40.0, g2_heralded=0.05, eta_H=0.2, lambda_sq=0.01, mean_photon_number=1e-3)
    base.update(kw)
    return CorrelationReport(**base)


def test_large_counts_recover_analytic_g2():
    rep = report()
    rates = rates_for(rep, 1e-3, 1e-3)
    emu = CountingEmulation(integration_time_s=500.0, trials=1)
    assert rates.coincidences * emu.pulses >= 1e6
    out = emulate_counts(rep, rates, emu, np.random.default_rng(0))
    assert out.uncertainty["g2_cross"][0] == pytest.approx(rep.g2_cross, rel=0.01)
    assert out.uncertainty["eta_H"][0] == pytest.approx(rep.eta_H, rel=0.01)


def test_zero_rate_flags_undefined():
    rep = report()
    rates = rates_for(rep, 0.0, 1e-3)
    with pytest.warns(RuntimeWarning, match="undefined"):
        out = emulate_counts(rep, rates, CountingEmulation(trials=3), np.random.default_rng(0))
    assert out.uncertainty["undefined"] is True
    assert np.isnan(out.uncertainty["g2_cross"][0])


def test_lambda_sq_fluctuation_scales_inverse_sqrt():
    rep = report(g2_heralded=0.2, eta_H=0.3)
    rates = rates_for(rep, 1e-3, 1e-3)
    fl = []
    for t in (0.02, 0.08, 0.32):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = emulate_counts(rep, rates, CountingEmulation(t, trials=400), np.random.default_rng(1))
        mean, std = out.uncertainty["lambda_sq"]
        fl.append(std / mean)
    slope = np.polyfit(np.log([1, 4, 16]), np.log(fl), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.08)


def test_unbiased_mean():
    rep = report()
    rates = rates_for(rep, 5e-4, 5e-4)
    out = emulate_counts(rep, rates, CountingEmulation(0.5, trials=200), np.random.default_rng(3))
    mean, std = out.uncertainty["g2_cross"]
    assert abs(mean - rep.g2_cross) < 4 * std / np.sqrt(200)


def test_validation():
    with pytest.raises(ValueError):
        CountingEmulation(trials=0)
    with pytest.raises(ValueError):
        EventRates(-1.0, 0, 0, 0, 0)
    assert np.isnan(relative_fluctuation([1.0]))
