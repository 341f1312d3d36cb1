import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from topsqueeze.errors import ConfigError, NoPhaseMatchingError
from topsqueeze.phasematch import (
    PhaseMatchingProblem,
    Sellmeier,
    bisect,
    omega_from_wavelength,
    solve_phase_matching,
    wavelength_from_omega,
)

WP = omega_from_wavelength(780.0)


def test_silica_index_reference():
    # fused silica near 1.4537 at 780 nm
    assert float(Sellmeier().index(WP)) == pytest.approx(1.4537, abs=5e-4)


@given(st.floats(300.0, 2000.0))
def test_wavelength_round_trip(nm):
    assert wavelength_from_omega(omega_from_wavelength(nm)) == pytest.approx(nm, rel=1e-12)


def test_degenerate_without_birefringence():
    sol = solve_phase_matching(PhaseMatchingProblem(WP, delta_n=0.0))
    assert sol.detuning == 0.0
    assert sol.omega_s == sol.omega_i == WP


def test_default_birefringence_solution():
    prob = PhaseMatchingProblem(WP, delta_n=1e-4)
    sol = solve_phase_matching(prob)
    assert sol.omega_s + sol.omega_i == pytest.approx(2 * WP, rel=1e-14)
    assert abs(sol.residual) < 1e-12 * prob.pump_wavevector()
    assert sol.wavelength_s_nm < 780.0 < sol.wavelength_i_nm


def test_detuning_monotone_in_birefringence():
    dns = np.geomspace(1e-6, 3e-4, 12)
    det = [solve_phase_matching(PhaseMatchingProblem(WP, delta_n=d)).detuning for d in dns]
    assert np.all(np.diff(det) > 0)


def test_no_solution_reports_range():
    with pytest.raises(NoPhaseMatchingError, match="mismatch spans"):
        solve_phase_matching(PhaseMatchingProblem(WP, delta_n=0.5))


def test_problem_validation():
    with pytest.raises(ConfigError):
        PhaseMatchingProblem(WP, delta_n=-1e-4)
    with pytest.raises(ConfigError):
        PhaseMatchingProblem(WP, search_fraction=1.5)


def test_bisect():
    assert bisect(lambda x: x * x - 2.0, 0.0, 2.0) == pytest.approx(np.sqrt(2.0), rel=1e-12)
    with pytest.raises(ValueError):
        bisect(lambda x: x * x + 1.0, -1.0, 1.0)
