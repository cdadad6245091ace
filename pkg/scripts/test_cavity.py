"""Cavity reflection, coupling, spectral integrals, entanglement metrics and optimizer."""

import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import constants
from scipy.integrate import trapezoid

from cavity import (
    CavityBounds,
    CavityGeometry,
    CavityModel,
    LevelStructure,
    ReflectionIntegrals,
    build_cavity,
    cavity_lints,
    cooperativities,
    cooperativity,
    coupling_strength,
    dipole_from_rate,
    entanglement_metrics,
    evaluate_triple,
    get_emitter,
    level_structure,
    lorentzian_integrals,
    maximize_in_box,
    measured_spin_states,
    natural_decay_rate,
    optimize_cavity,
    recovered_spin_state,
    reflection_coefficient,
    spectral_integrals,
    spin_photon_metrics,
    synthetic_objective,
)
from cavity.optimizer import GHZ
from config import settings
from photon import PhotonSourceSpec, lorentzian_spectrum
from qcore import ConfigError, NumericalError

SNV = get_emitter("snv")
INV_SQRT2 = 1 / math.sqrt(2)


def toy_levels(**overrides) -> LevelStructure:
    values = dict(
        omega_1A=3e15,
        delta_omega_s=2 * math.pi * 100e9,
        omega_s=2 * math.pi * 96e9,
        gamma_1A=1e8,
        gamma_2B=1e8,
    )
    values.update(overrides)
    return LevelStructure(**values)


def toy_cavity(g: complex = 0j, kappa: float = 1e10, levels: LevelStructure | None = None, **kwargs) -> CavityModel:
    levels = levels or toy_levels()
    return CavityModel(
        omega_c=levels.omega_1A, kappa=kappa, levels=levels, geometry=CavityGeometry(),
        g_1A=g, **kwargs,
    )


# === COUPLING ===


def test_zero_dipole_gives_zero_coupling():
    assert coupling_strength(SNV.omega_zpl, 0.0, 1.8, 2.417, 5.7) == 0


def test_coupling_scales_with_inverse_sqrt_volume():
    d = 1e-29
    g1 = coupling_strength(SNV.omega_zpl, d, 1.8, 2.417, 5.7)
    g4 = coupling_strength(SNV.omega_zpl, d, 4 * 1.8, 2.417, 5.7)
    assert abs(g4) == pytest.approx(abs(g1) / 2, rel=1e-12)
    assert g1.real == 0 and g1.imag > 0


def test_snv_coupling_matches_high_precision_evaluation():
    omega, gamma, n, V_eff, eps_r = SNV.omega_zpl, SNV.zpl_rate, 2.417, 1.8, 5.7
    dipole = dipole_from_rate(omega, gamma, n)
    g = coupling_strength(omega, dipole, V_eff, n, eps_r)

    with mpmath.workdps(30):
        c, hbar, eps0 = (mpmath.mpf(v) for v in (constants.c, constants.hbar, constants.epsilon_0))
        w = mpmath.mpf(omega)
        wavelength = 2 * mpmath.pi * c / w
        volume = mpmath.mpf(V_eff) * wavelength**3 / (2 * mpmath.mpf(n) ** 3)
        expected = mpmath.sqrt(w / (2 * hbar * eps0 * mpmath.mpf(eps_r) * volume)) * mpmath.mpf(dipole)
    assert abs(g) == pytest.approx(float(expected), rel=1e-10)


@pytest.mark.parametrize("kwargs", [
    {"V_eff": 0.0},
    {"n": -1.0},
    {"eps_r": 0.0},
])
def test_coupling_rejects_non_physical_inputs(kwargs):
    values = dict(V_eff=1.8, n=2.417, eps_r=5.7)
    values.update(kwargs)
    with pytest.raises(ConfigError):
        coupling_strength(SNV.omega_zpl, 1e-29, **values)


def test_decay_rate_inverts_dipole():
    gamma0 = SNV.zpl_rate
    dipole = dipole_from_rate(SNV.omega_zpl, gamma0)
    assert natural_decay_rate(SNV.omega_zpl, dipole) == pytest.approx(gamma0, rel=1e-12)
    assert natural_decay_rate(SNV.omega_zpl, 0.0) == 0


def test_decay_rate_cubic_in_frequency():
    d = 2e-29
    ratio = natural_decay_rate(2 * SNV.omega_zpl, d) / natural_decay_rate(SNV.omega_zpl, d)
    assert ratio == pytest.approx(8.0, rel=1e-12)


# === REFLECTION ===


def test_bare_resonant_cavity_reflects_plus_one():
    cav = toy_cavity()
    assert reflection_coefficient(cav.omega_c, cav, 1) == pytest.approx(1.0, abs=1e-12)


def test_critical_coupling_gives_zero_reflection():
    levels = toy_levels()
    kappa = 1e10
    cav = toy_cavity(g=1j * math.sqrt(kappa * levels.gamma_avg_A), kappa=kappa, levels=levels)
    assert abs(reflection_coefficient(cav.omega_c, cav, 1)) < 1e-9


def test_strong_coupling_reflects_minus_one():
    cav = toy_cavity(g=1e15)
    assert reflection_coefficient(cav.omega_c, cav, 1) == pytest.approx(-1.0, abs=1e-9)


def test_spin_two_uses_its_own_transition():
    cav = toy_cavity(g=1e15)
    # g_2B = 0, so the second spin state sees the bare cavity
    assert reflection_coefficient(cav.omega_c, cav, 2) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ConfigError):
        reflection_coefficient(cav.omega_c, cav, 3)


def test_reflection_is_passive(rng):
    for _ in range(50):
        levels = toy_levels(gamma_1A=10 ** rng.uniform(6, 10), gamma_2B=10 ** rng.uniform(6, 10))
        cav = CavityModel(
            omega_c=levels.omega_1A + rng.normal() * 1e11,
            kappa=10 ** rng.uniform(8, 12),
            levels=levels,
            geometry=CavityGeometry(),
            g_1A=1j * 10 ** rng.uniform(8, 12),
            g_2B=1j * 10 ** rng.uniform(8, 12),
        )
        omega = levels.omega_1A + np.linspace(-1e12, 1e12, 2001)
        for spin in (1, 2):
            assert np.max(np.abs(reflection_coefficient(omega, cav, spin))) <= 1 + 1e-9


# === COOPERATIVITY ===


def test_cooperativity_examples():
    assert cooperativity(0, 2.0, 3.0) == 0
    assert cooperativity(math.sqrt(3.0), 2.0, 3.0) == pytest.approx(1.0)
    assert cooperativity(4 * 1.3, 2.0, 3.0) == pytest.approx(16 * cooperativity(1.3, 2.0, 3.0))
    with pytest.raises(ConfigError):
        cooperativity(1.0, 0.0, 1.0)


def test_cooperativities_skip_forbidden_transitions():
    levels = level_structure(SNV, 100 * GHZ, 96 * GHZ, cross_fraction=0.0)
    cav = build_cavity(levels.omega_1A, 10 * GHZ, levels)
    coop = cooperativities(cav)
    assert coop["2A"] is None and coop["1B"] is None
    assert coop["1A"] > 0 and coop["2B"] > 0


# === CAVITY MODEL ===


def test_build_cavity_cross_talk_switch():
    levels = level_structure(SNV, 100 * GHZ, 96 * GHZ)
    with_cross = build_cavity(levels.omega_1A, 10 * GHZ, levels)
    without = build_cavity(levels.omega_1A, 10 * GHZ, levels, include_cross_talk=False)
    assert with_cross.has_cross_talk
    assert not without.has_cross_talk
    assert without.g_1A == with_cross.g_1A
    assert with_cross.coupling_defect() < 1e-12


def test_fwhm_like_kappa_is_flagged():
    levels = level_structure(SNV, 100 * GHZ, 96 * GHZ)
    photon_gamma = 2 * math.pi * 1e9
    cav = build_cavity(levels.omega_1A, 2 * photon_gamma, levels, lint=False)
    assert any("HWHM" in w for w in cavity_lints(cav, photon_gamma))
    assert not any("HWHM" in w for w in cavity_lints(cav, 3 * photon_gamma))


def test_non_positive_kappa_rejected():
    with pytest.raises(ConfigError):
        toy_cavity(kappa=0.0)


# === SPECTRAL INTEGRALS ===


def photon(offset: float = 0.0, gamma_GHz: float = 1.0) -> PhotonSourceSpec:
    return PhotonSourceSpec.from_GHz(3e15 + offset, gamma_GHz)


def test_unit_reflection_gives_unit_integrals():
    integrals = lorentzian_integrals(lorentzian_spectrum(photon()), lambda x: 1.0, lambda x: 1.0)
    assert integrals.I1 == pytest.approx(1.0, abs=1e-7)
    assert integrals.I2 == pytest.approx(1.0, abs=1e-7)
    assert integrals.I3 == pytest.approx(1.0, abs=1e-7)


def test_opposite_constant_phases():
    integrals = lorentzian_integrals(lorentzian_spectrum(photon()), lambda x: -1.0, lambda x: 1.0)
    assert integrals.I1 == pytest.approx(1.0, abs=1e-7)
    assert integrals.I2 == pytest.approx(-1.0, abs=1e-7)
    assert integrals.I3 == pytest.approx(1.0, abs=1e-7)


def test_spectral_integrals_match_dense_trapezoid():
    levels = toy_levels(gamma_1A=1e9, gamma_2B=1e9, delta_omega_s=2 * math.pi * 10e9)
    cav = CavityModel(
        omega_c=levels.omega_1A + 2e9, kappa=2e10, levels=levels, geometry=CavityGeometry(),
        g_1A=3e10j, g_2B=3e10j,
    )
    spectrum = lorentzian_spectrum(photon(offset=1e9))
    integrals = spectral_integrals(spectrum, cav)

    half = spectrum.gamma / 2
    theta_max = 0.5 * math.pi * (1 - settings.lorentzian_tail_mass)
    theta = np.linspace(-theta_max, theta_max, 1_000_001)
    omega = spectrum.omega0 + half * np.tan(theta)
    r1 = reflection_coefficient(omega, cav, 1)
    r2 = reflection_coefficient(omega, cav, 2)
    I1 = trapezoid(np.abs(r1) ** 2, theta) / math.pi
    I2 = trapezoid(r1 * np.conj(r2), theta) / math.pi
    I3 = trapezoid(np.abs(r2) ** 2, theta) / math.pi

    assert integrals.I1 == pytest.approx(I1, abs=1e-7)
    assert abs(integrals.I2 - I2) <= 1e-7
    assert integrals.I3 == pytest.approx(I3, abs=1e-7)
    assert integrals.validate() == []


def test_integral_bounds_validation():
    assert ReflectionIntegrals.ideal().validate() == []
    assert ReflectionIntegrals(1.2, 0j, 0.5).validate()
    assert ReflectionIntegrals(0.5, 0.9 + 0j, 0.5).validate()


# === ENTANGLEMENT ===


def test_ideal_equal_superposition_outcomes():
    rho_plus, rho_minus = measured_spin_states(INV_SQRT2, INV_SQRT2, ReflectionIntegrals.ideal())
    assert_allclose(rho_plus, np.diag([0.5, 0.0]), atol=1e-15)
    assert_allclose(rho_minus, np.diag([0.0, 0.5]), atol=1e-15)
    total = np.trace(rho_plus) + np.trace(rho_minus)
    assert total.real == pytest.approx(1.0)


def test_ideal_early_only_outcomes():
    rho_plus, rho_minus = measured_spin_states(1.0, 0.0, ReflectionIntegrals.ideal())
    assert_allclose(rho_plus, np.full((2, 2), 0.25), atol=1e-15)
    assert_allclose(rho_minus, np.full((2, 2), 0.25), atol=1e-15)


def test_no_contrast_kills_minus_outcome():
    _, rho_minus = measured_spin_states(INV_SQRT2, INV_SQRT2, ReflectionIntegrals(1.0, 1.0 + 0j, 1.0))
    assert_allclose(rho_minus, np.zeros((2, 2)), atol=1e-15)


def test_recovery_reaches_target_state():
    plus = np.full((2, 2), 0.5)
    rho = recovered_spin_state(*measured_spin_states(INV_SQRT2, INV_SQRT2, ReflectionIntegrals.ideal()))
    assert_allclose(rho, plus, atol=1e-15)
    rho = recovered_spin_state(*measured_spin_states(1.0, 0.0, ReflectionIntegrals.ideal()))
    assert_allclose(rho, np.diag([0.0, 1.0]), atol=1e-15)
    assert_allclose(recovered_spin_state(np.zeros((2, 2)), np.zeros((2, 2))), np.zeros((2, 2)))


def test_metrics_examples():
    ideal = spin_photon_metrics(ReflectionIntegrals.ideal())
    assert (ideal.fidelity, ideal.success_probability) == pytest.approx((1.0, 1.0))
    # no contrast: both outcomes steer the spin to |2>
    flat = spin_photon_metrics(ReflectionIntegrals(1.0, 1.0 + 0j, 1.0))
    assert (flat.fidelity, flat.success_probability) == pytest.approx((0.5, 1.0))
    # no coherence between the reflected branches
    incoherent = spin_photon_metrics(ReflectionIntegrals(1.0, 0j, 1.0))
    assert (incoherent.fidelity, incoherent.success_probability) == pytest.approx((0.75, 1.0))


def test_vanishing_success_probability_rejected():
    from qcore import DegenerateBranchError

    with pytest.raises(DegenerateBranchError):
        entanglement_metrics(np.zeros((2, 2)))


# === OPTIMIZER ===


def test_synthetic_landscape_optimum_recovered():
    lower = np.array([-20.0, -20.0, 0.1])
    upper = np.array([20.0, 20.0, 100.0])
    optimum = lower + np.array([0.37, 0.61, 0.29]) * (upper - lower)
    search = maximize_in_box(
        synthetic_objective(optimum, lower, upper), lower, upper,
        start=(lower + upper) / 2, budget=2000, seed=3,
    )
    assert np.linalg.norm(search.x - optimum) <= 1e-4 * np.linalg.norm(upper - lower)
    assert search.value >= search.start_value
    assert search.evaluations <= 2000
    assert search.improvement == pytest.approx(search.value - search.start_value)
    assert search.improvement > 0


def test_search_is_deterministic_and_monotone_in_budget():
    lower, upper = np.zeros(3), np.ones(3)
    objective = synthetic_objective(np.array([0.2, 0.9, 0.4]), lower, upper)
    small = maximize_in_box(objective, lower, upper, start=np.full(3, 0.5), budget=80, seed=11)
    again = maximize_in_box(objective, lower, upper, start=np.full(3, 0.5), budget=80, seed=11)
    large = maximize_in_box(objective, lower, upper, start=np.full(3, 0.5), budget=400, seed=11)
    assert_allclose(small.x, again.x)
    assert large.value >= small.value
    assert all(b >= a for a, b in zip(large.trace, large.trace[1:]))


def test_search_fails_when_objective_is_never_finite():
    with pytest.raises(NumericalError):
        maximize_in_box(lambda x: math.nan, np.zeros(1), np.ones(1), start=np.array([0.2]), budget=5)


def test_search_skips_non_finite_points():
    def objective(x):
        return math.nan if x[0] < 0.5 else 1.0 - (x[0] - 0.8) ** 2

    search = maximize_in_box(objective, np.zeros(1), np.ones(1), start=np.array([0.2]), budget=200, seed=5)
    assert search.start_value == -math.inf
    assert np.all(np.isfinite(search.x))
    assert search.x[0] == pytest.approx(0.8, abs=1e-3)
    assert math.isfinite(search.value)
    assert search.trace[-1] == search.value


def test_degenerate_bounds_rejected():
    with pytest.raises(ConfigError):
        CavityBounds(omega0_offset_GHz=(1.0, 1.0))
    with pytest.raises(ConfigError):
        CavityBounds(kappa_GHz=(0.0, 1.0))


def test_zero_dipole_matches_no_contrast_state():
    levels = toy_levels()
    spec = PhotonSourceSpec.from_GHz(levels.omega_1A, 1.0)
    triple = (levels.omega_1A, levels.omega_1A + 3 * GHZ, 5 * GHZ)
    _, integrals, fidelity, eta = evaluate_triple(triple, spec, levels)
    assert integrals.I2 == pytest.approx(1.0, abs=1e-7)
    assert fidelity == pytest.approx(0.5, abs=1e-7)
    assert eta == pytest.approx(1.0, abs=1e-7)


@pytest.mark.slow
def test_narrowband_photon_reaches_high_fidelity():
    levels = level_structure(SNV, 100 * GHZ, 96 * GHZ)
    spec = PhotonSourceSpec.from_GHz(levels.omega_1A, 0.01)
    bounds = CavityBounds((-0.5, 0.5), (-0.5, 0.5), (50.0, 200.0))
    result = optimize_cavity(bounds, spec, levels, budget=60, seed=5)
    assert result.fidelity >= 0.99
    assert result.fidelity >= result.start_fidelity - 1e-9
    assert result.evaluations == 60
