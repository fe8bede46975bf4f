import numpy as np
import pytest

from pvna.dsp import (AliasResult, Phasor, alias_map, remove_dc, estimate_tone, correct_phase, power_spectrum,
                      dynamic_range, wrap_phase)
from pvna.exceptions import AliasBoundaryError, EstimationError, SpectrumError


F_REP = 36.456e6


@pytest.mark.parametrize('phase, expect', [
    (0.0, 0.0),
    (np.pi, np.pi),
    (-np.pi, np.pi),
    (3 * np.pi / 2, -np.pi / 2),
    (7.0, 7.0 - 2 * np.pi),
])
def test_wrap_phase(phase, expect):
    assert expect == pytest.approx(wrap_phase(phase))


def test_phasor():
    p = Phasor.from_complex(-2j)
    assert 2.0 == p.magnitude
    assert -np.pi / 2 == pytest.approx(p.phase)
    assert -2j == pytest.approx(p.value)
    assert Phasor(1.0, 0.5) == Phasor(1.0, 0.5)
    assert Phasor(1.0, 0.5) != Phasor(1.0, 0.6)
    assert {Phasor(1.0, 0.5)} == {Phasor(1.0, 0.5)}
    with pytest.raises(EstimationError):
        Phasor(-1.0, 0.0)


def test_phasor_to_json():
    assert '"magnitude": 1.0' in Phasor(1.0, 0.0).to_json()


@pytest.mark.parametrize('f, f_alias, zone, flipped', [
    (10e6, 10e6, 1, False),
    (20e6, F_REP - 20e6, 2, True),
    (F_REP + 1e6, 1e6, 3, False),
    (35e9, 35e9 - 960 * F_REP, 1921, False),
    (960.9 * F_REP, 0.1 * F_REP, 1922, True),
])
def test_alias_map(f, f_alias, zone, flipped):
    a = alias_map(f, F_REP)
    assert f_alias == pytest.approx(a.f_alias, abs=1e-3)
    assert zone == a.zone
    assert flipped == a.flipped
    assert a.f_alias / F_REP == a.f_norm


@pytest.mark.parametrize('f', [F_REP / 2, F_REP, 1920 * F_REP / 2, 7 * F_REP / 2 * (1 + 1e-8)])
def test_alias_map_boundaries(f):
    with pytest.raises(AliasBoundaryError):
        alias_map(f, F_REP)


def test_alias_map_rejects_non_positive():
    with pytest.raises(ValueError):
        alias_map(0.0, F_REP)


def test_alias_map_matches_sampled_tone():
    """The alias is the frequency that the samples of the tone actually show"""
    rng = np.random.default_rng(11)
    k = np.arange(64)
    for f in rng.uniform(0.1e9, 40e9, 100):
        a = alias_map(f, F_REP)
        sampled = np.cos(2 * np.pi * np.mod(f * k / F_REP, 1.0) + 0.4)
        folded = np.cos(2 * np.pi * np.mod(a.f_norm * k, 1.0) + (-0.4 if a.flipped else 0.4))
        assert np.allclose(sampled, folded, atol=1e-9)


def test_remove_dc():
    assert [-1.0, 1.0] == list(remove_dc([1.0, 3.0]))
    with pytest.raises(EstimationError):
        remove_dc([])


def test_estimate_tone_exact():
    k = np.arange(1000)
    samples = 3.0 * np.cos(2 * np.pi * 0.1234 * k + 0.9) + 7.0
    p = estimate_tone(samples, 0.1234)
    assert 3.0 == pytest.approx(p.magnitude, rel=1e-12)
    assert 0.9 == pytest.approx(p.phase, abs=1e-12)


def test_estimate_tone_in_noise():
    rng = np.random.default_rng(5)
    k = np.arange(4096)
    samples = np.cos(2 * np.pi * 0.3 * k - 2.0) + rng.normal(0, 0.1, k.size)
    p = estimate_tone(samples, 0.3)
    assert 1.0 == pytest.approx(p.magnitude, abs=0.01)
    assert -2.0 == pytest.approx(p.phase, abs=0.01)


def test_estimate_tone_phase_spread_falls_as_inverse_sqrt_of_record_length():
    sizes = np.array([64, 256, 1024, 4096])
    spreads = []
    for n in sizes:
        k = np.arange(n)
        clean = np.cos(2 * np.pi * 0.1234 * k + 0.4)
        phases = []
        for seed in range(300):
            rng = np.random.default_rng(seed)
            phases.append(estimate_tone(clean + rng.normal(0, 0.1, n), 0.1234).phase)
        spreads.append(np.std(phases))
    slope = np.polyfit(np.log(sizes), np.log(spreads), 1)[0]
    assert -0.5 == pytest.approx(slope, abs=0.05)


@pytest.mark.parametrize('f_norm, n', [
    (0.0, 100),
    (0.5, 100),
    (0.7, 100),
    (0.2, 7),
])
def test_estimate_tone_domain(f_norm, n):
    with pytest.raises(EstimationError):
        estimate_tone(np.zeros(n), f_norm)


def test_correct_phase():
    p = Phasor(1.0, 0.3)
    assert p is correct_phase(p, AliasResult(1e6, 1, False, F_REP))
    flipped = AliasResult(1e6, 2, True, F_REP)
    assert -0.3 == pytest.approx(correct_phase(p, flipped).phase)
    assert 1.0 == correct_phase(p, flipped).magnitude
    assert 0.3 == pytest.approx(correct_phase(correct_phase(p, flipped), flipped).phase)


def test_power_spectrum_tone_power():
    n = 4096
    k = np.arange(n)
    samples = 2.0 * np.cos(2 * np.pi * 0.25 * k)
    s = power_spectrum(samples, n, f_rep=F_REP)
    assert 1024 == s.signal_bin
    assert 10 * np.log10(2.0) == pytest.approx(s.signal_db, abs=0.01)
    assert F_REP / n == s.bin_hz
    assert F_REP / 4 == pytest.approx(s.frequencies()[s.signal_bin])


def test_power_spectrum_signal_power_does_not_depend_on_fft_length():
    samples = 0.5 * np.cos(2 * np.pi * 0.125 * np.arange(2 ** 14) + 1.1)
    levels = [power_spectrum(samples, n).signal_db for n in (256, 1024, 4096, 2 ** 14)]
    assert np.allclose(levels, 10 * np.log10(0.5 ** 2 / 2), atol=0.3)
    assert np.ptp(levels) <= 0.3


def test_power_spectrum_white_noise_floor():
    rng = np.random.default_rng(9)
    n = 65536
    sigma = 0.01
    k = np.arange(n)
    samples = np.cos(2 * np.pi * 0.2 * k) + rng.normal(0, sigma, n)
    s = power_spectrum(samples, n)
    # median of the exponential distribution: 2 ln2 sigma^2 / n
    expect = 10 * np.log10(2 * np.log(2) * sigma ** 2 / n)
    assert expect == pytest.approx(s.noise_floor_db, abs=0.2)
    assert s.floor_relative_db < -80


def test_power_spectrum_floor_drops_6db_per_quadrupling():
    rng = np.random.default_rng(10)
    samples = np.cos(2 * np.pi * 0.2 * np.arange(2 ** 18)) + rng.normal(0, 0.01, 2 ** 18)
    floors = [power_spectrum(samples, n).noise_floor_db for n in (2 ** 14, 2 ** 16, 2 ** 18)]
    assert np.allclose(np.diff(floors), -6.02, atol=0.3)


def test_power_spectrum_uses_given_signal_bin():
    samples = np.cos(2 * np.pi * 0.25 * np.arange(256))
    assert 10 == power_spectrum(samples, 256, signal_bin=10).signal_bin


@pytest.mark.parametrize('n_fft, size', [
    (8, 100),
    (200, 100),
])
def test_power_spectrum_errors(n_fft, size):
    with pytest.raises(SpectrumError):
        power_spectrum(np.zeros(size), n_fft)


def test_dynamic_range():
    assert 120.0 == dynamic_range(0.0, -120.0)
    with pytest.raises(SpectrumError):
        dynamic_range(-130.0, -120.0)
