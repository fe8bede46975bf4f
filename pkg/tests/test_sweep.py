import logging

import numpy as np
import pytest

from pvna.dsp import Phasor
from pvna.exceptions import ConfigError, GridError, InvalidReferenceError
from pvna.network import IdealThru, IdealReflect, DelayLine, ParametricBandpass, TwoPortSParams
from pvna.sweep import SweepConfig, PointMeasurement, guard_detune, measure_point, raw_sparams, run_sweep
from .helper import fine_instrument, short_sweep


F_REP = 36.456e6


@pytest.mark.parametrize('kwargs', [
    dict(f_start=40e9, f_stop=30e9),
    dict(f_start=0.0),
    dict(n_points=1),
    dict(samples_per_point=32),
    dict(detune_guard=0.0),
    dict(detune_guard=0.2),
    dict(workers=0),
    dict(rng_seed=-1),
    dict(points=[]),
])
def test_sweep_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SweepConfig(**kwargs)


def test_sweep_config_grid_and_replace():
    cfg = SweepConfig(30e9, 40e9, 11)
    assert 11 == len(cfg.grid())
    explicit = cfg.replace(points=[31e9, 32e9])
    assert [31e9, 32e9] == list(explicit.grid().points)
    back = explicit.replace(f_start=30e9, f_stop=40e9, n_points=3)
    assert [30e9, 35e9, 40e9] == list(back.grid().points)
    assert 30e9 == cfg.f_start


def test_sweep_config_to_json():
    assert '"n_points": 11' in SweepConfig(30e9, 40e9, 11).to_json()


def test_guard_detune_leaves_clear_frequencies():
    assert F_REP == guard_detune(35e9, F_REP, 1e-4)


def test_guard_detune_moves_boundary_frequencies(caplog):
    f = 1920 * F_REP / 2
    with caplog.at_level(logging.WARNING, logger='pvna.sweep'):
        rate = guard_detune(f, F_REP, 1e-4)
    assert rate == pytest.approx(F_REP * (1 + 2e-4))
    half = rate / 2
    assert abs(f - np.rint(f / half) * half) >= 1e-4 * rate
    assert 'Repetition rate detuned' in caplog.text


@pytest.mark.parametrize('guard', [1e-4, 1e-3, 1e-2])
def test_guard_detune_keeps_every_frequency_clear_of_zone_boundaries(guard):
    rng = np.random.default_rng(21)
    zones = rng.integers(55, 2195, 300)
    offsets = rng.uniform(-2 * guard, 2 * guard, 300) * F_REP
    freqs = np.concatenate([zones * F_REP / 2 + offsets, rng.uniform(1e9, 40e9, 300)])
    for f in freqs:
        rate = guard_detune(f, F_REP, guard)
        half = rate / 2
        assert abs(f - np.rint(f / half) * half) >= guard * rate
        assert rate >= F_REP


def test_guard_detune_validation():
    with pytest.raises(ValueError):
        guard_detune(35e9, F_REP, 0.5)


def test_measure_point_ideal_thru():
    inst = fine_instrument()
    cfg = short_sweep()
    m = measure_point(inst, IdealThru(), 35e9, 1, cfg)
    assert isinstance(m, PointMeasurement)
    assert 35e9 == m.f
    assert F_REP == m.f_rep
    assert not m.clipped
    assert m['meas_trans'].value / m['ref1'].value == pytest.approx(1.0, abs=1e-4)
    assert m['meas_refl'].magnitude < 1e-3 * m['ref1'].magnitude


def test_measure_point_outside_sweep():
    with pytest.raises(GridError):
        measure_point(fine_instrument(), IdealThru(), 50e9, 1, short_sweep())


def test_measure_point_in_even_zone_reports_true_phase():
    inst = fine_instrument()
    delay = DelayLine(900e-12)
    f = 960.7 * F_REP
    cfg = SweepConfig(points=[f], samples_per_point=1024)
    m = measure_point(inst, delay, f, 1, cfg)
    assert m.alias.flipped
    expect = np.exp(-2j * np.pi * f * 900e-12)
    assert expect == pytest.approx(m['meas_trans'].value / m['ref1'].value, abs=1e-4)


def test_raw_sparams_ratios():
    p = Phasor.from_complex
    fwd = PointMeasurement(1e9, 1, {'ref1': p(2.0), 'meas_refl': p(0.2j), 'meas_trans': p(1.0), 'ref2': p(0.0)},
                           False, F_REP, None)
    rev = PointMeasurement(1e9, 2, {'ref1': p(0.0), 'meas_refl': p(0.5), 'meas_trans': p(-0.4), 'ref2': p(1.0)},
                           False, F_REP, None)
    s = raw_sparams(fwd, rev)
    assert np.allclose([[0.1j, 0.5], [0.5, -0.4]], s)


def test_raw_sparams_rejects_weak_reference():
    p = Phasor.from_complex
    fwd = PointMeasurement(1e9, 1, {'ref1': p(1e-9), 'meas_refl': p(0), 'meas_trans': p(1), 'ref2': p(0)},
                           False, F_REP, None)
    rev = PointMeasurement(1e9, 2, {'ref1': p(0), 'meas_refl': p(0), 'meas_trans': p(0), 'ref2': p(1)},
                           False, F_REP, None)
    with pytest.raises(InvalidReferenceError):
        raw_sparams(fwd, rev, min_reference=1e-3)


@pytest.mark.parametrize('out', [
    IdealThru(),
    IdealReflect(-1.0),
    DelayLine(250e-12, 1.0),
    ParametricBandpass.from_targets(34.725e9, 4.25e9, vswr=1.5, passband_delay=900e-12),
])
def test_ideal_testset_measures_the_out(out):
    cfg = short_sweep(33e9, 36e9, 7)
    sweep = run_sweep(fine_instrument(), out, cfg)
    truth = TwoPortSParams.from_model(out, cfg.grid())
    for name in ('s11', 's12', 's21', 's22'):
        assert np.allclose(truth.param(name), sweep.raw.param(name), atol=2e-4)
    assert not sweep.clipped.any()
    assert 0 == len(sweep.detuned_points())


def test_sweep_is_deterministic():
    inst = fine_instrument(noise_sigma=1e-4)
    cfg = short_sweep(samples_per_point=256)
    a = run_sweep(inst, IdealThru(), cfg).raw
    b = run_sweep(inst, IdealThru(), cfg).raw
    assert np.array_equal(a.matrices(), b.matrices())
    c = run_sweep(inst, IdealThru(), cfg.replace(rng_seed=1)).raw
    assert not np.array_equal(a.matrices(), c.matrices())


def test_threaded_sweep_equals_serial_sweep():
    inst = fine_instrument(noise_sigma=1e-4)
    cfg = short_sweep(n_points=8, samples_per_point=256)
    serial = run_sweep(inst, IdealThru(), cfg).raw
    threaded = run_sweep(inst, IdealThru(), cfg.replace(workers=4)).raw
    assert np.array_equal(serial.matrices(), threaded.matrices())


def test_sweep_detunes_boundary_points():
    f = 1920 * F_REP / 2
    cfg = SweepConfig(points=[f - 5e6, f, f + 5e6], samples_per_point=256)
    sweep = run_sweep(fine_instrument(), IdealThru(), cfg)
    assert [f] == list(sweep.detuned_points())
    assert [False, True, False] == list(sweep.detuned)
    assert sweep.raw.s21[1] == pytest.approx(1.0, abs=1e-3)


def test_sweep_flags_clipping():
    inst = fine_instrument(source_power=0.0).replace(adc_fullscale=0.52)
    sweep = run_sweep(inst, IdealThru(), SweepConfig(points=[1e9, 2e9], samples_per_point=256))
    assert sweep.clipped.all()
    assert [1e9, 2e9] == list(sweep.flagged_points())
