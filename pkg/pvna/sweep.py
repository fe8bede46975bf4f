"""
Two-port frequency sweeps on the simulated analyzer.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .audit import PointsFrequencyMsg, __name__ as audit_module_name
from .dsp import alias_map, remove_dc, estimate_tone, correct_phase
from .exceptions import ConfigError, GridError, InvalidReferenceError, AliasBoundaryError
from .network import FrequencyGrid, TwoPortSParams, out_response
from .photonic import sample_branch
from .testset import BRANCHES
from .util import PrettyPrint, JsonSerializer, dbm_to_amplitude


log = logging.getLogger(__name__)
audit_log = logging.getLogger(audit_module_name)


__all__ = [
    'SweepConfig',
    'PointMeasurement',
    'RawSweep',
    'guard_detune',
    'measure_point',
    'raw_sparams',
    'run_sweep',
]


class SweepConfig(JsonSerializer, PrettyPrint):
    """
    Sweep settings.

    f_start, f_stop, n_points - linear grid (ignored when points are given)
    samples_per_point - record length per branch and drive direction
    rng_seed - root of all per-point noise streams
    detune_guard - zone-boundary guard as a fraction of f_rep
    workers - number of threads evaluating points
    points - explicit frequency list
    """

    def __init__(self, f_start=30e9, f_stop=40e9, n_points=201, samples_per_point=4096,
                 rng_seed=0, detune_guard=1e-4, workers=1, points=None):
        if points is not None:
            points = [float(f) for f in points]
            if len(points) < 1:
                raise ConfigError('Sweep needs at least one point')
            f_start, f_stop, n_points = points[0], points[-1], len(points)
        elif not 0 < f_start < f_stop:
            raise ConfigError('Sweep needs 0 < f_start < f_stop')
        elif n_points < 2:
            raise ConfigError('Sweep needs at least 2 points')
        if samples_per_point < 64:
            raise ConfigError('Sweep needs at least 64 samples per point')
        if not 0 < detune_guard < 0.1:
            raise ConfigError('Detune guard must be in (0, 0.1)')
        if workers < 1:
            raise ConfigError('Workers count must be >= 1')
        if rng_seed < 0:
            raise ConfigError('Seed must be >= 0')
        self.f_start = float(f_start)
        self.f_stop = float(f_stop)
        self.n_points = int(n_points)
        self.samples_per_point = int(samples_per_point)
        self.rng_seed = int(rng_seed)
        self.detune_guard = float(detune_guard)
        self.workers = int(workers)
        self.points = points

    def grid(self):
        if self.points is not None:
            return FrequencyGrid(self.points)
        return FrequencyGrid.linear(self.f_start, self.f_stop, self.n_points)

    def replace(self, **changes):
        """Copy of the config with some settings changed"""
        params = dict(vars(self))
        params.update(changes)
        if 'points' not in changes and ({'f_start', 'f_stop', 'n_points'} & set(changes)):
            params['points'] = None
        return SweepConfig(**params)


class PointMeasurement(PrettyPrint):
    """
    Phasors of the four branches for one frequency and drive direction.
    """

    def __init__(self, f, drive_port, phasors, clipped, f_rep, alias):
        self.f = f
        self.drive_port = drive_port
        self.phasors = phasors
        self.clipped = clipped
        self.f_rep = f_rep
        self.alias = alias

    def __getitem__(self, name):
        return self.phasors[name]


class RawSweep(PrettyPrint):
    """
    Uncalibrated sweep result.
    clipped - (n, 2) flags for forward/reverse drive, f_rep - repetition rate used per point
    """

    def __init__(self, grid, raw, clipped, f_rep, nominal_f_rep):
        self.grid = grid
        self.raw = raw
        self.clipped = clipped
        self.f_rep = f_rep
        self.nominal_f_rep = nominal_f_rep

    @property
    def detuned(self):
        return self.f_rep != self.nominal_f_rep

    def flagged_points(self):
        """Frequencies where any branch clipped"""
        return self.grid.points[np.any(self.clipped, axis=1)]

    def detuned_points(self):
        return self.grid.points[self.detuned]


def guard_detune(f, f_rep, guard):
    """
    Repetition rate to use at f: f_rep itself, or f_rep * (1 + 2 k guard) with the smallest
    k >= 1 that keeps f at least guard * f_rep away from every multiple of the half rate.
    """
    if not 0 < guard < 0.1:
        raise ValueError('Guard must be in (0, 0.1)')

    def clear(rate):
        half = rate / 2.0
        return abs(f - np.rint(f / half) * half) >= guard * rate

    if clear(f_rep):
        return f_rep
    for k in range(1, 10001):
        rate = f_rep * (1.0 + 2.0 * k * guard)
        if clear(rate):
            log.warning('Repetition rate detuned to %.6f Hz at %.6f Hz', rate, f)
            return rate
    raise AliasBoundaryError(f, f_rep)


def _reference_floor(inst, n_samples):
    """Smallest reference phasor (ADC codes) distinguishable from noise and quantization"""
    b = inst.branches['ref1']
    sigma = max(b.oid.noise_sigma / b.lsb, 1.0 / np.sqrt(12.0))
    return 3.0 * sigma * np.sqrt(2.0 / n_samples)


def measure_point(inst, out, f, drive_port, cfg, point_index=0):
    """
    Drive port 1 or 2 at f, digitize the four branches and estimate their phasors.
    Noise of branch i uses the stream (rng_seed, point_index, drive_port - 1, i).
    Returns PointMeasurement.
    """
    span = 1e-9 * cfg.f_stop
    if not cfg.f_start - span <= f <= cfg.f_stop + span:
        raise GridError('Frequency %.6f Hz is outside of the sweep' % f)
    f_rep = guard_detune(f, inst.f_rep, cfg.detune_guard)
    alias = alias_map(f, f_rep)
    waves = inst.testset.branch_waves(out_response(out, f), f, drive_port)
    a0 = dbm_to_amplitude(inst.source_power)
    phasors, clipped = {}, False
    for i, name in enumerate(BRANCHES):
        w = a0 * waves[name]
        record = sample_branch(inst.branch(name, f_rep), f, abs(w), np.angle(w), cfg.samples_per_point,
                               rng_seed=(cfg.rng_seed, point_index, drive_port - 1, i))
        clipped = clipped or record.clipped
        phasor = estimate_tone(remove_dc(record.values()), alias.f_norm)
        phasors[name] = correct_phase(phasor, alias)
    log.debug('Measured %.6f Hz, port %d: zone %d', f, drive_port, alias.zone)
    return PointMeasurement(f, drive_port, phasors, clipped, f_rep, alias)


def raw_sparams(fwd, rev, min_reference=0.0):
    """
    Ratio the measurement branches to the reference of the driven port.
    Returns 2x2 complex array [[s11, s12], [s21, s22]].
    """
    ref1, ref2 = fwd['ref1'], rev['ref2']
    for name, ref in (('ref1', ref1), ('ref2', ref2)):
        if ref.magnitude <= min_reference:
            raise InvalidReferenceError('Reference %s magnitude %.3g is below %.3g' % (name, ref.magnitude, min_reference))
    s11 = fwd['meas_refl'].value / ref1.value
    s21 = fwd['meas_trans'].value / ref1.value
    s22 = rev['meas_trans'].value / ref2.value
    s12 = rev['meas_refl'].value / ref2.value
    return np.array([[s11, s12], [s21, s22]])


def run_sweep(inst, out, cfg, audit_points_cls=None):
    """
    Sweep the OUT: forward then reverse drive at every grid point.
    Points are independent and evaluated by cfg.workers threads.
    Returns RawSweep.
    """
    grid = cfg.grid()
    floor = _reference_floor(inst, cfg.samples_per_point)
    apm = audit_points_cls or PointsFrequencyMsg

    def point(i):
        f = grid[i]
        fwd = measure_point(inst, out, f, 1, cfg, i)
        rev = measure_point(inst, out, f, 2, cfg, i)
        return raw_sparams(fwd, rev, floor), (fwd.clipped, rev.clipped), fwd.f_rep

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(point, range(len(grid))))
    else:
        results = [point(i) for i in range(len(grid))]

    raw = TwoPortSParams.from_matrices(grid, [r[0] for r in results])
    sweep = RawSweep(grid, raw, np.array([r[1] for r in results], dtype=bool),
                     np.array([r[2] for r in results]), inst.f_rep)
    log.info('Sweep of %d points %.6g-%.6g Hz finished', len(grid), grid[0], grid[-1])
    audit_log.info('Sweep finished', extra={
        'points': len(grid),
        'flagged': apm(sweep.flagged_points()),
        'detuned': apm(sweep.detuned_points()),
    })
    return sweep
