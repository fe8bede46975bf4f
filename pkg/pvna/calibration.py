"""
12-term error model: SOLT solvers, correction of raw sweeps and the calibration procedure.

Forward terms (port 1 driven): e_d directivity, e_s source match, e_r reflection tracking,
e_l load match, e_t transmission tracking, e_x crosstalk. Reverse terms are the same
quantities for port 2 driven.
"""

import logging

import numpy as np

from .exceptions import ConditioningError, GridMismatchError, SingularCorrectionError, ModelCreationError
from .network import FrequencyGrid, TwoPortSParams, IdealReflect, IdealLoad, IdealThru
from .sweep import run_sweep
from .util import PrettyPrint


log = logging.getLogger(__name__)


__all__ = [
    'TERMS',
    'ErrorTerms12',
    'StandardsKit',
    'solve_one_port',
    'solve_transmission',
    'apply_correction',
    'run_solt',
]

TERMS = ('e_d', 'e_s', 'e_r', 'e_l', 'e_t', 'e_x')

_MIN_SEPARATION = 1e-6
_MIN_DENOMINATOR = 1e-12
_MIN_THRU = 1e-6


class ErrorTerms12(PrettyPrint):
    """
    Forward and reverse error terms per grid point.
    forward, reverse - dict: term name -> complex array
    """

    def __init__(self, grid, forward, reverse):
        if not isinstance(grid, FrequencyGrid):
            grid = FrequencyGrid(grid)
        self.grid = grid
        self.forward, self.reverse = {}, {}
        for direction, terms in ((self.forward, forward), (self.reverse, reverse)):
            for name in TERMS:
                values = np.broadcast_to(np.asarray(terms[name], dtype=complex), (len(grid),)).copy()
                if not np.all(np.isfinite(values)):
                    raise ModelCreationError('Error term %s is not finite' % name)
                direction[name] = values
        for direction in (self.forward, self.reverse):
            for name in ('e_r', 'e_t'):
                if np.any(direction[name] == 0):
                    raise ModelCreationError('Tracking term %s must be nonzero' % name)

    @classmethod
    def identity(cls, grid):
        terms = {'e_d': 0j, 'e_s': 0j, 'e_r': 1 + 0j, 'e_l': 0j, 'e_t': 1 + 0j, 'e_x': 0j}
        return cls(grid, terms, terms)

    def __eq__(self, other):
        if not isinstance(other, ErrorTerms12):
            return NotImplemented
        return self.grid == other.grid and all(
            np.array_equal(self.forward[n], other.forward[n]) and np.array_equal(self.reverse[n], other.reverse[n])
            for n in TERMS
        )

    def embed(self, s):
        """
        Raw measurement the error model produces for the true S-parameters s (TwoPortSParams).
        Inverse of apply_correction.
        """
        if s.grid != self.grid:
            raise GridMismatchError('S-parameters and error terms are on different grids')
        f, r = self.forward, self.reverse
        delta = s.s11 * s.s22 - s.s21 * s.s12
        d_f = (1 - f['e_s'] * s.s11) * (1 - f['e_l'] * s.s22) - f['e_s'] * f['e_l'] * s.s21 * s.s12
        d_r = (1 - r['e_s'] * s.s22) * (1 - r['e_l'] * s.s11) - r['e_s'] * r['e_l'] * s.s12 * s.s21
        m11 = f['e_d'] + f['e_r'] * (s.s11 - f['e_l'] * delta) / d_f
        m21 = f['e_x'] + f['e_t'] * s.s21 / d_f
        m22 = r['e_d'] + r['e_r'] * (s.s22 - r['e_l'] * delta) / d_r
        m12 = r['e_x'] + r['e_t'] * s.s12 / d_r
        return TwoPortSParams(self.grid, m11, m12, m21, m22)


class StandardsKit(PrettyPrint):
    """
    SOLT standards as OUT models. Reflect standards are two-ports with the same
    reflection on both ports; the defaults are ideal.
    """

    def __init__(self, open=None, short=None, load=None, thru=None):
        self.open = open or IdealReflect(1.0)
        self.short = short or IdealReflect(-1.0)
        self.load = load or IdealLoad()
        self.thru = thru or IdealThru()

    def known(self, grid):
        """Known reflections at port 1 and port 2: two arrays of shape (3, n) ordered short, open, load"""
        f = grid.points
        port1, port2 = [], []
        for model in (self.short, self.open, self.load):
            m = model.response(f)
            port1.append(m[:, 0, 0])
            port2.append(m[:, 1, 1])
        return np.array(port1), np.array(port2)


def _check_separation(known, frequencies):
    for i, j in ((0, 1), (0, 2), (1, 2)):
        bad = np.abs(known[i] - known[j]) <= _MIN_SEPARATION
        if np.any(bad):
            at = None if frequencies is None else float(np.asarray(frequencies)[np.argmax(bad)])
            raise ConditioningError('Reflect standards %d and %d are not distinct' % (i, j), at)


def solve_one_port(measured, known, frequencies=None):
    """
    Solve e_d, e_s, e_r of  m = e_d + e_r g / (1 - e_s g)  from three standards.

    measured, known - arrays of shape (3,) or (3, n); known may be (3,) for all points.
    Uses the linear form  m = e_d + g (e_r - e_d e_s) + e_s g m.
    Returns (e_d, e_s, e_r), scalars or arrays of length n.
    """
    measured = np.asarray(measured, dtype=complex)
    known = np.asarray(known, dtype=complex)
    if known.ndim == 1:
        known = known.reshape((3,) + (1,) * (measured.ndim - 1))
    known = np.broadcast_to(known, measured.shape)
    _check_separation(known.reshape(3, -1), frequencies)
    m = measured.reshape(3, -1).T
    g = known.reshape(3, -1).T
    system = np.stack((np.ones_like(g), g, g * m), axis=-1)
    solution = np.linalg.solve(system, m[..., np.newaxis])[..., 0]
    e_d, delta_e, e_s = solution.T
    e_r = delta_e + e_d * e_s
    if measured.ndim == 1:
        return e_d[0], e_s[0], e_r[0]
    return e_d, e_s, e_r


def _transmission_terms(m_refl, m_trans, e_x, e_d, e_s, e_r, s_pp, s_qp, s_pq, s_qq):
    g = (m_refl - e_d) / (e_r + e_s * (m_refl - e_d))
    e_l = (g - s_pp) / (s_qp * s_pq + s_qq * (g - s_pp))
    d = (1 - e_s * s_pp) * (1 - e_l * s_qq) - e_s * e_l * s_qp * s_pq
    e_t = (m_trans - e_x) * d / s_qp
    return e_l, e_t


def solve_transmission(thru_meas, iso_meas, one_port_fwd, one_port_rev, thru_model, frequencies=None):
    """
    Load match and transmission tracking from a known thru, crosstalk from the isolation step.

    thru_meas - raw thru measurement, array (n, 2, 2) or (2, 2)
    iso_meas - (M21, M12) measured with both ports terminated
    one_port_fwd, one_port_rev - (e_d, e_s, e_r) of port 1 and port 2
    thru_model - S-matrix of the thru, same shape as thru_meas
    Returns ((e_l, e_t, e_x), (e_l', e_t', e_x')).
    """
    m = np.asarray(thru_meas, dtype=complex)
    s = np.asarray(thru_model, dtype=complex)
    e_x, e_x_rev = (np.asarray(v, dtype=complex) for v in iso_meas)
    weak = (np.abs(s[..., 1, 0]) < _MIN_THRU) | (np.abs(s[..., 0, 1]) < _MIN_THRU)
    weak = weak | (np.abs(m[..., 1, 0] - e_x) < _MIN_THRU) | (np.abs(m[..., 0, 1] - e_x_rev) < _MIN_THRU)
    if np.any(weak):
        at = None if frequencies is None else float(np.atleast_1d(frequencies)[np.argmax(np.atleast_1d(weak))])
        raise ConditioningError('Thru transmission is too weak', at)
    e_l, e_t = _transmission_terms(m[..., 0, 0], m[..., 1, 0], e_x, *one_port_fwd,
                                   s[..., 0, 0], s[..., 1, 0], s[..., 0, 1], s[..., 1, 1])
    e_l_rev, e_t_rev = _transmission_terms(m[..., 1, 1], m[..., 0, 1], e_x_rev, *one_port_rev,
                                           s[..., 1, 1], s[..., 0, 1], s[..., 1, 0], s[..., 0, 0])
    return (e_l, e_t, e_x), (e_l_rev, e_t_rev, e_x_rev)


def apply_correction(raw, e):
    """
    Corrected S-parameters from raw ratios with the 12-term model.
    """
    if raw.grid != e.grid:
        raise GridMismatchError('Raw data has %d points, error terms %d, or the frequencies differ'
                                % (len(raw.grid), len(e.grid)))
    f, r = e.forward, e.reverse
    n11 = (raw.s11 - f['e_d']) / f['e_r']
    n21 = (raw.s21 - f['e_x']) / f['e_t']
    n12 = (raw.s12 - r['e_x']) / r['e_t']
    n22 = (raw.s22 - r['e_d']) / r['e_r']
    d = (1 + n11 * f['e_s']) * (1 + n22 * r['e_s']) - n21 * n12 * f['e_l'] * r['e_l']
    singular = np.abs(d) < _MIN_DENOMINATOR
    if np.any(singular):
        raise SingularCorrectionError(float(raw.grid[np.argmax(singular)]))
    s11 = (n11 * (1 + n22 * r['e_s']) - f['e_l'] * n21 * n12) / d
    s21 = n21 * (1 + n22 * (r['e_s'] - f['e_l'])) / d
    s12 = n12 * (1 + n11 * (f['e_s'] - r['e_l'])) / d
    s22 = (n22 * (1 + n11 * f['e_s']) - r['e_l'] * n21 * n12) / d
    return TwoPortSParams(raw.grid, s11, s12, s21, s22)


# Sweep seeds of the standards are offset so their noise streams differ.
_STANDARD_SEEDS = {'short': 1, 'open': 2, 'load': 3, 'thru': 4}


def run_solt(inst, kit, cfg, isolation=True):
    """
    Measure short, open and load on both ports, the thru, and (with the load sweep)
    the isolation, then solve the 12 error terms on cfg's grid.
    """
    grid = cfg.grid()
    raws = {}
    for name in ('short', 'open', 'load', 'thru'):
        sub = cfg.replace(rng_seed=cfg.rng_seed * 8 + _STANDARD_SEEDS[name])
        raws[name] = run_sweep(inst, getattr(kit, name), sub).raw
        log.debug('Standard %s measured', name)
    known1, known2 = kit.known(grid)
    measured1 = np.array([raws[n].s11 for n in ('short', 'open', 'load')])
    measured2 = np.array([raws[n].s22 for n in ('short', 'open', 'load')])
    one_port_fwd = solve_one_port(measured1, known1, grid.points)
    one_port_rev = solve_one_port(measured2, known2, grid.points)
    if isolation:
        iso = (raws['load'].s21, raws['load'].s12)
    else:
        iso = (np.zeros(len(grid), dtype=complex), np.zeros(len(grid), dtype=complex))
    thru_model = kit.thru.response(grid.points)
    fwd, rev = solve_transmission(raws['thru'].matrices(), iso, one_port_fwd, one_port_rev, thru_model, grid.points)
    e_d, e_s, e_r = one_port_fwd
    e_d_rev, e_s_rev, e_r_rev = one_port_rev
    terms = ErrorTerms12(
        grid,
        {'e_d': e_d, 'e_s': e_s, 'e_r': e_r, 'e_l': fwd[0], 'e_t': fwd[1], 'e_x': fwd[2]},
        {'e_d': e_d_rev, 'e_s': e_s_rev, 'e_r': e_r_rev, 'e_l': rev[0], 'e_t': rev[1], 'e_x': rev[2]},
    )
    log.info('SOLT calibration of %d points finished', len(grid))
    return terms
