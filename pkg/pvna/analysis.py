"""
Derived measurements: VSWR, group delay, band parameters, compression, system response
and the dynamic-range study.
"""

import logging

import numpy as np
from scipy import optimize, special

from .dsp import alias_map, estimate_tone, remove_dc, power_spectrum, dynamic_range
from .exceptions import BandEdgeError, CompressionNotFoundError, ConfigError, SpectrumError, GridError
from .network import FrequencyGrid, IdealThru, Z0
from .photonic import sample_branch, eom_response
from .sweep import measure_point
from .util import PrettyPrint, JsonSerializer, amplitude_to_dbm, dbm_to_amplitude, to_db


log = logging.getLogger(__name__)

# signal-bin power may wander this much (dB) across FFT sizes
SIGNAL_SPREAD_LIMIT = 0.5


__all__ = [
    'BandSummary',
    'CompressionResult',
    'NoiseFloorPoint',
    'vswr',
    'group_delay',
    'phase_reversals',
    'band_params',
    'compression_root',
    'theoretical_compression',
    'compression_sweep',
    'tune_pd_nonlinearity',
    'system_response',
    'noise_floor_study',
    'signal_spread_db',
    'calibrate_noise_sigma',
    'tone_record',
]


class BandSummary(JsonSerializer, PrettyPrint):
    """Passband of a transmission response. vswr_at_center is None without s11."""

    def __init__(self, f_center, bw3dB, delay_avg, vswr_at_center=None, f_low=None, f_high=None):
        self.f_center = f_center
        self.bw3dB = bw3dB
        self.delay_avg = delay_avg
        self.vswr_at_center = vswr_at_center
        self.f_low = f_low
        self.f_high = f_high


class CompressionResult(PrettyPrint):
    """
    p01 - input power (dBm) of 0.1 dB compression
    p_in, output_db, deviation - the power sweep and its deviation from the linear fit
    slope - dB per dB of the linear fit
    """

    def __init__(self, p01, p_in, output_db, deviation, slope=1.0):
        self.p01 = p01
        self.slope = slope
        self.p_in = p_in
        self.output_db = output_db
        self.deviation = deviation

    @property
    def curve(self):
        return list(zip(self.p_in, self.deviation))


class NoiseFloorPoint(JsonSerializer, PrettyPrint):
    """Floor (dB relative to the signal, negative) and dynamic range for one FFT size"""

    def __init__(self, n_fft, floor_db, dr_db, signal_db):
        self.n_fft = n_fft
        self.floor_db = floor_db
        self.dr_db = dr_db
        self.signal_db = signal_db


def vswr(gamma_mag):
    """Voltage standing wave ratio of a reflection magnitude"""
    if not 0 <= gamma_mag < 1:
        raise ValueError('Reflection magnitude must be in [0, 1), given %r' % gamma_mag)
    return (1.0 + gamma_mag) / (1.0 - gamma_mag)


def group_delay(phase, grid):
    """
    Group delay -d(phase)/d(omega) by central differences of the unwrapped phase.
    Returns an array for the interior grid points.
    """
    points = grid.points if isinstance(grid, FrequencyGrid) else FrequencyGrid(grid).points
    phase = np.asarray(phase, dtype=float)
    if points.size < 3:
        raise GridError('Group delay needs at least 3 points')
    if phase.size != points.size:
        raise GridError('Phase has %d points, grid has %d' % (phase.size, points.size))
    phase = np.unwrap(phase)
    return -(phase[2:] - phase[:-2]) / (2.0 * np.pi * (points[2:] - points[:-2]))


def phase_reversals(phase_deg, grid, tolerance=0.5):
    """
    Frequencies where the slope of a phase trace (degrees) changes sign.

    Uncorrected ratios through a delay run with alternating slope, conjugated in every
    other Nyquist zone. Steps between adjacent points are wrapped to [-180, 180) and
    compared with the median step size; steps matching neither slope within tolerance
    are the jumps at the zone edges and are skipped. Each reversal is placed halfway
    between the last point of one slope and the first point of the other.
    """
    points = grid.points if isinstance(grid, FrequencyGrid) else FrequencyGrid(grid).points
    phase = np.asarray(phase_deg, dtype=float)
    if points.size < 3:
        raise GridError('Phase reversals need at least 3 points')
    if phase.size != points.size:
        raise GridError('Phase has %d points, grid has %d' % (phase.size, points.size))
    step = np.mod(np.diff(phase) + 180.0, 360.0) - 180.0
    slope = np.median(np.abs(step))
    if slope == 0:
        return np.array([])
    sign = np.zeros(step.size)
    sign[np.abs(step - slope) <= tolerance * slope] = 1.0
    sign[np.abs(step + slope) <= tolerance * slope] = -1.0
    kept = np.nonzero(sign)[0]
    turns = np.nonzero(sign[kept[1:]] != sign[kept[:-1]])[0]
    edges = (points[kept[turns] + 1] + points[kept[turns + 1]]) / 2.0
    log.debug('%d phase reversals at a slope of %.4f deg per point', edges.size, slope)
    return edges


def _crossing(f, db, i, j, level):
    return f[i] + (level - db[i]) * (f[j] - f[i]) / (db[j] - db[i])


def band_params(s21, grid, s11=None):
    """
    Center, -3 dB bandwidth, mean passband group delay and center VSWR of a single passband.
    The center is the vertex of a least-squares parabola fitted to the dB values inside
    the -3 dB region; the crossings are interpolated linearly in dB.
    """
    points = grid.points if isinstance(grid, FrequencyGrid) else FrequencyGrid(grid).points
    s21 = np.asarray(s21, dtype=complex)
    db = to_db(s21)
    peak = int(np.argmax(db))
    level = db[peak] - 3.0

    below = np.nonzero(db[:peak] <= level)[0]
    above = np.nonzero(db[peak + 1:] <= level)[0]
    if below.size == 0 or above.size == 0:
        raise BandEdgeError('No -3 dB crossing on %s side of the peak' % ('the lower' if below.size == 0 else 'the upper'))
    lo = below[-1]
    hi = peak + 1 + above[0]
    f_low = _crossing(points, db, lo, lo + 1, level)
    f_high = _crossing(points, db, hi - 1, hi, level)

    inside = slice(lo + 1, hi)
    f_center = points[peak]
    if hi - lo - 1 >= 3:
        scale = points[peak]
        a, b, _ = np.polyfit(points[inside] / scale - 1.0, db[inside], 2)
        if a < 0:
            vertex = -b / (2.0 * a)
            f_center = scale * (1.0 + vertex)
            if not f_low <= f_center <= f_high:
                f_center = points[peak]

    tau = group_delay(np.angle(s21), points)
    interior = points[1:-1]
    passband = (interior >= f_low) & (interior <= f_high)
    delay_avg = float(np.mean(tau[passband])) if np.any(passband) else float('nan')

    center_vswr = None
    if s11 is not None:
        s11 = np.asarray(s11, dtype=complex)
        gamma = abs(np.interp(f_center, points, s11.real) + 1j * np.interp(f_center, points, s11.imag))
        center_vswr = vswr(gamma)
    return BandSummary(float(f_center), float(f_high - f_low), delay_avg, center_vswr, float(f_low), float(f_high))


def compression_root(level_db=0.1):
    """x = pi V / v_pi where the fundamental 2 J1(x) / x is level_db below linear"""
    def deviation(x):
        return 20.0 * np.log10(2.0 * special.j1(x) / x) + level_db

    return optimize.bisect(deviation, 1e-3, 1.5, xtol=1e-9)


def theoretical_compression(v_pi, level_db=0.1):
    """0.1 dB compression input power (dBm into 50 Ohm) of a quadrature-biased MZM"""
    if v_pi <= 0:
        raise ValueError('v_pi must be positive')
    amplitude = compression_root(level_db) * v_pi / np.pi
    return float(amplitude_to_dbm(amplitude, Z0))


def _fundamental(branch, f, p_in, n_samples, seed):
    """Fundamental magnitude (ADC codes) for a drive of p_in dBm at the modulator electrode"""
    amplitude = dbm_to_amplitude(p_in, Z0) / abs(eom_response(branch.eom, f))
    alias = alias_map(f, branch.pulses.f_rep)
    record = sample_branch(branch, f, amplitude, 0.0, n_samples, rng_seed=seed)
    return estimate_tone(remove_dc(record.values()), alias.f_norm).magnitude


def compression_sweep(inst, f, p_start=-20.0, p_stop=10.0, step=0.25, n_samples=4096, seed=0, branch='ref1'):
    """
    Sweep the drive power of one branch at f and find the 0.1 dB compression point.
    The linear reference is a least-squares line (slope and intercept) through the four lowest powers.
    """
    if not p_start < p_stop:
        raise ValueError('Power sweep needs p_start < p_stop')
    if step <= 0:
        raise ValueError('Power step must be positive')
    b = inst.branches[branch]
    p_in = np.arange(p_start, p_stop + step / 2.0, step)
    if p_in.size < 4:
        raise ValueError('Power sweep needs at least 4 points for the linear fit')
    output_db = np.array([20.0 * np.log10(_fundamental(b, f, p, n_samples, (seed, i))) for i, p in enumerate(p_in)])
    slope, intercept = np.polyfit(p_in[:4], output_db[:4], 1)
    deviation = output_db - (slope * p_in + intercept)
    hits = np.nonzero(deviation <= -0.1)[0]
    if hits.size == 0 or hits[0] == 0:
        raise CompressionNotFoundError('0.1 dB compression not found in %.2f..%.2f dBm' % (p_start, p_stop))
    i = hits[0]
    p01 = _crossing(p_in, deviation, i - 1, i, -0.1)
    log.info('Compression at %.6g Hz: p01 = %.3f dBm (fit slope %.4f)', f, p01, slope)
    return CompressionResult(float(p01), p_in, output_db, deviation, float(slope))


def tune_pd_nonlinearity(inst, f, target_p01, bounds=(0.0, 1.0), **kwargs):
    """
    PD cubic coefficient that moves the measured compression point to target_p01 (dBm).
    Returns the coefficient; the instrument is not modified.
    """
    def error(kappa):
        return compression_sweep(inst.replace(pd_nonlin=kappa), f, **kwargs).p01 - target_p01

    lo, hi = bounds
    if error(lo) * error(hi) > 0:
        raise CompressionNotFoundError('Target %.2f dBm is not reachable with pd_nonlin in [%g, %g]'
                                       % (target_p01, lo, hi))
    kappa = optimize.brentq(error, lo, hi, xtol=1e-4)
    log.info('PD nonlinearity %.4f gives p01 = %.2f dBm', kappa, target_p01)
    return kappa


def system_response(inst, cfg):
    """
    Uncalibrated transmission through an ideal thru: magnitude of the port-2 receiver
    phasor per unit source amplitude, in dB relative to the first grid point.
    Returns (grid, response_db).
    """
    grid = cfg.grid()
    thru = IdealThru()
    a0 = dbm_to_amplitude(inst.source_power)
    magnitude = np.array([
        measure_point(inst, thru, f, 1, cfg, i)['meas_trans'].magnitude / a0 for i, f in enumerate(grid.points)
    ])
    return grid, to_db(magnitude / magnitude[0])


def tone_record(inst, f, p_in, n_samples, seed=0, branch='ref1'):
    """Sample values of one branch driven with a p_in dBm tone at f"""
    b = inst.branches[branch]
    amplitude = dbm_to_amplitude(p_in, Z0) / abs(eom_response(b.eom, f))
    return sample_branch(b, f, amplitude, 0.0, n_samples, rng_seed=seed).values()


def noise_floor_study(inst, f, p_in, n_fft_list, seeds=(0,), record_length=None, branch='ref1'):
    """
    Noise floor and dynamic range versus FFT size, averaged over seeds.
    One record of max(n_fft_list) samples is captured per seed; every FFT uses its head.
    Returns a list of NoiseFloorPoint.
    """
    n_fft_list = [int(n) for n in n_fft_list]
    longest = max(n_fft_list)
    if record_length is not None and record_length < longest:
        raise SpectrumError('Record of %d samples is shorter than the largest FFT %d' % (record_length, longest))
    f_rep = inst.branches[branch].pulses.f_rep
    signal_bins = {n: int(round(alias_map(f, f_rep).f_norm * n)) for n in n_fft_list}
    floors = {n: [] for n in n_fft_list}
    signals = {n: [] for n in n_fft_list}
    for seed in seeds:
        record = tone_record(inst, f, p_in, record_length or longest, seed, branch)
        for n in n_fft_list:
            spectrum = power_spectrum(record, n, f_rep, signal_bin=signal_bins[n])
            floors[n].append(spectrum.noise_floor_db)
            signals[n].append(spectrum.signal_db)
    out = []
    for n in n_fft_list:
        signal_db, floor_db = float(np.mean(signals[n])), float(np.mean(floors[n]))
        out.append(NoiseFloorPoint(n, floor_db - signal_db, dynamic_range(signal_db, floor_db), signal_db))
        log.info('FFT %d points: floor %.2f dB below the signal', n, signal_db - floor_db)
    spread = signal_spread_db(out)
    if spread > SIGNAL_SPREAD_LIMIT:
        log.warning('Signal level spreads %.2f dB across FFT sizes %s', spread, n_fft_list)
    return out


def signal_spread_db(points):
    """Peak-to-peak signal level (dB) over the FFT sizes of a noise floor study"""
    return float(np.ptp([p.signal_db for p in points]))


def calibrate_noise_sigma(inst, f, p_in, n_fft, target_floor_db=-102.0, branch='ref1'):
    """
    Noise sigma (V) that puts the n_fft-point floor target_floor_db relative to the
    p_in signal. Quantization noise (LSB^2 / 12) is accounted for.
    """
    quiet = inst.replace(noise_sigma=0.0)
    record = tone_record(quiet, f, p_in, n_fft, 0, branch)
    spectrum = power_spectrum(record, n_fft, signal_bin=int(round(alias_map(f, inst.f_rep).f_norm * n_fft)))
    signal_power = 10.0 ** (spectrum.signal_db / 10.0)
    # median bin of white noise: 2 ln2 sigma^2 / n_fft
    variance = signal_power * 10.0 ** (target_floor_db / 10.0) * n_fft / (2.0 * np.log(2.0)) - 1.0 / 12.0
    if variance <= 0:
        raise ConfigError('Quantization noise alone is above a %.1f dB floor; use more ADC bits' % target_floor_db)
    sigma = float(np.sqrt(variance) * inst.branches[branch].lsb)
    log.info('Noise sigma %.4g V gives a %.1f dB floor at %d points', sigma, target_floor_db, n_fft)
    return sigma
