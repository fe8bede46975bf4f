"""
One receiver branch of the photonic digitizer: optical pulse train, quadrature-biased
Mach-Zehnder modulator (EOM) and optical intensity digitizer (OID: photodiode + ADC).

Two evaluation paths are provided:
 - sample_branch: fast analytic path through the equivalent channel response
 - simulate_dense_oracle: brute-force time-domain evaluation used to check the fast path
"""

import copy
import functools
import logging

import numpy as np
from scipy import special

from .exceptions import ModelCreationError, MemoryBoundError
from .util import PrettyPrint


log = logging.getLogger(__name__)


__all__ = [
    'PulseTrain',
    'EomModel',
    'OidModel',
    'BranchModel',
    'BranchRecord',
    'pulse_spectrum',
    'pulse_bandwidth_3db',
    'eom_response',
    'channel_response',
    'interference_factor',
    'interference_factor_spectral',
    'mzm_transmission',
    'sample_branch',
    'simulate_dense_oracle',
]

# |1 / (1 + j x)^2| = 1 / sqrt(2) at x = sqrt(sqrt(2) - 1)
_ORDER2_3DB = np.sqrt(np.sqrt(2.0) - 1.0)

# Pulse response g(t) = a t exp(1 - a t) drops below 1e-17 after a t = 45.
_PULSE_TAIL = 45.0

# Element limit of one dense-oracle work array.
DENSE_LIMIT = 20000000


class PulseTrain(PrettyPrint):
    """
    Train of Gaussian optical pulses.

    p_avg - average optical power, W
    f_rep - repetition rate, Hz
    pulse_fwhm - temporal FWHM of the intensity of one pulse, s
    """

    def __init__(self, p_avg=10e-3, f_rep=36.456e6, pulse_fwhm=500e-15):
        if p_avg <= 0 or f_rep <= 0 or pulse_fwhm <= 0:
            raise ModelCreationError('Pulse train parameters must be positive')
        if pulse_fwhm * f_rep >= 1e-3:
            raise ModelCreationError('Pulses must be much shorter than the period (fwhm * f_rep < 1e-3)')
        self.p_avg = float(p_avg)
        self.f_rep = float(f_rep)
        self.pulse_fwhm = float(pulse_fwhm)

    @property
    def period(self):
        return 1.0 / self.f_rep

    def shape(self, t):
        """Intensity shape of one pulse centered at t = 0, normalized to unit area"""
        sigma = self.pulse_fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
        return np.exp(-0.5 * (np.asarray(t) / sigma) ** 2) / (sigma * np.sqrt(2.0 * np.pi))


class EomModel(PrettyPrint):
    """
    Quadrature-biased Mach-Zehnder modulator with cables.

    v_pi - half-wave voltage, V
    bw3dB - small-signal 3 dB bandwidth of H_M, Hz
    response_order - rolloff exponent n of |H_M| = 1 / sqrt(1 + (f / bw3dB)^(2n)), real >= 1
    delay - electrical delay of the modulator input path (linear phase of H_M), s
    """
    bias = 'quadrature'

    def __init__(self, v_pi=5.4, bw3dB=20e9, response_order=1.1, delay=0.0):
        if v_pi <= 0 or bw3dB <= 0:
            raise ModelCreationError('EOM needs v_pi > 0 and bw3dB > 0')
        if response_order < 1:
            raise ModelCreationError('EOM response order must be >= 1')
        self.v_pi = float(v_pi)
        self.bw3dB = float(bw3dB)
        self.response_order = float(response_order)
        self.delay = float(delay)


class OidModel(PrettyPrint):
    """
    Optical intensity digitizer: photodiode + ADC.

    bw3dB - combined 3 dB bandwidth of H_E (second order, two real poles), Hz
    responsivity - V per W of average optical power
    adc_bits - ADC resolution
    adc_fullscale - ADC full scale, V (None: the peak optical-to-electrical level P_A * responsivity)
    noise_sigma - additive Gaussian noise per sample, V rms
    pd_nonlin - cubic coefficient: v -> v - pd_nonlin * v^3 / fullscale^2
    delay - sampling instant after the optical pulse, s (None: peak of the electrical pulse)
    """

    def __init__(self, bw3dB=300e6, responsivity=1.0, adc_bits=12, adc_fullscale=None,
                 noise_sigma=0.0, pd_nonlin=0.0, delay=None):
        if bw3dB <= 0:
            raise ModelCreationError('OID bandwidth must be positive')
        if int(adc_bits) != adc_bits or not 8 <= adc_bits <= 24:
            raise ModelCreationError('ADC bits must be an integer in [8, 24]')
        if noise_sigma < 0:
            raise ModelCreationError('Noise sigma must be >= 0')
        if responsivity <= 0:
            raise ModelCreationError('Responsivity must be positive')
        self.bw3dB = float(bw3dB)
        self.responsivity = float(responsivity)
        self.adc_bits = int(adc_bits)
        self.adc_fullscale = None if adc_fullscale is None else float(adc_fullscale)
        self.noise_sigma = float(noise_sigma)
        self.pd_nonlin = float(pd_nonlin)
        self.delay = None if delay is None else float(delay)

    @property
    def pole_rate(self):
        """Pole angular frequency a of H_E(f) = 1 / (1 + j 2 pi f / a)^2"""
        return 2.0 * np.pi * self.bw3dB / _ORDER2_3DB

    @property
    def sample_delay(self):
        """d_E: time from the optical pulse to the ADC sampling instant"""
        if self.delay is not None:
            return self.delay
        return 1.0 / self.pole_rate

    def response(self, f):
        """H_E(f), unit DC gain"""
        return 1.0 / (1.0 + 2j * np.pi * np.asarray(f, dtype=float) / self.pole_rate) ** 2

    def pulse_response(self, t):
        """Electrical pulse h_E(t) normalized to a unit peak (peak at t = 1 / a)"""
        at = self.pole_rate * np.asarray(t, dtype=float)
        out = np.zeros_like(at)
        pos = at > 0
        out[pos] = at[pos] * np.exp(1.0 - at[pos])
        return out


class BranchModel(PrettyPrint):
    """
    One receiver branch: pulse train, EOM and OID.
    """

    def __init__(self, pulses=None, eom=None, oid=None):
        self.pulses = pulses or PulseTrain()
        self.eom = eom or EomModel()
        self.oid = oid or OidModel()

    @property
    def fullscale(self):
        if self.oid.adc_fullscale is not None:
            return self.oid.adc_fullscale
        return self.pulses.p_avg * self.oid.responsivity

    @property
    def lsb(self):
        return self.fullscale / (2 ** self.oid.adc_bits - 1)

    def non_interference(self):
        """Does the OID bandwidth satisfy bw >= f_rep / 2?"""
        return self.oid.bw3dB >= self.pulses.f_rep / 2.0

    def replace(self, pulses=None, eom=None, oid=None, **oid_changes):
        """
        Copy of the branch with some parts replaced.
        Keyword arguments are applied to a copy of the OID model.
        """
        new = BranchModel(pulses or self.pulses, eom or self.eom, oid or copy.copy(self.oid))
        if oid_changes:
            new.oid = copy.copy(new.oid)
            for k, v in oid_changes.items():
                if not hasattr(new.oid, k):
                    raise ModelCreationError('OID model has no parameter %r' % k)
                setattr(new.oid, k, v)
        return new

    def with_rep_rate(self, f_rep):
        """Copy of the branch sampled at another repetition rate"""
        if f_rep == self.pulses.f_rep:
            return self
        return BranchModel(PulseTrain(self.pulses.p_avg, f_rep, self.pulses.pulse_fwhm), self.eom, self.oid)


class BranchRecord(PrettyPrint):
    """
    Result of digitizing a tone in one branch.
    codes - ADC codes, analog - voltages before quantization, clipped - ADC range exceeded
    """

    def __init__(self, codes, analog, clipped, lsb):
        self.codes = codes
        self.analog = analog
        self.clipped = bool(clipped)
        self.lsb = lsb

    def values(self):
        """ADC codes as floats"""
        return self.codes.astype(float)


def pulse_spectrum(p, f):
    """Fourier transform of the normalized Gaussian pulse shape, P_s(f); 1 at f = 0"""
    f = np.asarray(f, dtype=float)
    return np.exp(-(np.pi * p.pulse_fwhm * f) ** 2 / (4.0 * np.log(2.0)))


def pulse_bandwidth_3db(p):
    """Frequency where |P_s| = 1 / sqrt(2): sqrt(2) ln2 / (pi fwhm), ~624 GHz for 500 fs"""
    return np.sqrt(2.0) * np.log(2.0) / (np.pi * p.pulse_fwhm)


def eom_response(eom, f):
    """H_M(f): low-pass magnitude of order n with linear phase"""
    f = np.asarray(f, dtype=float)
    mag = 1.0 / np.sqrt(1.0 + (np.abs(f) / eom.bw3dB) ** (2.0 * eom.response_order))
    return mag * np.exp(-2j * np.pi * f * eom.delay)


def _lags(oid, f_rep):
    """Pulse lags j contributing to a sample: g(j T + d) is not negligible"""
    period = 1.0 / f_rep
    d = oid.sample_delay
    j_min = int(np.ceil(-d / period))
    j_max = int(np.ceil((_PULSE_TAIL / oid.pole_rate - d) / period))
    return np.arange(j_min, max(j_max, j_min) + 1)


def interference_factor(oid, f_rep, f):
    """
    R(f) = sum_j g(j T + d_E) exp(-j 2 pi f j T), T = 1 / f_rep.

    Time-domain (Poisson-dual) form of (1/T) sum_n G(f + n f_rep) exp(j 2 pi (f + n f_rep) d_E)
    with g the peak-normalized electrical pulse. Periodic in f with period f_rep, close to 1 when
    adjacent electrical pulses don't overlap.
    """
    period = 1.0 / f_rep
    f = np.mod(np.asarray(f, dtype=float), f_rep)
    lags = _lags(oid, f_rep)
    weights = oid.pulse_response(lags * period + oid.sample_delay)
    phase = -2j * np.pi * np.multiply.outer(f, lags * period)
    return np.exp(phase) @ weights


def interference_factor_spectral(oid, f_rep, f, rel_tol=1e-8):
    """
    R(f) evaluated as the frequency-domain sum over aliases of H_E,
    truncated where |H_E(f + n f_rep)| < rel_tol.
    """
    a = oid.pole_rate
    # |H_E(nu)| = 1 / (1 + (2 pi nu / a)^2)
    nu_max = a / (2.0 * np.pi) * np.sqrt(1.0 / rel_tol - 1.0)
    n_max = int(np.ceil(nu_max / f_rep))
    n = np.arange(-n_max, n_max + 1)
    d = oid.sample_delay
    h_peak = a / np.e
    out = []
    for fi in np.atleast_1d(np.asarray(f, dtype=float)):
        nu = fi + n * f_rep
        out.append(np.sum(oid.response(nu) * np.exp(2j * np.pi * nu * d)) * f_rep / h_peak)
    out = np.array(out)
    return out if np.ndim(f) else out[0]


def channel_response(b, f):
    """
    Equivalent frequency response of the sampler:
    H_A(f) = 0.5 * P_A * responsivity * H_M(f) * P_s(f) * R(f)
    """
    return (0.5 * b.pulses.p_avg * b.oid.responsivity * eom_response(b.eom, f)
            * pulse_spectrum(b.pulses, f) * interference_factor(b.oid, b.pulses.f_rep, f))


def mzm_transmission(drive_voltage, v_pi):
    """Quadrature-biased MZM intensity transmission 0.5 * [1 - sin(pi v / v_pi)]"""
    return 0.5 * (1.0 - np.sin(np.pi * np.asarray(drive_voltage, dtype=float) / v_pi))


def _harmonics(beta):
    """Odd harmonic orders h = 2n + 1 and their Jacobi-Anger weights -(-1)^n J_h(beta)"""
    orders, weights = [], []
    j1 = abs(special.jv(1, beta))
    for n in range(0, 21):
        h = 2 * n + 1
        jh = special.jv(h, beta)
        if n > 0 and abs(jh) <= 1e-17 * max(j1, 1e-300):
            break
        orders.append(h)
        weights.append(-((-1) ** n) * jh)
    return np.array(orders), np.array(weights)


@functools.lru_cache(maxsize=64)
def _warn_interference(bw, f_rep):
    """Logged once per (bandwidth, rate) pair"""
    log.warning('OID bandwidth %.4g Hz is below half the repetition rate %.4g Hz: '
                'inter-pulse interference expected', bw, f_rep)


def _finish(b, analog, rng):
    """PD nonlinearity, noise and quantization"""
    fs = b.fullscale
    if b.oid.pd_nonlin:
        analog = analog - b.oid.pd_nonlin * analog ** 3 / fs ** 2
    if rng is not None and b.oid.noise_sigma > 0:
        analog = analog + rng.normal(0.0, b.oid.noise_sigma, analog.shape)
    top = 2 ** b.oid.adc_bits - 1
    raw = np.rint(analog / fs * top)
    clipped = bool(np.any(raw < 0) or np.any(raw > top))
    if clipped:
        log.warning('ADC clipping: %d of %d samples out of range', int(np.sum((raw < 0) | (raw > top))), raw.size)
    codes = np.clip(raw, 0, top).astype(np.int64)
    return BranchRecord(codes, analog, clipped, b.lsb)


def sample_branch(b, tone_f, tone_amp, tone_phase, n_samples, rng_seed=0):
    """
    Fast analytic path: digitize tone_amp * cos(2 pi tone_f t + tone_phase) with branch b.

    Each odd harmonic of the MZM output goes through P_s and R at its own frequency and is
    evaluated at the pulse instants k T through its alias. rng_seed may be an int or a
    sequence of ints (per-point stream).
    Returns BranchRecord.
    """
    if not b.non_interference():
        _warn_interference(b.oid.bw3dB, b.pulses.f_rep)
    f_rep = b.pulses.f_rep
    scale = b.pulses.p_avg * b.oid.responsivity
    k = np.arange(int(n_samples))
    analog = np.full(k.shape, 0.5 * scale * interference_factor(b.oid, f_rep, 0.0).real)
    if tone_amp != 0:
        h_m = eom_response(b.eom, tone_f)
        beta = np.pi * abs(tone_amp * h_m) / b.eom.v_pi
        phi = tone_phase + np.angle(h_m)
        if tone_amp < 0:
            phi += np.pi
        orders, weights = _harmonics(beta)
        for h, w in zip(orders, weights):
            fh = h * tone_f
            gain = w * pulse_spectrum(b.pulses, fh) * interference_factor(b.oid, f_rep, fh)
            # alias phase increment per sample, reduced to [0, 1) turns
            turns = np.mod(fh / f_rep, 1.0)
            arg = 2.0 * np.pi * np.mod(k * turns, 1.0) + h * phi + np.angle(gain)
            analog = analog + scale * abs(gain) * np.cos(arg)
    return _finish(b, analog, np.random.default_rng(rng_seed))


def simulate_dense_oracle(b, tone_f, tone_amp, tone_phase, n_samples, oversample_factor=10):
    """
    Brute-force, noiseless time-domain digitization.

    The MZM transfer is applied pointwise to the (steady-state) modulator drive on a dense grid,
    multiplied by the pulse train and convolved with the OID pulse response; the convolution is
    read at t = k T + d_E. The dense grid only covers the support of the pulses (+/- 4 FWHM),
    where the product is non-zero.
    """
    if oversample_factor < 10:
        raise ValueError('oversample_factor must be >= 10')
    f_rep = b.pulses.f_rep
    period = 1.0 / f_rep
    timescale = b.pulses.pulse_fwhm
    if tone_f > 0:
        timescale = min(timescale, 1.0 / tone_f)
    dt = timescale / oversample_factor
    half = 4.0 * b.pulses.pulse_fwhm
    n_tau = 2 * int(np.ceil(half / dt)) + 1
    n_samples = int(n_samples)
    if n_tau * n_samples > DENSE_LIMIT:
        raise MemoryBoundError(n_tau * n_samples, DENSE_LIMIT)
    tau = (np.arange(n_tau) - n_tau // 2) * dt
    weights = b.pulses.shape(tau) * dt
    h_m = eom_response(b.eom, tone_f) if tone_f > 0 else 1.0
    amp = abs(tone_amp * h_m)
    phi = tone_phase + np.angle(h_m) + (np.pi if tone_amp < 0 else 0.0)
    d = b.oid.sample_delay
    k = np.arange(n_samples)
    analog = np.zeros(n_samples)
    for j in _lags(b.oid, f_rep):
        # pulse m = k - j seen by sample k
        t = np.add.outer((k - j) * period, tau)
        drive = amp * np.cos(2.0 * np.pi * tone_f * t + phi)
        optical = mzm_transmission(drive, b.eom.v_pi)
        g = b.oid.pulse_response(j * period + d - tau)
        analog += optical @ (weights * g)
    analog *= b.pulses.p_avg * b.oid.responsivity
    return _finish(b, analog, None)
