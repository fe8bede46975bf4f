"""
Undersampling DSP: alias mapping, phase-reversal correction, single-tone estimation and spectra.
"""

import logging

import numpy as np
from scipy import fft, signal

from .exceptions import AliasBoundaryError, EstimationError, SpectrumError
from .util import PrettyPrint, JsonSerializer


log = logging.getLogger(__name__)


__all__ = [
    'AliasResult',
    'Phasor',
    'SpectrumEstimate',
    'alias_map',
    'remove_dc',
    'estimate_tone',
    'correct_phase',
    'power_spectrum',
    'dynamic_range',
    'wrap_phase',
]

# Relative distance to a zone boundary that alias_map refuses to resolve.
BOUNDARY_TOLERANCE = 1e-6


def wrap_phase(phase):
    """Wrap a phase (rad) into (-pi, pi]"""
    return np.pi - np.mod(np.pi - np.asarray(phase, dtype=float), 2.0 * np.pi)


class AliasResult(PrettyPrint):
    """
    Alias of an undersampled tone.
    f_alias - Hz in [0, f_rep / 2], zone - Nyquist zone index (1-based), flipped - phase reversal
    """

    def __init__(self, f_alias, zone, flipped, f_rep):
        self.f_alias = f_alias
        self.zone = zone
        self.flipped = flipped
        self.f_rep = f_rep

    @property
    def f_norm(self):
        """Alias frequency normalized to the sampling rate"""
        return self.f_alias / self.f_rep


class Phasor(JsonSerializer, PrettyPrint):
    """
    Magnitude and phase (rad, in (-pi, pi]) of a single tone.
    """

    def __init__(self, magnitude, phase):
        if magnitude < 0:
            raise EstimationError('Phasor magnitude must be >= 0')
        self.magnitude = float(magnitude)
        self.phase = float(wrap_phase(phase))

    @classmethod
    def from_complex(cls, value):
        return cls(abs(value), np.angle(value))

    @property
    def value(self):
        """Complex amplitude"""
        return self.magnitude * np.exp(1j * self.phase)

    def __eq__(self, other):
        if not isinstance(other, Phasor):
            return NotImplemented
        return self.magnitude == other.magnitude and self.phase == other.phase

    def __hash__(self):
        return hash((self.magnitude, self.phase))


class SpectrumEstimate(PrettyPrint):
    """
    Windowed periodogram of a sample record.

    n_fft - number of points, bin_hz - bin spacing, power_db - power per bin (dB re 1 unit^2),
    signal_bin - index of the tone, signal_db - tone power summed over its bin +/- guard,
    noise_floor_db - median bin power outside the tone and DC guards
    """

    def __init__(self, n_fft, bin_hz, power_db, signal_bin, signal_db, noise_floor_db):
        self.n_fft = n_fft
        self.bin_hz = bin_hz
        self.power_db = power_db
        self.signal_bin = signal_bin
        self.signal_db = signal_db
        self.noise_floor_db = noise_floor_db

    @property
    def floor_relative_db(self):
        """Noise floor relative to the signal (negative, dBc)"""
        return self.noise_floor_db - self.signal_db

    def frequencies(self):
        return np.arange(self.power_db.size) * self.bin_hz


def alias_map(f, f_rep):
    """
    Fold tone frequency f into the first Nyquist zone of sampling rate f_rep.
    Even zones fold with phase reversal.
    """
    if f <= 0 or f_rep <= 0:
        raise ValueError('Frequencies must be positive')
    half = f_rep / 2.0
    nearest = np.rint(f / half)
    if abs(f - nearest * half) < BOUNDARY_TOLERANCE * f_rep:
        raise AliasBoundaryError(f, f_rep)
    zone = int(np.floor(f / half)) + 1
    if zone % 2:
        return AliasResult(f - (zone - 1) * half, zone, False, f_rep)
    return AliasResult(zone * half - f, zone, True, f_rep)


def remove_dc(samples):
    """Subtract the mean of a record"""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise EstimationError('Empty sample record')
    return samples - np.mean(samples)


def estimate_tone(samples, f_norm):
    """
    Least-squares fit of a cos(2 pi f_norm k) + b sin(2 pi f_norm k) + c at a known frequency.
    Returns Phasor(sqrt(a^2 + b^2), atan2(-b, a)).
    """
    if not 0 < f_norm < 0.5:
        raise EstimationError('Normalized frequency must be in (0, 0.5), given %r' % f_norm)
    samples = np.asarray(samples, dtype=float)
    if samples.size < 8:
        raise EstimationError('At least 8 samples are needed, given %d' % samples.size)
    k = np.arange(samples.size)
    arg = 2.0 * np.pi * np.mod(k * f_norm, 1.0)
    design = np.column_stack((np.cos(arg), np.sin(arg), np.ones_like(arg)))
    (a, b, _), *_ = np.linalg.lstsq(design, samples, rcond=None)
    return Phasor(np.hypot(a, b), np.arctan2(-b, a))


def correct_phase(p, a):
    """Undo the phase reversal of even Nyquist zones"""
    if a.flipped:
        return Phasor(p.magnitude, -p.phase)
    return p


def power_spectrum(samples, n_fft, f_rep=1.0, signal_bin=None, guard=3):
    """
    Blackman-Harris windowed periodogram of the first n_fft samples (mean removed).

    A tone of amplitude A reads A^2 / 2 as signal power; white noise of variance s^2
    reads 2 s^2 / n_fft per bin on average. The signal bin is the strongest one outside
    the DC guard unless given.
    """
    samples = np.asarray(samples, dtype=float)
    n_fft = int(n_fft)
    if n_fft < 16:
        raise SpectrumError('FFT needs at least 16 points, given %d' % n_fft)
    if n_fft > samples.size:
        raise SpectrumError('FFT length %d exceeds the record length %d' % (n_fft, samples.size))
    record = remove_dc(samples[:n_fft])
    window = signal.get_window('blackmanharris', n_fft)
    spectrum = fft.rfft(record * window)
    power = 2.0 * np.abs(spectrum) ** 2 / (n_fft * np.sum(window ** 2))
    tiny = np.finfo(float).tiny
    power_db = 10.0 * np.log10(np.maximum(power, tiny))

    if signal_bin is None:
        search = power.copy()
        search[:guard + 1] = 0.0
        signal_bin = int(np.argmax(search))
    lo, hi = max(signal_bin - guard, 0), min(signal_bin + guard + 1, power.size)
    signal_power = np.sum(power[lo:hi])

    mask = np.ones(power.size, dtype=bool)
    mask[lo:hi] = False
    mask[:guard + 1] = False
    if not np.any(mask):
        raise SpectrumError('No bins left for the noise floor')
    floor = np.median(power[mask])
    log.debug('Spectrum of %d points: signal bin %d, floor %.2f dB', n_fft, signal_bin, 10 * np.log10(max(floor, tiny)))
    return SpectrumEstimate(n_fft, f_rep / n_fft, power_db, signal_bin,
                            10.0 * np.log10(max(signal_power, tiny)), 10.0 * np.log10(max(floor, tiny)))


def dynamic_range(signal_db, floor_db):
    """Signal-to-floor distance in dB"""
    if signal_db < floor_db:
        raise SpectrumError('Signal %.2f dB is below the floor %.2f dB' % (signal_db, floor_db))
    return signal_db - floor_db
