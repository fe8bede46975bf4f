"""
Frequency grids, two-port S-parameters and models of objects under test (OUT).
"""

import logging
from abc import ABCMeta, abstractmethod

import numpy as np

from .exceptions import GridError, ModelCreationError
from .util import PrettyPrint


log = logging.getLogger(__name__)


__all__ = [
    'FrequencyGrid',
    'TwoPortSParams',
    'OutModel',
    'IdealThru',
    'IdealLoad',
    'IdealReflect',
    'DelayLine',
    'OffsetReflect',
    'TouchstoneTable',
    'ParametricBandpass',
    'out_response',
    'return_loss_from_vswr',
]

# Reference impedance of every network in pvna.
Z0 = 50.0


class FrequencyGrid(PrettyPrint):
    """
    Strictly increasing list of positive frequencies in Hz.
    """

    def __init__(self, points):
        points = np.array(points, dtype=float).ravel()
        if points.size == 0:
            raise GridError('Frequency grid is empty')
        if not np.all(np.isfinite(points)) or np.any(points <= 0):
            raise GridError('Frequency grid points must be finite and positive')
        if np.any(np.diff(points) <= 0):
            raise GridError('Frequency grid must be strictly increasing')
        points.setflags(write=False)
        self.points = points

    @classmethod
    def linear(cls, f_start, f_stop, n_points):
        """Evenly spaced grid including both ends"""
        return cls(np.linspace(f_start, f_stop, n_points))

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, item):
        return self.points[item]

    def __eq__(self, other):
        if not isinstance(other, FrequencyGrid):
            return NotImplemented
        return np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())


class TwoPortSParams(PrettyPrint):
    """
    Complex 2x2 scattering matrix per grid point.
    """

    def __init__(self, grid, s11, s12, s21, s22):
        if not isinstance(grid, FrequencyGrid):
            grid = FrequencyGrid(grid)
        arrays = []
        for name, values in (('s11', s11), ('s12', s12), ('s21', s21), ('s22', s22)):
            values = np.array(values, dtype=complex).ravel()
            if values.size != len(grid):
                raise GridError('%s has %d points, grid has %d' % (name, values.size, len(grid)))
            if not np.all(np.isfinite(values)):
                raise GridError('%s contains non-finite values' % name)
            values.setflags(write=False)
            arrays.append(values)
        self.grid = grid
        self.s11, self.s12, self.s21, self.s22 = arrays

    @classmethod
    def from_matrices(cls, grid, matrices):
        """Build from an array of shape (n, 2, 2)"""
        m = np.asarray(matrices, dtype=complex)
        return cls(grid, m[:, 0, 0], m[:, 0, 1], m[:, 1, 0], m[:, 1, 1])

    @classmethod
    def from_model(cls, model, grid):
        """Sample an OutModel on a grid"""
        if not isinstance(grid, FrequencyGrid):
            grid = FrequencyGrid(grid)
        return cls.from_matrices(grid, model.response(grid.points))

    def matrices(self):
        """Array of shape (n, 2, 2)"""
        m = np.empty((len(self.grid), 2, 2), dtype=complex)
        m[:, 0, 0], m[:, 0, 1], m[:, 1, 0], m[:, 1, 1] = self.s11, self.s12, self.s21, self.s22
        return m

    def param(self, name):
        """Get one of 's11', 's12', 's21', 's22' by name"""
        if name not in ('s11', 's12', 's21', 's22'):
            raise KeyError(name)
        return getattr(self, name)

    def __len__(self):
        return len(self.grid)


class OutModel(PrettyPrint, metaclass=ABCMeta):
    """
    Basic model of an object under test.
    """
    passive = True

    @abstractmethod
    def response(self, f):
        """
        S-matrix at frequency f (scalar or array, Hz).
        Returns an array of shape (2, 2) for scalar f, (n, 2, 2) otherwise.
        """
        pass

    @staticmethod
    def _assemble(f, s11, s12, s21, s22):
        f = np.asarray(f, dtype=float)
        shape = f.shape
        m = np.empty(shape + (2, 2), dtype=complex)
        m[..., 0, 0] = s11
        m[..., 0, 1] = s12
        m[..., 1, 0] = s21
        m[..., 1, 1] = s22
        return m


class DelayLine(OutModel):
    """
    Matched line with a pure delay and a flat loss.
    For example: DelayLine(900e-12)
    """
    def __init__(self, delay=0.0, loss_db=0.0):
        if delay < 0 or loss_db < 0:
            raise ModelCreationError('Delay line needs delay >= 0 and loss_db >= 0')
        self.delay = float(delay)
        self.loss_db = float(loss_db)

    def response(self, f):
        f = np.asarray(f, dtype=float)
        t = 10.0 ** (-self.loss_db / 20.0) * np.exp(-2j * np.pi * f * self.delay)
        return self._assemble(f, 0.0, t, t, 0.0)


class IdealThru(DelayLine):
    """Lossless zero-length through"""
    def __init__(self):
        super().__init__(0.0, 0.0)


class IdealReflect(OutModel):
    """
    The same one-port reflection on both ports, no transmission.
    Gamma = 1 is an open, Gamma = -1 is a short.
    """
    def __init__(self, gamma):
        gamma = complex(gamma)
        if abs(gamma) > 1.0:
            raise ModelCreationError('|Gamma| must not exceed 1, given %r' % gamma)
        self.gamma = gamma

    def response(self, f):
        return self._assemble(f, self.gamma, 0.0, 0.0, self.gamma)


class IdealLoad(IdealReflect):
    """Matched termination on both ports"""
    def __init__(self):
        super().__init__(0.0)


class OffsetReflect(OutModel):
    """
    Reflection standard with a polynomial reactance and an offset delay.
    kind='open' uses capacitance C(f) = c0 + c1*f + c2*f^2 + c3*f^3 (F),
    kind='short' uses inductance L(f) = l0 + l1*f + l2*f^2 + l3*f^3 (H).
    """
    def __init__(self, kind, coefficients=(0.0,), delay=0.0, loss_db=0.0):
        if kind not in ('open', 'short'):
            raise ModelCreationError('Unknown reflect standard kind %r' % kind)
        self.kind = kind
        self.coefficients = tuple(float(c) for c in coefficients) or (0.0,)
        self.delay = float(delay)
        self.loss_db = float(loss_db)

    def gamma(self, f):
        """One-port reflection coefficient at f"""
        f = np.asarray(f, dtype=float)
        poly = np.polynomial.polynomial.polyval(f, self.coefficients)
        w = 2.0 * np.pi * f
        if self.kind == 'open':
            y = 1j * w * poly
            gamma = (1.0 - y * Z0) / (1.0 + y * Z0)
        else:
            z = 1j * w * poly
            gamma = (z - Z0) / (z + Z0)
        # two-way trip through the offset line
        offset = 10.0 ** (-2.0 * self.loss_db / 20.0) * np.exp(-4j * np.pi * f * self.delay)
        return gamma * offset

    def response(self, f):
        g = self.gamma(f)
        return self._assemble(f, g, 0.0, 0.0, g)


class TouchstoneTable(OutModel):
    """
    Tabulated S-parameters, linearly interpolated (real and imaginary parts) inside the table span.
    """
    def __init__(self, sparams):
        self.sparams = sparams
        self.passive = bool(all(np.all(np.abs(sparams.param(n)) <= 1.0 + 1e-12)
                                for n in ('s11', 's12', 's21', 's22')))

    def response(self, f):
        f = np.asarray(f, dtype=float)
        pts = self.sparams.grid.points
        if np.any(f < pts[0]) or np.any(f > pts[-1]):
            raise GridError('Frequency outside of the tabulated span [%g, %g] Hz' % (pts[0], pts[-1]))
        values = []
        for name in ('s11', 's12', 's21', 's22'):
            s = self.sparams.param(name)
            values.append(np.interp(f, pts, s.real) + 1j * np.interp(f, pts, s.imag))
        return self._assemble(f, *values)


def return_loss_from_vswr(vswr):
    """Return loss (dB, positive) of a port with the given VSWR"""
    if vswr < 1:
        raise ModelCreationError('VSWR must be >= 1')
    gamma = (vswr - 1.0) / (vswr + 1.0)
    if gamma == 0:
        return float('inf')
    return -20.0 * np.log10(gamma)


class ParametricBandpass(OutModel):
    """
    Reciprocal, symmetric bandpass filter built on a Butterworth low-pass prototype.

    The prototype variable is the arithmetic detuning x = 2 (f - f0) / bw3dB, so the
    transmission is exactly 3.01 dB down at f0 +/- bw3dB / 2. The phase is that of the
    prototype plus a linear term for group_delay_extra. |s11| equals the configured
    return loss at f0 and tends to 1 out of band, in quadrature with s21 so that
    |s11 +/- s21| <= 1.
    """

    def __init__(self, f0, bw3dB, order=4, insertion_loss=1.0, rejection_floor=60.0,
                 return_loss_at_f0=13.979400086720377, group_delay_extra=0.0):
        if not 0 < bw3dB < f0:
            raise ModelCreationError('Bandpass needs 0 < bw3dB < f0')
        if int(order) != order or order < 1:
            raise ModelCreationError('Bandpass order must be an integer >= 1')
        if insertion_loss < 0:
            raise ModelCreationError('Insertion loss must be >= 0 dB')
        if group_delay_extra < 0:
            raise ModelCreationError('group_delay_extra must be >= 0')
        self.f0 = float(f0)
        self.bw3dB = float(bw3dB)
        self.order = int(order)
        self.insertion_loss = float(insertion_loss)
        self.rejection_floor = float(abs(rejection_floor))
        self.return_loss_at_f0 = float(return_loss_at_f0)
        self.group_delay_extra = float(group_delay_extra)
        g = 10.0 ** (-self.insertion_loss / 20.0)
        rho = 10.0 ** (-self.return_loss_at_f0 / 20.0)
        if g ** 2 > 1.0 - rho ** 2 + 1e-15:
            raise ModelCreationError(
                'Insertion loss %.3f dB and return loss %.3f dB are not passive together'
                % (self.insertion_loss, self.return_loss_at_f0)
            )

    @classmethod
    def from_targets(cls, f0, bw3dB, vswr=1.5, passband_delay=None, **kwargs):
        """
        Create a bandpass whose center VSWR and mean passband group delay match the targets.
        """
        model = cls(f0, bw3dB, return_loss_at_f0=return_loss_from_vswr(vswr), **kwargs)
        if passband_delay is not None:
            extra = passband_delay - model.passband_delay()
            if extra < 0:
                raise ModelCreationError(
                    'Target delay %.3e s is below the prototype delay %.3e s' % (passband_delay, passband_delay - extra)
                )
            model.group_delay_extra = extra
        return model

    def prototype(self, f):
        """Complex Butterworth low-pass prototype evaluated at the detuning of f"""
        x = 2.0 * (np.asarray(f, dtype=float) - self.f0) / self.bw3dB
        k = np.arange(1, self.order + 1)
        poles = np.exp(1j * np.pi * (2 * k + self.order - 1) / (2 * self.order))
        s = 1j * np.asarray(x)[..., np.newaxis]
        return np.prod(-poles / (s - poles), axis=-1)

    def response(self, f):
        f = np.asarray(f, dtype=float)
        h = self.prototype(f)
        g = 10.0 ** (-self.insertion_loss / 20.0)
        r = 10.0 ** (-self.rejection_floor / 20.0)
        rho = 10.0 ** (-self.return_loss_at_f0 / 20.0)
        h2 = np.abs(h) ** 2
        t_mag = g * np.sqrt((h2 + r ** 2) / (1.0 + r ** 2))
        phase = np.angle(h) - 2.0 * np.pi * f * self.group_delay_extra
        s21 = t_mag * np.exp(1j * phase)
        s11_mag = np.sqrt(np.clip(1.0 - (t_mag / g) ** 2 * (1.0 - rho ** 2), 0.0, 1.0))
        s11 = s11_mag * np.exp(1j * (phase + np.pi / 2.0))
        return self._assemble(f, s11, s21, s21, s11)

    def passband_delay(self, n_points=4001):
        """Mean group delay over f0 +/- bw3dB / 2, evaluated on a dense grid"""
        f = np.linspace(self.f0 - self.bw3dB / 2.0, self.f0 + self.bw3dB / 2.0, n_points)
        phase = np.unwrap(np.angle(self.response(f)[:, 1, 0]))
        tau = -np.gradient(phase, 2.0 * np.pi * f)
        return float(np.mean(tau))


def out_response(model, f):
    """S-matrix of an OUT model at frequency f > 0"""
    if np.any(np.asarray(f) <= 0):
        raise GridError('Frequency must be positive')
    return model.response(f)
