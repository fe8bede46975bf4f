"""
Exceptions relevant for the PVNA workflow.
"""


class PvnaError(Exception):
    """Base for every error raised by pvna"""
    pass


class ModelCreationError(PvnaError):
    """Error during model creation occurred."""
    pass


class GridError(PvnaError):
    """Frequency grid is invalid or a frequency is outside of it."""
    pass


class TouchstoneParseError(PvnaError):
    """Touchstone data can't be parsed. Carries the offending line number."""
    def __init__(self, message, line):
        self.line = line
        super().__init__('Line %d: %s' % (line, message))


class AliasBoundaryError(PvnaError):
    """Frequency lies on a Nyquist zone boundary and must be detuned."""
    def __init__(self, f, f_rep):
        self.f = f
        self.f_rep = f_rep
        super().__init__('Frequency %.6f Hz is on a zone boundary of rate %.6f Hz' % (f, f_rep))


class EstimationError(PvnaError):
    """Tone estimation called outside of its domain."""
    pass


class SpectrumError(PvnaError):
    """Spectrum can't be computed for the given record."""
    pass


class MemoryBoundError(PvnaError):
    """Dense simulation grid is too large."""
    def __init__(self, points, limit):
        super().__init__(
            'Dense grid needs %d points, limit is %d. Use smaller n_samples or oversample_factor' % (points, limit)
        )


class InvalidReferenceError(PvnaError):
    """Reference branch phasor is too weak to form a ratio."""
    pass


class ConditioningError(PvnaError):
    """Calibration standards are degenerate."""
    def __init__(self, message, frequency=None):
        self.frequency = frequency
        if frequency is not None:
            message = '%s (at %.6f Hz)' % (message, frequency)
        super().__init__(message)


class GridMismatchError(PvnaError):
    """Error terms and raw data are not defined on the same grid."""
    pass


class SingularCorrectionError(PvnaError):
    """Correction denominator vanishes."""
    def __init__(self, frequency):
        self.frequency = frequency
        super().__init__('Singular correction at %.6f Hz' % frequency)


class BandEdgeError(PvnaError):
    """No -3 dB crossing found inside the grid."""
    pass


class CompressionNotFoundError(PvnaError):
    """0.1 dB compression is not reached inside the swept power range."""
    pass


class ConfigError(PvnaError):
    """Configuration or kit file is invalid."""
    pass


class CalibrationFileError(PvnaError):
    """Error-terms file is malformed or has an unsupported version."""
    pass
