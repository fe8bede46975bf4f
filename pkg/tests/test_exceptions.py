import pytest

from pvna.exceptions import (PvnaError, TouchstoneParseError, AliasBoundaryError, MemoryBoundError,
                             ConditioningError, SingularCorrectionError, ConfigError, CalibrationFileError)


@pytest.mark.parametrize('line, message', [
    (1, 'Line 1: bad option line'),
    (27, 'Line 27: bad option line'),
])
def test_touchstone_parse_error_message(line, message):
    ex = TouchstoneParseError('bad option line', line)
    assert message == str(ex)
    assert line == ex.line


def test_alias_boundary_error_message():
    ex = AliasBoundaryError(36.456e6, 36.456e6)
    assert 'Frequency 36456000.000000 Hz is on a zone boundary of rate 36456000.000000 Hz' == str(ex)
    assert 36.456e6 == ex.f


def test_memory_bound_error_message():
    ex = MemoryBoundError(30, 20)
    assert str(ex).startswith('Dense grid needs 30 points, limit is 20')


@pytest.mark.parametrize('frequency, message', [
    (None, 'Standards coincide'),
    (35e9, 'Standards coincide (at 35000000000.000000 Hz)'),
])
def test_conditioning_error_message(frequency, message):
    ex = ConditioningError('Standards coincide', frequency)
    assert message == str(ex)
    assert frequency == ex.frequency


def test_singular_correction_error_message():
    assert 'Singular correction at 1.500000 Hz' == str(SingularCorrectionError(1.5))


@pytest.mark.parametrize('cls', [
    TouchstoneParseError, AliasBoundaryError, MemoryBoundError, ConditioningError,
    SingularCorrectionError, ConfigError, CalibrationFileError,
])
def test_all_errors_are_pvna_errors(cls):
    assert issubclass(cls, PvnaError)
