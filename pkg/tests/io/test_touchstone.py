import numpy as np
import pytest

from pvna.exceptions import TouchstoneParseError, GridError
from pvna.io.touchstone import parse_touchstone, write_touchstone
from pvna.network import TwoPortSParams, ParametricBandpass, FrequencyGrid
from ..helper import random_sparams


SAMPLE = b"""! filter measured on the bench
# GHz S MA R 50
! freq  S11 S21 S12 S22
34.0  0.5 -90  0.8 10  0.8 10  0.4 45
35.0  0.2  90  0.9 -10 0.9 -10 0.1 0   ! center
"""


def test_parse_magnitude_angle():
    s = parse_touchstone(SAMPLE)
    assert [34e9, 35e9] == list(s.grid.points)
    assert -0.5j == pytest.approx(s.s11[0])
    assert 0.8 * np.exp(1j * np.radians(10)) == pytest.approx(s.s21[0])
    assert 0.1 == pytest.approx(s.s22[1])


def test_parse_column_order_is_s11_s21_s12_s22():
    s = parse_touchstone('# Hz S RI R 50\n1 1 0 2 0 3 0 4 0\n')
    assert (1, 2, 3, 4) == (s.s11[0], s.s21[0], s.s12[0], s.s22[0])


def test_parse_defaults_are_ghz_magnitude_angle():
    s = parse_touchstone('#\n1 1 180 0 0 0 0 0 0\n')
    assert 1e9 == s.grid[0]
    assert -1 == pytest.approx(s.s11[0])


def test_parse_db_format():
    s = parse_touchstone('# MHz S DB R 50\n100 -20 0 0 0 0 0 -6.0206 90\n')
    assert 100e6 == s.grid[0]
    assert 0.1 == pytest.approx(s.s11[0])
    assert 0.5j == pytest.approx(s.s22[0], abs=1e-5)


@pytest.mark.parametrize('text, line', [
    ('1 0 0 0 0 0 0 0 0\n', 1),
    ('# GHz S RI R 50\n1 0 0 0 0 0 0 0\n', 2),
    ('# GHz S RI R 50\n1 0 0 0 0 0 0 0 x\n', 2),
    ('# GHz S RI R 50\n2 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n', 3),
    ('# GHz Y RI R 50\n1 0 0 0 0 0 0 0 0\n', 1),
    ('# GHz S RI R 75\n1 0 0 0 0 0 0 0 0\n', 1),
    ('# GHz S RI R\n', 1),
    ('# GHz S XX R 50\n', 1),
    ('# GHz S RI R 50\n# GHz S RI R 50\n', 2),
    ('# GHz S RI R 50\n', 0),
    ('! only a comment\n', 0),
    ('# GHz S RI R 50\n0 0 0 0 0 0 0 0 0\n', 2),
])
def test_parse_errors_report_the_line(text, line):
    with pytest.raises(TouchstoneParseError) as excinfo:
        parse_touchstone(text)
    assert line == excinfo.value.line


@pytest.mark.parametrize('fmt, unit', [
    ('RI', 'GHz'),
    ('MA', 'Hz'),
    ('DB', 'MHz'),
])
def test_write_then_parse(fmt, unit):
    model = ParametricBandpass.from_targets(34.725e9, 4.25e9, vswr=1.5, passband_delay=900e-12)
    s = TwoPortSParams.from_model(model, np.linspace(30e9, 40e9, 11))
    back = parse_touchstone(write_touchstone(s, fmt, unit))
    assert np.allclose(s.grid.points, back.grid.points, rtol=1e-15, atol=0)
    for name in ('s11', 's12', 's21', 's22'):
        assert np.allclose(s.param(name), back.param(name), rtol=0, atol=1e-9)


@pytest.mark.parametrize('fmt', ['RI', 'MA', 'DB'])
def test_random_sparams_survive_writing_with_relative_precision(fmt):
    rng = np.random.RandomState(7)
    grid = FrequencyGrid(np.sort(rng.uniform(1e9, 40e9, 50)))
    s = TwoPortSParams.from_matrices(grid, random_sparams(rng, 50, scale=0.999))
    back = parse_touchstone(write_touchstone(s, fmt, 'Hz'))
    for name in ('s11', 's12', 's21', 's22'):
        a, b = s.param(name), back.param(name)
        assert np.all(np.abs(a - b) <= 1e-9 * np.abs(a))


def test_parse_rejects_bytes_that_are_not_utf8():
    with pytest.raises(TouchstoneParseError) as excinfo:
        parse_touchstone(b'# GHz S RI R 50\n! caf\xe9\n1 0 0 0 0 0 0 0 0\n')
    assert 2 == excinfo.value.line
    assert 'UTF-8' in str(excinfo.value)


def test_write_header_and_row_layout():
    s = TwoPortSParams([1e9], [0.1], [0.2], [0.3], [0.4])
    lines = write_touchstone(s).decode('utf-8').splitlines()
    assert '# GHz S RI R 50' == lines[1]
    assert ['1', '0.10000000000000001', '0', '0.29999999999999999', '0',
            '0.20000000000000001', '0', '0.40000000000000002', '0'] == lines[2].split()


def test_write_rejects_unknown_options():
    s = TwoPortSParams([1e9], [0], [0], [0], [0])
    with pytest.raises(ValueError):
        write_touchstone(s, 'XY')
    with pytest.raises(ValueError):
        write_touchstone(s, unit='THz')
    with pytest.raises(GridError):
        write_touchstone(None)
