"""
Reading and writing of Touchstone v1 two-port (.s2p) files.
"""

import logging

import numpy as np

from ..exceptions import TouchstoneParseError, GridError
from ..network import FrequencyGrid, TwoPortSParams, Z0


log = logging.getLogger(__name__)


__all__ = ['parse_touchstone', 'write_touchstone', 'FORMATS', 'UNITS']


UNITS = {'hz': 1.0, 'khz': 1e3, 'mhz': 1e6, 'ghz': 1e9}

FORMATS = ('RI', 'MA', 'DB')

_UNIT_NAMES = {'hz': 'Hz', 'khz': 'kHz', 'mhz': 'MHz', 'ghz': 'GHz'}


def _to_complex(fmt, a, b):
    if fmt == 'ri':
        return a + 1j * b
    if fmt == 'ma':
        return a * np.exp(1j * np.radians(b))
    return 10.0 ** (a / 20.0) * np.exp(1j * np.radians(b))


def _parse_options(tokens, line_no):
    """Parse option line tokens (without '#'). Defaults are GHz S MA R 50."""
    unit, param, fmt, z0 = 'ghz', 's', 'ma', Z0
    i = 0
    while i < len(tokens):
        tok = tokens[i].lower()
        if tok in UNITS:
            unit = tok
        elif tok in ('s', 'y', 'z', 'h', 'g'):
            param = tok
        elif tok in ('ri', 'ma', 'db'):
            fmt = tok
        elif tok == 'r':
            if i + 1 >= len(tokens):
                raise TouchstoneParseError('Reference impedance value is missing', line_no)
            try:
                z0 = float(tokens[i + 1])
            except ValueError:
                raise TouchstoneParseError('Bad reference impedance %r' % tokens[i + 1], line_no)
            i += 1
        else:
            raise TouchstoneParseError('Unknown option %r' % tokens[i], line_no)
        i += 1
    if param != 's':
        raise TouchstoneParseError('Only S-parameters are supported, given %s' % param.upper(), line_no)
    if z0 != Z0:
        raise TouchstoneParseError('Only %g Ohm reference impedance is supported, given %g' % (Z0, z0), line_no)
    return unit, fmt


def parse_touchstone(text):
    """
    Parse Touchstone v1 two-port data (bytes or str).
    Comments ('!') are ignored, the option line must precede the data.
    Returns TwoPortSParams.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise TouchstoneParseError('File is not UTF-8 text', text[:e.start].count(b'\n') + 1)
    options = None
    rows, lines = [], []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('!', 1)[0].strip()
        if not line:
            continue
        if line.startswith('#'):
            if options is not None:
                raise TouchstoneParseError('Duplicate option line', line_no)
            if rows:
                raise TouchstoneParseError('Option line after data', line_no)
            options = _parse_options(line[1:].split(), line_no)
            continue
        if options is None:
            raise TouchstoneParseError('Data before the option line', line_no)
        tokens = line.split()
        if len(tokens) != 9:
            raise TouchstoneParseError('Expected 9 columns for a two-port row, found %d' % len(tokens), line_no)
        try:
            values = [float(t) for t in tokens]
        except ValueError:
            raise TouchstoneParseError('Non-numeric value in %r' % line, line_no)
        if rows and values[0] <= rows[-1][0]:
            raise TouchstoneParseError('Frequencies must be strictly increasing', line_no)
        rows.append(values)
        lines.append(line_no)
    if options is None:
        raise TouchstoneParseError('Missing option line', 0)
    if not rows:
        raise TouchstoneParseError('No data rows', 0)
    unit, fmt = options
    data = np.array(rows)
    try:
        grid = FrequencyGrid(data[:, 0] * UNITS[unit])
    except GridError as e:
        raise TouchstoneParseError(str(e), lines[0])
    # two-port column order is f S11 S21 S12 S22
    s11 = _to_complex(fmt, data[:, 1], data[:, 2])
    s21 = _to_complex(fmt, data[:, 3], data[:, 4])
    s12 = _to_complex(fmt, data[:, 5], data[:, 6])
    s22 = _to_complex(fmt, data[:, 7], data[:, 8])
    log.debug('Parsed %d Touchstone rows (%s, %s)', len(rows), unit, fmt)
    return TwoPortSParams(grid, s11, s12, s21, s22)


def _pair(fmt, s):
    if fmt == 'RI':
        return s.real, s.imag
    if fmt == 'MA':
        return abs(s), np.degrees(np.angle(s))
    mag = abs(s)
    return (20.0 * np.log10(mag) if mag > 0 else float('-inf')), np.degrees(np.angle(s))


def write_touchstone(s, fmt='RI', unit='GHz'):
    """
    Write TwoPortSParams as Touchstone v1 bytes in RI, MA or DB format.
    """
    fmt = fmt.upper()
    if fmt not in FORMATS:
        raise ValueError('Unknown Touchstone format %r' % fmt)
    if unit.lower() not in UNITS:
        raise ValueError('Unknown frequency unit %r' % unit)
    if s is None or len(s.grid) == 0:
        raise GridError('Nothing to write: empty grid')
    scale = UNITS[unit.lower()]
    out = ['! Two-port S-parameters written by pvna',
           '# %s S %s R %g' % (_UNIT_NAMES[unit.lower()], fmt, Z0)]
    for i, f in enumerate(s.grid.points):
        cols = ['%.17g' % (f / scale)]
        for name in ('s11', 's21', 's12', 's22'):
            a, b = _pair(fmt, s.param(name)[i])
            cols.append('%.17g' % a)
            cols.append('%.17g' % b)
        out.append(' '.join(cols))
    return ('\n'.join(out) + '\n').encode('utf-8')
