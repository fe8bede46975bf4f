"""
Error-terms file.

    PVNA-ERRTERMS 1
    # f_hz, then forward e_d e_s e_r e_l e_t e_x, then reverse, each as re im
    <25 numbers per frequency>

Lines starting with '#' are comments.
"""

import logging

import numpy as np

from ..calibration import ErrorTerms12, TERMS
from ..exceptions import CalibrationFileError, PvnaError


log = logging.getLogger(__name__)


__all__ = ['read_error_terms', 'write_error_terms', 'MAGIC', 'VERSION']

MAGIC = 'PVNA-ERRTERMS'
VERSION = 1

_COLUMNS = 1 + 2 * 2 * len(TERMS)


def write_error_terms(e):
    """Serialize ErrorTerms12 to bytes"""
    names = ['%s_%s.%s' % (d, t, part) for d in ('fwd', 'rev') for t in TERMS for part in ('re', 'im')]
    out = ['%s %d' % (MAGIC, VERSION), '# f_hz ' + ' '.join(names)]
    for i, f in enumerate(e.grid.points):
        values = [f]
        for direction in (e.forward, e.reverse):
            for name in TERMS:
                values.extend((direction[name][i].real, direction[name][i].imag))
        out.append(' '.join('%.17g' % v for v in values))
    return ('\n'.join(out) + '\n').encode('utf-8')


def read_error_terms(text):
    """Parse an error-terms file (bytes or str) into ErrorTerms12"""
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError:
            raise CalibrationFileError('Error-terms file is not UTF-8 text')
    lines = text.splitlines()
    if not lines:
        raise CalibrationFileError('Error-terms file is empty')
    header = lines[0].split()
    if len(header) != 2 or header[0] != MAGIC:
        raise CalibrationFileError('Not an error-terms file: bad header %r' % lines[0])
    if header[1] != str(VERSION):
        raise CalibrationFileError('Unsupported error-terms file version %s' % header[1])
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) != _COLUMNS:
            raise CalibrationFileError('Line %d: expected %d columns, found %d' % (line_no, _COLUMNS, len(tokens)))
        try:
            rows.append([float(t) for t in tokens])
        except ValueError:
            raise CalibrationFileError('Line %d: non-numeric value' % line_no)
    if not rows:
        raise CalibrationFileError('Error-terms file has no data')
    data = np.array(rows)
    complex_terms = data[:, 1::2] + 1j * data[:, 2::2]
    n = len(TERMS)
    forward = {name: complex_terms[:, i] for i, name in enumerate(TERMS)}
    reverse = {name: complex_terms[:, n + i] for i, name in enumerate(TERMS)}
    try:
        return ErrorTerms12(data[:, 0], forward, reverse)
    except PvnaError as e:
        log.error('Invalid error terms in file: %s', e)
        raise CalibrationFileError('Invalid error terms: %s' % e)
