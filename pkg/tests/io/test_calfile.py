import numpy as np
import pytest

from pvna.calibration import ErrorTerms12, TERMS
from pvna.exceptions import CalibrationFileError
from pvna.io.calfile import read_error_terms, write_error_terms, MAGIC, VERSION


def make_terms(n=4, seed=3):
    rng = np.random.default_rng(seed)

    def terms():
        values = {name: 0.1 * (rng.normal(size=n) + 1j * rng.normal(size=n)) for name in TERMS}
        values['e_r'] = values['e_r'] + 0.9
        values['e_t'] = values['e_t'] + 0.8
        return values
    return ErrorTerms12(np.linspace(30e9, 40e9, n), terms(), terms())


def test_write_then_read_is_exact():
    e = make_terms()
    assert e == read_error_terms(write_error_terms(e))
    assert e == read_error_terms(write_error_terms(e).decode('utf-8'))


def test_file_layout():
    lines = write_error_terms(ErrorTerms12.identity([1e9])).decode('utf-8').splitlines()
    assert '%s %d' % (MAGIC, VERSION) == lines[0]
    assert lines[1].startswith('# f_hz fwd_e_d.re fwd_e_d.im')
    assert 25 == len(lines[2].split())
    assert '1000000000' == lines[2].split()[0]


def test_comments_and_blank_lines_are_skipped():
    text = write_error_terms(make_terms(2)).decode('utf-8')
    lines = text.splitlines()
    padded = '\n'.join([lines[0], '', '# calibrated yesterday', lines[2], '   ', lines[3]])
    assert make_terms(2) == read_error_terms(padded)


@pytest.mark.parametrize('text, message', [
    ('', 'empty'),
    ('PVNA-TERMS 1\n', 'bad header'),
    ('PVNA-ERRTERMS\n', 'bad header'),
    ('PVNA-ERRTERMS 2\n', 'version 2'),
    ('PVNA-ERRTERMS 1\n# nothing\n', 'no data'),
    ('PVNA-ERRTERMS 1\n1 2 3\n', 'Line 2: expected 25 columns, found 3'),
    ('PVNA-ERRTERMS 1\n' + ' '.join(['x'] * 25) + '\n', 'Line 2: non-numeric'),
])
def test_malformed_files(text, message):
    with pytest.raises(CalibrationFileError) as excinfo:
        read_error_terms(text)
    assert message in str(excinfo.value)


def test_invalid_terms_are_reported(caplog):
    # zero reflection tracking
    row = ['1e9'] + ['0'] * 24
    with pytest.raises(CalibrationFileError) as excinfo:
        read_error_terms('PVNA-ERRTERMS 1\n' + ' '.join(row) + '\n')
    assert 'Invalid error terms' in str(excinfo.value)
    assert 'Invalid error terms in file' in caplog.text


def test_unordered_frequencies_are_rejected():
    text = write_error_terms(make_terms(2)).decode('utf-8').splitlines()
    with pytest.raises(CalibrationFileError):
        read_error_terms('\n'.join([text[0], text[3], text[2]]))


def test_bytes_that_are_not_utf8_are_rejected():
    with pytest.raises(CalibrationFileError) as excinfo:
        read_error_terms(b'PVNA-ERRTERMS 1\n\xff\xfe\n')
    assert 'UTF-8' in str(excinfo.value)
