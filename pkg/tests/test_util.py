import json

import numpy as np
import pytest

from pvna.util import JsonSerializer, PrettyPrint, to_db, from_db, dbm_to_amplitude, amplitude_to_dbm


class AB(JsonSerializer):
    def __init__(self, b):
        self.b = b


class CD(JsonSerializer):
    def _data(self):
        return {'x': 1}


class EF(PrettyPrint):
    def __init__(self):
        self.v = 2


def test_json_serializer_dumps_object_fields():
    assert {'b': 5} == json.loads(AB(5).to_json())
    assert {'x': 1} == json.loads(CD().to_json())


def test_json_serializer_is_write_only():
    assert not hasattr(JsonSerializer, 'from_json')


def test_json_serializer_sorts_keys():
    class Many(JsonSerializer):
        def _data(self):
            return {'z': 1, 'a': 2}
    js = Many().to_json(sort=True)
    assert js.index('"a"') < js.index('"z"')


def test_pretty_print():
    assert str(EF()).startswith('EF <Object ID ')
    assert str(EF()).endswith("{'v': 2}")


@pytest.mark.parametrize('value, expect', [
    (1.0, 0.0),
    (0.1, -20.0),
    (10j, 20.0),
])
def test_to_db(value, expect):
    assert expect == pytest.approx(to_db(value))


def test_to_db_of_zero_is_finite():
    assert np.isfinite(to_db(0.0))


def test_from_db():
    assert 0.5 == pytest.approx(from_db(-6.0206), rel=1e-4)
    assert 0.0 == from_db(float('-inf'))


@pytest.mark.parametrize('p_dbm, amplitude', [
    (10.0, 1.0),
    (0.0, 0.31622776601683794),
    (-10.0, 0.1),
])
def test_dbm_amplitude_50_ohm(p_dbm, amplitude):
    assert amplitude == pytest.approx(dbm_to_amplitude(p_dbm))
    assert p_dbm == pytest.approx(amplitude_to_dbm(amplitude))
