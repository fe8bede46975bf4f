"""
Utility functions and classes for pvna.
"""

import jsonpickle
import numpy as np


class JsonSerializer:
    """
    Mixin for dumping object to JSON
    """
    def to_json(self, sort=False):
        """
        Get JSON representation of an object
        """
        jsonpickle.set_encoder_options('json', sort_keys=sort, indent=2)
        return jsonpickle.encode(self._data(), unpicklable=False)

    def _data(self):
        """
        Get the object data. Is useful for overriding in custom classes
        """
        return vars(self)


class PrettyPrint:
    """
    Allows to log objects with all the fields
    """
    def __str__(self):
        return "%s <Object ID %s>: %s" % (self.__class__.__name__, id(self), vars(self))


def to_db(value):
    """Magnitude of a (complex) amplitude in dB. Zero maps to a very small number, not -inf."""
    mag = np.abs(value)
    return 20.0 * np.log10(np.maximum(mag, np.finfo(float).tiny))


def from_db(value_db):
    """Linear amplitude from dB"""
    return 10.0 ** (value_db / 20.0)


def dbm_to_amplitude(p_dbm, z0=50.0):
    """Peak voltage of a sine delivering p_dbm into z0"""
    return (2.0 * z0 * 1e-3 * 10.0 ** (p_dbm / 10.0)) ** 0.5


def amplitude_to_dbm(v, z0=50.0):
    """Power in dBm of a sine with peak voltage v into z0"""
    return 10.0 * np.log10(np.asarray(v) ** 2 / (2.0 * z0) / 1e-3)
