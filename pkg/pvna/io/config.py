"""
Instrument configuration and standards-kit files.

Both are INI files. Values carry units parsed by pint ('36.456 MHz', '500 fs', '5.4 V'),
levels are written in dB or dBm ('-30 dB', '2.8 dBm') and reflections either as a complex
number ('0.1-0.05j') or as magnitude and angle ('-20 dB @ 45 deg').
"""

import configparser
import copy
import logging
import os
import re

import numpy as np
import pint

from ..calibration import StandardsKit
from ..exceptions import ConfigError, PvnaError
from ..network import (IdealThru, IdealLoad, IdealReflect, DelayLine, OffsetReflect,
                       TouchstoneTable, ParametricBandpass)
from ..photonic import PulseTrain, EomModel, OidModel, BranchModel
from ..presets import DEFAULTS, FIGURES
from ..sweep import SweepConfig
from ..testset import BRANCHES, CableModel, TestSetModel, InstrumentModel
from ..util import JsonSerializer, PrettyPrint, from_db
from .touchstone import parse_touchstone


log = logging.getLogger(__name__)


__all__ = [
    'RunConfig',
    'load_config',
    'load_kit',
    'parse_quantity',
    'parse_level',
    'parse_reflection',
]

ureg = pint.UnitRegistry()

_LEVEL = re.compile(r'^\s*([-+]?(?:inf|\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?))\s*(dBm|dB)?\s*$')
_POLAR = re.compile(r'^(.+?)@(.+)$')

OUT_MODELS = ('thru', 'load', 'open', 'short', 'delay', 'bandpass', 'touchstone')


def parse_quantity(text, unit):
    """Value of a unit-suffixed quantity in the given unit; plain numbers are taken as that unit"""
    try:
        q = ureg.Quantity(text.strip())
        if q.unitless:
            return float(q.magnitude)
        return float(q.to(unit or 'dimensionless').magnitude)
    except (pint.errors.PintError, ValueError, TypeError, AttributeError) as e:
        raise ConfigError('Bad value %r for unit %s: %s' % (text, unit or 'dimensionless', e))


def parse_level(text):
    """dB or dBm value as a float"""
    m = _LEVEL.match(text)
    if not m:
        raise ConfigError('Bad level %r, expected for example "-30 dB"' % text)
    return float(m.group(1))


def parse_reflection(text):
    """Complex reflection from 'a+bj' or 'level dB @ angle deg'"""
    m = _POLAR.match(text)
    if m:
        magnitude = from_db(parse_level(m.group(1)))
        angle = parse_quantity(m.group(2), 'radian')
        return complex(magnitude * np.exp(1j * angle))
    try:
        return complex(text.strip().replace(' ', ''))
    except ValueError:
        raise ConfigError('Bad reflection %r' % text)


def _optional(text, unit):
    return None if text.strip().lower() == 'auto' else parse_quantity(text, unit)


def _integer(text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError('Bad integer %r' % text)


# key -> parser of every known key, per section
_SCHEMA = {
    'run': {
        'seed': _integer,
    },
    'instrument': {
        'p_avg': lambda v: parse_quantity(v, 'W'),
        'f_rep': lambda v: parse_quantity(v, 'Hz'),
        'pulse_fwhm': lambda v: parse_quantity(v, 's'),
        'v_pi': lambda v: parse_quantity(v, 'V'),
        'eom_bw': lambda v: parse_quantity(v, 'Hz'),
        'eom_order': lambda v: parse_quantity(v, ''),
        'oid_bw': lambda v: parse_quantity(v, 'Hz'),
        'responsivity': lambda v: parse_quantity(v, 'V/W'),
        'adc_bits': _integer,
        'adc_fullscale': lambda v: _optional(v, 'V'),
        'noise_sigma': lambda v: parse_quantity(v, 'V'),
        'pd_nonlin': lambda v: parse_quantity(v, ''),
        'oid_delay': lambda v: _optional(v, 's'),
        'source_power': parse_level,
    },
    'testset': {
        'directivity': parse_level,
        'crosstalk': parse_level,
        'source_match': parse_reflection,
        'load_match': parse_reflection,
        'splitter_imbalance': parse_level,
        'switch_isolation': parse_level,
        'mismatch': str.strip,
    },
    'sweep': {
        'f_start': lambda v: parse_quantity(v, 'Hz'),
        'f_stop': lambda v: parse_quantity(v, 'Hz'),
        'n_points': _integer,
        'samples_per_point': _integer,
        'detune_guard': lambda v: parse_quantity(v, ''),
        'workers': _integer,
    },
    'out': {
        'model': str.strip,
        'f0': lambda v: parse_quantity(v, 'Hz'),
        'bw3dB': lambda v: parse_quantity(v, 'Hz'),
        'order': _integer,
        'insertion_loss': parse_level,
        'rejection_floor': parse_level,
        'vswr': lambda v: parse_quantity(v, ''),
        'passband_delay': lambda v: parse_quantity(v, 's'),
        'delay': lambda v: parse_quantity(v, 's'),
        'loss': parse_level,
        'file': str.strip,
    },
}
for _name in BRANCHES:
    _SCHEMA['instrument']['eom_delay_' + _name] = lambda v: parse_quantity(v, 's')
    _SCHEMA['testset']['tracking_delay_' + _name] = lambda v: parse_quantity(v, 's')
    _SCHEMA['testset']['tracking_loss_' + _name] = parse_level
for _port in (1, 2):
    for _key in ('directivity', 'crosstalk'):
        _SCHEMA['testset']['%s_%d' % (_key, _port)] = parse_level
    for _key in ('source_match', 'load_match'):
        _SCHEMA['testset']['%s_%d' % (_key, _port)] = parse_reflection


def _new_parser():
    # keys are case sensitive ('bw3dB')
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=('#', ';'))
    parser.optionxform = str
    return parser


class RunConfig(JsonSerializer, PrettyPrint):
    """
    Parsed configuration: one dict of values per section plus the raw text of every key.
    Missing keys take their defaults.
    """

    def __init__(self, sections=None, base_dir='.'):
        self.base_dir = base_dir
        self.raw = copy.deepcopy(DEFAULTS)
        for section, values in (sections or {}).items():
            self.update(section, values)
        self.values = self._parse()

    def update(self, section, values):
        if section not in _SCHEMA:
            raise ConfigError('Unknown section [%s]' % section)
        for key, value in values.items():
            if key not in _SCHEMA[section]:
                raise ConfigError('Unknown key %r in section [%s]' % (key, section))
            self.raw.setdefault(section, {})[key] = value

    def _parse(self):
        values = {}
        for section, keys in self.raw.items():
            values[section] = {key: _SCHEMA[section][key](text) for key, text in keys.items()}
        if values['out']['model'] not in OUT_MODELS:
            raise ConfigError('Unknown OUT model %r, use one of %s' % (values['out']['model'], ', '.join(OUT_MODELS)))
        return values

    @classmethod
    def from_string(cls, text, base_dir='.', figure=None):
        parser = _new_parser()
        try:
            parser.read_string(text)
        except configparser.Error as e:
            raise ConfigError('Malformed configuration: %s' % e)
        sections = {}
        if figure is not None:
            sections = copy.deepcopy(FIGURES[figure])
        for name in parser.sections():
            sections.setdefault(name, {}).update(dict(parser[name]))
        return cls(sections, base_dir)

    def set(self, section, key, text):
        """Change one key and re-parse"""
        self.update(section, {key: text})
        self.values = self._parse()

    @property
    def seed(self):
        return self.values['run']['seed']

    def _data(self):
        return {'base_dir': self.base_dir, 'config': self.raw}

    def build_instrument(self):
        """InstrumentModel from [instrument] and [testset]"""
        v, t = self.values['instrument'], self.values['testset']
        try:
            pulses = PulseTrain(v['p_avg'], v['f_rep'], v['pulse_fwhm'])
            oid = OidModel(v['oid_bw'], v['responsivity'], v['adc_bits'], v['adc_fullscale'],
                           v['noise_sigma'], v['pd_nonlin'], v['oid_delay'])
            branches = {
                name: BranchModel(pulses, EomModel(v['v_pi'], v['eom_bw'], v['eom_order'], v.get('eom_delay_' + name, 0.0)), oid)
                for name in BRANCHES
            }
            tracking = {
                name: CableModel(t.get('tracking_delay_' + name, 0.0), t.get('tracking_loss_' + name, 0.0))
                for name in BRANCHES
            }
            testset = TestSetModel(
                directivity_db=self._per_port(t, 'directivity'),
                crosstalk_db=self._per_port(t, 'crosstalk'),
                source_match=self._per_port(t, 'source_match'),
                load_match=self._per_port(t, 'load_match'),
                splitter_imbalance_db=t['splitter_imbalance'],
                switch_isolation_db=t['switch_isolation'],
                tracking=tracking,
                mismatch=t['mismatch'],
            )
            return InstrumentModel(testset, branches, v['source_power'])
        except PvnaError as e:
            raise ConfigError('Invalid instrument: %s' % e)

    @staticmethod
    def _per_port(values, key):
        return values.get(key + '_1', values[key]), values.get(key + '_2', values[key])

    def build_sweep(self):
        """SweepConfig from [sweep] and the run seed"""
        s = self.values['sweep']
        return SweepConfig(s['f_start'], s['f_stop'], s['n_points'], s['samples_per_point'],
                           self.seed, s['detune_guard'], s['workers'])

    def build_out(self):
        """OUT model from [out]"""
        o = self.values['out']
        model = o['model']
        try:
            if model == 'thru':
                return IdealThru()
            if model == 'load':
                return IdealLoad()
            if model == 'open':
                return IdealReflect(1.0)
            if model == 'short':
                return IdealReflect(-1.0)
            if model == 'delay':
                return DelayLine(o.get('delay', 0.0), o.get('loss', 0.0))
            if model == 'bandpass':
                kwargs = {k: o[k] for k in ('order', 'insertion_loss', 'rejection_floor') if k in o}
                return ParametricBandpass.from_targets(o['f0'], o['bw3dB'], o.get('vswr', 1.5),
                                                       o.get('passband_delay'), **kwargs)
            path = os.path.join(self.base_dir, o['file'])
            with open(path, 'rb') as f:
                return TouchstoneTable(parse_touchstone(f.read()))
        except KeyError as e:
            raise ConfigError('OUT model %r needs key %s' % (model, e))
        except PvnaError as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError('Invalid OUT model: %s' % e)


def load_config(path=None, figure=None):
    """RunConfig from a file (None: defaults), with optional figure settings below the file's"""
    if path is None:
        return RunConfig.from_string('', figure=figure)
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    log.debug('Loading configuration from %s', path)
    return RunConfig.from_string(text, os.path.dirname(os.path.abspath(path)), figure)


def _kit_standard(name, section):
    kind = section.get('model', 'ideal').strip()
    delay = parse_quantity(section.get('delay', '0 s'), 's')
    loss = parse_level(section.get('loss', '0 dB'))
    if name in ('open', 'short'):
        if kind == 'ideal':
            return IdealReflect(1.0 if name == 'open' else -1.0)
        if kind == 'polynomial':
            coefficients = [float(c) for c in section.get('coefficients', '0').split(',')]
            return OffsetReflect(name, coefficients, delay, loss)
    elif name == 'load':
        if kind == 'ideal':
            return IdealLoad()
        if kind == 'reflect':
            return IdealReflect(parse_reflection(section['gamma']))
    else:
        if kind == 'ideal':
            return IdealThru()
        if kind == 'delay':
            return DelayLine(delay, loss)
    raise ConfigError('Unknown %s standard model %r' % (name, kind))


def load_kit(text):
    """
    StandardsKit from kit file text: sections [open] [short] [load] [thru], missing ones ideal.
    open/short: model = ideal | polynomial (coefficients, delay, loss)
    load: model = ideal | reflect (gamma)
    thru: model = ideal | delay (delay, loss)
    """
    parser = _new_parser()
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError('Malformed kit file: %s' % e)
    standards = {}
    for name in parser.sections():
        if name not in ('open', 'short', 'load', 'thru'):
            raise ConfigError('Unknown kit section [%s]' % name)
        try:
            standards[name] = _kit_standard(name, parser[name])
        except (PvnaError, KeyError, ValueError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError('Invalid %s standard: %s' % (name, e))
    return StandardsKit(**standards)
