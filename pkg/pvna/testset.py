"""
Test set and instrument models: splitters, SPDT switch, directional couplers, port matches
and the four receiver branches of the analyzer.
"""

import logging

import numpy as np

from .exceptions import ModelCreationError
from .photonic import BranchModel
from .util import PrettyPrint, from_db


log = logging.getLogger(__name__)


__all__ = [
    'BRANCHES',
    'MISMATCH_MODELS',
    'CableModel',
    'TestSetModel',
    'InstrumentModel',
]

# Receiver branch roles. ref1/ref2 sample the incident wave of port 1/2,
# meas_refl is the port-1 coupler receiver, meas_trans the port-2 coupler receiver.
BRANCHES = ('ref1', 'meas_refl', 'meas_trans', 'ref2')

MISMATCH_MODELS = ('flow_graph', 'first_order')


class CableModel(PrettyPrint):
    """Frequency response (tracking) of the path from a splitter or coupler to a branch EOM"""

    def __init__(self, delay=0.0, loss_db=0.0):
        if delay < 0:
            raise ModelCreationError('Cable delay must be >= 0')
        self.delay = float(delay)
        self.loss_db = float(loss_db)

    def response(self, f):
        return from_db(-self.loss_db) * np.exp(-2j * np.pi * np.asarray(f, dtype=float) * self.delay)


def _per_port(value, name):
    """Scalar -> same value on both ports; pair -> (port1, port2)"""
    if np.ndim(value) == 0:
        return value, value
    value = tuple(value)
    if len(value) != 2:
        raise ModelCreationError('%s needs one value or one value per port' % name)
    return value


class TestSetModel(PrettyPrint):
    """
    Imperfections of the analyzer test set.

    directivity_db - coupler directivity leakage per port (dB <= 0, -inf: ideal)
    crosstalk_db - leakage from the driven port's incident wave into the other port's receiver
    source_match, load_match - complex reflection of the port when driving / terminating
    splitter_imbalance_db - reference path gain relative to the test path
    switch_isolation_db - leakage of the source into the idle reference branch
    tracking - dict: branch name -> CableModel
    mismatch - 'flow_graph' (exact closed form) or 'first_order' (one re-reflection)
    """
    __test__ = False

    def __init__(self, directivity_db=float('-inf'), crosstalk_db=float('-inf'), source_match=0j, load_match=0j,
                 splitter_imbalance_db=0.0, switch_isolation_db=float('-inf'), tracking=None, mismatch='flow_graph'):
        self.directivity_db = _per_port(directivity_db, 'directivity')
        self.crosstalk_db = _per_port(crosstalk_db, 'crosstalk')
        for v in self.directivity_db + self.crosstalk_db + (switch_isolation_db,):
            if v > 0:
                raise ModelCreationError('Leakage levels must be <= 0 dB, given %r' % v)
        self.source_match = tuple(complex(v) for v in _per_port(source_match, 'source_match'))
        self.load_match = tuple(complex(v) for v in _per_port(load_match, 'load_match'))
        for v in self.source_match + self.load_match:
            if abs(v) >= 1:
                raise ModelCreationError('Port match must have |Gamma| < 1, given %r' % v)
        self.splitter_imbalance_db = float(splitter_imbalance_db)
        self.switch_isolation_db = float(switch_isolation_db)
        self.tracking = {name: CableModel() for name in BRANCHES}
        for name, cable in (tracking or {}).items():
            if name not in BRANCHES:
                raise ModelCreationError('Unknown branch %r' % name)
            self.tracking[name] = cable
        if mismatch not in MISMATCH_MODELS:
            raise ModelCreationError('Unknown mismatch model %r' % mismatch)
        self.mismatch = mismatch

    @classmethod
    def ideal(cls):
        return cls()

    def branch_waves(self, s, f, drive_port):
        """
        Complex waves reaching the four branch EOMs per unit source amplitude.
        s - 2x2 S-matrix of the OUT at f, drive_port - 1 or 2
        Returns dict: branch name -> complex
        """
        if drive_port not in (1, 2):
            raise ValueError('Drive port must be 1 or 2')
        p, q = drive_port - 1, 2 - drive_port
        k_inc = 1.0 / np.sqrt(2.0)
        k_ref = from_db(self.splitter_imbalance_db) / np.sqrt(2.0)
        gamma_s, gamma_l = self.source_match[p], self.load_match[q]
        s_pp, s_pq, s_qp, s_qq = s[p, p], s[p, q], s[q, p], s[q, q]

        if self.mismatch == 'flow_graph':
            gamma_in = s_pp + s_pq * s_qp * gamma_l / (1.0 - s_qq * gamma_l)
            a_p = k_inc / (1.0 - gamma_s * gamma_in)
            b_p = gamma_in * a_p
            b_q = s_qp * a_p / (1.0 - s_qq * gamma_l)
        else:
            b_p = k_inc * (s_pp + gamma_s * s_pp ** 2 + s_pq * s_qp * gamma_l)
            b_q = k_inc * s_qp * (1.0 + s_qq * gamma_l + gamma_s * s_pp)

        receivers = [0j, 0j]
        receivers[p] = from_db(self.directivity_db[p]) * k_inc + b_p
        receivers[q] = from_db(self.crosstalk_db[p]) * k_inc + b_q
        references = [0j, 0j]
        references[p] = k_ref
        references[q] = k_ref * from_db(self.switch_isolation_db)
        waves = {
            'ref1': references[0],
            'meas_refl': receivers[0],
            'meas_trans': receivers[1],
            'ref2': references[1],
        }
        return {name: complex(w * self.tracking[name].response(f)) for name, w in waves.items()}


class InstrumentModel(PrettyPrint):
    """
    The simulated analyzer: test set, four receiver branches sharing one pulse train,
    and source power in dBm.
    branches - dict: branch name -> BranchModel (a single BranchModel is used for all four)
    """

    def __init__(self, testset=None, branches=None, source_power=-10.0):
        self.testset = testset or TestSetModel()
        if branches is None:
            branches = BranchModel()
        if isinstance(branches, BranchModel):
            branches = {name: branches for name in BRANCHES}
        if set(branches) != set(BRANCHES):
            raise ModelCreationError('Instrument needs branches %s' % ', '.join(BRANCHES))
        rates = {b.pulses.f_rep for b in branches.values()}
        if len(rates) != 1:
            raise ModelCreationError('All branches must share one repetition rate')
        self.branches = dict(branches)
        self.source_power = float(source_power)

    @property
    def f_rep(self):
        return self.branches['ref1'].pulses.f_rep

    def branch(self, name, f_rep=None):
        """Branch model, optionally re-timed to another repetition rate"""
        b = self.branches[name]
        return b if f_rep is None else b.with_rep_rate(f_rep)

    def replace(self, testset=None, source_power=None, **branch_changes):
        """
        Copy of the instrument. Keyword arguments change the OID of every branch.
        """
        branches = {name: b.replace(**branch_changes) if branch_changes else b for name, b in self.branches.items()}
        return InstrumentModel(testset or self.testset, branches,
                               self.source_power if source_power is None else source_power)
