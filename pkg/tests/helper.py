import numpy as np

from pvna.photonic import PulseTrain, EomModel, OidModel, BranchModel
from pvna.testset import InstrumentModel, TestSetModel
from pvna.sweep import SweepConfig


def fine_branch(**oid_changes):
    """Branch with a 1 V full scale and a 24-bit ADC: quantization far below the test tolerances"""
    oid = OidModel(responsivity=100.0, adc_bits=24)
    for k, v in oid_changes.items():
        setattr(oid, k, v)
    return BranchModel(PulseTrain(), EomModel(), oid)


def fine_instrument(testset=None, source_power=-10.0, **oid_changes):
    return InstrumentModel(testset or TestSetModel(), fine_branch(**oid_changes), source_power)


def imperfect_testset(mismatch='flow_graph'):
    return TestSetModel(
        directivity_db=(-30.0, -28.0),
        crosstalk_db=-80.0,
        source_match=(0.1 * np.exp(0.5j), 0.08 * np.exp(-1.1j)),
        load_match=(0.09 * np.exp(2.0j), 0.1 * np.exp(-0.4j)),
        splitter_imbalance_db=-0.5,
        switch_isolation_db=-60.0,
        mismatch=mismatch,
    )


def short_sweep(f_start=34e9, f_stop=36e9, n_points=5, **kwargs):
    return SweepConfig(f_start, f_stop, n_points, samples_per_point=kwargs.pop('samples_per_point', 1024), **kwargs)


def random_sparams(rng, n, scale=0.6):
    """n random 2x2 passive-looking S-matrices"""
    mats = scale * (rng.uniform(0, 1, (n, 2, 2)) * np.exp(2j * np.pi * rng.uniform(0, 1, (n, 2, 2))))
    return mats
