"""
pvna simulates a photonic vector network analyzer: pulsed-laser undersampling receivers,
a four-branch test set, SOLT calibration and the analyses built on them.
"""

import logging

###########################
#    Public API Imports   #
###########################

from .version import version_info, __version__

from .network import (
    FrequencyGrid,
    TwoPortSParams,
    OutModel,
    DelayLine,
    IdealThru,
    IdealReflect,
    IdealLoad,
    OffsetReflect,
    TouchstoneTable,
    ParametricBandpass,
)

from .photonic import (
    PulseTrain,
    EomModel,
    OidModel,
    BranchModel,
    sample_branch,
    simulate_dense_oracle,
)

from .dsp import (
    Phasor,
    alias_map,
    estimate_tone,
    correct_phase,
    power_spectrum,
)

from .testset import (
    TestSetModel,
    InstrumentModel,
    CableModel,
)

from .sweep import (
    SweepConfig,
    measure_point,
    run_sweep,
)

from .calibration import (
    ErrorTerms12,
    StandardsKit,
    run_solt,
    apply_correction,
)

from . import analysis

from .io import (
    parse_touchstone,
    write_touchstone,
    read_error_terms,
    write_error_terms,
    load_config,
    load_kit,
)


################
#  Setting up  #
################

logging.getLogger(__name__).addHandler(logging.NullHandler())
