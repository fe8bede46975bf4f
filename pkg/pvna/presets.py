"""
Default instrument configuration and per-figure settings.

Values are written in configuration-file syntax so they go through the same parser as
user files.
"""

DEFAULTS = {
    'run': {
        'seed': '0',
    },
    'instrument': {
        'p_avg': '10 mW',
        'f_rep': '36.456 MHz',
        'pulse_fwhm': '500 fs',
        'v_pi': '5.4 V',
        'eom_bw': '20 GHz',
        'eom_order': '1.1',
        'oid_bw': '300 MHz',
        'responsivity': '100 V/W',
        'adc_bits': '12',
        'adc_fullscale': 'auto',
        'noise_sigma': '0 V',
        'pd_nonlin': '0',
        'oid_delay': 'auto',
        'source_power': '-10 dBm',
    },
    'testset': {
        'directivity': '-inf dB',
        'crosstalk': '-inf dB',
        'source_match': '0',
        'load_match': '0',
        'splitter_imbalance': '0 dB',
        'switch_isolation': '-inf dB',
        'mismatch': 'flow_graph',
    },
    'sweep': {
        'f_start': '30 GHz',
        'f_stop': '40 GHz',
        'n_points': '201',
        'samples_per_point': '4096',
        'detune_guard': '1e-4',
        'workers': '1',
    },
    'out': {
        'model': 'thru',
    },
}

# The analyzer used for the S-parameter measurement.
IMPERFECT_TESTSET = {
    'directivity': '-30 dB',
    'crosstalk': '-80 dB',
    'source_match': '-20 dB @ 30 deg',
    'load_match': '-20 dB @ -60 deg',
    'switch_isolation': '-60 dB',
    'tracking_delay_ref1': '1.2 ns',
    'tracking_delay_meas_refl': '1.5 ns',
    'tracking_delay_meas_trans': '1.9 ns',
    'tracking_delay_ref2': '1.1 ns',
    'tracking_loss_meas_refl': '0.5 dB',
    'tracking_loss_meas_trans': '0.8 dB',
}

BANDPASS_OUT = {
    'model': 'bandpass',
    'f0': '34.725 GHz',
    'bw3dB': '4.25 GHz',
    'order': '4',
    'insertion_loss': '1 dB',
    'rejection_floor': '60 dB',
    'vswr': '1.5',
    'passband_delay': '900 ps',
}

FIGURES = {
    'fig5': {
        'sweep': {'f_start': '10 MHz', 'f_stop': '40 GHz', 'n_points': '401'},
    },
    'fig6': {
        'sweep': {'f_start': '34.5 GHz', 'f_stop': '35 GHz', 'n_points': '501'},
        'out': {'model': 'delay', 'delay': '900 ps'},
    },
    'fig7': {},
    'fig8': {
        'instrument': {'adc_bits': '20'},
    },
    'fig9': {
        'testset': IMPERFECT_TESTSET,
        'out': BANDPASS_OUT,
    },
}

# Published values the figure summaries are compared with.
TARGETS = {
    'fig5_max_attenuation_db': 7.5,
    'fig6_flip_spacing_hz': 18.228e6,
    'fig7_theoretical_p01_dbm': 5.6,
    'fig7_measured_p01_dbm': 2.8,
    'fig8_floors_db': (102.0, 108.0, 114.0, 120.0),
    'fig8_n_fft': (62500, 250000, 1000000, 4000000),
    'fig9_f_center_hz': 34.725e9,
    'fig9_bw3db_hz': 4.25e9,
    'fig9_vswr': 1.5,
    'fig9_delay_s': 900e-12,
}

# Frequency of the compression and dynamic-range measurements.
TONE_FREQUENCY = 35e9
