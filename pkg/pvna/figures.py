"""
Experiments reproducing the published figures of the analyzer:

 - fig5: uncalibrated system response and inter-pulse interference ripple
 - fig6: phase reversal in even Nyquist zones and its correction
 - fig7: 0.1 dB compression (Bessel theory, ideal PD, nonlinear PD)
 - fig8: noise floor and dynamic range versus FFT size
 - fig9: calibrated S-parameters of a bandpass filter
"""

import csv
import logging
import os

import numpy as np

from .analysis import (band_params, calibrate_noise_sigma, compression_sweep, noise_floor_study, phase_reversals,
                       signal_spread_db, tone_record, system_response, theoretical_compression, tune_pd_nonlinearity)
from .calibration import StandardsKit, apply_correction, run_solt
from .dsp import correct_phase, power_spectrum
from .exceptions import ConfigError
from .io.touchstone import write_touchstone
from .network import TwoPortSParams
from .photonic import eom_response, pulse_spectrum
from .presets import TARGETS, TONE_FREQUENCY
from .sweep import measure_point, run_sweep
from .util import JsonSerializer, PrettyPrint, to_db


log = logging.getLogger(__name__)


__all__ = ['EXPERIMENTS', 'FigureSummary', 'FigureResult', 'run_figure', 'write_result', 'write_csv']


class FigureSummary(JsonSerializer, PrettyPrint):
    """Headline numbers of an experiment next to the published values"""

    def __init__(self, name):
        self.name = name
        self.entries = []

    def add(self, quantity, value, target=None, unit='', note=''):
        self.entries.append({'quantity': quantity, 'value': value, 'target': target, 'unit': unit, 'note': note})

    def get(self, quantity):
        for e in self.entries:
            if e['quantity'] == quantity:
                return e['value']
        raise KeyError(quantity)

    def text(self):
        lines = ['%s summary' % self.name]
        for e in self.entries:
            line = '%s: %.6g %s' % (e['quantity'], e['value'], e['unit'])
            if e['target'] is not None:
                line += ' (published: %.6g %s)' % (e['target'], e['unit'])
            if e['note']:
                line += ' - %s' % e['note']
            lines.append(line.rstrip())
        return '\n'.join(lines) + '\n'


class FigureResult(PrettyPrint):
    """
    tables - dict: file name -> (column names, rows), summary - FigureSummary,
    files - dict: file name -> bytes written verbatim
    """

    def __init__(self, name, summary):
        self.name = name
        self.summary = summary
        self.tables = {}
        self.files = {}

    def table(self, filename, columns, *data):
        self.tables[filename] = (columns, np.column_stack(data))


def write_csv(path, columns, rows):
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow(['%.12g' % v for v in row])


def write_result(result, outdir):
    """Write CSV tables, extra files and summary.txt / summary.json into outdir"""
    os.makedirs(outdir, exist_ok=True)
    for filename, (columns, rows) in result.tables.items():
        write_csv(os.path.join(outdir, filename), columns, rows)
    for filename, data in result.files.items():
        with open(os.path.join(outdir, filename), 'wb') as f:
            f.write(data)
    with open(os.path.join(outdir, 'summary.txt'), 'w', encoding='utf-8') as f:
        f.write(result.summary.text())
    with open(os.path.join(outdir, 'summary.json'), 'w', encoding='utf-8') as f:
        f.write(result.summary.to_json(sort=True))
    log.info('%s written to %s', result.name, outdir)


def _peak_to_peak(values):
    return float(np.max(values) - np.min(values))


def fig5(config):
    inst, cfg = config.build_instrument(), config.build_sweep()
    grid, response = system_response(inst, cfg)
    b = inst.branches['meas_trans']
    envelope = np.abs(eom_response(b.eom, grid.points) * pulse_spectrum(b.pulses, grid.points))
    envelope_db = to_db(envelope / envelope[0])
    summary = FigureSummary('fig5')
    summary.add('max attenuation', float(-np.min(response)), TARGETS['fig5_max_attenuation_db'], 'dB')
    summary.add('deviation from envelope', float(np.max(np.abs(response - envelope_db))), unit='dB',
                note='EOM response times pulse spectrum')

    # two repetition periods above the test tone frequency
    ripple_cfg = cfg.replace(f_start=TONE_FREQUENCY, f_stop=TONE_FREQUENCY + 2 * inst.f_rep, n_points=81)
    ripple_grid, nominal = system_response(inst, ripple_cfg)
    _, narrow = system_response(inst.replace(bw3dB=0.2 * inst.f_rep), ripple_cfg)
    summary.add('ripple, nominal OID', _peak_to_peak(nominal), unit='dB')
    summary.add('ripple, OID at 0.2 f_rep', _peak_to_peak(narrow), unit='dB', note='period f_rep')

    result = FigureResult('fig5', summary)
    result.table('fig5_response.csv', ['f_hz', 'response_db', 'envelope_db'], grid.points, response, envelope_db)
    result.table('fig5_ripple.csv', ['f_hz', 'nominal_db', 'narrow_oid_db'], ripple_grid.points, nominal, narrow)
    return result


def fig6(config):
    inst, cfg, out = config.build_instrument(), config.build_sweep(), config.build_out()
    grid = cfg.grid()
    before, after, zones = [], [], []
    for i, f in enumerate(grid.points):
        m = measure_point(inst, out, f, 1, cfg, i)
        after.append(m['meas_trans'].value / m['ref1'].value)
        # correct_phase is an involution: applying it again gives the phasors as sampled
        raw = {name: correct_phase(m[name], m.alias) for name in ('meas_trans', 'ref1')}
        before.append(raw['meas_trans'].value / raw['ref1'].value)
        zones.append(m.alias.zone)
    zones = np.array(zones)
    phase_before = np.degrees(np.angle(before))
    phase_after = np.degrees(np.unwrap(np.angle(after)))
    fit = np.polyval(np.polyfit(grid.points - grid.points[0], phase_after, 1), grid.points - grid.points[0])
    residual = phase_after - fit

    edges = phase_reversals(phase_before, grid)
    summary = FigureSummary('fig6')
    summary.add('phase reversals', int(edges.size))
    if edges.size >= 2:
        spacing = np.polyfit(np.arange(edges.size), edges, 1)[0]
        summary.add('phase reversal spacing', float(spacing), TARGETS['fig6_flip_spacing_hz'], 'Hz')
    summary.add('max residual after correction', float(np.max(np.abs(residual))), unit='deg')

    result = FigureResult('fig6', summary)
    result.table('fig6_phase.csv', ['f_hz', 'zone', 'phase_before_deg', 'phase_after_deg', 'residual_deg'],
                 grid.points, zones, phase_before, phase_after, residual)
    return result


def fig7(config):
    inst = config.build_instrument()
    f = TONE_FREQUENCY
    v_pi = inst.branches['ref1'].eom.v_pi
    theory = theoretical_compression(v_pi)
    ideal = compression_sweep(inst.replace(pd_nonlin=0.0), f, seed=config.seed)
    kappa = inst.branches['ref1'].oid.pd_nonlin
    if kappa == 0:
        kappa = tune_pd_nonlinearity(inst, f, TARGETS['fig7_measured_p01_dbm'], seed=config.seed)
    nonlinear = compression_sweep(inst.replace(pd_nonlin=kappa), f, seed=config.seed)

    summary = FigureSummary('fig7')
    summary.add('theoretical p01', theory, TARGETS['fig7_theoretical_p01_dbm'], 'dBm',
                note='Bessel series with v_pi %.3g V into 50 Ohm; the published value is higher' % v_pi)
    summary.add('p01, ideal PD', ideal.p01, theory, 'dBm', note='target is the Bessel value')
    summary.add('p01, nonlinear PD', nonlinear.p01, TARGETS['fig7_measured_p01_dbm'], 'dBm')
    summary.add('PD nonlinearity', kappa)

    result = FigureResult('fig7', summary)
    result.table('fig7_compression.csv',
                 ['p_in_dbm', 'output_ideal_db', 'deviation_ideal_db', 'output_pd_db', 'deviation_pd_db'],
                 ideal.p_in, ideal.output_db, ideal.deviation, nonlinear.output_db, nonlinear.deviation)
    return result


def _peak_hold(values, rows):
    """Decimate by keeping the maximum of every block"""
    block = max(1, int(np.ceil(values.size / rows)))
    pad = (-values.size) % block
    padded = np.concatenate((values, np.full(pad, -np.inf)))
    return padded.reshape(-1, block).max(axis=1), block


def fig8(config, n_seeds=10, rows=2048):
    inst = config.build_instrument()
    f, p_in = TONE_FREQUENCY, TARGETS['fig7_measured_p01_dbm']
    n_fft = TARGETS['fig8_n_fft']
    sigma = inst.branches['ref1'].oid.noise_sigma
    if sigma == 0:
        sigma = calibrate_noise_sigma(inst, f, p_in, n_fft[0], -TARGETS['fig8_floors_db'][0])
    noisy = inst.replace(noise_sigma=sigma)
    seeds = range(config.seed, config.seed + n_seeds)
    study = noise_floor_study(noisy, f, p_in, n_fft, seeds=seeds)

    summary = FigureSummary('fig8')
    summary.add('noise sigma', sigma, unit='V')
    for point, target in zip(study, TARGETS['fig8_floors_db']):
        summary.add('floor below signal, N=%d' % point.n_fft, -point.floor_db, target, 'dB')
    slope = np.polyfit(np.log2(n_fft) / 2.0, [p.floor_db for p in study], 1)[0]
    summary.add('floor change per quadrupling', float(slope), -6.02, 'dB')
    summary.add('dynamic range, N=%d' % n_fft[-1], study[-1].dr_db, TARGETS['fig8_floors_db'][-1], 'dB')
    summary.add('signal spread across N', signal_spread_db(study), unit='dB')

    result = FigureResult('fig8', summary)
    result.table('fig8_floors.csv', ['n_fft', 'floor_db', 'dynamic_range_db', 'signal_db'],
                 [p.n_fft for p in study], [p.floor_db for p in study], [p.dr_db for p in study],
                 [p.signal_db for p in study])
    record = tone_record(noisy, f, p_in, max(n_fft), config.seed, 'ref1')
    for n in n_fft:
        spectrum = power_spectrum(record, n, inst.f_rep)
        held, block = _peak_hold(spectrum.power_db - spectrum.signal_db, rows)
        freqs = np.arange(held.size) * block * spectrum.bin_hz
        result.table('fig8_spectrum_%d.csv' % n, ['f_hz', 'power_dbc'], freqs, held)
    return result


def fig9(config, kit=None):
    inst, cfg, out = config.build_instrument(), config.build_sweep(), config.build_out()
    grid = cfg.grid()
    terms = run_solt(inst, kit or StandardsKit(), cfg)
    measured = apply_correction(run_sweep(inst, out, cfg).raw, terms)
    model = TwoPortSParams.from_model(out, grid)
    band = band_params(measured.s21, grid, measured.s11)
    error = max(float(np.max(np.abs(measured.param(n) - model.param(n)))) for n in ('s11', 's12', 's21', 's22'))

    summary = FigureSummary('fig9')
    summary.add('center frequency', band.f_center, TARGETS['fig9_f_center_hz'], 'Hz')
    summary.add('3 dB bandwidth', band.bw3dB, TARGETS['fig9_bw3db_hz'], 'Hz')
    summary.add('VSWR at center', band.vswr_at_center, TARGETS['fig9_vswr'])
    summary.add('mean passband delay', band.delay_avg, TARGETS['fig9_delay_s'], 's')
    summary.add('max error against the OUT model', error, note='complex difference over all four parameters')

    result = FigureResult('fig9', summary)
    for name in ('s11', 's21', 's12', 's22'):
        m, ref = measured.param(name), model.param(name)
        result.table('fig9_%s_mag.csv' % name, ['f_hz', 'measured_db', 'model_db'], grid.points, to_db(m), to_db(ref))
        result.table('fig9_%s_phase.csv' % name, ['f_hz', 'measured_deg', 'model_deg'],
                     grid.points, np.degrees(np.angle(m)), np.degrees(np.angle(ref)))
    result.files['fig9_corrected.s2p'] = write_touchstone(measured)
    return result


EXPERIMENTS = {
    'fig5': fig5,
    'fig6': fig6,
    'fig7': fig7,
    'fig8': fig8,
    'fig9': fig9,
}


def run_figure(name, config, **kwargs):
    """Run one experiment by name. Returns FigureResult."""
    if name not in EXPERIMENTS:
        raise ConfigError('Unknown figure %r, use one of %s' % (name, ', '.join(sorted(EXPERIMENTS))))
    log.info('Running %s', name)
    return EXPERIMENTS[name](config, **kwargs)
