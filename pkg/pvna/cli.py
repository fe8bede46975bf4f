"""
Command-line entry point.

    pvna sweep --config run.ini --out dut.s2p [--cal errterms.txt] [--seed N]
    pvna calibrate --config run.ini --kit kit.ini --out errterms.txt [--seed N]
    pvna figure fig6 [--config run.ini] --out results/fig6 [--seed N]

Exit codes: 0 success, 1 domain or file error, 2 usage error.
"""

import argparse
import logging
import os
import sys

import numpy as np

from .calibration import StandardsKit, apply_correction, run_solt
from .exceptions import PvnaError
from .figures import EXPERIMENTS, run_figure, write_csv, write_result
from .io.calfile import read_error_terms, write_error_terms
from .io.config import load_config, load_kit
from .io.touchstone import write_touchstone
from .sweep import run_sweep
from .util import to_db
from .version import __version__


log = logging.getLogger(__name__)


def _parser():
    parser = argparse.ArgumentParser(prog='pvna', description='Photonic vector network analyzer simulator.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log INFO (-v) or DEBUG (-vv) messages')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    sweep = commands.add_parser('sweep', help='measure the configured OUT')
    sweep.add_argument('--config', required=True, help='instrument configuration file')
    sweep.add_argument('--out', required=True, help='Touchstone file to write (a .csv is written next to it)')
    sweep.add_argument('--cal', help='error-terms file to correct the sweep with')
    sweep.add_argument('--seed', type=int, help='override [run] seed')

    calibrate = commands.add_parser('calibrate', help='SOLT calibration of the configured instrument')
    calibrate.add_argument('--config', required=True, help='instrument configuration file')
    calibrate.add_argument('--kit', help='standards kit file (default: ideal standards)')
    calibrate.add_argument('--out', required=True, help='error-terms file to write')
    calibrate.add_argument('--seed', type=int, help='override [run] seed')

    figure = commands.add_parser('figure', help='reproduce one experiment')
    figure.add_argument('name', choices=sorted(EXPERIMENTS))
    figure.add_argument('--config', help='configuration file applied over the experiment settings')
    figure.add_argument('--out', required=True, help='output directory')
    figure.add_argument('--seed', type=int, help='override [run] seed')
    return parser


def _config(args, figure=None):
    config = load_config(args.config, figure)
    if args.seed is not None:
        config.set('run', 'seed', str(args.seed))
    return config


def _write_config(config, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(config.to_json(sort=True))


def _base(path):
    return os.path.splitext(path)[0]


def cmd_sweep(args):
    config = _config(args)
    inst, cfg, out = config.build_instrument(), config.build_sweep(), config.build_out()
    sweep = run_sweep(inst, out, cfg)
    s = sweep.raw
    if args.cal:
        with open(args.cal, 'rb') as f:
            terms = read_error_terms(f.read())
        s = apply_correction(s, terms)
    directory = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(directory, exist_ok=True)
    with open(args.out, 'wb') as f:
        f.write(write_touchstone(s))
    columns, data = ['f_hz'], [s.grid.points]
    for name in ('s11', 's21', 's12', 's22'):
        columns += ['%s_db' % name, '%s_deg' % name]
        data += [to_db(s.param(name)), np.degrees(np.angle(s.param(name)))]
    columns += ['clipped_fwd', 'clipped_rev']
    data += [sweep.clipped[:, 0], sweep.clipped[:, 1]]
    write_csv(_base(args.out) + '.csv', columns, np.column_stack(data))
    _write_config(config, _base(args.out) + '.config.json')
    if sweep.clipped.any():
        log.warning('%d points clipped', int(np.any(sweep.clipped, axis=1).sum()))
    return 0


def cmd_calibrate(args):
    config = _config(args)
    kit = StandardsKit()
    if args.kit:
        with open(args.kit, 'r', encoding='utf-8') as f:
            kit = load_kit(f.read())
    terms = run_solt(config.build_instrument(), kit, config.build_sweep())
    directory = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(directory, exist_ok=True)
    with open(args.out, 'wb') as f:
        f.write(write_error_terms(terms))
    _write_config(config, _base(args.out) + '.config.json')
    return 0


def cmd_figure(args):
    config = _config(args, figure=args.name)
    result = run_figure(args.name, config)
    write_result(result, args.out)
    _write_config(config, os.path.join(args.out, 'config.json'))
    sys.stdout.write(result.summary.text())
    return 0


_COMMANDS = {
    'sweep': cmd_sweep,
    'calibrate': cmd_calibrate,
    'figure': cmd_figure,
}


def main(argv=None):
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    try:
        return _COMMANDS[args.command](args)
    except (PvnaError, OSError) as e:
        log.debug('Command %s failed', args.command, exc_info=True)
        sys.stderr.write('pvna %s: %s\n' % (args.command, e))
        return 1
