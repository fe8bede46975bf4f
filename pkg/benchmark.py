import timeit
import argparse
import statistics

from pvna import (
    InstrumentModel, TestSetModel, SweepConfig, IdealThru, DelayLine, ParametricBandpass, run_sweep,
)


# Globals
LINE_LEN = 80


# Define and parse possible arguments
parser = argparse.ArgumentParser(description='Run pvna sweep benchmark.')
parser.add_argument('-n', '--points', dest='n_points', nargs='?', type=int, default=201,
                    help='number of frequency points (default: %(default)d)')
parser.add_argument('-s', '--samples', nargs='?', type=int, default=4096,
                    help='samples per point and branch (default: %(default)d)')
parser.add_argument('-w', '--workers', nargs='?', type=int, default=1,
                    help='number of worker threads (default: %(default)s)')
parser.add_argument('-o', '--out', choices=('thru', 'delay', 'bandpass'), default='bandpass',
                    help='object under test (default: %(default)s)')
parser.add_argument('-r', '--repeat', nargs='?', type=int, default=3,
                    help='number of timed sweeps (default: %(default)s)')

imperfect_group = parser.add_argument_group('test set related')
imperfect_group.add_argument('--ideal', action='store_true', default=False,
                             help='use an ideal test set (default: %(default)s)')

ARGS = parser.parse_args()


def get_out():
    if ARGS.out == 'thru':
        return IdealThru()
    elif ARGS.out == 'delay':
        return DelayLine(900e-12)
    return ParametricBandpass.from_targets(34.725e9, 4.25e9, vswr=1.5, passband_delay=900e-12)


def get_instrument():
    if ARGS.ideal:
        return InstrumentModel()
    return InstrumentModel(TestSetModel(directivity_db=-30, crosstalk_db=-80, source_match=0.1, load_match=-0.1j))


if __name__ == '__main__':
    inst = get_instrument()
    out = get_out()
    cfg = SweepConfig(30e9, 40e9, ARGS.n_points, ARGS.samples, workers=ARGS.workers)
    sweep_time_results = []
    print('=' * LINE_LEN)
    print('START BENCHMARK!')
    for _ in range(ARGS.repeat):
        start = timeit.default_timer()
        sweep = run_sweep(inst, out, cfg)
        stop = timeit.default_timer()
        sweep_time_results.append(stop - start)
        print('.', end='', flush=True)
    print()
    # fix for statistics - we need at least 2 datapoints
    if len(sweep_time_results) == 1:
        sweep_time_results.append(sweep_time_results[0])
    # reports:
    print('Number of points: {:,}'.format(ARGS.n_points))
    print('Samples per point and branch: {:,}'.format(ARGS.samples))
    print('Object under test: %s' % out.__class__.__name__)
    print('Test set: %s' % ('ideal' if ARGS.ideal else 'imperfect'))
    print('Number of worker threads: {:,}'.format(ARGS.workers))
    print('Sweep took (mean: %0.4f seconds. stdev: %0.4f)' %
          (statistics.mean(sweep_time_results), statistics.stdev(sweep_time_results)))
    print('Points clipped: %d' % len(sweep.flagged_points()))
    print('=' * LINE_LEN)
