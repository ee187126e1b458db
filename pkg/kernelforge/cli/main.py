"""Console script for kernelforge."""

import argparse
import logging
import logging.config
import math
import sys

import numpy as np

from kernelforge import settings
from kernelforge.cli.io import (
    file_digest, read_json, read_matrix, read_points, read_sites, write_matrix,
)
from kernelforge.cli.models import RunReport
from kernelforge.cli.schema import function_from_dict, spec_from_dict
from kernelforge.cnd import (
    check_cnd, check_metrizable, embed, geometric_grid, probe_bernstein,
    probe_completely_monotone,
)
from kernelforge.constants import EXIT_CODES, Constants, choices_as_set
from kernelforge.core import gram, spec_digest
from kernelforge.exceptions import KernelForgeError, NotCndError
from kernelforge.families import (
    MatrixGaussianInstance, MaternParams, classify_matrix_gaussian, matern, matern_oracle,
)
from kernelforge.hyperbolic import check_hyperbolic, check_log_conditional
from kernelforge.mmd import DiscreteMeasure, energy, mmd_distance

logger = logging.getLogger(__name__)

PASS = EXIT_CODES['pass']
FAIL = EXIT_CODES['predicate-fail']
INPUT_ERROR = EXIT_CODES['input-error']


def _emit(report):
    sys.stdout.write(report.to_json())
    return PASS if report.passed else FAIL


def _load_points(args, report, path=None, name='points'):
    path = path or args.points
    sites = None
    if args.sites:
        sites = read_sites(args.sites)
        report.inputs['sites'] = file_digest(args.sites)
    points, weights = read_points(path, sites=sites, lift=args.lift)
    report.inputs[name] = file_digest(path)
    return points, weights


def _load_kernel(args, report):
    spec = spec_from_dict(read_json(args.kernel))
    report.inputs['kernel'] = file_digest(args.kernel)
    report.numbers['kernel_id'] = spec_digest(spec)
    return spec


def _load_gamma(args, report):
    """A matrix from --gamma, or the Gram of --kernel on --points.

    The points are returned as well, None for a --gamma matrix.
    """
    if args.gamma:
        report.inputs['gamma'] = file_digest(args.gamma)
        return read_matrix(args.gamma), None
    if not (args.kernel and args.points):
        raise KernelForgeError("give --gamma or both --kernel and --points")
    spec = _load_kernel(args, report)
    points, _ = _load_points(args, report)
    return gram(spec, points, threads=args.threads).matrix, points


def _duplicate_pair(points):
    seen = {}
    for i, p in enumerate(points):
        if p in seen:
            return (seen[p], i)
        seen[p] = i
    return None


def cmd_gram(args):
    report = RunReport('gram', seed=args.seed)
    spec = _load_kernel(args, report)
    points, _ = _load_points(args, report)
    result = gram(spec, points, threads=args.threads)
    verdict = result.classify()
    report.add_verdict(verdict)
    for check in result.checks:
        report.add_verdict(check)
    report.numbers.update({'n': result.n, 'lambda_min': verdict.lambda_min,
                           'lambda_max': verdict.lambda_max})
    if args.check:
        report.passed = verdict.is_pd if args.check == 'pd' else verdict.is_psd
        if not report.passed:
            pair = _duplicate_pair(result.points)
            if pair is not None:
                report.numbers['witness_pair'] = list(pair)
            else:
                report.numbers['witness_vector'] = result.spectrum.eigenvectors[:, 0]
    if args.out:
        write_matrix(args.out, result.entries, args.format)
    else:
        report.numbers['matrix'] = result.entries
    return _emit(report)


def _check_function(args, report):
    if not args.function:
        raise KernelForgeError(f"{args.predicate} needs --function")
    function = function_from_dict(read_json(args.function))
    report.inputs['function'] = file_digest(args.function)
    grid = geometric_grid(*args.grid) if args.grid else None
    if args.predicate == 'cm':
        result = probe_completely_monotone(function, grid=grid, order=args.order)
    else:
        result = probe_bernstein(function, grid=grid, order=args.order)
    report.add_verdict(result)
    report.passed = result.passed
    if result.violations:
        order, point, value = result.violations[0]
        report.numbers.update({'first_violation_order': order,
                               'first_violation_point': point,
                               'first_violation_value': value})


def cmd_check(args):
    report = RunReport(f"check {args.predicate}", seed=args.seed)
    if args.predicate in ('cm', 'bernstein'):
        _check_function(args, report)
        return _emit(report)
    matrix, points = _load_gamma(args, report)
    if args.predicate == 'cnd':
        result = check_cnd(matrix, tol=args.tol)
        report.passed = result.is_cnd
        report.numbers['lambda_max_projected'] = result.lambda_max_projected
    elif args.predicate == 'metrizable':
        result = check_metrizable(matrix, points, tol=args.tol)
        report.passed = result.verdict
    elif args.predicate == 'hyperbolic':
        result = check_hyperbolic(matrix, tol=args.tol)
        report.passed = result.verdict
    else:
        result = check_log_conditional(matrix, tol=args.tol)
        report.passed = result.verdict
    report.add_verdict(result)
    return _emit(report)


def cmd_embed(args):
    report = RunReport('embed', seed=args.seed)
    matrix, _ = _load_gamma(args, report)
    try:
        result = embed(matrix, base_index=args.base, tol=args.tol)
    except NotCndError as exc:
        report.passed = False
        report.numbers['lambda_max_projected'] = exc.lambda_max
        logger.warning("%s", exc)
        return _emit(report)
    report.add_verdict(result)
    report.numbers.update({'rank': result.rank,
                           'reconstruction_error': result.reconstruction_error})
    if args.out:
        header = [f"h{k}" for k in range(result.rank)] + ['f']
        table = np.column_stack([result.coords, result.f])
        write_matrix(args.out, table, 'csv', header=header)
    return _emit(report)


def cmd_matern(args):
    report = RunReport('matern', seed=args.seed)
    params = MaternParams(args.alpha, args.nu)
    value = matern(args.r, params)
    report.numbers.update({'r': args.r, 'alpha': args.alpha, 'nu': args.nu, 'value': value})
    if args.oracle:
        accuracy = args.tol or 1e-12
        reference = matern_oracle(args.r, params, accuracy)
        gap = abs(value - reference) / max(abs(reference), np.finfo(float).tiny)
        report.numbers.update({'oracle': reference, 'relative_gap': gap})
        report.tolerances['oracle.accuracy'] = accuracy
    return _emit(report)


def _measure(points, weights):
    if weights is None:
        return DiscreteMeasure.empirical(points)
    return DiscreteMeasure(tuple(zip(points, weights)))


def cmd_mmd(args):
    """MMD of two samples; weight columns turn them into signed measures."""
    report = RunReport('mmd', seed=args.seed)
    spec = _load_kernel(args, report)
    a, wa = _load_points(args, report, args.samples[0], 'sample_a')
    b, wb = _load_points(args, report, args.samples[1], 'sample_b')
    if wa is None and wb is None:
        report.numbers['mmd'] = mmd_distance(spec, a, b)
    else:
        value = energy(spec, _measure(a, wa) - _measure(b, wb))
        report.numbers['energy'] = value
        report.numbers['mmd'] = math.sqrt(max(value, 0.0))
    report.numbers.update({'n_a': len(a), 'n_b': len(b)})
    return _emit(report)


def cmd_classify_matrix_gaussian(args):
    report = RunReport('classify-matrix-gaussian', seed=args.seed)
    a = read_matrix(args.a)
    gamma = read_matrix(args.gamma)
    report.inputs.update({'a': file_digest(args.a), 'gamma': file_digest(args.gamma)})
    result = classify_matrix_gaussian(MatrixGaussianInstance(a, gamma, args.m), tol=args.tol)
    report.add_verdict(result)
    report.passed = result.spd and result.c0_universal
    return _emit(report)


def _parser():
    parser = argparse.ArgumentParser(
        prog='kernelforge',
        description='Construct positive definite kernels and certify their properties.')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', type=float, default=None)
    common.add_argument('--seed', type=int, default=settings.SEED)
    common.add_argument('--out')
    common.add_argument('--format', choices=('json', 'csv'), default='csv')
    common.add_argument('--threads', type=int, default=None)
    points = argparse.ArgumentParser(add_help=False)
    points.add_argument('--kernel')
    points.add_argument('--points')
    points.add_argument('--sites')
    points.add_argument('--lift', action='store_true')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('gram', parents=[common, points])
    p.add_argument('--check', choices=('pd', 'psd'))
    p.set_defaults(handler=cmd_gram, required=('kernel', 'points'))

    p = sub.add_parser('check', parents=[common, points])
    p.add_argument('predicate', choices=sorted(choices_as_set(Constants.PREDICATE_CHOICES)))
    p.add_argument('--gamma')
    p.add_argument('--function')
    p.add_argument('--grid', type=float, nargs=2, metavar=('START', 'STOP'))
    p.add_argument('--order', type=int, default=None)
    p.set_defaults(handler=cmd_check, required=())

    p = sub.add_parser('embed', parents=[common, points])
    p.add_argument('--gamma')
    p.add_argument('--base', type=int, default=None)
    p.set_defaults(handler=cmd_embed, required=())

    p = sub.add_parser('matern', parents=[common])
    p.add_argument('--r', type=float, required=True)
    p.add_argument('--alpha', type=float, required=True)
    p.add_argument('--nu', type=float, required=True)
    p.add_argument('--oracle', action='store_true')
    p.set_defaults(handler=cmd_matern, required=())

    p = sub.add_parser('mmd', parents=[common, points])
    p.add_argument('samples', nargs=2)
    p.set_defaults(handler=cmd_mmd, required=('kernel',))

    p = sub.add_parser('classify-matrix-gaussian', parents=[common])
    p.add_argument('--a', required=True)
    p.add_argument('--gamma', required=True)
    p.add_argument('--m', type=int, required=True)
    p.set_defaults(handler=cmd_classify_matrix_gaussian, required=())
    return parser


def configure_logging(verbosity):
    logging.config.dictConfig(settings.LOGGING)
    if verbosity:
        level = logging.INFO if verbosity == 1 else logging.DEBUG
        logging.getLogger('kernelforge').setLevel(level)


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PASS if exc.code == 0 else INPUT_ERROR
    configure_logging(args.verbose)
    missing = [f"--{name}" for name in args.required if not getattr(args, name)]
    if missing:
        sys.stderr.write(f"kernelforge: error: {args.command} needs {', '.join(missing)}\n")
        return INPUT_ERROR
    try:
        return args.handler(args)
    except KernelForgeError as exc:
        sys.stderr.write(f"kernelforge: error: {exc}\n")
        return INPUT_ERROR
    except OSError as exc:
        sys.stderr.write(f"kernelforge: error: {exc.strerror}: {exc.filename}\n")
        return INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())  # pragma: no cover
