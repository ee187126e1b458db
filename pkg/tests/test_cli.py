#!/usr/bin/env python

"""Tests for `kernelforge.cli`."""


import io
import json
import math
import os
import tempfile
import unittest
from unittest import mock

from kernelforge.cli.main import main

GAUSSIAN = {'family': 'gaussian', 'sigma': 1.0}


class CliTestCase(unittest.TestCase):
    """Runs the console script against files in a scratch directory."""

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)

    def write(self, name, content):
        path = os.path.join(self._tmp.name, name)
        with open(path, 'w') as handle:
            if isinstance(content, str):
                handle.write(content)
            else:
                json.dump(content, handle)
        return path

    def path(self, name):
        return os.path.join(self._tmp.name, name)

    def run_cli(self, *argv):
        """Exit code, stdout and stderr of one invocation."""
        with mock.patch('sys.stdout', new_callable=io.StringIO) as out, \
                mock.patch('sys.stderr', new_callable=io.StringIO) as err:
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def report(self, *argv):
        code, out, _ = self.run_cli(*argv)
        return code, json.loads(out)


class TestGramCommand(CliTestCase):

    def test_000_two_points(self):
        """gaussian(1) on {0, e1} is [[1, 1/e], [1/e, 1]] and PD."""
        kernel = self.write('kernel.json', GAUSSIAN)
        points = self.write('points.csv', "x0,x1\n0,0\n1,0\n")
        code, report = self.report('gram', '--kernel', kernel, '--points', points,
                                   '--check', 'pd')
        self.assertEqual(code, 0)
        self.assertTrue(report['passed'])
        matrix = report['numbers']['matrix']
        self.assertEqual(matrix[0][0], 1.0)
        self.assertAlmostEqual(matrix[0][1], math.exp(-1.0), places=15)
        self.assertEqual(report['verdicts'][0]['class'], 'PD')
        self.assertEqual(len(report['inputs']['kernel']), 64)
        self.assertEqual(report['command'], 'gram')

    def test_001_duplicates(self):
        """--check pd on a repeated point fails with the pair."""
        kernel = self.write('kernel.json', GAUSSIAN)
        points = self.write('points.csv', "x0\n0.5\n0.5\n")
        code, report = self.report('gram', '--kernel', kernel, '--points', points,
                                   '--check', 'pd')
        self.assertEqual(code, 1)
        self.assertFalse(report['passed'])
        self.assertEqual(report['numbers']['witness_pair'], [0, 1])

    def test_002_empty(self):
        """A points file without rows is an input error."""
        kernel = self.write('kernel.json', GAUSSIAN)
        points = self.write('points.csv', "x0,x1\n")
        code, out, err = self.run_cli('gram', '--kernel', kernel, '--points', points)
        self.assertEqual(code, 2)
        self.assertEqual(out, '')
        self.assertIn('no points', err)

    def test_003_malformed(self):
        """Bad fields are reported with line and field."""
        kernel = self.write('kernel.json', GAUSSIAN)
        points = self.write('points.csv', "x0\n1.0\nabc\n")
        code, _, err = self.run_cli('gram', '--kernel', kernel, '--points', points)
        self.assertEqual(code, 2)
        self.assertIn("line 3", err)
        self.assertIn("'x0'", err)

    def test_004_out(self):
        """--out writes the matrix as CSV."""
        kernel = self.write('kernel.json', GAUSSIAN)
        points = self.write('points.csv', "x0\n0\n2\n")
        out = self.path('gram.csv')
        code, report = self.report('gram', '--kernel', kernel, '--points', points,
                                   '--out', out)
        self.assertEqual(code, 0)
        self.assertNotIn('matrix', report['numbers'])
        with open(out) as handle:
            rows = [line.split(',') for line in handle.read().splitlines()]
        self.assertEqual(len(rows), 2)
        self.assertAlmostEqual(float(rows[0][1]), math.exp(-4.0), places=15)

    def test_005_schema(self):
        """Unknown fields and families are rejected."""
        points = self.write('points.csv', "x0\n0\n")
        for spec in ({'family': 'gaussian', 'sigma': 1.0, 'extra': 2},
                     {'family': 'laplace', 'sigma': 1.0},
                     {'op': 'schur', 'left': GAUSSIAN}):
            kernel = self.write('kernel.json', spec)
            code, _, err = self.run_cli('gram', '--kernel', kernel, '--points', points)
            self.assertEqual(code, 2)
            self.assertIn('error', err)

    def test_006_usage(self):
        """Missing flags and unknown commands exit with 2."""
        self.assertEqual(self.run_cli('gram')[0], 2)
        self.assertEqual(self.run_cli('plot')[0], 2)
        self.assertEqual(self.run_cli('gram', '--kernel', self.path('missing.json'),
                                      '--points', self.path('missing.csv'))[0], 2)

    def test_007_lift(self):
        """--lift reads chart coordinates as hyperboloid points."""
        kernel = self.write('kernel.json', {'family': 'sech_power', 'r': 2.0})
        points = self.write('points.csv', "x0\n0\n%r\n" % math.sinh(1.0))
        code, report = self.report('gram', '--kernel', kernel, '--points', points, '--lift')
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report['numbers']['matrix'][0][1], 0.419974, places=6)

    def test_008_bad_values(self):
        """Wrongly typed kernel values are input errors naming the field."""
        points = self.write('points.csv', "x0\n0\n1\n")
        for spec in ({'family': 'gaussian', 'sigma': 'abc'},
                     {'family': 'gaussian', 'sigma': None},
                     {'family': 'cm_mixture', 'atoms': [[1.0]]},
                     {'family': 'constant_matrix', 'a': [[1, 2], [3]]}):
            kernel = self.write('kernel.json', spec)
            code, out, err = self.run_cli('gram', '--kernel', kernel, '--points', points)
            self.assertEqual(code, 2, spec)
            self.assertEqual(out, '')
            self.assertIn("field 'kernel'", err)

    def test_009_bad_nested_value(self):
        """A bad value deep in a spec tree names its own position."""
        points = self.write('points.csv', "x0\n0\n1\n")
        kernel = self.write('kernel.json', {
            'op': 'schur', 'left': GAUSSIAN,
            'right': {'family': 'gaussian', 'sigma': [1.0, 2.0]}})
        code, _, err = self.run_cli('gram', '--kernel', kernel, '--points', points)
        self.assertEqual(code, 2)
        self.assertIn("field 'kernel.right'", err)


class TestCheckCommand(CliTestCase):

    def test_000_cnd(self):
        """|x - y|^2 on three points is CND."""
        kernel = self.write('kernel.json', {'family': 'sq_distance'})
        points = self.write('points.csv', "x0\n0\n1\n2\n")
        code, report = self.report('check', 'cnd', '--kernel', kernel, '--points', points)
        self.assertEqual(code, 0)
        self.assertLessEqual(report['numbers']['lambda_max_projected'], 1e-9)
        self.assertIn('CndReport.tol_used', report['tolerances'])

    def test_001_metrizable(self):
        """A constant gamma is not metrizable; the first pair is the witness."""
        gamma = self.write('gamma.csv', "1,1,1\n1,1,1\n1,1,1\n")
        code, report = self.report('check', 'metrizable', '--gamma', gamma)
        self.assertEqual(code, 1)
        self.assertEqual(report['verdicts'][0]['witness'], [0, 1])
        self.assertIn('metrizable.tol', report['tolerances'])

    def test_002_cm(self):
        """sin fails the completely monotone probe; exp(-t) passes."""
        sine = self.write('sine.json', {'kind': 'sine'})
        code, report = self.report('check', 'cm', '--function', sine)
        self.assertEqual(code, 1)
        self.assertIn('first_violation_order', report['numbers'])
        decay = self.write('decay.json', {'kind': 'exp_decay', 'rate': 1.0})
        self.assertEqual(self.run_cli('check', 'cm', '--function', decay)[0], 0)

    def test_003_hyperbolic(self):
        """1 + |x - y|^2 passes check hyperbolic."""
        gamma = self.write('beta.csv', "1,2,5\n2,1,2\n5,2,1\n")
        code, report = self.report('check', 'hyperbolic', '--gamma', gamma)
        self.assertEqual(code, 0)
        self.assertEqual(report['verdicts'][0]['predicate'], 'hyperbolic')

    def test_004_log_conditional(self):
        """Entries below 1 are an input error for log-conditional."""
        gamma = self.write('l.csv', "1,0.5\n0.5,1\n")
        self.assertEqual(self.run_cli('check', 'log-conditional', '--gamma', gamma)[0], 2)

    def test_005_needs_input(self):
        """Matrix predicates need --gamma or --kernel with --points."""
        self.assertEqual(self.run_cli('check', 'cnd')[0], 2)
        self.assertEqual(self.run_cli('check', 'cm')[0], 2)

    def test_006_metrizable_duplicates(self):
        """A repeated point under --kernel is an input error, not a failed check."""
        kernel = self.write('kernel.json', {'family': 'sq_distance'})
        points = self.write('points.csv', "x0\n0\n1\n1\n")
        code, out, err = self.run_cli('check', 'metrizable', '--kernel', kernel,
                                      '--points', points)
        self.assertEqual(code, 2)
        self.assertEqual(out, '')
        self.assertIn('points 1 and 2 coincide', err)
        distinct = self.write('distinct.csv', "x0\n0\n1\n3\n")
        code, report = self.report('check', 'metrizable', '--kernel', kernel,
                                   '--points', distinct)
        self.assertEqual(code, 0)
        self.assertTrue(report['passed'])


class TestEmbedCommand(CliTestCase):

    def test_000_quadratic(self):
        """(i - j)^2 on {0, 1, 2} embeds in one dimension."""
        gamma = self.write('gamma.csv', "0,1,4\n1,0,1\n4,1,0\n")
        out = self.path('coords.csv')
        code, report = self.report('embed', '--gamma', gamma, '--out', out)
        self.assertEqual(code, 0)
        self.assertEqual(report['numbers']['rank'], 1)
        with open(out) as handle:
            self.assertEqual(handle.readline().strip(), 'h0,f')

    def test_001_not_cnd(self):
        """The identity is not CND; lambda_max is reported."""
        gamma = self.write('gamma.csv', "1,0,0\n0,1,0\n0,0,1\n")
        code, report = self.report('embed', '--gamma', gamma)
        self.assertEqual(code, 1)
        self.assertAlmostEqual(report['numbers']['lambda_max_projected'], 1.0, places=10)


class TestMaternCommand(CliTestCase):

    def test_000_origin(self):
        """M(0) = 1."""
        code, report = self.report('matern', '--r', '0', '--alpha', '1', '--nu', '0.5')
        self.assertEqual(code, 0)
        self.assertEqual(report['numbers']['value'], 1.0)

    def test_001_exponential(self):
        """nu = 1/2 is exp(-alpha r)."""
        _, report = self.report('matern', '--r', '1', '--alpha', '2', '--nu', '0.5')
        self.assertAlmostEqual(report['numbers']['value'], math.exp(-2.0), delta=1e-9)

    def test_002_oracle(self):
        """--oracle adds the quadrature value and the gap."""
        code, report = self.report('matern', '--r', '0.7', '--alpha', '1', '--nu', '2.5',
                                   '--oracle')
        self.assertEqual(code, 0)
        self.assertLessEqual(report['numbers']['relative_gap'], 1e-6)
        self.assertIn('oracle.accuracy', report['tolerances'])

    def test_003_invalid(self):
        """nu must be positive."""
        self.assertEqual(self.run_cli('matern', '--r', '1', '--alpha', '1', '--nu', '0')[0], 2)


class TestMmdCommand(CliTestCase):

    def test_000_two_points(self):
        """{0} against {e1} under gaussian(1), in both orders."""
        kernel = self.write('kernel.json', GAUSSIAN)
        a = self.write('a.csv', "x0,x1\n0,0\n")
        b = self.write('b.csv', "x0,x1\n1,0\n")
        code, report = self.report('mmd', '--kernel', kernel, a, b)
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report['numbers']['mmd'], 1.124385, places=6)
        _, swapped = self.report('mmd', '--kernel', kernel, b, a)
        self.assertAlmostEqual(swapped['numbers']['mmd'], report['numbers']['mmd'], places=12)

    def test_001_identical(self):
        """The same file twice is at distance 0."""
        kernel = self.write('kernel.json', GAUSSIAN)
        a = self.write('a.csv', "x0\n0\n1\n3\n")
        _, report = self.report('mmd', '--kernel', kernel, a, a)
        self.assertEqual(report['numbers']['mmd'], 0.0)
        self.assertEqual(report['inputs']['sample_a'], report['inputs']['sample_b'])

    def test_002_weights(self):
        """A weight column makes the sample a signed measure."""
        kernel = self.write('kernel.json', GAUSSIAN)
        a = self.write('a.csv', "x0,x1,weight\n0,0,2\n")
        b = self.write('b.csv', "x0,x1\n1,0\n")
        _, report = self.report('mmd', '--kernel', kernel, a, b)
        # 4 - 4/e + 1
        expected = 5.0 - 4.0 * math.exp(-1.0)
        self.assertAlmostEqual(report['numbers']['energy'], expected, places=12)
        self.assertAlmostEqual(report['numbers']['mmd'], math.sqrt(expected), places=12)


class TestClassifyMatrixGaussianCommand(CliTestCase):

    def run_instance(self, a, gamma):
        return self.report('classify-matrix-gaussian', '--a', self.write('a.csv', a),
                           '--gamma', self.write('gamma.csv', gamma), '--m', '2')

    def test_000_rank_one(self):
        """Rank one a fails both conditions."""
        code, report = self.run_instance("1,1\n1,1\n", "3,3\n3,3\n")
        self.assertEqual(code, 1)
        self.assertFalse(report['verdicts'][0]['spd'])
        self.assertFalse(report['verdicts'][0]['c0_universal'])

    def test_001_pd(self):
        """a = [[2, 1], [1, 2]] with constant Gamma passes."""
        code, report = self.run_instance("2,1\n1,2\n", "3,3\n3,3\n")
        self.assertEqual(code, 0)
        self.assertTrue(report['verdicts'][0]['c0_universal'])

    def test_002_split(self):
        """gamma_12 = 5 gives singleton classes."""
        code, report = self.run_instance("1,0.1\n0.1,1\n", "2,5\n5,2\n")
        self.assertEqual(code, 0)
        self.assertEqual(report['verdicts'][0]['classes'], [[0], [1]])

    def test_003_not_symmetric(self):
        """A non-symmetric matrix file is an input error."""
        code, _, err = self.run_cli(
            'classify-matrix-gaussian', '--a', self.write('a.csv', "1,0\n0.5,1\n"),
            '--gamma', self.write('gamma.csv', "3,3\n3,3\n"), '--m', '2')
        self.assertEqual(code, 2)
        self.assertIn('symmetric', err)
