#!/usr/bin/env python

"""Tests for `kernelforge.mmd`."""


import math
import unittest

import numpy as np

from kernelforge.cnd import schoenberg_transform
from kernelforge.core import Constant, spec_digest
from kernelforge.exceptions import DuplicatePointError, InputError, ParameterError
from kernelforge.families import gaussian
from kernelforge.hyperbolic import lift, sech_power_kernel
from kernelforge.mmd import (
    DiscreteMeasure, energy, energy_report, mmd_distance, mmd_inner, spd_probe,
)
from kernelforge.numerics import PsdClass

GAP = 2.0 - 2.0 * math.exp(-1.0)


def random_measure(rng, n, dim=2):
    points = rng.uniform(-2.0, 2.0, (n, dim))
    weights = rng.standard_normal(n)
    return DiscreteMeasure(tuple(zip(map(tuple, points), weights)))


class TestMeasures(unittest.TestCase):
    """Tests for DiscreteMeasure."""

    def test_000_empirical(self):
        """Empirical weights are equal and sum to the total."""
        lam = DiscreteMeasure.empirical([(0.0,), (1.0,), (2.0,), (3.0,)])
        self.assertEqual(list(lam.weights), [0.25] * 4)
        self.assertEqual(len(lam), 4)

    def test_001_difference(self):
        """mu - nu keeps the atoms of both, with nu negated."""
        lam = DiscreteMeasure.empirical([(0.0,)]) - DiscreteMeasure.empirical([(1.0,), (2.0,)])
        self.assertEqual(list(lam.weights), [1.0, -0.5, -0.5])

    def test_002_invalid(self):
        """Weights must be finite; empirical measures need a point."""
        with self.assertRaises(InputError):
            DiscreteMeasure((((0.0,), float('nan')),))
        with self.assertRaises(InputError):
            DiscreteMeasure.empirical([])


class TestEnergy(unittest.TestCase):
    """Tests for energy and mmd_inner."""

    def test_000_cancelling(self):
        """delta_x - delta_x has zero energy."""
        lam = DiscreteMeasure((((0.5,), 1.0), ((0.5,), -1.0)))
        self.assertEqual(energy(gaussian(1.0), lam), 0.0)

    def test_001_two_points(self):
        """delta_0 - delta_e1 under gaussian(1) gives 2 - 2/e."""
        lam = DiscreteMeasure((((0.0, 0.0), 1.0), ((1.0, 0.0), -1.0)))
        self.assertLessEqual(abs(energy(gaussian(1.0), lam) - GAP), 1e-12)

    def test_002_report(self):
        """The report carries the atom count and the kernel digest."""
        spec = gaussian(1.0)
        report = energy_report(spec, [((0.0,), 1.0), ((2.0,), 0.5)])
        self.assertEqual(report.n_atoms, 2)
        self.assertEqual(report.kernel_id, spec_digest(spec))
        self.assertEqual(report.to_dict()['value'], report.value)

    def test_003_quadratic(self):
        """energy(alpha lambda) = alpha^2 energy(lambda)."""
        rng = np.random.default_rng(0)
        spec = gaussian(0.5)
        for _ in range(10):
            lam = random_measure(rng, 6)
            alpha = rng.uniform(-3.0, 3.0)
            base = energy(spec, lam)
            self.assertAlmostEqual(
                energy(spec, lam.scaled(alpha)), alpha * alpha * base,
                delta=1e-12 * max(1.0, alpha * alpha * base))

    def test_004_nonnegative(self):
        """PD kernels give nonnegative energy on random signed measures."""
        rng = np.random.default_rng(1)
        for spec in (gaussian(1.0), gaussian(3.0)):
            for _ in range(50):
                lam = random_measure(rng, 8)
                c = lam.weights
                self.assertGreaterEqual(energy(spec, lam), -1e-10 * 8 * float(c @ c))

    def test_005_inner(self):
        """Single atoms give K(x, x) and K(0, e1)."""
        spec = gaussian(1.0)
        x = DiscreteMeasure((((0.0, 0.0), 1.0),))
        y = DiscreteMeasure((((1.0, 0.0), 1.0),))
        self.assertEqual(mmd_inner(spec, x, x), 1.0)
        self.assertAlmostEqual(mmd_inner(spec, x, y), math.exp(-1.0), places=15)

    def test_006_inner_energy(self):
        """mmd_inner(lambda, lambda) equals energy(lambda)."""
        rng = np.random.default_rng(2)
        lam = random_measure(rng, 7)
        spec = gaussian(1.0)
        self.assertAlmostEqual(mmd_inner(spec, lam, lam), energy(spec, lam), places=12)

    def test_007_cauchy_schwarz(self):
        """<mu, nu>^2 <= |mu|^2 |nu|^2."""
        rng = np.random.default_rng(3)
        spec = gaussian(1.0)
        for _ in range(20):
            mu = random_measure(rng, 5)
            nu = random_measure(rng, 4)
            lhs = mmd_inner(spec, mu, nu) ** 2
            self.assertLessEqual(lhs, energy(spec, mu) * energy(spec, nu) + 1e-10)

    def test_008_empty(self):
        """A measure with no atoms is rejected."""
        with self.assertRaises(InputError):
            energy(gaussian(1.0), [])


class TestDistance(unittest.TestCase):
    """Tests for mmd_distance."""

    def test_000_identical(self):
        """Identical samples, in any order, are at distance 0."""
        a = [(0.0,), (1.0,), (1.0,)]
        self.assertEqual(mmd_distance(gaussian(1.0), a, list(reversed(a))), 0.0)

    def test_001_two_points(self):
        """{0} and {e1} are sqrt(2 - 2/e) apart."""
        d = mmd_distance(gaussian(1.0), [(0.0, 0.0)], [(1.0, 0.0)])
        self.assertAlmostEqual(d, 1.124385, places=6)
        self.assertAlmostEqual(d, math.sqrt(GAP), places=12)

    def test_002_symmetric(self):
        """Swapping the samples gives the same value."""
        rng = np.random.default_rng(4)
        a = list(map(tuple, rng.normal(size=(5, 2))))
        b = list(map(tuple, rng.normal(size=(7, 2))))
        spec = gaussian(1.0)
        self.assertAlmostEqual(mmd_distance(spec, a, b), mmd_distance(spec, b, a), places=12)

    def test_003_triangle(self):
        """MMD is a distance on samples."""
        rng = np.random.default_rng(5)
        spec = gaussian(1.0)
        for _ in range(50):
            a, b, c = (list(map(tuple, rng.normal(size=(4, 2)))) for _ in range(3))
            self.assertLessEqual(
                mmd_distance(spec, a, c),
                mmd_distance(spec, a, b) + mmd_distance(spec, b, c) + 1e-10)

    def test_004_empty(self):
        """Both samples must be nonempty."""
        with self.assertRaises(InputError):
            mmd_distance(gaussian(1.0), [], [(0.0,)])


class TestSpdProbe(unittest.TestCase):
    """Tests for spd_probe."""

    def test_000_gaussian(self):
        """gaussian(1) on 20 distinct points is SPD there."""
        points = [(float(i), float(j)) for i in range(5) for j in range(4)]
        report = spd_probe(gaussian(1.0), points, trials=8)
        self.assertTrue(report.verdict)
        self.assertIsNone(report.witness)
        self.assertGreater(report.details['min_energy'], 0.0)

    def test_001_sech_power(self):
        """sech_power(1) on 20 hyperboloid points is SPD there."""
        points = []
        for k, radius in enumerate((1.0, 2.0)):
            for j in range(10):
                theta = 2.0 * math.pi * (j + 0.5 * k) / 10
                r = math.sinh(radius)
                points.append(lift((r * math.cos(theta), r * math.sin(theta))))
        self.assertTrue(spd_probe(sech_power_kernel(1.0), points, trials=4).verdict)

    def test_002_constant_gamma(self):
        """exp(-t c) is PSD but not PD, with the zero energy direction as witness."""
        spec = schoenberg_transform(Constant(2.0), 1.0)
        report = spd_probe(spec, [(0.0,), (1.0,)], trials=4)
        self.assertFalse(report.verdict)
        self.assertIs(report.details['verdict'].psd_class, PsdClass.PSD)
        self.assertAlmostEqual(report.witness[0], math.sqrt(0.5), places=8)
        self.assertAlmostEqual(report.witness[1], -math.sqrt(0.5), places=8)

    def test_003_duplicates(self):
        """Coinciding points are rejected with their indices."""
        with self.assertRaises(DuplicatePointError) as ctx:
            spd_probe(gaussian(1.0), [(0.0,), (1.0,), (0.0,)])
        self.assertEqual(ctx.exception.indices, (0, 2))

    def test_004_deterministic(self):
        """A fixed seed fixes the report, however trials are spread over threads."""
        points = [(float(i),) for i in range(6)]
        spec = gaussian(0.5)
        first = spd_probe(spec, points, trials=16, seed=7, threads=1)
        second = spd_probe(spec, points, trials=16, seed=7, threads=4)
        other = spd_probe(spec, points, trials=16, seed=8, threads=1)
        self.assertEqual(first.details['min_energy'], second.details['min_energy'])
        self.assertEqual(first.to_dict(), second.to_dict())
        self.assertNotEqual(first.details['min_energy'], other.details['min_energy'])

    def test_005_trials(self):
        """At least one trial is required."""
        with self.assertRaises(ParameterError):
            spd_probe(gaussian(1.0), [(0.0,), (1.0,)], trials=0)
