#!/usr/bin/env python

"""Tests for `kernelforge.numerics`."""


import math
import unittest

import numpy as np

from kernelforge.constants import Constants
from kernelforge.exceptions import DomainError, InputError, NumericalError, RangeError
from kernelforge.numerics import (
    PsdClass, SymMatrix, bessel_k, bessel_k_integral, classify_psd, gamma_fn,
    numerical_rank, quad_semi_infinite, sym_eigen,
)


class TestSymMatrix(unittest.TestCase):
    """Tests for the symmetric matrix type."""

    def test_000_upper_triangle_wins(self):
        """The lower triangle is overwritten by the mirrored upper one."""
        m = SymMatrix([[1.0, 2.0], [5.0, 3.0]])
        self.assertEqual(m.entries[1, 0], 2.0)
        self.assertEqual(m.n, 2)

    def test_001_rejects_non_finite(self):
        """NaN entries are an input error."""
        with self.assertRaises(InputError):
            SymMatrix([[1.0, float('nan')], [0.0, 1.0]])

    def test_002_rejects_non_square(self):
        """A 2x3 array is not a symmetric matrix."""
        with self.assertRaises(InputError):
            SymMatrix(np.zeros((2, 3)))

    def test_003_read_only(self):
        """Stored entries cannot be modified in place."""
        m = SymMatrix(np.eye(2))
        with self.assertRaises(ValueError):
            m.entries[0, 0] = 5.0


class TestSymEigen(unittest.TestCase):
    """Tests for both eigensolvers."""

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_000_diagonal(self):
        """diag(2, 3) has eigenvalues 2 and 3."""
        for method in ('lapack', 'jacobi'):
            values = sym_eigen(np.diag([3.0, 2.0]), method=method).eigenvalues
            np.testing.assert_allclose(values, [2.0, 3.0], atol=1e-14)

    def test_001_swap(self):
        """[[0, 1], [1, 0]] has eigenvalues -1 and 1."""
        for method in ('lapack', 'jacobi'):
            values = sym_eigen([[0.0, 1.0], [1.0, 0.0]], method=method).eigenvalues
            np.testing.assert_allclose(values, [-1.0, 1.0], atol=1e-14)

    def test_002_rank_one(self):
        """The 3x3 all-ones matrix has eigenvalues 0, 0, 3."""
        for method in ('lapack', 'jacobi'):
            values = sym_eigen(np.ones((3, 3)), method=method).eigenvalues
            np.testing.assert_allclose(values, [0.0, 0.0, 3.0], atol=1e-12)

    def test_003_trace_and_reconstruction(self):
        """Eigenvalues sum to the trace and V diag V^T rebuilds the matrix."""
        for n in (1, 5, 20, 40):
            a = self.rng.standard_normal((n, n))
            a = SymMatrix(a + a.T)
            scale = max(1.0, a.max_abs)
            for method in ('lapack', 'jacobi'):
                spectrum = sym_eigen(a, vectors=True, method=method)
                values = spectrum.eigenvalues
                self.assertTrue(np.all(np.diff(values) >= 0))
                self.assertLessEqual(abs(values.sum() - np.trace(a.entries)), 1e-9 * n * scale)
                v = spectrum.eigenvectors
                rebuilt = v @ np.diag(values) @ v.T
                self.assertLessEqual(np.max(np.abs(rebuilt - a.entries)), 1e-9 * scale)

    def test_004_solvers_agree(self):
        """Jacobi and LAPACK eigenvalues agree on random matrices."""
        a = self.rng.standard_normal((30, 30))
        a = a + a.T
        np.testing.assert_allclose(
            sym_eigen(a, method='jacobi').eigenvalues,
            sym_eigen(a, method='lapack').eigenvalues, atol=1e-9)

    def test_005_empty(self):
        """A 0x0 matrix has an empty spectrum."""
        self.assertEqual(len(sym_eigen(np.zeros((0, 0)))), 0)


class TestClassifyPsd(unittest.TestCase):
    """Tests for the PD / PSD / INDEFINITE classifier."""

    def test_000_identity(self):
        """The identity is PD with lambda_min 1."""
        verdict = classify_psd(np.eye(2))
        self.assertIs(verdict.psd_class, PsdClass.PD)
        self.assertAlmostEqual(verdict.lambda_min, 1.0)

    def test_001_rank_one(self):
        """[[1, 1], [1, 1]] is PSD with lambda_min 0."""
        verdict = classify_psd(np.ones((2, 2)))
        self.assertIs(verdict.psd_class, PsdClass.PSD)
        self.assertAlmostEqual(verdict.lambda_min, 0.0, places=12)

    def test_002_indefinite(self):
        """[[0, 1], [1, 0]] is indefinite with lambda_min -1."""
        verdict = classify_psd([[0.0, 1.0], [1.0, 0.0]])
        self.assertIs(verdict.psd_class, PsdClass.INDEFINITE)
        self.assertAlmostEqual(verdict.lambda_min, -1.0)

    def test_003_tolerance_rule(self):
        """tol_used is tol_scale times max(1, lambda_max)."""
        verdict = classify_psd(np.diag([1e-3, 10.0]), tol_scale=1e-6)
        self.assertAlmostEqual(verdict.tol_used, 1e-5)
        self.assertTrue(verdict.is_pd)

    def test_004_diagonal_shift_keeps_pd(self):
        """Adding eps I to a PD matrix keeps it PD."""
        rng = np.random.default_rng(3)
        b = rng.standard_normal((8, 8))
        a = b @ b.T + 0.1 * np.eye(8)
        self.assertTrue(classify_psd(a).is_pd)
        for eps in (0.0, 1e-12, 1.0, 100.0):
            self.assertTrue(classify_psd(a + eps * np.eye(8)).is_pd)

    def test_005_to_dict(self):
        """The verdict serializes its class name."""
        self.assertEqual(classify_psd(np.eye(2)).to_dict()['class'], 'PD')

    def test_006_separate_thresholds(self):
        """The PSD band is 1e-10 n, the PD threshold 1e-8, both times max(1, lambda_max)."""
        verdict = classify_psd(np.diag([5e-9, 1.0, 1.0, 1.0]))
        self.assertAlmostEqual(verdict.tol_used, 4e-10, delta=1e-24)
        self.assertAlmostEqual(verdict.pd_tol, 1e-8, delta=1e-22)
        self.assertIs(verdict.psd_class, PsdClass.PSD)
        self.assertIs(classify_psd(np.diag([2e-8, 1.0])).psd_class, PsdClass.PD)

    def test_007_narrow_psd_band(self):
        """A negative eigenvalue outside 1e-10 n is indefinite even below 1e-8."""
        verdict = classify_psd(np.diag([-5e-9, 1.0]))
        self.assertIs(verdict.psd_class, PsdClass.INDEFINITE)
        self.assertIs(classify_psd(np.diag([-1e-10, 1.0])).psd_class, PsdClass.PSD)

    def test_008_class_names(self):
        """Verdict classes serialize to the catalog names."""
        self.assertEqual(PsdClass.PD.value, Constants.PSD_CLASS_PD)
        self.assertEqual(classify_psd(np.ones((2, 2))).to_dict()['class'], Constants.PSD_CLASS_PSD)
        self.assertEqual(classify_psd(-np.eye(2)).to_dict()['class'],
                         Constants.PSD_CLASS_INDEFINITE)


class TestSpecialFunctions(unittest.TestCase):
    """Tests for gamma_fn and bessel_k."""

    def test_000_gamma_factorials(self):
        """Gamma(1) = 1 and Gamma(5) = 24."""
        self.assertEqual(gamma_fn(1.0), 1.0)
        self.assertAlmostEqual(gamma_fn(5.0), 24.0, places=12)

    def test_001_gamma_half(self):
        """Gamma(1/2) matches the quadrature of t^(-1/2) e^(-t)."""
        value = quad_semi_infinite(lambda t: t ** -0.5 * np.exp(-t), accuracy=1e-12)
        self.assertAlmostEqual(gamma_fn(0.5), math.sqrt(math.pi), places=13)
        self.assertAlmostEqual(gamma_fn(0.5), value, places=9)

    def test_002_gamma_errors(self):
        """Gamma needs x > 0 and overflows past 171.6."""
        with self.assertRaises(DomainError):
            gamma_fn(0.0)
        with self.assertRaises(RangeError):
            gamma_fn(172.0)

    def test_003_bessel_half_integer(self):
        """K_1/2 and K_3/2 from their closed forms."""
        self.assertAlmostEqual(bessel_k(0.5, 1.0), math.sqrt(math.pi / 2) * math.exp(-1), places=14)
        self.assertAlmostEqual(bessel_k(0.5, 2.0), math.sqrt(math.pi / 4) * math.exp(-2), places=14)
        expected = 2 * math.sqrt(math.pi / 2) * math.exp(-1)
        self.assertAlmostEqual(bessel_k(1.5, 1.0), expected, places=13)

    def test_004_bessel_against_integral(self):
        """bessel_k agrees with the cosh integral representation."""
        for nu in (0.0, 0.3, 1.0, 2.5, 4.2):
            for z in (0.05, 0.5, 1.0, 5.0, 20.0):
                expected = bessel_k_integral(nu, z)
                self.assertLessEqual(abs(bessel_k(nu, z) - expected), 1e-9 * expected)

    def test_005_bessel_recurrence(self):
        """K_(nu+1) - K_(nu-1) = (2 nu / z) K_nu."""
        for nu in (1.0, 1.5, 2.25, 3.0, 7.5):
            for z in (0.1, 1.0, 3.0, 10.0):
                lhs = bessel_k(nu + 1, z) - bessel_k(nu - 1, z)
                rhs = 2 * nu / z * bessel_k(nu, z)
                self.assertLessEqual(abs(lhs - rhs), 1e-8 * abs(rhs))

    def test_006_bessel_domain(self):
        """K_nu needs z > 0."""
        with self.assertRaises(DomainError):
            bessel_k(1.0, 0.0)


class TestQuadrature(unittest.TestCase):
    """Tests for the semi-infinite quadrature."""

    def test_000_exponential(self):
        """int e^(-t) = 1."""
        self.assertAlmostEqual(quad_semi_infinite(lambda t: np.exp(-t)), 1.0, places=9)

    def test_001_half_gaussian(self):
        """int e^(-t^2) = Gamma(1/2) / 2."""
        value = quad_semi_infinite(lambda t: np.exp(-t * t), accuracy=1e-12)
        self.assertAlmostEqual(value, gamma_fn(0.5) / 2, places=10)

    def test_002_matern_density(self):
        """The Matern mixing density integrates to one."""
        for alpha in (0.5, 1.0, 2.0):
            for nu in (0.5, 1.5, 2.5):
                a = alpha * alpha / 4

                def density(t):
                    return np.exp(nu * np.log(a) - (1 + nu) * np.log(t) - a / t
                                  - math.lgamma(nu))

                self.assertAlmostEqual(quad_semi_infinite(density, accuracy=1e-12), 1.0, places=8)

    def test_003_cap(self):
        """Running out of nodes raises with the partial value."""
        with self.assertRaises(NumericalError) as ctx:
            quad_semi_infinite(lambda t: np.exp(-t), max_nodes=10)
        self.assertIsNotNone(ctx.exception.partial)


class TestRank(unittest.TestCase):
    """Tests for numerical_rank."""

    def test_000_rank(self):
        """An outer product has rank one."""
        u = np.arange(1.0, 5.0)
        self.assertEqual(numerical_rank(np.outer(u, u)), 1)
        self.assertEqual(numerical_rank(np.eye(3)), 3)
