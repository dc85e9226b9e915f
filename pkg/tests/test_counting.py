import math

import numpy as np
import pytest

from diracssf.counting import (
    LogSpectrum,
    arctan_trace_identity,
    check_flip,
    check_pbound,
    check_pushnitski_bound,
    check_weyl,
    flag_near_threshold,
    mu_average_counting,
    mu_interval,
    n_minus,
    n_plus,
)


def herm(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


def psd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T / n


class TestCountingQueries:
    def test_direct_count(self):
        spec = LogSpectrum.from_eigenvalues([3.0, 2.0, 0.5])
        assert n_plus(1.0, spec) == 2

    def test_sign_flip(self):
        spec = LogSpectrum.from_eigenvalues([-1.0, -2.0])
        assert n_minus(0.5, spec) == 2
        assert n_plus(0.5, spec) == 0

    def test_deep_log_domain(self):
        spec = LogSpectrum.from_log([-100.0 * math.log(10.0), -200.0 * math.log(10.0)])
        assert spec.n_plus(1e-150) == 1
        assert spec.n_plus(1e-250) == 2

    def test_threshold_is_open(self):
        spec = LogSpectrum.from_eigenvalues([1.0, 1.0])
        assert spec.n_plus(1.0) == 0

    def test_rejects_nonpositive_threshold(self):
        spec = LogSpectrum.from_eigenvalues([1.0])
        with pytest.raises(ValueError):
            spec.n_plus(0.0)
        with pytest.raises(ValueError):
            spec.n_minus(-1.0)

    def test_sorted_descending_by_signed_value(self):
        spec = LogSpectrum.from_eigenvalues([-2.0, 3.0, 0.0, -0.5, 1.0])
        vals = spec.values()
        assert np.allclose(vals, [3.0, 1.0, 0.0, -0.5, -2.0], rtol=1e-14)
        assert np.array_equal(spec.signs, [1, 1, 0, -1, -1])

    def test_counts_are_monotone_step_functions(self, rng):
        spec = LogSpectrum.from_eigenvalues(rng.standard_normal(30))
        grid = np.geomspace(1e-3, 10.0, 50)
        np_vals = [spec.n_plus(s) for s in grid]
        nm_vals = [spec.n_minus(s) for s in grid]
        assert all(a >= b for a, b in zip(np_vals, np_vals[1:]))
        assert all(a >= b for a, b in zip(nm_vals, nm_vals[1:]))

    def test_near_threshold_flag(self):
        spec = LogSpectrum.from_eigenvalues([1.0])
        assert flag_near_threshold(spec, 1.0 + 1e-15)
        assert not flag_near_threshold(spec, 1.1)


class TestWeyl:
    def test_scalar_case(self):
        assert check_weyl(1.0, 1.0, np.diag([2.0]), np.diag([2.0]))

    def test_cancellation(self):
        t = np.diag([2.0, -1.0])
        assert check_weyl(1.0, 1.0, t, -t)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            check_weyl(1.0, 1.0, np.eye(2), np.eye(3))

    def test_randomized_sweep(self, rng):
        for _ in range(300):
            s1, s2 = np.abs(rng.standard_normal(2)) + 0.05
            assert check_weyl(s1, s2, herm(rng, 20), herm(rng, 20))


class TestSchattenBound:
    def test_boundary_adjacent(self):
        spec = LogSpectrum.from_eigenvalues([1.0, 1.0])
        assert check_pbound(1.0, spec, 1)

    def test_single_eigenvalue(self):
        assert check_pbound(1.0, LogSpectrum.from_eigenvalues([2.0]), 2)

    def test_randomized_psd(self, rng):
        for _ in range(60):
            spec = LogSpectrum.from_eigenvalues(np.linalg.eigvalsh(psd(rng, 30)))
            for p in (1, 2, 4):
                assert check_pbound(0.3, spec, p)


class TestMuAverage:
    def test_cauchy_tail(self):
        val = mu_average_counting(1.0, np.zeros((1, 1)), np.ones((1, 1)))
        assert val == pytest.approx(0.25, abs=1e-12)

    def test_constant_integrand(self):
        val = mu_average_counting(1.0, np.diag([2.0]), np.zeros((1, 1)))
        assert val == pytest.approx(1.0, abs=0)

    def test_small_threshold_half_line(self):
        val = mu_average_counting(1e-12, np.zeros((1, 1)), np.diag([1.0]))
        assert val == pytest.approx(0.5, abs=1e-9)

    def test_negative_count_side(self):
        # n_- of (t * 1) counts t < -s
        val = mu_average_counting(1.0, np.zeros((1, 1)), np.ones((1, 1)), sign=-1)
        assert val == pytest.approx(0.25, abs=1e-12)

    def test_mu_interval_normalised(self):
        assert mu_interval(-np.inf, np.inf) == pytest.approx(1.0)


class TestArctanTrace:
    def test_single_unit_eigenvalue(self):
        lhs, rhs = arctan_trace_identity(1.0, LogSpectrum.from_eigenvalues([1.0]))
        assert lhs == pytest.approx(0.25, abs=1e-14)
        assert rhs == pytest.approx(0.25, abs=1e-14)

    def test_empty_spectrum(self):
        lhs, rhs = arctan_trace_identity(2.0, LogSpectrum.from_log(np.empty(0)))
        assert lhs == rhs == 0.0

    def test_rejects_negative_eigenvalues(self):
        with pytest.raises(ValueError):
            arctan_trace_identity(1.0, LogSpectrum.from_eigenvalues([-1.0]))

    def test_quadrature_path_matches_closed_form(self, rng):
        for _ in range(12):
            dim = int(rng.integers(5, 51))
            t = psd(rng, dim)
            spec = LogSpectrum.from_eigenvalues(np.linalg.eigvalsh(t),
                                                zero_floor=1e-14)
            s = float(np.abs(rng.standard_normal()) + 0.1)
            _, rhs = arctan_trace_identity(s, spec)
            quad = mu_average_counting(s, np.zeros_like(t), t)
            assert abs(quad - rhs) < 1e-10


class TestFlip:
    def test_rank_one_row(self):
        assert check_flip(np.array([[1.0, 0.0, 0.0]]))

    def test_zero_matrix(self):
        assert check_flip(np.zeros((3, 5)))

    def test_random_rectangular_with_thresholds(self, rng):
        for _ in range(40):
            b = rng.standard_normal((7, 20))
            assert check_flip(b)
            for s in np.abs(rng.standard_normal(5)) + 0.01:
                assert check_flip(b, s=float(s))


class TestCountingAverageBound:
    def test_rank_one_example(self):
        # mu((2, inf)) ~ 0.1476 vs trace bound 1/pi ~ 0.3183
        assert check_pushnitski_bound(1.0, 1.0, np.zeros((1, 1)), np.eye(1))

    def test_zero_perturbation_reduces_to_monotonicity(self, rng):
        t1 = herm(rng, 6)
        assert check_pushnitski_bound(0.5, 0.5, t1, np.zeros((6, 6)))

    def test_randomized_sweep(self, rng):
        for _ in range(50):
            t1 = herm(rng, 15)
            t2 = psd(rng, 15)
            assert check_pushnitski_bound(0.6, 0.8, t1, t2)
            assert check_pushnitski_bound(0.6, 0.8, t1, t2, sign=-1)


def test_log_spectrum_scaling_and_union():
    spec = LogSpectrum.from_eigenvalues([4.0, 1.0])
    scaled = spec.scaled(math.log(0.5))
    assert np.allclose(np.sort(scaled.values()), [0.5, 2.0])
    merged = spec.union(scaled)
    assert len(merged) == 4
    assert merged.n_plus(1.5) == 2
