"""Tests for the shared numerical kernels."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaugecurves.errors import (
    MaxIterations,
    NonMonotoneGrid,
    NoSignChange,
    SingularSystem,
)
from gaugecurves.numerics import (
    central_diff,
    central_diff_5pt,
    cumulative_trapezoid,
    fd_step,
    find_root_bracketed,
    integrate_trapezoid,
    require_increasing,
    second_diff,
    solve2x2,
    solve3x3,
    vec3,
)

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def test_vec3_dtype_and_shape():
    v = vec3(1, 2, 3)
    assert v.shape == (3,)
    assert v.dtype == np.float64


def test_fd_step_floors_at_one():
    assert fd_step(0.0, 1e-5) == 1e-5
    assert fd_step(0.5, 1e-5) == 1e-5
    assert fd_step(-3.0, 1e-5) == pytest.approx(3e-5, rel=1e-12)


class TestSolve3x3:
    def test_identity(self):
        x = solve3x3((vec3(1, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1)), vec3(4, 5, 6))
        np.testing.assert_allclose(x, [4, 5, 6])

    def test_roundtrip_random(self, rng):
        for _ in range(1000):
            cols = rng.standard_normal((3, 3))
            x_true = rng.standard_normal(3)
            rhs = cols.T @ x_true  # columns are cols[0], cols[1], cols[2]
            try:
                x = solve3x3((cols[0], cols[1], cols[2]), rhs)
            except SingularSystem:
                continue
            np.testing.assert_allclose(x, x_true, rtol=1e-8, atol=1e-8)

    def test_singular_raises(self):
        with pytest.raises(SingularSystem):
            solve3x3((vec3(1, 0, 0), vec3(2, 0, 0), vec3(0, 0, 1)), vec3(1, 1, 1))

    def test_zero_columns_raise(self):
        with pytest.raises(SingularSystem):
            solve3x3((vec3(0, 0, 0), vec3(0, 1, 0), vec3(0, 0, 1)), vec3(1, 1, 1))

    @settings(deadline=None, max_examples=100)
    @given(st.lists(finite, min_size=12, max_size=12))
    def test_roundtrip_property(self, vals):
        cols = np.array(vals[:9]).reshape(3, 3)
        x_true = np.array(vals[9:])
        rhs = cols.T @ x_true
        try:
            x = solve3x3((cols[0], cols[1], cols[2]), rhs)
        except SingularSystem:
            return
        residual = cols.T @ x - rhs
        assert np.max(np.abs(residual)) <= 1e-6 * max(1.0, np.max(np.abs(rhs)))


class TestSolve2x2:
    def test_exact(self):
        x1, x2 = solve2x2(2.0, 1.0, 1.0, 3.0, 5.0, 10.0)
        np.testing.assert_allclose([2 * x1 + x2, x1 + 3 * x2], [5.0, 10.0])

    def test_singular_raises(self):
        with pytest.raises(SingularSystem):
            solve2x2(1.0, 2.0, 2.0, 4.0, 1.0, 1.0)


class TestDifferences:
    def test_central_diff_exp(self):
        d = central_diff(math.exp, 1.0, 1e-6)
        assert abs(d - math.e) < 1e-9

    def test_central_diff_vector_valued(self):
        d = central_diff(lambda t: np.array([t * t, t**3]), 2.0, 1e-6)
        np.testing.assert_allclose(d, [4.0, 12.0], atol=1e-8)

    def test_central_diff_5pt_beats_3pt_at_coarse_step(self):
        # The fourth-order stencil exists so a larger h can be used; at
        # h = 1e-2 it must be far more accurate than the 3-point formula.
        h = 1e-2
        e3 = abs(central_diff(math.exp, 1.0, h) - math.e)
        e5 = abs(central_diff_5pt(math.exp, 1.0, h) - math.e)
        assert e5 < e3 / 100.0
        assert e5 < 1e-9

    def test_second_diff(self):
        d = second_diff(lambda t: t**4, 1.5, 1e-4)
        assert abs(d - 12 * 1.5**2) < 1e-5

    def test_positive_step_required(self):
        with pytest.raises(ValueError):
            central_diff(math.sin, 0.0, 0.0)
        with pytest.raises(ValueError):
            central_diff_5pt(math.sin, 0.0, -1.0)
        with pytest.raises(ValueError):
            second_diff(math.sin, 0.0, 0.0)

    @settings(deadline=None, max_examples=50)
    @given(st.floats(min_value=-2.0, max_value=2.0))
    def test_central_diff_converges_on_exp(self, t):
        # Error should drop roughly like h^2 between h and h/4.
        coarse = abs(central_diff(math.exp, t, 1e-3) - math.exp(t))
        fine = abs(central_diff(math.exp, t, 2.5e-4) - math.exp(t))
        assert fine <= coarse / 4.0 + 1e-12


class TestGrids:
    def test_require_increasing_ok(self):
        g = require_increasing([0.0, 1.0, 2.5])
        assert g.dtype == np.float64

    def test_require_increasing_rejects_ties(self):
        with pytest.raises(NonMonotoneGrid):
            require_increasing([0.0, 1.0, 1.0])

    def test_require_increasing_rejects_decreasing(self):
        with pytest.raises(NonMonotoneGrid):
            require_increasing([0.0, 2.0, 1.0])


class TestTrapezoid:
    def test_linear_exact(self):
        x = np.linspace(0, 2, 9)
        acc = cumulative_trapezoid(x, 3.0 * x)
        np.testing.assert_allclose(acc, 1.5 * x * x, atol=1e-14)

    def test_matrix_columns(self):
        x = np.linspace(0, 1, 11)
        y = np.column_stack([x, 2 * x])
        acc = cumulative_trapezoid(x, y)
        np.testing.assert_allclose(acc[:, 1], 2 * acc[:, 0], atol=1e-15)

    def test_starts_at_zero(self):
        acc = cumulative_trapezoid([1.0, 2.0, 4.0], [5.0, 5.0, 5.0])
        assert acc[0] == 0.0
        assert acc[-1] == pytest.approx(15.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            cumulative_trapezoid([0.0, 1.0], [1.0, 2.0, 3.0])

    def test_pairs_wrapper(self):
        out = integrate_trapezoid([(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)])
        assert out == [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]

    def test_pairs_wrapper_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            integrate_trapezoid([(0.0, 1.0, 2.0)])

    @settings(deadline=None, max_examples=100)
    @given(
        st.lists(
            st.floats(min_value=-5.0, max_value=5.0, allow_nan=False),
            min_size=5,
            max_size=30,
        ),
        st.integers(min_value=2, max_value=20),
    )
    def test_additivity_property(self, values, split):
        # Integral over [x0, xk] + integral over [xk, xn] equals the whole.
        n = len(values)
        x = np.linspace(0.0, 1.0, n)
        y = np.array(values)
        k = min(split, n - 2)
        whole = cumulative_trapezoid(x, y)[-1]
        left = cumulative_trapezoid(x[: k + 1], y[: k + 1])[-1]
        right = cumulative_trapezoid(x[k:], y[k:])[-1]
        assert abs((left + right) - whole) <= 1e-10 * max(1.0, abs(whole))


class TestRootFinder:
    def test_cubic_root(self):
        x = find_root_bracketed(lambda u: u**3 - 2.0, 0.0, 2.0)
        assert abs(x - 2.0 ** (1.0 / 3.0)) < 1e-12

    def test_exact_endpoint(self):
        assert find_root_bracketed(lambda u: u, 0.0, 1.0) == 0.0

    def test_no_sign_change(self):
        with pytest.raises(NoSignChange):
            find_root_bracketed(lambda u: u * u + 1.0, -1.0, 1.0)

    def test_bad_bracket_order(self):
        with pytest.raises(ValueError):
            find_root_bracketed(lambda u: u, 1.0, 0.0)

    def test_max_iterations(self):
        # A function whose root cannot be resolved to the requested
        # tolerance: a jump passing through zero only in the limit.
        def jump(u):
            return 1.0 if u > math.pi / 10 else -1.0

        with pytest.raises(MaxIterations):
            find_root_bracketed(jump, 0.0, 1.0, root_tol=1e-30)

    def test_residual_at_machine_level(self):
        # The polish phase should leave essentially no residual for a
        # smooth well-conditioned function.
        f = lambda u: math.expm1(u - 1.2345)
        x = find_root_bracketed(f, 0.0, 3.0)
        assert abs(f(x)) < 1e-14

    @settings(deadline=None, max_examples=60)
    @given(st.floats(min_value=-3.0, max_value=3.0))
    def test_finds_translated_root(self, c):
        x = find_root_bracketed(lambda u: u - c, c - 1.0, c + 1.0 + 1e-9)
        assert abs(x - c) < 1e-10
