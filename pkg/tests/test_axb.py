import math

import numpy as np
import pytest

from covchar.axb import (
    AXB_IDENTITY,
    AxbFunction,
    AxbPoint,
    QuadratureGrid,
    adjointness_residual_axb,
    check_truncation,
    contraction_residual_axb,
    covariance_residual_axb,
    gaussian_closed_form,
    gaussian_residual_axb,
    intertwine_left_residual_axb,
    refinement_factors,
    run_axb_suite,
    sigma_check_axb,
    sigma_measure_axb,
    t_xi_axb,
    weil_check_axb,
)
from covchar.errors import GridTooCoarse, TruncationViolation


@pytest.fixture(scope="module")
def grid():
    return QuadratureGrid()


class TestGroupLaw:
    def test_identity_and_inverse(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            x = AxbPoint(math.exp(rng.uniform(-2, 2)), rng.uniform(-5, 5))
            assert x.mul(AXB_IDENTITY) == x
            e = x.mul(x.inv())
            assert e.a == pytest.approx(1.0)
            assert e.b == pytest.approx(0.0, abs=1e-12)

    def test_associativity(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            x, y, z = (
                AxbPoint(math.exp(rng.uniform(-1, 1)), rng.uniform(-3, 3))
                for _ in range(3)
            )
            lhs = x.mul(y).mul(z)
            rhs = x.mul(y.mul(z))
            assert lhs.a == pytest.approx(rhs.a, rel=1e-12)
            assert lhs.b == pytest.approx(rhs.b, rel=1e-12, abs=1e-12)

    def test_positive_dilation_required(self):
        with pytest.raises(ValueError):
            AxbPoint(-1.0, 0.0)


class TestGrid:
    def test_box_measure(self, grid):
        box = (grid.a_max - grid.a_min) * 2 * grid.b_max
        measured = grid.a_weights.sum() * grid.b_weights.sum()
        assert measured == pytest.approx(box, rel=1e-12)

    def test_weights_positive(self, grid):
        assert (grid.a_weights > 0).all()
        assert (grid.b_weights > 0).all()

    def test_too_few_nodes_rejected(self):
        with pytest.raises(GridTooCoarse):
            QuadratureGrid(n_a=4, n_b=4)


class TestTXiAxb:
    def test_omega_zero_reduces_to_coset_average(self, grid):
        f = AxbFunction.gaussian()
        for a in (0.5, 1.0, 2.0):
            value = t_xi_axb(f, 0.0, AxbPoint(a, 0.7), grid)
            # (1/a) * integral of f(a, t) dt by an independent fine trapezoid
            t = np.linspace(-grid.b_max, grid.b_max, 1 << 15)
            expected = np.trapezoid(f(a, t), t) / a
            assert value == pytest.approx(expected, abs=1e-9)

    def test_gaussian_closed_form(self, grid):
        for omega in (0.5, 1.0):
            assert gaussian_residual_axb(omega, grid) <= 1e-6

    def test_against_independent_fourier_oracle(self, grid):
        # uniform-grid trapezoid of the oscillatory integral, no Gauss-Legendre
        f = AxbFunction.gaussian()
        omega = 1.0
        for x in (AxbPoint(0.5, 0.0), AxbPoint(1.0, 2.0), AxbPoint(2.0, -1.0)):
            t = np.linspace(-grid.b_max, grid.b_max, 1 << 15)
            integrand = f(x.a, t) * np.exp(-1j * omega * t / x.a)
            oracle = np.trapezoid(integrand, t) * np.exp(1j * omega * x.b / x.a) / x.a
            assert t_xi_axb(f, omega, x, grid) == pytest.approx(oracle, abs=1e-8)
            assert gaussian_closed_form(omega, x) == pytest.approx(oracle, abs=1e-8)

    def test_zero_function(self, grid):
        assert t_xi_axb(AxbFunction.zero(), 1.0, AxbPoint(1.0, 0.0), grid) == 0.0

    def test_covariance(self, grid):
        res = covariance_residual_axb(
            AxbFunction.gaussian(), 1.0, AxbPoint(1.5, 0.5), [-2.0, 0.7, 3.1], grid
        )
        assert res <= 1e-6

    def test_grid_too_coarse_for_large_omega(self, grid):
        with pytest.raises(GridTooCoarse):
            t_xi_axb(AxbFunction.gaussian(), 20.0, AxbPoint(0.2, 0.0), grid)

    def test_boundary_leak_rejected(self, grid):
        wide = AxbFunction.gaussian(log_sigma=1.0)
        with pytest.raises(TruncationViolation):
            t_xi_axb(wide, 0.0, AxbPoint(1.0, 0.0), grid)


class TestWeil:
    def test_gaussian_family(self, grid):
        for f in (
            AxbFunction.gaussian(),
            AxbFunction.gaussian(log_center=0.2, b_center=-1.0, log_sigma=0.2),
        ):
            assert weil_check_axb(f, grid) <= 1e-6

    def test_zero(self, grid):
        assert weil_check_axb(AxbFunction.zero(), grid) == 0.0

    def test_linearity_of_residual(self, grid):
        f = AxbFunction.gaussian()
        double = AxbFunction(lambda a, b: 2.0 * f(a, b), bound=2.0)
        assert weil_check_axb(double, grid) <= 2.0 * weil_check_axb(f, grid) + 1e-15


class TestSigma:
    def test_reciprocal_dilation(self, grid):
        for a in (0.5, 2.0, 3.0):
            result = sigma_check_axb(AxbPoint(a, 0.0), grid)
            assert result.sigma == pytest.approx(1.0 / a, abs=1e-6)
            assert result.sigma_residual <= 1e-6

    def test_pure_translation_is_neutral(self, grid):
        result = sigma_check_axb(AxbPoint(1.0, 5.0), grid)
        assert result.sigma == pytest.approx(1.0, abs=1e-9)

    def test_multiplicative(self, grid):
        s2 = sigma_measure_axb(AxbPoint(2.0, 0.0), grid)[0]
        s3 = sigma_measure_axb(AxbPoint(3.0, 0.0), grid)[0]
        s6 = sigma_measure_axb(AxbPoint(6.0, 0.0), grid)[0]
        assert s6 == pytest.approx(s2 * s3, abs=1e-9)
        assert s6 == pytest.approx(1.0 / 6.0, abs=1e-6)

    def test_modular_function_relation(self, grid):
        for a in (0.5, 2.0, 3.0):
            result = sigma_check_axb(AxbPoint(a, 0.0), grid)
            assert result.delta_g == pytest.approx(1.0 / a, abs=1e-6)
            assert result.delta_residual <= 1e-6


class TestIdentities:
    def test_adjointness(self, grid):
        f = AxbFunction.gaussian(log_center=0.1, b_center=0.5)
        g2 = AxbFunction.gaussian(log_center=-0.15, b_center=-1.0,
                                  amplitude=0.6 - 0.3j)
        for omega in (0.5, 1.0):
            assert adjointness_residual_axb(f, g2, omega, grid) <= 1e-5

    def test_contraction(self, grid):
        for omega in (0.0, 0.5, 1.0):
            res = contraction_residual_axb(AxbFunction.gaussian(), omega, grid)
            assert res <= 1e-6

    def test_intertwine_left(self, grid):
        samples = [AxbPoint(0.7, -1.0), AxbPoint(1.0, 0.0), AxbPoint(2.2, 1.3)]
        res = intertwine_left_residual_axb(
            AxbFunction.gaussian(), 1.0, AxbPoint(1.1, 0.7), grid, samples
        )
        assert res <= 1e-5


class TestRefinement:
    def test_doubling_reduces_all_residuals(self):
        factors = refinement_factors()
        for name, (coarse, fine) in factors.items():
            assert coarse > 1e-8, f"{name} base residual saturated"
            assert fine <= coarse / 4.0, f"{name} did not improve 4x"


class TestSuite:
    def test_default_suite_passes(self):
        reports = run_axb_suite()
        assert all(r.status == "pass" for r in reports)
        ids = {r.theorem_id for r in reports}
        assert {"axb_weil", "axb_sigma", "axb_delta_relation", "axb_gaussian_txi",
                "axb_adjointness", "axb_intertwine_L", "axb_contraction",
                "axb_covariance", "axb_refinement"} <= ids

    def test_truncation_hygiene_enforced(self, grid):
        leaky = AxbFunction.gaussian(b_sigma=8.0)
        with pytest.raises(TruncationViolation):
            check_truncation(leaky, grid)
