"""
Tests for matrix elements, the perturbation polynomials and the Hellmann-Feynman check.
"""

from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp, mpf
from scipy.special import roots_hermite

from src.numerics.errors import InvalidInputError
from src.numerics.precision import PrecisionCtx
from src.oscillator.hellmann_feynman import gaussian_expectation, hft_residual
from src.oscillator.matrix_elements import (gaussian_matrix_element,
                                            gaussian_matrix_element_quadrature,
                                            h0_matrix_element, potential_series_coeffs)
from src.oscillator.perturbation import PT_POLYNOMIALS, pt_critical_lambda, pt_energy
from src.rayleigh_ritz.eigen import state_oracle

CTX = PrecisionCtx(digits=30)


def test_gaussian_elements_match_known_values():
    with CTX.working():
        assert abs(gaussian_matrix_element(0, 0, CTX) - 1 / mp.sqrt(2)) < mpf(10) ** -28
        assert abs(gaussian_matrix_element(1, 1, CTX) - mp.sqrt(2) / 4) < mpf(10) ** -28
        assert abs(gaussian_matrix_element(0, 2, CTX) + mpf(1) / 4) < mpf(10) ** -28


def test_gaussian_element_vanishes_across_parity():
    assert gaussian_matrix_element(0, 1, CTX) == 0
    assert gaussian_matrix_element(3, 6, CTX) == 0


def test_gaussian_element_symmetry_and_diagonal_bounds():
    for m in range(41):
        diagonal = gaussian_matrix_element(m, m, CTX)
        assert 0 < diagonal < 1
        for n in range(m % 2, 41, 2):
            assert gaussian_matrix_element(m, n, CTX) == gaussian_matrix_element(n, m, CTX)


def test_negative_index_is_invalid():
    with pytest.raises(InvalidInputError):
        gaussian_matrix_element(-1, 0, CTX)
    with pytest.raises(InvalidInputError):
        h0_matrix_element(0, -2)


def test_quadrature_agrees_with_closed_form():
    for m, n in [(0, 0), (0, 2), (1, 3), (4, 10), (7, 7)]:
        closed = gaussian_matrix_element(m, n, CTX)
        quadrature = gaussian_matrix_element_quadrature(m, n, CTX)
        with CTX.working():
            assert abs(closed - quadrature) < mpf(10) ** -25


def test_closed_form_agrees_with_double_precision_hermite_rule():
    # ⟨0|exp(-x²)|2⟩ = ∫ φ_0 φ_2 exp(-x²) dx with y = √2 x against the Hermite weight
    y, w = roots_hermite(40)
    x = y / np.sqrt(2)
    phi0 = np.pi ** -0.25 * np.ones_like(x)
    phi2 = (4 * x ** 2 - 2) / np.sqrt(8 * np.sqrt(np.pi))
    value = np.sum(w * phi0 * phi2) / np.sqrt(2)
    assert abs(value - float(gaussian_matrix_element(0, 2, CTX))) < 1e-13


def test_h0_elements():
    assert h0_matrix_element(0, 0) == mpf(1) / 2
    assert h0_matrix_element(3, 3) == mpf(7) / 2
    assert h0_matrix_element(2, 4) == 0


def test_potential_series_exact_inputs():
    assert potential_series_coeffs(Fraction(1, 2), 0, 2, CTX) == [-1, 1, 0]
    assert potential_series_coeffs(0, 1, 3, CTX) == [-2, 3, -1, Fraction(1, 3)]


def test_potential_series_matches_taylor_expansion():
    E, lam = mpf("0.37"), mpf("-1.25")
    coeffs = potential_series_coeffs(E, lam, 12, CTX)
    with CTX.working():
        # Q(√t) as a function of t = x²
        taylor = mp.taylor(lambda t: t - 2 * lam * mp.exp(-t) - 2 * E, 0, 12)
        for k in range(13):
            assert abs(coeffs[k] - taylor[k]) < mpf(10) ** -20


def test_potential_series_alternates_for_positive_coupling():
    coeffs = potential_series_coeffs(mpf(1), mpf(2), 10, CTX)
    for k in range(2, 10):
        assert coeffs[k] * coeffs[k + 1] < 0


def test_potential_series_rejects_negative_order():
    with pytest.raises(InvalidInputError):
        potential_series_coeffs(0, 1, -1, CTX)


def test_pt_energy_values():
    assert pt_energy(0, 0, CTX) == mpf(1) / 2
    assert pt_energy(1, 0, CTX) == mpf(3) / 2
    assert abs(pt_energy(0, "0.684", CTX)) < 5e-3
    assert abs(pt_energy(1, "3.35", CTX)) < 2e-2


def test_pt_coefficients_are_negative():
    for n in (0, 1):
        _, e1, e2 = PT_POLYNOMIALS.coefficients(n, CTX)
        assert e1 < 0 and e2 < 0


def test_pt_rejects_higher_states():
    with pytest.raises(InvalidInputError):
        pt_energy(2, 1, CTX)


def test_pt_critical_couplings():
    assert abs(pt_critical_lambda(0, CTX) - mpf("0.684")) < 1e-3
    assert abs(pt_critical_lambda(1, CTX) - mpf("3.35")) < 1e-2
    assert abs(pt_energy(0, pt_critical_lambda(0, CTX), CTX)) < mpf(10) ** -25


def test_gaussian_expectation_of_basis_state():
    with CTX.working():
        assert gaussian_expectation([mpf(1), mpf(0)], [0, 2], CTX) == gaussian_matrix_element(0, 0, CTX)


@pytest.mark.parametrize("n", [0, 1])
def test_hft_residual_at_zero_coupling(n):
    residual = hft_residual(n, 0, "1e-6", state_oracle(20, CTX), CTX)
    assert residual < 1e-8


@pytest.mark.parametrize("n", [0, 1])
@pytest.mark.parametrize("lam", [-2, 2])
def test_hft_residual_at_finite_coupling(n, lam):
    residual = hft_residual(n, lam, "1e-5", state_oracle(60, CTX), CTX)
    assert residual < 1e-6


@pytest.mark.parametrize("n, slope", [(0, -1 / mp.sqrt(2)), (1, -mp.sqrt(2) / 4)])
def test_first_order_slopes_at_zero_coupling(n, slope):
    solve = state_oracle(20, CTX)
    h = mpf("1e-6")
    with CTX.working():
        upper, _, _ = solve(n, h)
        lower, _, _ = solve(n, -h)
        assert abs((upper - lower) / (2 * h) - slope) < 1e-8


def test_hft_rejects_non_positive_step():
    with pytest.raises(InvalidInputError):
        hft_residual(0, 0, 0, state_oracle(4, CTX), CTX)
