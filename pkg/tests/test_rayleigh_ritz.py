"""
Tests for the Rayleigh-Ritz matrices, eigen-solutions, secular polynomial,
critical couplings and exceptional-point seeding.
"""

import pytest
from mpmath import mp, mpc, mpf

from src.numerics.errors import (CapacityError, InvalidInputError, MonotonicityError,
                                 PrecisionError)
from src.numerics.precision import PrecisionCtx
from src.oscillator.matrix_elements import (gaussian_matrix_element,
                                            gaussian_matrix_element_quadrature, h0_matrix_element)
from src.oscillator.perturbation import pt_energy
from src.rayleigh_ritz.critical import critical_lambda_rr
from src.rayleigh_ritz.eigen import complex_eigenvalues, converge_state, converge_states, eigenvalues
from src.rayleigh_ritz.exceptional import ep_seeds, label_branches
from src.rayleigh_ritz.matrix import ModelParams, Parity, ParityBasis, assemble
from src.rayleigh_ritz.secular import secular_polynomial

CTX = PrecisionCtx(digits=30)

LAMBDA_0_CRITICAL = mpf("0.686352851432136232145426692879870945")


def analytic_ep_even_two_state():
    """Coalescence of the 2x2 even matrix: (a - d)² + λ²/4 = 0 with c = g00 - g22."""
    with CTX.working():
        g00 = 1 / mp.sqrt(2)
        g22 = 3 / (8 * mp.sqrt(2))
        c = g00 - g22
        lam = -2 / mpc(c, mpf(1) / 2)
        energy = (3 - lam * (g00 + g22)) / 2
    return lam, energy


# ------------------------------------------------------------------- matrix

def test_parity_parsing_and_quantum_numbers():
    assert Parity.parse("EVEN") is Parity.EVEN
    assert Parity.of_state(3) is Parity.ODD
    assert ParityBasis("odd", 3).quantum_numbers == [1, 3, 5]
    assert ParityBasis.for_state(4, 5).local_index(4) == 2
    with pytest.raises(InvalidInputError):
        Parity.parse("both")
    with pytest.raises(InvalidInputError):
        ParityBasis(Parity.EVEN, 0)
    with pytest.raises(InvalidInputError):
        ParityBasis(Parity.EVEN, 4).local_index(1)


def test_model_params_reject_non_finite_coupling():
    with pytest.raises(InvalidInputError):
        ModelParams(mp.inf)
    assert not ModelParams(mpc(2, 0)).is_complex
    assert ModelParams(mpc(2, 1)).is_complex


def test_single_state_matrix():
    assert assemble(ParityBasis("even", 1), 0, CTX).entries[0, 0] == mpf(1) / 2
    value = assemble(ParityBasis("even", 1), 1, CTX).entries[0, 0]
    with CTX.working():
        assert abs(value - (mpf(1) / 2 - 1 / mp.sqrt(2))) < mpf(10) ** -28


def test_matrix_is_symmetric_for_real_and_complex_coupling():
    assert assemble(ParityBasis("even", 6), "-3.5", CTX).is_symmetric()
    matrix = assemble(ParityBasis("odd", 5), mpc(-1, 2), CTX)
    assert matrix.is_complex and matrix.is_symmetric()


def test_odd_matrix_matches_quadrature():
    lam = mpf("1.5")
    matrix = assemble(ParityBasis("odd", 2), lam, CTX)
    with CTX.working():
        for i, m in enumerate((1, 3)):
            for j, n in enumerate((1, 3)):
                expected = h0_matrix_element(m, n) - lam * gaussian_matrix_element_quadrature(m, n, CTX)
                assert abs(matrix.entries[i, j] - expected) < mpf(10) ** -25


def test_gershgorin_interval_contains_spectrum():
    matrix = assemble(ParityBasis("even", 8), 4, CTX)
    low, high = matrix.gershgorin_bounds()
    for value in eigenvalues(matrix, CTX):
        assert low <= value <= high


# -------------------------------------------------------------------- eigen

def test_unperturbed_spectrum():
    values = eigenvalues(assemble(ParityBasis("even", 3), 0, CTX), CTX)
    assert [mp.nstr(v, 10) for v in values] == ["0.5", "2.5", "4.5"]


def test_eigenvalues_refuse_complex_coupling():
    with pytest.raises(InvalidInputError):
        eigenvalues(assemble(ParityBasis("even", 3), mpc(1, 1), CTX), CTX)


def test_eigenvectors_are_normalised():
    values, vectors = eigenvalues(assemble(ParityBasis("odd", 6), 2, CTX), CTX, vectors=True)
    with CTX.working():
        for vector in vectors:
            assert abs(mp.fsum(v ** 2 for v in vector) - 1) < mpf(10) ** -25
    assert values == sorted(values)


def test_converge_state_at_zero_coupling_is_exact():
    point = converge_state(0, 0, 12, CTX)
    assert point.energy == mpf(1) / 2
    assert point.basis_size == 1


def test_converge_state_needs_headroom():
    with pytest.raises(PrecisionError):
        converge_state(0, 1, 30, CTX)


def test_ground_state_below_first_order_bound():
    point = converge_state(0, 1, 12, CTX)
    with CTX.working():
        assert point.energy < mpf(1) / 2 - 1 / mp.sqrt(2)
        assert abs(point.energy - pt_energy(0, 1, CTX)) < mpf("0.02")
    assert point.converged_digits >= 10


MONOTONICITY_COUPLINGS = (-10, -5, -1, 0, 1, 5, 9)


def lowest_levels(lam, size, ctx=CTX):
    """E_0..E_3 from the even and odd sectors at one basis size."""
    even = eigenvalues(assemble(ParityBasis("even", size), lam, ctx), ctx)
    odd = eigenvalues(assemble(ParityBasis("odd", size), lam, ctx), ctx)
    return [(even if n % 2 == 0 else odd)[n // 2] for n in range(4)]


def assert_energies_never_rise(lam, sizes):
    slack = mpf(10) ** -(CTX.digits // 2)
    ladder = [lowest_levels(lam, size) for size in sizes]
    for smaller, larger in zip(ladder, ladder[1:]):
        for n in range(4):
            assert larger[n] <= smaller[n] + slack


@pytest.mark.parametrize("lam", MONOTONICITY_COUPLINGS)
def test_energies_never_rise_with_basis_size(lam):
    assert_energies_never_rise(lam, (10, 20, 40))


@pytest.mark.slow
@pytest.mark.parametrize("lam", MONOTONICITY_COUPLINGS)
def test_energies_never_rise_up_to_eighty_states(lam):
    assert_energies_never_rise(lam, (40, 80))


def test_rising_energy_is_reported(monkeypatch):
    # energy equal to the basis size: grows with every rung
    monkeypatch.setattr("src.rayleigh_ritz.eigen.eigenvalues",
                        lambda matrix, ctx: [mpf(matrix.size)] * matrix.size)
    with pytest.raises(MonotonicityError):
        converge_states([0], 1, 12, CTX, schedule=(10, 20))


def test_string_coupling_keeps_working_precision():
    value = assemble(ParityBasis("even", 1), "0.1", CTX).entries[0, 0]
    with CTX.working():
        assert abs(value - (mpf(1) / 2 - mpf("0.1") / mp.sqrt(2))) < mpf(10) ** -28


def test_parity_sectors_reproduce_the_unsplit_spectrum():
    size, lam = 6, mpf("2.5")
    split = sorted(eigenvalues(assemble(ParityBasis("even", size), lam, CTX), CTX)
                   + eigenvalues(assemble(ParityBasis("odd", size), lam, CTX), CTX))
    with CTX.working():
        full = mp.matrix(2 * size, 2 * size)
        for m in range(2 * size):
            for n in range(2 * size):
                full[m, n] = h0_matrix_element(m, n) - lam * gaussian_matrix_element(m, n, CTX)
        values = mp.eigsy(full, eigvals_only=True)
        unsplit = sorted(values[i] for i in range(2 * size))
        for a, b in zip(split, unsplit):
            assert abs(a - b) < mpf(10) ** -(CTX.digits // 3)


@pytest.mark.slow
def test_gap_closes_as_the_double_well_deepens():
    gaps = []
    for lam in (0, -2, -5, -8, -10):
        levels = lowest_levels(lam, 80)
        gaps.append(levels[1] - levels[0])
    assert abs(gaps[0] - 1) < mpf(10) ** -20
    assert all(deeper < shallower for shallower, deeper in zip(gaps, gaps[1:]))
    assert 0 < gaps[-1] < mpf("0.05")


def test_energies_decrease_with_coupling():
    energies = [converge_state(1, lam, 10, CTX).energy for lam in (-2, 0, 2, 4)]
    assert energies == sorted(energies, reverse=True)


# ------------------------------------------------------------------ secular

def test_secular_polynomial_at_zero_coupling():
    polynomial = secular_polynomial(ParityBasis("even", 2), 0, CTX)
    assert polynomial.degree == 2
    expected = [mpf(5) / 4, mpf(-3), mpf(1)]
    for k in range(3):
        assert abs(polynomial.coeffs_in_E.coefficient(k) - expected[k]) < mpf(10) ** -25


def test_secular_roots_match_eigenvalues():
    ctx = PrecisionCtx(digits=50)
    basis = ParityBasis("even", 8)
    roots = sorted(secular_polynomial(basis, 1, ctx).roots(ctx), key=mp.re)
    values = eigenvalues(assemble(basis, 1, ctx), ctx)
    for root, value in zip(roots, values):
        assert abs(root - value) < mpf(10) ** -15


def test_secular_polynomial_vanishes_at_eigenvalues():
    basis, lam = ParityBasis("odd", 6), mpf("-1.5")
    polynomial = secular_polynomial(basis, lam, CTX).coeffs_in_E
    with CTX.working():
        bound = polynomial.norm() * mpf(10) ** -(CTX.digits // 3)
        for value in eigenvalues(assemble(basis, lam, CTX), CTX):
            assert abs(polynomial(value)) < bound


def test_symbolic_secular_polynomial_matches_numeric():
    basis = ParityBasis("odd", 3)
    symbolic = secular_polynomial(basis, None, CTX)
    assert symbolic.symbolic
    numeric = secular_polynomial(basis, mpf("0.7"), CTX).coeffs_in_E
    sampled = symbolic.at(mpf("0.7"))
    for k in range(4):
        assert abs(sampled.coefficient(k) - numeric.coefficient(k)) < mpf(10) ** -20


def test_symbolic_secular_polynomial_is_capped():
    with pytest.raises(CapacityError):
        secular_polynomial(ParityBasis("even", 17), None, CTX)


# ----------------------------------------------------------------- critical

def test_critical_coupling_ladder_for_ground_state():
    ladder = critical_lambda_rr(0, (10, 20, 40), CTX)
    assert [size for size, _ in ladder] == [10, 20, 40]
    values = [value for _, value in ladder]
    assert values == sorted(values, reverse=True)
    assert abs(values[-1] - LAMBDA_0_CRITICAL) < 1e-5


def test_critical_coupling_zeroes_the_right_level():
    ladder = critical_lambda_rr(1, (10, 20), CTX)
    size, value = ladder[-1]
    level = eigenvalues(assemble(ParityBasis("odd", size), value, CTX), CTX)[0]
    assert abs(level) < 1e-15
    assert 3 < value < 4


def test_critical_coupling_needs_a_usable_schedule():
    with pytest.raises(InvalidInputError):
        critical_lambda_rr(6, (1, 2), CTX)


# ------------------------------------------------------- exceptional points

def test_two_state_exceptional_point_from_discriminant():
    lam_ep, energy_ep = analytic_ep_even_two_state()
    seeds = ep_seeds("even", 2, ("-3", "-1", "1", "3"), CTX, grid=(21, 21))
    assert len(seeds) == 1
    lam, energy = seeds[0]
    assert abs(lam - lam_ep) < 1e-10
    assert abs(energy - energy_ep) < 1e-5
    assert label_branches("even", 2, lam, energy, CTX) == (0, 2)


def test_levels_coalesce_at_analytic_exceptional_point():
    lam_ep, energy_ep = analytic_ep_even_two_state()
    values = complex_eigenvalues(assemble(ParityBasis("even", 2), lam_ep, CTX), CTX)
    assert len(values) == 2
    for value in values:
        assert abs(value - energy_ep) < 1e-10


def test_box_without_exceptional_points_is_empty():
    assert ep_seeds("even", 2, ("1", "5", "1", "5"), CTX, grid=(11, 11)) == []


def test_degenerate_box_is_empty():
    assert ep_seeds("odd", 4, ("1", "1", "0", "2"), CTX) == []
    assert ep_seeds("odd", 4, ("2", "0", "0", "2"), CTX) == []


def test_exceptional_points_need_two_levels():
    with pytest.raises(InvalidInputError):
        ep_seeds("even", 1, ("-1", "1", "-1", "1"), CTX)
