from fractions import Fraction
from itertools import product

import pytest

import hermdens.oracle as oracle_mod
from hermdens.errors import BudgetExceeded, UnderdeterminedFit
from hermdens.oracle import CountJob, density, density_poly, herm_count
from hermdens.padic_model import GramMatrix, RingModel, gram_conjugate

M12 = RingModel(3, 12)


def diag(inv):
    return GramMatrix.from_diag(M12, list(inv))


def job(m_inv, l_inv, d, mode="all"):
    return CountJob(diag(m_inv), diag(l_inv), RingModel(3, d), mode=mode)


def test_unimodular_rank1_count():
    # isometries of the norm form on O/9: the unitary group has order 12
    assert herm_count(job((0,), (0,), 2)) == 12
    assert herm_count(job((0,), (0,), 2, "primitive")) == 12


def test_scaled_target_misses_unit_source():
    assert herm_count(job((0,), (1,), 2)) == 0
    assert herm_count(job((1,), (0,), 2)) == 0


def test_count_against_direct_loop():
    # rank-2 target, rank-1 source, every vector of (O/p^d)^2 checked
    p, d, u = 3, 2, 2
    pd = p ** d
    for m_inv, l_exp, want in (((1, 0), 0, 972), ((1, 0), 2, 81)):
        got = herm_count(job(m_inv, (l_exp,), d))
        weights = [p ** a for a in m_inv]
        direct = 0
        for coords in product(range(pd), repeat=4):
            tot = 0
            for s in range(2):
                a, b = coords[2 * s], coords[2 * s + 1]
                tot += weights[s] * (a * a - u * b * b)
            if tot % pd == p ** l_exp % pd:
                direct += 1
        assert got == direct == want


def test_deep_mixed_counts():
    # frozen from a full direct enumeration over (O/27)^2
    assert herm_count(job((2, 0), (2,), 3)) == 17496
    assert herm_count(job((2, 1), (2,), 3)) == 26244
    assert herm_count(job((2, 2), (2,), 3)) == 157464


def test_orbit_reduction_is_invisible():
    # monomial-isometry orbits only regroup classes; counts cannot move
    real = oracle_mod._compiled_orbit_maps
    for m_inv, l_inv, d in (((0, 0), (2, 0), 3), ((2, 0), (2, 0), 3)):
        with_orbits = herm_count(job(m_inv, l_inv, d))
        oracle_mod._compiled_orbit_maps = lambda *a: None
        try:
            without = herm_count(job(m_inv, l_inv, d))
        finally:
            oracle_mod._compiled_orbit_maps = real
        assert with_orbits == without


def test_density_self_values():
    assert density(diag((0, 0)), diag((0, 0)), 3) == Fraction(32, 27)
    assert density(diag((1, 0)), diag((1, 0)), 3) == Fraction(16, 3)
    assert density(diag((1,)), diag((1,)), 3) == 4


def test_density_factorization_instance():
    # Den(M, L) = (number of overlattices of L isometric to M) Den(M, M);
    # the unimodular closure of (2, 2) has 13 members
    lhs = density(diag((0, 0)), diag((2, 2)), 3)
    assert lhs == Fraction(416, 27) == 13 * Fraction(32, 27)


def test_density_vanishes_without_embedding():
    assert density(diag((0,)), diag((1,)), 3) == 0
    assert density(diag((1, 0)), diag((2, 0)), 3) == 0


def test_primitive_matches_plain_on_self():
    # a self-embedding has unit determinant, hence is automatically primitive
    plain = density(diag((1, 1)), diag((1, 1)), 3)
    prim = density(diag((1, 1)), diag((1, 1)), 3, mode="primitive")
    assert plain == prim == 96


def test_basis_invariance_deterministic():
    d = 3
    ring = RingModel(3, d)
    base = herm_count(CountJob(diag((1, 0)), diag((2, 1)), ring))
    rows = [
        [M12.scalar(1), M12.scalar(1, 1)],
        [M12.scalar(0), M12.scalar(2)],
    ]
    twisted = gram_conjugate(diag((2, 1)), rows)
    assert herm_count(CountJob(diag((1, 0)), twisted, ring)) == base


def test_density_poly_rank1():
    coeffs, deriv = density_poly(diag((1,)), diag((1,)), 3, 2)
    assert tuple(coeffs) == (Fraction(1), Fraction(2), Fraction(1))
    assert deriv == -4
    assert sum(coeffs) == density(diag((1,)), diag((1,)), 3)


def test_density_poly_degree_guard():
    # a valuation-2 source needs a cubic; the quadratic fit must refuse
    with pytest.raises(UnderdeterminedFit):
        density_poly(diag((2,)), diag((2,)), 3, 2)
    coeffs, deriv = density_poly(diag((2,)), diag((2,)), 3, 3)
    assert isinstance(deriv, Fraction)
    assert sum(coeffs) == density(diag((2,)), diag((2,)), 3)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        herm_count(job((0, 0), (1, 1), 3), budget=100)
