from fractions import Fraction

import pytest

from hermdens.cy_densities import (
    beta_combination,
    c_const,
    correction_coeff,
    cy_d,
    cy_d_lambda,
    extend_profile,
    horizontal_ratio,
    kappa,
    pden_lattice,
    pden_primitive_at,
    ppden_moebius,
    self_density,
)
from hermdens.errors import (
    EmptyStratum,
    InvalidCase,
    InvalidProfile,
    ParityMismatch,
)
from hermdens.padic_model import HermLattice, RingModel
from hermdens.qexact import QONE, QRat, QZERO, qpochhammer, qr_eval

M3 = RingModel(3)
q = QRat.q_power(1)


def test_c_const():
    assert c_const(0, 0, 0) == QZERO
    assert c_const(0, 0, 2) == \
        QONE / (QRat.neg_q_power(1) - 1) + QONE / (QRat.neg_q_power(2) - 1)
    assert c_const(1, 1, 1) == qpochhammer("plus", 1, 1)
    assert c_const(2, 1, 0) == qpochhammer("plus", 1, 2)
    assert c_const(2, 1, 0, parity="even") == -qpochhammer("plus", 1, 2)


def test_cy_d_frozen_rank3():
    assert cy_d(3, 1, 3, 0, 0) == -(q * q - 1) * (QRat.q_power(3) + 1)
    assert cy_d(3, 1, 2, 1, 0) == (q + 1) * (QRat.q_power(3) - q + 1)
    assert cy_d(3, 1, 2, 0, 1) == -(q * q - 1)
    assert cy_d(3, 1, 1, 1, 1) == QONE


def test_cy_d_frozen_rank4():
    assert cy_d(4, 2, 2, 0, 2) == 1 + q
    assert cy_d(4, 2, 2, 1, 1) == 1 - q * q
    assert cy_d(4, 2, 0, 3, 1) == q * q - q + 1
    assert cy_d(3, 1, 1, 0, 2) == QONE
    assert cy_d(2, 1, 2, 0, 0) == 1 - q * q
    assert cy_d(2, 1, 0, 2, 0) == 1 - q


def test_cy_d_vertex_values():
    assert cy_d(1, 1, 0, 0, 1) == QZERO
    assert cy_d(2, 1, 0, 0, 2) == QZERO
    with pytest.raises(InvalidProfile):
        cy_d(3, 2, 0, 0, 3)
    with pytest.raises(InvalidProfile):
        cy_d(4, 3, 0, 1, 3)


def test_cy_d_lambda_routes_through_profile():
    assert cy_d_lambda(3, 1, (4, 4, 4)) == cy_d(3, 1, 3, 0, 0)
    assert cy_d_lambda(3, 1, (4, 3, 1)) == cy_d(3, 1, 2, 1, 0)
    assert cy_d_lambda(4, 2, (2, 2, 1, 0)) == cy_d(4, 2, 2, 1, 1)


def test_cy_d_input_validation():
    with pytest.raises(InvalidProfile):
        cy_d(3, 1, 1, 1, 0)
    with pytest.raises(InvalidProfile):
        cy_d(2, 3, 1, 1, 0)
    with pytest.raises(InvalidProfile):
        cy_d(2, 1, -1, 2, 1)


def test_kappa_values():
    assert kappa(1, 0) == QONE
    assert kappa(2, 0) == QONE
    assert kappa(2, 1) == -QONE
    assert kappa(3, 1) == q - 1
    assert kappa(3, 2) == -q


def test_correction_coeff():
    # h=1, k=0: (-q)^{-1} / (1 - (-q)^{-1})
    want = QRat.neg_q_power(-1) / (QONE - QRat.neg_q_power(-1))
    assert correction_coeff(2, 1, 0) == want


def test_beta_combination_value():
    # hand value at n=2, h=1, t=1: 1/(q+1)
    assert beta_combination(2, 1, 1) == QONE / (q + 1)
    assert beta_combination(2, 1, 1) == -correction_coeff(2, 1, 0)


def test_self_density_values():
    assert qr_eval(self_density("I", (1, 0)), 3) == Fraction(4, 3)
    assert qr_eval(self_density("I", (2, 1)), 3) == Fraction(16, 3)
    assert self_density("I", (1, 0)) == 1 + QRat.q_power(-1)


def test_extend_profile_shifts():
    # profile of (2,1) is (1,1,0); of (2,1,1) is (1,2,0)
    assert extend_profile((2, 1), "1-1", 2) == (2, 1, 0)
    assert extend_profile((2, 1, 1), "2-1", 2) == (2, 0, 2)
    assert extend_profile((2, 1), "5", 2) == (0, 1, 2)
    # shallow vector relabels the norm-1 strata
    assert extend_profile((2, 1), "1-2-1", 1) == (1, 2, 0)
    assert extend_profile((2, 1), "1-2-2", 1) == (2, 1, 0)


def test_extend_profile_guards():
    with pytest.raises(EmptyStratum):
        extend_profile((1, 1), "5", 2)
    with pytest.raises(EmptyStratum):
        extend_profile((2, 2), "2-1", 2)
    with pytest.raises(InvalidCase):
        extend_profile((2, 1), "no-such-stratum", 2)
    with pytest.raises(InvalidCase):
        extend_profile((2, 1), "1-2", 1)
    with pytest.raises(InvalidCase):
        extend_profile((2, 1), "1-1", 0)


def test_pden_rank1_chain():
    for a in (1, 3, 5):
        lat = HermLattice.from_invariants(M3, (a,))
        got = qr_eval(pden_lattice(lat, 0).value, 3)
        assert got == Fraction(a + 1, 2)


def test_ppden_matches_profile_density():
    lat = HermLattice.from_invariants(M3, (2, 2))
    got = qr_eval(ppden_moebius(lat, 1).value, 3)
    assert got == qr_eval(cy_d(2, 1, 2, 0, 0), 3) == -8


def test_pden_primitive_frozen_table():
    cases = [
        ((1, 0, 0), 2, Fraction(1)),
        ((1, 0, 0), 4, Fraction(2)),
        ((3, 0, 0), 2, Fraction(4)),
    ]
    for lam, x, want in cases:
        lb = HermLattice.from_invariants(M3, lam)
        assert qr_eval(pden_primitive_at(lb, 2, x).value, 3) == want


def test_pden_primitive_parity_gate():
    lb = HermLattice.from_invariants(M3, (1, 0, 0))
    with pytest.raises(ParityMismatch):
        pden_primitive_at(lb, 2, 3)


def test_horizontal_ratio_forms():
    assert horizontal_ratio(2, 3) == QRat.q_power(2)
    assert horizontal_ratio(2, 2) == \
        QRat.q_power(2) * (QONE - QRat.neg_q_power(-2)) \
        / (QONE - QRat.neg_q_power(-1))
    assert qr_eval(horizontal_ratio(2, 2), 3) == 6
    assert qr_eval(horizontal_ratio(3, 3), 3) == 81
