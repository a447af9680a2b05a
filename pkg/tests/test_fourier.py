import pytest

from hermdens.errors import InvalidCase, InvalidInvariants, InvalidParity
from hermdens.fourier import fourier_pden_primitive
from hermdens.padic_model import RingModel
from hermdens.qexact import QONE, QRat, QZERO, qr_eval

M3 = RingModel(3)
Q = QRat.q_power(1)
Q2 = QRat.q_power(2)
Q3 = QRat.q_power(3)


def test_frozen_values_rank3():
    # transforms at a vector of valuation -1, lattice type (n, h) = (4, 2)
    want = {
        (4, 4, 4): (Q2 - QONE) * (Q3 + QONE) / Q2,
        (4, 3, 1): -(Q + QONE) * (Q3 - Q + QONE) / Q2,
        (4, 4, 0): (Q2 - QONE) / Q2,
        (3, 1, 0): -QONE / Q2,
    }
    for lam, value in want.items():
        assert fourier_pden_primitive(4, 2, lam, -1).value == value


def test_routes_agree_symbolically():
    for lam, x_val in (((3, 1, 0), -1), ((2, 2, 1), -2), ((2, 1, 0), -2)):
        closed = fourier_pden_primitive(4, 2, lam, x_val).value
        strat = fourier_pden_primitive(4, 2, lam, x_val,
                                       route="stratum-sum").value
        assert closed == strat


def test_enumeration_route_at_three():
    for lam, h, x_val in (((2, 1), 1, -1), ((3, 1, 0), 2, -1),
                          ((2, 2, 1), 2, -2)):
        n = len(lam) + 1
        closed = fourier_pden_primitive(n, h, lam, x_val).value
        enum = fourier_pden_primitive(n, h, lam, x_val, route="enumeration",
                                      model=M3).value
        assert qr_eval(enum, 3) == qr_eval(closed, 3)


def test_deep_lattice_transform_vanishes():
    assert fourier_pden_primitive(4, 2, (9, 9, 9), -2).value == QZERO
    assert fourier_pden_primitive(
        4, 2, (9, 9, 9), -2, route="stratum-sum").value == QZERO


def test_parity_gate():
    # sum(lam) + x - h - 1 must be even
    with pytest.raises(InvalidParity):
        fourier_pden_primitive(4, 2, (2, 2, 1), -1)
    with pytest.raises(InvalidParity):
        fourier_pden_primitive(4, 2, (3, 1, 0), -2)


def test_input_validation():
    with pytest.raises(InvalidInvariants):
        fourier_pden_primitive(3, 2, (3, 1, 0), -1)  # n != rank + 1
    with pytest.raises(InvalidCase):
        fourier_pden_primitive(4, 5, (3, 1, 0), -1)  # h > n
    with pytest.raises(InvalidCase):
        fourier_pden_primitive(4, 2, (3, 1, 0), -1, route="guess")


def test_nonnegative_x_rejected():
    with pytest.raises(InvalidCase):
        fourier_pden_primitive(4, 2, (3, 1, 0), 0)
