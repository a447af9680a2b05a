from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermdens.errors import DivisionByZero, PoleAtPoint
from hermdens.qexact import QONE, QRat, QVAR, QZERO, qpochhammer, qr_eval


def test_constants():
    assert QZERO == QRat.from_int(0)
    assert QONE == QRat.from_int(1)
    assert QVAR == QRat.q_power(1)


def test_basic_arithmetic():
    q = QRat.q_power(1)
    assert q + q == 2 * q
    assert q * q == QRat.q_power(2)
    assert (q + 1) * (q - 1) == QRat.q_power(2) - 1
    assert q - q == QZERO
    assert -q + q == QZERO


def test_laurent_and_fractions():
    qm1 = QRat.q_power(-1)
    assert qm1 * QRat.q_power(1) == QONE
    half = QRat.from_fraction(Fraction(1, 2))
    assert half + half == QONE
    assert QRat.neg_q_power(3) == -QRat.q_power(3)
    assert QRat.neg_q_power(2) == QRat.q_power(2)


def test_pow_and_coercion():
    q = QRat.q_power(1)
    assert q ** 3 == QRat.q_power(3)
    assert (q + 1) ** 2 == q * q + 2 * q + 1
    assert (q + 1) ** 0 == QONE
    assert 1 + q == q + 1
    assert 2 - q == -(q - 2)


def test_division():
    q = QRat.q_power(1)
    ratio = (q * q - 1) / (q - 1)
    assert ratio == q + 1
    with pytest.raises(DivisionByZero):
        q / QZERO


def test_qpochhammer():
    q = QRat.q_power(1)
    assert qpochhammer("plus", 1, 0) == QONE
    assert qpochhammer("minus", 3, 2) == QONE
    assert qpochhammer("minus", 1, 1) == 1 + QRat.q_power(-1)
    assert qpochhammer("minus", 1, 2) == \
        (1 + QRat.q_power(-1)) * (1 - QRat.q_power(-2))
    assert qpochhammer("plus", 2, 3) == (1 - q * q) * (1 + QRat.q_power(3))


def test_qr_eval():
    q = QRat.q_power(1)
    f = (q * q - 1) / (q + 1)
    assert qr_eval(f, 3) == Fraction(2)
    assert qr_eval(QRat.q_power(-2), 3) == Fraction(1, 9)
    with pytest.raises(PoleAtPoint):
        qr_eval(QONE / (q - 3), 3)


small = st.integers(min_value=-4, max_value=4)


@st.composite
def qrats(draw):
    terms = draw(st.lists(st.tuples(small, small), max_size=4))
    return QRat.from_terms(terms)


@given(qrats(), qrats(), qrats())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f - g) + g == f


@given(qrats(), qrats())
def test_eval_is_multiplicative(f, g):
    assert qr_eval(f * g, 5) == qr_eval(f, 5) * qr_eval(g, 5)
    assert qr_eval(f + g, 5) == qr_eval(f, 5) + qr_eval(g, 5)
