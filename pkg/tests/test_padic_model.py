from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hermdens.errors import DegenerateGram, InvalidPrime, PrecisionLoss
from hermdens.padic_model import (
    GramMatrix,
    HermLattice,
    RingModel,
    check_invariants,
    gram_conjugate,
    gram_invariants,
    profile_of,
)


def test_ring_model():
    m = RingModel(3)
    assert m.p == 3 and m.q == 3 and m.d == 1
    assert m.u == 2
    assert RingModel(5).u == 2
    assert RingModel(7).u == 3
    with pytest.raises(InvalidPrime):
        RingModel(2)
    with pytest.raises(InvalidPrime):
        RingModel(9)


def test_scalar_algebra():
    m = RingModel(3)
    x = m.scalar(2, 1)
    assert x.conj().a == 2 and x.conj().b == -1
    assert x.norm() == Fraction(4 - m.u)
    assert x.trace() == Fraction(4)
    assert (x * x.conj()).a == x.norm()
    assert m.scalar(9).val() == 2
    assert m.scalar(Fraction(1, 3)).val() == -1
    assert m.scalar(0, 3).val() == 1
    assert m.scalar(0).is_zero()


def test_residue_pair():
    m = RingModel(3)
    assert m.scalar(4, 5).residue_pair(1) == (1, 2)
    assert m.scalar(Fraction(1, 2)).residue_pair(1) == (2, 0)
    with pytest.raises(PrecisionLoss):
        m.scalar(Fraction(1, 3)).residue_pair(1)


def test_gram_invariants_diagonal():
    m = RingModel(3)
    g = GramMatrix.from_diag(m, [2, 1, 0])
    assert gram_invariants(g) == (2, 1, 0)
    assert profile_of((2, 1, 0)) == (1, 1, 1)
    assert profile_of((3, 3, 1, 0)) == (2, 1, 1)


def test_gram_invariants_offdiagonal():
    m = RingModel(3)
    pi = m.scalar(3)
    one = m.scalar(1)
    zero = m.scalar(0)
    # hyperbolic-style pairing pi on the antidiagonal: invariants (1, 1)
    g = GramMatrix(m, [[zero, pi], [pi.conj(), zero]])
    assert gram_invariants(g) == (1, 1)
    h = GramMatrix(m, [[one, one], [one, one + pi]])
    assert gram_invariants(h) == (1, 0)


def test_gram_validation():
    m = RingModel(3)
    with pytest.raises(DegenerateGram):
        gram_invariants(GramMatrix(m, [[m.scalar(0)]]))
    with pytest.raises(ValueError):
        GramMatrix(m, [[m.scalar(1), m.scalar(1)],
                       [m.scalar(2), m.scalar(1)]])


def test_lattice_roundtrip():
    m = RingModel(3)
    lat = HermLattice.from_invariants(m, (2, 1))
    assert lat.invariants() == (2, 1)
    assert lat.val() == 3
    assert lat.profile() == (1, 1, 0)
    assert lat.is_integral()
    dual = lat.dual()
    assert dual.invariants() == (-1, -2)
    assert not dual.is_integral()
    assert dual.dual().invariants() == (2, 1)


def test_check_invariants():
    assert check_invariants([3, 1]) == (3, 1)
    assert check_invariants((1, 2)) == (2, 1)
    assert check_invariants(()) == ()


def test_gram_conjugate_keeps_invariants():
    m = RingModel(3)
    g = GramMatrix.from_diag(m, [1, 0])
    rows = [[m.scalar(1), m.scalar(2, 1)], [m.scalar(0), m.scalar(1)]]
    assert gram_invariants(gram_conjugate(g, rows)) == (1, 0)


@given(st.lists(st.integers(min_value=0, max_value=4), min_size=1,
                max_size=3))
def test_dual_negates_and_reverses(parts):
    lam = tuple(sorted(parts, reverse=True))
    lat = HermLattice.from_invariants(RingModel(3), lam)
    assert lat.dual().invariants() == tuple(-v for v in reversed(lam))
    assert lat.dual().val() == -lat.val()
