"""Fourier transform of the primitive density sum at negative valuations.

Three independent routes to the same number: the closed-form dispatch
(generic law plus five exceptional profiles), a stratum-sum that rebuilds
the value from dual-coset stratum cardinalities, and a raw enumeration at
a fixed odd prime.
"""

from .cy_densities import DensityValue, cy_d, extend_profile
from .errors import BudgetExceeded, InvalidCase, InvalidInvariants, InvalidParity
from .lattice_enum import enumerate_strata, split_case12, stratum_counts
from .padic_model import RingModel, check_invariants, profile_of
from .qexact import QONE, QRat, QZERO

_AGG_REP = {
    "1-1": "1-1",
    "1-2": "1-2",
    "1-3+3-2": "1-3",
    "2-1+4-1": "2-1",
    "2-2+4-2": "2-2",
    "3-1": "3-1",
    "5": "5",
}


def _geo():
    return QONE / (QONE - QRat.q_power(-2))


def _d_term(n, h, a, b, c):
    # the -q^{-h} D_{n-1,h-1} tail; at h = 0 the whole tail is zero
    if h == 0:
        return QZERO
    return -QRat.q_power(-h) * cy_d(n - 1, h - 1, a, b, c)


def _closed_route(n, h, a, b, c, x_val):
    vx = QRat.q_power(x_val)
    geo = _geo()
    exceptional = {
        (1, h, n - h - 2): 1,
        (1, h - 2, n - h): 2,
        (0, h - 1, n - h): 3,
        (0, h, n - h - 1): 4,
        (0, h + 1, n - h - 2): 5,
    }
    tag = exceptional.get((a, b, c))
    if tag is None:
        if x_val <= -2:
            return QZERO
        return _d_term(n, h, a, b, c)
    if x_val <= -2:
        if tag == 1:
            return QRat.q_power(h - 1) * (QRat.q_power(1) + QONE) * vx * geo
        if tag == 2:
            return QRat.q_power(-h) * (QRat.q_power(1) + QONE) * vx * geo
        if tag == 3:
            return QRat.q_power(-(h - 1)) * vx * geo
        if tag == 4:
            return QRat.q_power(-h) * vx * geo
        return (QRat.q_power(-(h + 1))
                * (QRat.q_power(2 * h + 1) + QRat.neg_q_power(h)) * vx * geo)
    if tag == 1:
        return QRat.q_power(h - 2) * (QRat.q_power(1) + QONE) * geo \
            + _d_term(n, h, a, b, c)
    if tag == 2:
        return QRat.q_power(-h - 1) * (QRat.q_power(1) + QONE) * geo \
            + _d_term(n, h, a, b, c)
    if tag == 4:
        return QRat.q_power(-h - 1) * geo + _d_term(n, h, a, b, c)
    raise InvalidParity("profile (%d,%d,%d) cannot meet a norm of odd valuation"
                        % (a, b, c))


def _shell_sums(n, h, lam, counts_deep, counts_shallow, split):
    """(S1, S2) from stratum counts; entries may be QRat or int."""

    def term(cnt, label, v):
        if isinstance(cnt, int):
            if cnt == 0:
                return QZERO
            cnt = QRat.from_int(cnt)
        elif cnt.is_zero():
            return QZERO
        ta, tb, tc = extend_profile(lam, label, v)
        return cnt * cy_d(n, h, ta, tb, tc)

    s2 = QZERO
    for agg, cnt in counts_deep.items():
        s2 = s2 + term(cnt, _AGG_REP.get(agg, agg), 2)
    if counts_shallow is None:
        return None, s2
    s1 = QZERO
    for agg, cnt in counts_shallow.items():
        label = _AGG_REP.get(agg, agg)
        if label == "1-2":
            s1 = s1 + term(split[0], "1-2-1", 1) + term(split[1], "1-2-2", 1)
        else:
            s1 = s1 + term(cnt, label, 1)
    return s1, s2


def _assemble(lam, x_val, s1, s2):
    vol = QRat.q_power(-sum(lam))
    if x_val <= -2:
        return vol * _geo() * QRat.q_power(x_val) * s2
    return vol * (QRat.q_power(-1) * s1 + QRat.q_power(-3) * _geo() * s2)


def fourier_pden_primitive(n, h, lam, x_val, route="closed-form",
                           model=None, budget=10 ** 8):
    """hat(pden-primitive) at a vector of negative valuation x_val.

    Routes: "closed-form" (symbolic dispatch), "stratum-sum" (symbolic
    stratum cardinalities times extended densities), "enumeration" (raw
    coset counts at the model's prime; valid at that q only).
    """
    lam = check_invariants(lam)
    if len(lam) != n - 1 or any(v < 0 for v in lam):
        raise InvalidInvariants("need n-1 nonnegative invariants")
    if not isinstance(x_val, int) or x_val >= 0:
        raise InvalidCase("x_val must be a negative integer")
    if not (0 <= h <= n):
        raise InvalidCase("need 0 <= h <= n")
    if (sum(lam) + x_val - h - 1) % 2 != 0:
        raise InvalidParity("val %d is not compatible with type %d"
                            % (sum(lam) + x_val, h))
    key = "fourier(n=%d,h=%d,lam=%s,xval=%d)" % (n, h, lam, x_val)
    a, b, c = profile_of(lam)
    if route == "closed-form":
        return DensityValue(_closed_route(n, h, a, b, c, x_val),
                            "closed-form", key)
    if route == "stratum-sum":
        deep = stratum_counts(lam)
        shallow = deep if x_val == -1 else None
        split = split_case12(lam) if x_val == -1 else None
        s1, s2 = _shell_sums(n, h, lam, deep, shallow, split)
        return DensityValue(_assemble(lam, x_val, s1, s2), "stratum-sum", key)
    if route == "enumeration":
        if model is None:
            model = RingModel(3)
        if model.q ** (2 * sum(lam)) > budget:
            raise BudgetExceeded("coset window needs q^%d states" % (2 * sum(lam)))
        deep = enumerate_strata(model, lam, budget=budget)
        shallow = None
        split = None
        if x_val == -1:
            raw = enumerate_strata(model, lam, budget=budget, uperp_val=1)
            split = (raw.pop("1-2-1"), raw.pop("1-2-2"))
            raw["1-2"] = 0
            shallow = raw
        s1, s2 = _shell_sums(n, h, lam, deep, shallow, split)
        return DensityValue(_assemble(lam, x_val, s1, s2), "enumeration", key)
    raise InvalidCase("unknown route %r" % (route,))
