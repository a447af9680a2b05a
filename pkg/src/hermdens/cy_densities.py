"""Closed-form density constants and the lattice sums assembled from them.

The central object is the family D_{n,h}(a,b,c): an explicit rational
function in q attached to a rank, a type, and a profile.  Around it sit
the constants C and M it is built from, the kappa/beta/correction
coefficients of the comparison identities, self-densities with known
closed forms, the overlattice sums (plain, primitive-at-a-vector, and
Moebius-inverted), and the stratum-to-profile extension rule.
"""

import functools
import itertools

from fractions import Fraction

from .errors import (
    BudgetExceeded,
    EmptyStratum,
    IndexOutOfRange,
    InvalidCase,
    InvalidInvariants,
    InvalidProfile,
    ParityMismatch,
    UnsupportedKind,
)
from .lattice_enum import (
    integral_overlattice_closure,
    overlattices,
)
from .padic_model import (
    GramMatrix,
    check_invariants,
    gram_invariants,
    profile_of,
)
from .qexact import QONE, QRat, QZERO, qpochhammer


class DensityValue:
    """A density together with the route that produced it."""

    __slots__ = ("value", "route", "key")

    def __init__(self, value, route, key):
        self.value = value
        self.route = route
        self.key = key

    def __repr__(self):
        return "DensityValue(%s, route=%s, key=%s)" % (self.value, self.route, self.key)

    def to_json(self):
        return {"value": str(self.value), "route": self.route, "key": self.key}


def _check_profile(a, b, c):
    if a < 0 or b < 0 or c < 0:
        raise InvalidProfile("profile parts must be nonnegative, got (%d,%d,%d)"
                             % (a, b, c))


def _parity_bit(parity):
    if parity in ("odd", 1):
        return 1
    if parity in ("even", 0):
        return 0
    if isinstance(parity, int):
        return parity % 2
    raise InvalidCase("parity must be 'even' or 'odd', got %r" % (parity,))


def c_const(a, b, c, parity="odd"):
    """C_j(a,b,c): sign by the parity of j, times prod_{i=1}^{a+b-1}(1-(-q)^i).

    The profile (0,0,n) instead returns sum_{l=1}^{n} 1/((-q)^l - 1),
    independent of parity.
    """
    _check_profile(a, b, c)
    n = a + b + c
    if (a, b) == (0, 0):
        total = QZERO
        for l in range(1, n + 1):
            total = total + QONE / (QRat.neg_q_power(l) - QONE)
        return total
    body = qpochhammer("plus", 1, a + b - 1)
    return body if _parity_bit(parity) == 1 else -body


def _pk(k):
    return qpochhammer("minus", 1, k)


def m_term(n, h, a, b, c, i, s):
    """The (i,s) summand M_{n,h}(a,b,c,i,s) of the density formula."""
    if not (0 <= s <= i <= h <= n):
        raise IndexOutOfRange("need 0 <= s <= i <= h <= n")
    _check_profile(a, b, c)
    if a + b + c != n:
        raise InvalidProfile("profile must sum to n")
    if b - s < 0 or c - i + s < 0:
        raise IndexOutOfRange("term indices leave the summation range")
    e = n * (h - i) + (i - s) * (2 * n - i + s + 1) // 2 - h * h \
        + s * (2 * n - 2 * c - s)
    sign = QONE if (i + h) % 2 == 0 else -QONE
    val = QRat.neg_q_power(e) * sign
    val = val * _pk(n - i) / (_pk(n - h) * _pk(h))
    val = val * qpochhammer("minus", s + 1, h) / (_pk(h - i) * _pk(i - s))
    val = val * _pk(c) * _pk(b) / (_pk(c - i + s) * _pk(b - s))
    j = h + 1 - s
    return val * c_const(a, b - s, c + s - i, "odd" if j % 2 else "even")


@functools.lru_cache(maxsize=None)
def _cy_d_cached(n, h, a, b, c):
    total = QZERO
    for s in range(0, min(h, b) + 1):
        for i in range(s, min(s + c, h) + 1):
            total = total + m_term(n, h, a, b, c, i, s)
    if a == 0 and b <= h - 1:
        t = b
        e = -(h - t) * (h + t + 1) // 2
        total = total + QRat.neg_q_power(e) / (QONE - QRat.neg_q_power(-(h - t)))
    return total


def cy_d(n, h, a, b, c):
    """D_{n,h}(a,b,c) as an exact rational function of q.

    Profiles (0,t,n-t) with t <= h-1 exist only at the parity t = h+1 mod 2;
    querying the opposite parity is rejected rather than silently zero.
    """
    _check_profile(a, b, c)
    if not (0 <= h <= n):
        raise InvalidProfile("need 0 <= h <= n")
    if a + b + c != n:
        raise InvalidProfile("profile (%d,%d,%d) must sum to n=%d" % (a, b, c, n))
    if a == 0 and b <= h - 1 and (b - h - 1) % 2 != 0:
        raise InvalidProfile("profile (0,%d,%d) needs %d = %d+1 mod 2"
                             % (b, c, b, h))
    return _cy_d_cached(n, h, a, b, c)


def cy_d_lambda(n, h, lam):
    """D_{n,h}(lambda) through the profile of the invariant vector."""
    lam = check_invariants(lam)
    if len(lam) != n:
        raise InvalidInvariants("need exactly n = %d invariants" % n)
    if any(v < 0 for v in lam):
        raise InvalidInvariants("invariants must be nonnegative")
    a, b, c = profile_of(lam)
    return cy_d(n, h, a, b, c)


def kappa(a, i):
    """Coefficient of X^i in (1-X)(1-(-q)X)...(1-(-q)^{a-2}X)."""
    if a < 1 or i < 0 or i > a - 1:
        raise IndexOutOfRange("kappa needs a >= 1 and 0 <= i <= a-1")
    coeffs = [QONE]
    for j in range(0, a - 1):
        nxt = [QZERO] * (len(coeffs) + 1)
        for k, ck in enumerate(coeffs):
            nxt[k] = nxt[k] + ck
            nxt[k + 1] = nxt[k + 1] - ck * QRat.neg_q_power(j)
        coeffs = nxt
    return coeffs[i]


def correction_coeff(n, h, k):
    """Coefficient of the normalized Den(Lambda_k) term, 0 <= k <= h-1."""
    if not (0 <= k <= h - 1 and h <= n):
        raise IndexOutOfRange("need 0 <= k <= h-1 <= n-1")
    e = -(h - k) * (h + k + 1) // 2
    return QRat.neg_q_power(e) / (QONE - QRat.neg_q_power(-(h - k)))


def _x_node(m, n):
    if 1 <= m <= n:
        return QRat.neg_q_power(n + 1 - m)
    if n + 1 <= m <= 2 * n:
        return QRat.neg_q_power(m - 2 * n - 1)
    return QONE


def _alpha_node(m, n, h):
    if 1 <= m <= n:
        return QRat.neg_q_power((n + 1 - m) * (2 * n - h))
    if n + 1 <= m <= 2 * n:
        return QRat.neg_q_power((2 * n + 1 - m) * (2 * n + h))
    return QONE


def beta_const(n, i, h):
    """The interpolation constant beta_i^h built from the node tables."""
    if not (0 <= i <= 2 * n and 0 <= h <= 2 * n):
        raise IndexOutOfRange("need 0 <= i, h <= 2n")
    i1 = i + 1
    xi = _x_node(i1, n)
    num = QONE
    for m in range(1, 2 * n + 1):
        if m != i1:
            num = num * (QONE - _x_node(m, n))
    den = QONE
    for m in range(1, 2 * n + 2):
        if m != i1:
            den = den * (_x_node(m, n) - xi)
    return num / den / _alpha_node(i1, n, h)


def self_density(kind, params):
    """Representation self-densities with known closed forms.

    kinds: "I" (n, k); "A_t_pi" (t, n, h); "I_pad" (n, h, t); "W_nn" (n,);
    "two_scaled" (n,); "lam_two_scaled" (n, lam).  Anything else needs the
    counting oracle and is rejected.
    """
    if kind == "I":
        n, k = params
        if not 0 <= k <= n:
            raise IndexOutOfRange("need 0 <= k <= n")
        return QRat.q_power(k * k) * _pk(n - k) * _pk(k)
    if kind == "A_t_pi":
        t, n, h = params
        return qpochhammer("minus", t - n + h + 1, t)
    if kind == "I_pad":
        n, h, t = params
        return qpochhammer("minus", 2 * n - h - t + 1, 2 * n - t)
    if kind == "W_nn":
        (n,) = params
        return QRat.q_power(-3 * n * n) * _pk(n) * _pk(n)
    if kind == "two_scaled":
        (n,) = params
        return QRat.q_power(2 * (n - 1) * (n - 1)) * _pk(n - 1)
    if kind == "lam_two_scaled":
        n, lam = params
        if lam < 2:
            raise IndexOutOfRange("need lam >= 2")
        if lam == 2:
            return QRat.q_power(2 * n * n) * _pk(n)
        return (QRat.q_power(2 * (n * n - 1) + lam)
                * (QONE - QRat.neg_q_power(-1)) * _pk(n - 1))
    raise UnsupportedKind("no closed form for kind %r" % (kind,))


def beta_combination(n, h, t):
    """The beta-and-alpha product that must reproduce -correction_coeff.

    Combines beta_const with the closed-form self-densities and the
    W-normalization at k = t-n+h.
    """
    k = t - n + h
    if not (0 <= k <= h - 1 and h <= n):
        raise IndexOutOfRange("need 0 <= t-n+h <= h-1")
    e = -4 * n * n + (n + h) * (3 * n - 2 * t - h)
    return (beta_const(n, t, n - h)
            * QRat.q_power(e)
            * self_density("A_t_pi", (t, n, h))
            * self_density("I_pad", (n, h, t))
            * self_density("I", (n, k))
            / self_density("W_nn", (n,)))


def horizontal_ratio(n, lam):
    """Growth ratio of horizontal overlattice counts in the rank-n unit."""
    if lam < 2:
        raise IndexOutOfRange("need lam >= 2")
    base = QRat.q_power(2 * n - 2)
    if lam >= 3:
        return base
    return base * (QONE - QRat.neg_q_power(-n)) / (QONE - QRat.neg_q_power(-1))


_DEEP_SHIFTS = {
    "1-1": (1, 0, 0),
    "1-2": (0, 1, 0),
    "1-3": (0, 0, 1),
    "2-1": (1, -2, 2),
    "2-2": (0, -1, 2),
    "3-1": (-1, 2, 0),
    "3-2": (0, 0, 1),
    "4-1": (1, -2, 2),
    "4-2": (0, -1, 2),
    "5": (-1, 0, 2),
}

_SHALLOW_SHIFTS = dict(_DEEP_SHIFTS)
del _SHALLOW_SHIFTS["1-2"]
_SHALLOW_SHIFTS["1-1"] = (0, 1, 0)
_SHALLOW_SHIFTS["1-2-1"] = (0, 1, 0)
_SHALLOW_SHIFTS["1-2-2"] = (1, 0, 0)

_NEEDS_DEEP_PART = ("3-1", "3-2", "4-1", "4-2", "5")
_NEEDS_SHALLOW_PART = ("2-1", "2-2", "4-1", "4-2")


def extend_profile(lam, stratum, val_uperp):
    """Profile of L'b + <ub + uperp> by stratum label and val((uperp,uperp))."""
    lam = check_invariants(lam)
    if any(v < 0 for v in lam):
        raise InvalidInvariants("invariants must be nonnegative")
    if not isinstance(val_uperp, int) or val_uperp < 1:
        raise InvalidCase("val_uperp must be an integer >= 1")
    table = _DEEP_SHIFTS if val_uperp >= 2 else _SHALLOW_SHIFTS
    if stratum not in table:
        raise InvalidCase("stratum %r unknown at val_uperp=%d" % (stratum, val_uperp))
    a, b, c = profile_of(lam)
    base = "1-2" if stratum.startswith("1-2") else stratum
    if a == 0 and base in _NEEDS_DEEP_PART:
        raise EmptyStratum("stratum %s needs a part >= 2" % stratum)
    if b == 0 and base in _NEEDS_SHALLOW_PART:
        raise EmptyStratum("stratum %s needs a part = 1" % stratum)
    da, db, dc = table[stratum]
    out = (a + da, b + db, c + dc)
    if min(out) < 0:
        raise EmptyStratum("stratum %s is empty on profile (%d,%d,%d)"
                           % (stratum, a, b, c))
    return out


_PDEN_CACHE = {}


def pden_lattice(lattice, h, budget=10 ** 9):
    """Sum of D_{n,h} over every integral overlattice, route lattice-sum."""
    if not lattice.is_integral():
        raise InvalidInvariants("lattice sum needs an integral lattice")
    n = lattice.rank
    if (lattice.val() - h - 1) % 2 != 0:
        raise ParityMismatch("val %d and type %d have equal parity"
                             % (lattice.val(), h))
    key = (lattice.model.p, n, h, lattice.invariants())
    if key in _PDEN_CACHE:
        return DensityValue(_PDEN_CACHE[key], "lattice-sum",
                            "pden%s" % (key[1:],))
    total = QZERO
    for item in integral_overlattice_closure(lattice, budget=budget):
        total = total + cy_d_lambda(n, h, item.lattice.invariants())
    _PDEN_CACHE[key] = total
    return DensityValue(total, "lattice-sum", "pden%s" % (key[1:],))


_PDEN_PRIM_CACHE = {}


def pden_primitive_at(lb, h, x_val, x_orth=True, budget=10 ** 9):
    """Primitive lattice sum at a vector x orthogonal to L'b.

    Enumerates integral L' over L'b + <x> whose intersection with the
    L'b-span is exactly L'b, and sums D_{n,h}; val((x,x)) = x_val >= 0.
    Every such L' is L'b + O(w + pi^{-s} x) for a unique s >= 0 and a
    unique coset w of (pi^{-s} L'b cap L'b^dual)/L'b whose norm cancels
    (x,x)/p^{2s} into O, so the sum walks those cosets directly.
    """
    if not x_orth:
        raise InvalidCase("the sum is defined for x orthogonal to the base")
    if not isinstance(x_val, int) or x_val < 0:
        raise InvalidCase("x_val must be an integer >= 0")
    if not lb.is_integral():
        raise InvalidInvariants("base lattice must be integral")
    n = lb.rank + 1
    if (lb.val() + x_val - h - 1) % 2 != 0:
        raise ParityMismatch("val %d and type %d have equal parity"
                             % (lb.val() + x_val, h))
    model = lb.model
    lam = lb.invariants()
    key = (model.p, n, h, lam, x_val)
    if key in _PDEN_PRIM_CACHE:
        return DensityValue(_PDEN_PRIM_CACHE[key], "lattice-sum",
                            "pden-prim%s" % (key[1:],))
    p, u = model.p, model.u
    smax = (x_val + (lam[0] if lam else 0)) // 2
    total = QZERO
    work = 0
    for s in range(smax + 1):
        depths = [min(s, li) for li in lam]
        mod2s = p ** (2 * s)
        opts = [tuple(itertools.product(range(p ** d), repeat=2))
                for d in depths]
        for combo in itertools.product(*opts):
            work += 1
            if work > budget:
                raise BudgetExceeded("primitive sum visited %d cosets" % work)
            acc = p ** x_val
            for (ta, tb), d, li in zip(combo, depths, lam):
                acc += (ta * ta - u * tb * tb) * p ** (li + 2 * s - 2 * d)
            if acc % mod2s:
                continue
            entries = [[model.scalar(p ** li if i == j else 0)
                        for j, lj in enumerate(lam)] for i, li in enumerate(lam)]
            col = [model.scalar(Fraction(ta * p ** li, p ** d),
                                Fraction(-tb * p ** li, p ** d))
                   for (ta, tb), d, li in zip(combo, depths, lam)]
            for i, x in enumerate(col):
                entries[i].append(x)
            entries.append([x.conj() for x in col]
                           + [model.scalar(Fraction(acc, mod2s))])
            inv = gram_invariants(GramMatrix(model, entries))
            total = total + cy_d_lambda(n, h, inv)
    _PDEN_PRIM_CACHE[key] = total
    return DensityValue(total, "lattice-sum", "pden-prim%s" % (key[1:],))


def ppden_moebius(lattice, h, budget=10 ** 9):
    """Alternating depth-1 sum of pden_lattice: the primitive density."""
    if not lattice.is_integral():
        raise InvalidInvariants("Moebius sum needs an integral lattice")
    if (lattice.val() - h - 1) % 2 != 0:
        raise ParityMismatch("val %d and type %d have equal parity"
                             % (lattice.val(), h))
    n = lattice.rank
    total = QZERO
    for item in overlattices(lattice, 1, "all", budget=budget):
        if not item.integral:
            continue
        i = item.length
        # subspace-poset Moebius over the residue field of F, base q^2
        weight = QRat.q_power(i * (i - 1))
        if i % 2:
            weight = -weight
        total = total + weight * pden_lattice(item.lattice, h, budget).value
    return DensityValue(total, "lattice-sum",
                        "ppden(%s; h=%d)" % (lattice.invariants(), h))
