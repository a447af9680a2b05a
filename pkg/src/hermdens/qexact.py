"""Exact rational functions in the residue cardinality q.

Values are quotients of integer-coefficient Laurent polynomials in one
variable q.  Every ``QRat`` is stored in canonical form:

* the denominator is a true polynomial with nonzero constant term (all
  powers of q are shifted into the numerator),
* numerator and denominator share no polynomial factor,
* the integer content gcd of the two sides is 1 and the leading
  denominator coefficient is positive.

Canonical form makes equality structural, so identities between densities
can be checked exactly, with no appeal to floating point or to evaluation
at sample points.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import DivisionByZero, PoleAtPoint

# ---------------------------------------------------------------------------
# Laurent polynomials as {exponent: coefficient} dicts, coefficients nonzero.


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pmul(a, b):
    if not a or not b:
        return {}
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pshift(a, k):
    return {e + k: c for e, c in a.items()}


def _pcontent(a):
    g = 0
    for c in a.values():
        g = gcd(g, abs(c))
    return g


def _to_dense(a):
    """True polynomial dict -> coefficient list, lowest degree first."""
    if not a:
        return []
    n = max(a)
    out = [0] * (n + 1)
    for e, c in a.items():
        out[e] = c
    return out


def _from_dense(v):
    return {e: c for e, c in enumerate(v) if c}


def _dense_trim(v):
    while v and v[-1] == 0:
        v.pop()
    return v


def _dense_primitive(v):
    g = 0
    for c in v:
        g = gcd(g, abs(c))
    if g > 1:
        v = [c // g for c in v]
    if v and v[-1] < 0:
        v = [-c for c in v]
    return v


def _dense_prem(a, b):
    """Pseudo-remainder of a by b (b nonzero, deg a >= deg b)."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and _dense_trim(a):
        la = a[-1]
        da = len(a) - 1
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[da - db + i] -= la * c
        _dense_trim(a)
        if not a:
            break
    return a


def _dense_gcd(a, b):
    a = _dense_primitive(_dense_trim(list(a)))
    b = _dense_primitive(_dense_trim(list(b)))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _dense_prem(a, b)
        a, b = b, _dense_primitive(_dense_trim(r))
    return a


def _dense_divexact(a, b):
    """Exact quotient a / b over the integers (raises if not divisible)."""
    a = [Fraction(c) for c in a]
    db = len(b) - 1
    lb = b[-1]
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lb
        q[i - db] = c
        if c:
            for j, bc in enumerate(b):
                a[i - db + j] -= c * bc
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    out = []
    for c in q:
        if c.denominator != 1:
            raise ArithmeticError("inexact polynomial division")
        out.append(int(c))
    return out


# ---------------------------------------------------------------------------


class QRat:
    """A rational function of q in canonical form."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num=0, den=1):
        if isinstance(num, QRat) or isinstance(den, QRat):
            raise TypeError("use qr_ops to combine QRat values")
        if isinstance(num, int):
            num = {0: num} if num else {}
        if isinstance(den, int):
            den = {0: den} if den else {}
        num, den = _canonical(dict(num), dict(den))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        key = (
            tuple(sorted(num.items())),
            tuple(sorted(den.items())),
        )
        object.__setattr__(self, "_key", key)

    def __setattr__(self, name, value):
        raise AttributeError("QRat is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "QRat":
        return QRat(n)

    @staticmethod
    def from_fraction(fr: Fraction) -> "QRat":
        return QRat(fr.numerator, fr.denominator)

    @staticmethod
    def q_power(k: int) -> "QRat":
        """q^k for any integer k."""
        return QRat({k: 1})

    @staticmethod
    def neg_q_power(k: int) -> "QRat":
        """(-q)^k expanded as (-1)^k q^k."""
        return QRat({k: -1 if k % 2 else 1})

    @staticmethod
    def from_terms(num_terms, den_terms=None) -> "QRat":
        """Build from [(coef, exp), ...] pairs; denominator defaults to 1."""
        num = {}
        for c, e in num_terms:
            num[e] = num.get(e, 0) + c
        den = {0: 1}
        if den_terms is not None:
            den = {}
            for c, e in den_terms:
                den[e] = den.get(e, 0) + c
        return QRat(num, den)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == {0: 1} and self.den == {0: 1}

    def is_integer(self) -> bool:
        return self.den == {0: 1} and all(e >= 0 for e in self.num)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = QRat(other)
        if not isinstance(other, QRat):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    # -- arithmetic (operator sugar over qr_ops) ---------------------------

    def __add__(self, other):
        return qr_ops(self, other, "add")

    def __sub__(self, other):
        return qr_ops(self, other, "sub")

    def __mul__(self, other):
        return qr_ops(self, other, "mul")

    def __truediv__(self, other):
        return qr_ops(self, other, "div")

    def __pow__(self, k):
        return qr_ops(self, k, "pow")

    def __neg__(self):
        return QRat(_pneg(self.num), dict(self.den))

    def __radd__(self, other):
        return qr_ops(QRat(other), self, "add")

    def __rsub__(self, other):
        return qr_ops(QRat(other), self, "sub")

    def __rmul__(self, other):
        return qr_ops(QRat(other), self, "mul")

    def __rtruediv__(self, other):
        return qr_ops(QRat(other), self, "div")

    # -- serialization -----------------------------------------------------

    def __str__(self):
        return "(%s)/(%s)" % (_poly_str(self.num), _poly_str(self.den))

    def __repr__(self):
        return "QRat(%s)" % self

    def to_json(self):
        """{"num": [[coef, exp], ...], "den": ...} with exponents decreasing."""
        return {
            "num": [[c, e] for e, c in sorted(self.num.items(), reverse=True)],
            "den": [[c, e] for e, c in sorted(self.den.items(), reverse=True)],
        }

    @staticmethod
    def from_json(obj) -> "QRat":
        num = {int(e): int(c) for c, e in obj["num"]}
        den = {int(e): int(c) for c, e in obj["den"]}
        return QRat(num, den)


def _canonical(num, den):
    num = {e: c for e, c in num.items() if c}
    den = {e: c for e, c in den.items() if c}
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return {}, {0: 1}
    shift = min(num) - min(den)
    n = _to_dense(_pshift(num, -min(num)))
    d = _to_dense(_pshift(den, -min(den)))
    g = _dense_gcd(n, d)
    if len(g) > 1:
        n = _dense_divexact(n, g)
        d = _dense_divexact(d, g)
    c = gcd(_pcontent(_from_dense(n)), _pcontent(_from_dense(d)))
    if c > 1:
        n = [x // c for x in n]
        d = [x // c for x in d]
    if d[-1] < 0:
        n = [-x for x in n]
        d = [-x for x in d]
    return _pshift(_from_dense(n), shift), _from_dense(d)


def _poly_str(p):
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if e == 0:
            body = str(c)
        else:
            var = "q" if e == 1 else "q^%d" % e
            body = var if c == 1 else "%d*%s" % (c, var)
        if not parts:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append("%s %s" % (sign, body))
    return " ".join(parts)


def qr_ops(lhs, rhs, kind: str) -> QRat:
    """Combine two rational functions.

    kind is one of "add", "sub", "mul", "div", "pow".  For "pow" the right
    operand is an integer exponent, negative exponents invert first.
    Division by zero raises DivisionByZero.
    """
    if isinstance(lhs, int):
        lhs = QRat(lhs)
    if kind == "pow":
        k = rhs
        if not isinstance(k, int):
            raise TypeError("pow exponent must be an integer")
        if k < 0:
            if lhs.is_zero():
                raise DivisionByZero("0 ** negative")
            lhs = QRat(dict(lhs.den), dict(lhs.num))
            k = -k
        out = QRat(1)
        base = lhs
        while k:
            if k & 1:
                out = qr_ops(out, base, "mul")
            base = qr_ops(base, base, "mul")
            k >>= 1
        return out
    if isinstance(rhs, int):
        rhs = QRat(rhs)
    if kind == "add":
        num = _padd(_pmul(lhs.num, rhs.den), _pmul(rhs.num, lhs.den))
        return QRat(num, _pmul(lhs.den, rhs.den))
    if kind == "sub":
        num = _padd(_pmul(lhs.num, rhs.den), _pneg(_pmul(rhs.num, lhs.den)))
        return QRat(num, _pmul(lhs.den, rhs.den))
    if kind == "mul":
        return QRat(_pmul(lhs.num, rhs.num), _pmul(lhs.den, rhs.den))
    if kind == "div":
        if rhs.is_zero():
            raise DivisionByZero("division by zero rational function")
        return QRat(_pmul(lhs.num, rhs.den), _pmul(lhs.den, rhs.num))
    raise ValueError("unknown kind %r" % kind)


@lru_cache(maxsize=None)
def qpochhammer(sign: str, lo: int, hi: int) -> QRat:
    """Product of (1 - (-q)^(+l)) or (1 - (-q)^(-l)) for l = lo .. hi.

    sign "plus" uses exponent +l, sign "minus" uses exponent -l.  An empty
    range (hi < lo) gives 1.
    """
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    if hi < lo:
        return QRat(1)
    out = QRat(1)
    for l in range(lo, hi + 1):
        e = l if sign == "plus" else -l
        out = out * (QRat(1) - QRat.neg_q_power(e))
    return out


def qr_eval(f: QRat, q0: int) -> Fraction:
    """Evaluate at an integer point; raises PoleAtPoint on a zero denominator."""
    if not isinstance(q0, int):
        raise TypeError("q0 must be an integer")
    if q0 == 0 and any(e < 0 for e in f.num):
        raise PoleAtPoint("negative powers of q at q=0")
    den = _peval(f.den, q0)
    if den == 0:
        raise PoleAtPoint("denominator vanishes at q=%d" % q0)
    return _peval(f.num, q0) / den


def _peval(p, q0):
    out = Fraction(0)
    for e, c in p.items():
        out += c * (Fraction(q0) ** e)
    return out


QZERO = QRat(0)
QONE = QRat(1)
QVAR = QRat.q_power(1)
