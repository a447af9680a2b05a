"""Exact model of hermitian forms over the unramified quadratic extension.

The base field is the p-adic numbers with p odd, the extension is obtained
by adjoining a square root of the smallest quadratic non-residue u mod p.
Scalars are kept as exact pairs of rationals a + b*sqrt(u); all valuations
and Gram eliminations are computed without truncation.

Forms are linear in the first argument and conjugate-linear in the second.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import (
    DegenerateGram,
    InvalidInvariants,
    InvalidPrime,
    PrecisionLoss,
)
from .qexact import QRat

INF = float("inf")


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _vp(fr: Fraction, p: int):
    """p-adic valuation of a rational number, INF for zero."""
    if fr == 0:
        return INF
    v = 0
    n = fr.numerator
    while n % p == 0:
        n //= p
        v += 1
    if v:
        return v
    d = fr.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


class RingModel:
    """Working ring parameters: odd prime p, truncation depth d, non-residue u."""

    __slots__ = ("p", "d", "u")

    def __init__(self, p: int, d: int = 1):
        if not isinstance(p, int) or not _is_odd_prime(p):
            raise InvalidPrime("p must be an odd prime, got %r" % (p,))
        if not isinstance(d, int) or d < 1:
            raise InvalidPrime("depth d must be a positive integer, got %r" % (d,))
        self.p = p
        self.d = d
        self.u = _smallest_qnr(p)

    @property
    def q(self) -> int:
        return self.p

    def __eq__(self, other):
        return isinstance(other, RingModel) and (self.p, self.d) == (other.p, other.d)

    def __hash__(self):
        return hash((self.p, self.d))

    def __repr__(self):
        return "RingModel(p=%d, d=%d, u=%d)" % (self.p, self.d, self.u)

    def scalar(self, a, b=0) -> "ExactScalar":
        return ExactScalar(self, Fraction(a), Fraction(b))

    def pi_pow(self, k: int) -> "ExactScalar":
        return ExactScalar(self, Fraction(self.p) ** k, Fraction(0))


@lru_cache(maxsize=None)
def _smallest_qnr(p: int) -> int:
    residues = {pow(x, 2, p) for x in range(1, p)}
    for u in range(2, p):
        if u % p not in residues:
            return u
    raise InvalidPrime("no quadratic non-residue found for p=%d" % p)


class ExactScalar:
    """Element a + b*sqrt(u) of the quadratic extension, exact rationals."""

    __slots__ = ("model", "a", "b")

    def __init__(self, model: RingModel, a, b=0):
        self.model = model
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __eq__(self, other):
        return (
            isinstance(other, ExactScalar)
            and self.model == other.model
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.a, self.b, self.model.p))

    def __repr__(self):
        if self.b == 0:
            return "ExactScalar(%s)" % self.a
        return "ExactScalar(%s + %s*w)" % (self.a, self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conj(self) -> "ExactScalar":
        return ExactScalar(self.model, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.model.u * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def val(self):
        """Valuation normalized so val(p) = 1; INF for zero."""
        p = self.model.p
        return min(_vp(self.a, p), _vp(self.b, p))

    def __add__(self, other):
        return ExactScalar(self.model, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return ExactScalar(self.model, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return ExactScalar(self.model, -self.a, -self.b)

    def __mul__(self, other):
        u = self.model.u
        return ExactScalar(
            self.model,
            self.a * other.a + u * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __truediv__(self, other):
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        c = other.conj()
        num = self * c
        return ExactScalar(self.model, num.a / n, num.b / n)

    def scale(self, fr) -> "ExactScalar":
        fr = Fraction(fr)
        return ExactScalar(self.model, self.a * fr, self.b * fr)

    def residue_pair(self, k: int):
        """(a, b) reduced mod p^k; denominators must be prime to p."""
        p = self.model.p
        m = p ** k
        out = []
        for x in (self.a, self.b):
            if x.denominator % p == 0:
                raise PrecisionLoss("denominator not prime to p in residue")
            out.append(x.numerator * pow(x.denominator, -1, m) % m)
        return tuple(out)


class GramMatrix:
    """Hermitian n x n matrix of exact scalars (conjugate-symmetric)."""

    __slots__ = ("model", "n", "entries")

    def __init__(self, model: RingModel, entries):
        n = len(entries)
        rows = []
        for i in range(n):
            if len(entries[i]) != n:
                raise ValueError("gram matrix must be square")
            rows.append(tuple(entries[i]))
        self.model = model
        self.n = n
        self.entries = tuple(rows)
        for i in range(n):
            for j in range(i, n):
                x, y = self.entries[i][j], self.entries[j][i]
                if x.a != y.a or x.b != -y.b:
                    raise ValueError("matrix is not hermitian")

    @staticmethod
    def from_diag(model: RingModel, exps) -> "GramMatrix":
        """diag(pi^e) for a list of integer valuations e."""
        n = len(exps)
        z = model.scalar(0)
        rows = [[z] * n for _ in range(n)]
        for i, e in enumerate(exps):
            rows[i][i] = model.pi_pow(e)
        return GramMatrix(model, rows)

    def entry(self, i, j) -> ExactScalar:
        return self.entries[i][j]

    def to_json(self):
        """Row-major entries as [[a_num, a_pow], [b_num, b_pow]] with x = num/p^pow."""
        p = self.model.p

        def enc(fr):
            k = 0
            d = fr.denominator
            while d % p == 0:
                d //= p
                k += 1
            if d != 1:
                raise PrecisionLoss("denominator is not a power of p")
            return [fr.numerator, k]

        ents = []
        for i in range(self.n):
            for j in range(self.n):
                x = self.entries[i][j]
                ents.append([enc(x.a), enc(x.b)])
        return {"n": self.n, "p": p, "u": self.model.u, "entries": ents}

    @staticmethod
    def from_json(obj) -> "GramMatrix":
        model = RingModel(obj["p"])
        n = obj["n"]
        ents = obj["entries"]
        if len(ents) != n * n:
            raise ValueError("entry list must have n^2 items")
        p = model.p
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                (an, ak), (bn, bk) = ents[i * n + j]
                row.append(
                    ExactScalar(
                        model,
                        Fraction(an, p ** ak),
                        Fraction(bn, p ** bk),
                    )
                )
            rows.append(row)
        return GramMatrix(model, rows)


def gram_conjugate(gram: GramMatrix, rows) -> GramMatrix:
    """Gram of the vectors whose coordinate rows (old basis) are given."""
    model = gram.model
    n = gram.n
    m = len(rows)
    cols = []
    for k in range(m):
        col = []
        for i in range(n):
            s = model.scalar(0)
            for j in range(n):
                g = gram.entries[i][j]
                if not g.is_zero():
                    s = s + g * rows[k][j].conj()
            col.append(s)
        cols.append(col)
    out = []
    for i in range(m):
        row = []
        for k in range(m):
            s = model.scalar(0)
            for j in range(n):
                if not rows[i][j].is_zero():
                    s = s + rows[i][j] * cols[k][j]
            row.append(s)
        out.append(row)
    return GramMatrix(model, out)


def gram_invariants(gram: GramMatrix):
    """Sorted (nonincreasing) valuations of the elementary divisors.

    A diagonal entry of minimal valuation serves as a pivot and splits off
    one invariant.  When the minimum is attained only off the diagonal, the
    corresponding 2 x 2 block is unimodular after scaling and contributes a
    pair of equal invariants; the complement is made orthogonal to it by an
    exact 2 x 2 solve.
    """
    work = [list(row) for row in gram.entries]
    active = list(range(gram.n))
    invs = []
    while active:
        vmin = INF
        pivot_pair = None
        for i in active:
            for j in active:
                v = work[i][j].val()
                if v < vmin:
                    vmin = v
                    pivot_pair = (i, j)
        if vmin == INF:
            raise DegenerateGram("gram matrix is singular")
        diag = next((i for i in active if work[i][i].val() == vmin), None)
        if diag is not None:
            i = diag
            piv = work[i][i]
            rest = [k for k in active if k != i]
            coefs = {k: work[k][i] / piv for k in rest}
            old_row = {l: work[i][l] for l in rest}
            for k in rest:
                ck = coefs[k]
                if ck.is_zero():
                    continue
                for l in rest:
                    work[k][l] = work[k][l] - ck * old_row[l]
            invs.append(int(vmin))
            active = rest
        else:
            i, j = pivot_pair
            rest = [k for k in active if k not in (i, j)]
            gii, gij, gjj = work[i][i], work[i][j], work[j][j]
            gji = gij.conj()
            det = gii * gjj - gij * gji
            if det.is_zero():
                raise DegenerateGram("gram matrix is singular")
            old_i = {l: work[i][l] for l in rest}
            old_j = {l: work[j][l] for l in rest}
            coefs = {}
            for k in rest:
                gki, gkj = work[k][i], work[k][j]
                alpha = (gkj * gji - gki * gjj) / det
                beta = (gki * gij - gkj * gii) / det
                coefs[k] = (alpha, beta)
            for k in rest:
                alpha, beta = coefs[k]
                for l in rest:
                    t = work[k][l]
                    if not alpha.is_zero():
                        t = t + alpha * old_i[l]
                    if not beta.is_zero():
                        t = t + beta * old_j[l]
                    work[k][l] = t
            invs.extend([int(vmin), int(vmin)])
            active = rest
    invs.sort(reverse=True)
    return tuple(invs)


def gram_inverse(gram: GramMatrix) -> GramMatrix:
    """Exact inverse by Gaussian elimination over the quadratic field."""
    model = gram.model
    n = gram.n
    a = [list(row) + [model.scalar(1 if k == i else 0) for k in range(n)]
         for i, row in enumerate(gram.entries)]
    for col in range(n):
        piv = None
        best = INF
        for r in range(col, n):
            v = a[r][col].val()
            if v < best:
                best = v
                piv = r
        if piv is None or a[piv][col].is_zero():
            raise DegenerateGram("gram matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                c = a[r][col]
                a[r] = [x - c * y for x, y in zip(a[r], a[col])]
    return GramMatrix(model, [row[n:] for row in a])


def profile_of(invariants, strict: bool = True):
    """Profile (a, b, c) = (#{v >= 2}, #{v = 1}, #{v = 0}) of an invariant list."""
    lam = list(invariants)
    if strict and any(v < 0 for v in lam):
        raise InvalidInvariants("profile requires nonnegative invariants")
    a = sum(1 for v in lam if v >= 2)
    b = sum(1 for v in lam if v == 1)
    c = sum(1 for v in lam if v == 0)
    return (a, b, c)


def check_invariants(lam):
    """Validate and canonicalize an invariant vector (nonincreasing ints)."""
    lam = tuple(int(v) for v in lam)
    if any(not isinstance(v, int) for v in lam):
        raise InvalidInvariants("invariants must be integers")
    return tuple(sorted(lam, reverse=True))


class HermLattice:
    """Lattice presented by a Gram matrix; invariants are computed lazily."""

    __slots__ = ("gram", "_invariants")

    def __init__(self, gram: GramMatrix):
        self.gram = gram
        self._invariants = None

    @staticmethod
    def from_invariants(model: RingModel, lam) -> "HermLattice":
        lam = check_invariants(lam)
        return HermLattice(GramMatrix.from_diag(model, lam))

    @property
    def model(self) -> RingModel:
        return self.gram.model

    @property
    def rank(self) -> int:
        return self.gram.n

    def invariants(self):
        if self._invariants is None:
            self._invariants = gram_invariants(self.gram)
        return self._invariants

    def val(self) -> int:
        return sum(self.invariants())

    def vol(self) -> QRat:
        return QRat.q_power(-self.val())

    def profile(self):
        return profile_of(self.invariants())

    def is_integral(self) -> bool:
        return all(v >= 0 for v in self.invariants())

    def dual(self) -> "HermLattice":
        return HermLattice(gram_inverse(self.gram))


def lattice_val_vol(lattice: HermLattice):
    """(val, vol) with vol = q^(-val) as an exact rational function."""
    v = lattice.val()
    return v, QRat.q_power(-v)


def lattice_dual(lattice: HermLattice) -> HermLattice:
    return lattice.dual()
