"""Finite enumeration around a hermitian lattice.

Dual-coset windows with norm grading, the mu-counting functions (closed
form and brute force), stratum cardinalities for vectors in the dual
quotient, and overlattice / submodule listings over the chain rings
O/pi^m.  Everything here is exact counting; no closed-form density
knowledge leaks in except through mu_closed's recursion.
"""

import functools
import itertools

from fractions import Fraction

from .errors import (
    BudgetExceeded,
    IndexOutOfRange,
    InvalidCase,
    InvalidInvariants,
    PrecisionLoss,
)
from .padic_model import (
    INF,
    ExactScalar,
    GramMatrix,
    HermLattice,
    RingModel,
    _vp,
    check_invariants,
    gram_conjugate,
)
from .qexact import QONE, QRat, QZERO


# ---------------------------------------------------------------------------
# mu-counts, closed form
# ---------------------------------------------------------------------------

def _strip_zeros(lam):
    out = tuple(sorted((int(a) for a in lam), reverse=True))
    if out and out[-1] < 0:
        raise InvalidInvariants("negative invariant in %r" % (lam,))
    return tuple(a for a in out if a > 0)


@functools.lru_cache(maxsize=None)
def _mu_rec(lam):
    # lam strictly positive, sorted; mu of the empty lattice is 1
    if not lam:
        return QONE
    n = len(lam)
    down = _strip_zeros(a - 1 for a in lam)
    qm1 = QRat.q_power(1) - QONE
    return (QRat.q_power(2 * n - 1) * _mu_rec(down)
            - QRat.neg_q_power(sum(lam) - 1) * qm1)


def mu_closed(lam):
    """mu(L_lam) as an exact rational in q.

    Recursion: mu(L_lam) = q^{2n-1} mu(L_{lam-1}) - (-q)^{|lam|-1}(q-1),
    where lam-1 subtracts 1 from every part of an all-positive lam; zero
    parts never contribute (unimodular directions have trivial dual coset).
    """
    return _mu_rec(_strip_zeros(lam))


def mu_recursion_eta(lam):
    """The (eta, correction) recursion for mu(L_lam).

    For lam >= (1,...,1) with lam_1 >= 3 take eta = lam with lam_1 -> lam_1-2;
    for lam_1 = lam_2 = 2 take eta = lam with the two leading 2s -> 1s.
    Returns the recursion's right side; mu_closed(lam) must equal it.
    """
    lam = _strip_zeros(lam)
    if not lam or lam[-1] < 1:
        raise InvalidInvariants("recursion needs all parts >= 1")
    if lam[0] >= 3:
        eta = _strip_zeros((lam[0] - 2,) + lam[1:])
    elif len(lam) >= 2 and lam[0] == 2 and lam[1] == 2:
        eta = _strip_zeros((1, 1) + lam[2:])
    else:
        raise InvalidCase("no admissible eta for %r" % (lam,))
    t1_lam = len(lam)
    t2_lam = sum(1 for a in lam if a >= 2)
    t2_eta = sum(1 for a in eta if a >= 2)
    lam22 = _strip_zeros(a - 2 for a in lam if a >= 2)
    eta22 = _strip_zeros(a - 2 for a in eta if a >= 2)
    return (QRat.q_power(2) * mu_closed(eta)
            + QRat.q_power(2 * t1_lam + 2 * t2_lam - 2) * mu_closed(lam22)
            - QRat.q_power(2 * t1_lam + 2 * t2_eta) * mu_closed(eta22))


# ---------------------------------------------------------------------------
# dual-coset windows, brute force
# ---------------------------------------------------------------------------

class CosetSpace:
    """Graded coset window (pi^s L^v)^{>= f} / L for a diagonal model."""

    __slots__ = ("model", "lam", "scale", "floor", "size")

    def __init__(self, model, lam, scale, floor):
        self.model = model
        self.lam = tuple(lam)
        self.scale = scale
        self.floor = floor
        self.size = model.p ** (2 * sum(max(a - scale, 0) for a in lam))


def _coset_tuples(p, depths):
    """All residue tuples ((a_i, b_i))_i with 0 <= a_i, b_i < p^{depths_i}."""
    ranges = [range(p ** k) for k in depths]
    per_coord = [list(itertools.product(r, r)) for r in ranges]
    return itertools.product(*per_coord)


def _vp_int(n, p):
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp(fr, p):
    if fr == 0:
        return INF
    return _vp_int(fr.numerator, p) - _vp_int(fr.denominator, p)


def _norm_val(p, u, lam, scale, coords):
    """val((x,x)) for x = sum c_i pi^{scale-lam_i} e_i on diag(pi^lam)."""
    lmax = max(lam) if lam else 0
    total = 0
    for (a, b), l in zip(coords, lam):
        total += (a * a - u * b * b) * p ** (lmax - l)
    v = _vp_int(total, p)
    return INF if v is INF else v + 2 * scale - lmax


def graded_coset_count(model, lam, scale, floor, exclude_rows=None,
                       budget=10 ** 8):
    """|(pi^s L^v)^{>= f} / L|, minus the pi^s M^v part when M rows are given.

    ``exclude_rows`` lists generators of a lattice M (coordinates in the
    diagonal basis, as ExactScalar) whose window pi^s M^v is removed:
    x is dropped iff val((x, m_j)) >= s for every generator m_j.
    """
    p, u = model.p, model.u
    lam = tuple(int(a) for a in lam)
    depths = [max(a - scale, 0) for a in lam]
    size = p ** (2 * sum(depths))
    if size > budget:
        raise BudgetExceeded("coset window needs %d visits" % size)
    rows = None
    if exclude_rows is not None:
        # (x, m_j) = p^s * sum_i c_i * conj(m_ji)  on diag(pi^lam) with
        # x = sum c_i pi^{s-lam_i} e_i; scale each row to integer pairs.
        rows = []
        for m in exclude_rows:
            ints = []
            shift = 0
            for s in m:
                va = s.a.denominator
                vb = s.b.denominator
                shift = max(shift, _vp_int(va, p), _vp_int(vb, p))
            for s in m:
                a = s.a * p ** shift
                b = s.b * p ** shift
                if a.denominator != 1 or b.denominator != 1:
                    raise InvalidInvariants("exclusion row not p-integral")
                ints.append((int(a), int(b)))
            rows.append((shift, ints))
    count = 0
    for coords in _coset_tuples(p, depths):
        if _norm_val(p, u, lam, scale, coords) < floor:
            continue
        if rows is not None:
            inside = True
            for shift, ints in rows:
                re = sum(a * A - u * b * B for (a, b), (A, B) in zip(coords, ints))
                im = sum(b * A - a * B for (a, b), (A, B) in zip(coords, ints))
                v = min(_vp_int(re, p), _vp_int(im, p))
                if v < shift:
                    inside = False
                    break
            if inside:
                continue
        count += 1
    return count


_MU_WINDOWS = {"mu": (0, 0), "mu_plus": (1, 1), "mu_plusplus": (2, 2)}


def coset_mu(lattice, which="mu", budget=10 ** 8):
    """Exact count of a graded dual-coset window by full enumeration."""
    if which not in _MU_WINDOWS:
        raise InvalidCase("unknown window %r" % (which,))
    scale, floor = _MU_WINDOWS[which]
    if isinstance(lattice, HermLattice):
        model = lattice.gram.model
        lam = lattice.invariants()
    else:
        model, lam = lattice
    if any(a < 0 for a in lam):
        raise InvalidInvariants("window needs an integral lattice")
    return graded_coset_count(model, lam, scale, floor, budget=budget)


@functools.lru_cache(maxsize=None)
def _norm_residue_dist(p, u, k):
    """Distribution of a^2 - u b^2 mod p^k over (Z/p^k)^2."""
    mod = p ** k
    dist = {}
    for a in range(mod):
        aa = a * a % mod
        for b in range(mod):
            r = (aa - u * b * b) % mod
            dist[r] = dist.get(r, 0) + 1
    return dist


def window_norm_count(model, lam, scale, floor):
    """|(pi^s L^v)^{>= f} / L| by per-coordinate norm-residue convolution.

    Same count as graded_coset_count without exclusions, but the work is
    linear in the residue modulus p^{f - min(2s - lam_i)} instead of the
    window size.  Needs f <= s so the norm condition descends to the window.
    """
    p, u = model.p, model.u
    lam = tuple(int(a) for a in lam)
    if floor > scale:
        raise InvalidCase("floor %d above scale %d is not coset-stable"
                          % (floor, scale))
    depths = [max(a - scale, 0) for a in lam]
    if not lam:
        return 1
    gmin = min(2 * scale - a for a in lam)
    k_total = floor - gmin
    if k_total <= 0:
        return p ** (2 * sum(depths))
    mod = p ** k_total
    acc = {0: 1}
    for a, d in zip(lam, depths):
        e = (2 * scale - a) - gmin
        k = min(k_total - e, d)
        if k <= 0:
            free = p ** (2 * d)
            acc = {r: c * free for r, c in acc.items()}
            continue
        dist = _norm_residue_dist(p, u, k)
        lift = p ** (2 * (d - k))
        pe = p ** e
        step = {}
        for r, c in acc.items():
            for s, cnt in dist.items():
                key = (r + s * pe) % mod
                step[key] = step.get(key, 0) + c * cnt * lift
        acc = step
    return acc.get(0, 0)


# ---------------------------------------------------------------------------
# strata of (L^v)^{>=0}/L
# ---------------------------------------------------------------------------

STRATA = ("1-1", "1-2", "1-3", "2-1", "2-2", "3-1", "3-2", "4-1", "4-2", "5")

AGGREGATES = ("1-1", "1-2", "1-3+3-2", "2-1+4-1", "2-2+4-2", "3-1", "5")


def stratum_counts(lam):
    """The seven aggregate stratum cardinalities as closed forms in q.

    Strata classify u in (L^v)^{>=0}/L by depth in the duals of the part
    of L with invariants >= 2 and the part with invariants = 1; counts are
    assembled from mu_closed with the empty-lattice convention mu = 1.
    """
    lam = _strip_zeros(lam)
    lam2 = tuple(a for a in lam if a >= 2)
    t1 = sum(1 for a in lam if a == 1)
    t2 = len(lam2)
    t3 = sum(1 for a in lam if a >= 3)
    ones = (1,) * t1
    m22 = mu_closed(tuple(a - 2 for a in lam2))
    m33 = mu_closed(tuple(a - 3 for a in lam if a >= 3))
    m21 = mu_closed(tuple(a - 1 for a in lam2))
    m1 = mu_closed(ones)
    m22_1 = mu_closed(tuple(a - 2 for a in lam2) + ones)
    m_all = mu_closed(lam)
    q2t2 = QRat.q_power(2 * t2)
    q2t3 = QRat.q_power(2 * t3)
    return {
        "1-1": m22,
        "1-2": q2t3 * m33 - m22,
        "1-3+3-2": q2t2 * m22 - m21,
        "2-1+4-1": q2t2 * m22 * (m1 - QONE),
        "2-2+4-2": q2t2 * (m22_1 - m22 * m1),
        "3-1": m21 - q2t3 * m33,
        "5": m_all - q2t2 * m22_1,
    }


def split_case12(lam):
    """Case 1-2 split for a norm-1 orthogonal vector: (val-1 part, val>=2 part).

    The classes u with val((u,u)) = 1 in the deep window split according to
    whether the leading coefficient of (u,u) cancels against the orthogonal
    vector's; exactly 1/(q-1) of the stratum cancels.
    """
    c12 = stratum_counts(lam)["1-2"]
    q = QRat.q_power(1)
    return (c12 * (q - QRat.from_int(2)) / (q - QONE), c12 / (q - QONE))


def _norm_fraction(p, u, lam, coords):
    """(x,x) as an exact rational for x = sum c_i pi^{-lam_i} e_i."""
    total = Fraction(0)
    for (a, b), l in zip(coords, lam):
        total += Fraction(a * a - u * b * b, p ** l)
    return total


def enumerate_strata(model, lam, budget=10 ** 8, uperp_val=None):
    """Raw counts of the strata of (L^v)^{>=0}/L by full enumeration.

    With ``uperp_val=1`` the count is against an orthogonal vector of norm
    exactly pi, and the norm-1 stratum splits by whether the leading terms
    cancel; the split labels are "1-2-1" (no) and "1-2-2" (yes).
    """
    p, u = model.p, model.u
    lam = _strip_zeros(lam)
    depths = [a for a in lam]
    size = p ** (2 * sum(depths))
    if size > budget:
        raise BudgetExceeded("stratum window needs %d visits" % size)
    idx2 = [i for i, a in enumerate(lam) if a >= 2]
    idx1 = [i for i, a in enumerate(lam) if a == 1]
    labels = list(STRATA)
    if uperp_val == 1:
        labels.remove("1-2")
        labels.extend(["1-2-1", "1-2-2"])
    counts = dict.fromkeys(labels, 0)
    for coords in _coset_tuples(p, depths):
        nv = _norm_val(p, u, lam, 0, coords)
        if nv < 0:
            continue
        # depth of the >=2 component: x_i = c_i pi^{-lam_i}, so
        # x2 in pi^f L2^v  iff  val(c_i) >= f for every i with lam_i >= 2
        d2 = 2
        for i in idx2:
            a, b = coords[i]
            v = min(_vp_int(a, p), _vp_int(b, p))
            d2 = min(d2, v)
        d1 = 1
        for i in idx1:
            a, b = coords[i]
            v = min(_vp_int(a, p), _vp_int(b, p))
            d1 = min(d1, v)
        if d2 == 0:
            label = "5"
        elif d1 >= 1:
            if d2 >= 2:
                label = "1-1" if nv >= 2 else ("1-2" if nv >= 1 else "1-3")
                if label == "1-2" and uperp_val == 1:
                    total = _norm_fraction(p, u, lam, coords) + p
                    label = "1-2-2" if _vp(total, p) >= 2 else "1-2-1"
            else:
                label = "3-1" if nv >= 1 else "3-2"
        else:
            comp2 = _norm_val(p, u,
                              [lam[i] for i in idx2], 0,
                              [coords[i] for i in idx2]) if idx2 else INF
            comp1 = _norm_val(p, u,
                              [lam[i] for i in idx1], 0,
                              [coords[i] for i in idx1]) if idx1 else INF
            both = comp2 >= 0 and comp1 >= 0
            if d2 >= 2:
                label = "2-1" if both else "2-2"
            else:
                label = "4-1" if both else "4-2"
        counts[label] += 1
    return counts


def aggregate_strata(raw):
    """Collapse the ten raw stratum counts to the seven aggregates."""
    return {
        "1-1": raw["1-1"],
        "1-2": raw["1-2"],
        "1-3+3-2": raw["1-3"] + raw["3-2"],
        "2-1+4-1": raw["2-1"] + raw["4-1"],
        "2-2+4-2": raw["2-2"] + raw["4-2"],
        "3-1": raw["3-1"],
        "5": raw["5"],
    }


# ---------------------------------------------------------------------------
# submodules of (O/pi^m)^n
# ---------------------------------------------------------------------------

def _pair_val(pair, p, m):
    a, b = pair
    return min(_vp_int(a % p ** m, p), _vp_int(b % p ** m, p), m)


def _pair_mul(x, y, u, mod):
    (a, b), (c, d) = x, y
    return ((a * c + u * b * d) % mod, (a * d + b * c) % mod)


def _pair_inv_unit(x, u, p, m):
    # inverse of a unit a+b*omega in O/pi^m via conj / norm
    mod = p ** m
    a, b = x
    n = (a * a - u * b * b) % mod
    ninv = pow(n, -1, mod)
    return ((a * ninv) % mod, (-b * ninv) % mod)


def _row_scale(row, s, u, mod):
    return tuple(_pair_mul(x, s, u, mod) for x in row)


def _row_sub(r1, r2, mod):
    return tuple(((a - c) % mod, (b - d) % mod) for (a, b), (c, d) in zip(r1, r2))


def howell_key(rows, model, m):
    """Canonical Howell-form key of the O/pi^m-module spanned by rows."""
    p, u = model.p, model.u
    mod = p ** m
    n = len(rows[0]) if rows else 0
    active = [tuple((a % mod, b % mod) for a, b in r) for r in rows]
    active = [r for r in active if any(x != (0, 0) for x in r)]
    pivots = []
    for col in range(n):
        cand = [r for r in active if r[col] != (0, 0)]
        if not cand:
            continue
        g = min(cand, key=lambda r: _pair_val(r[col], p, m))
        v = _pair_val(g[col], p, m)
        unit = (g[col][0] // p ** v, g[col][1] // p ** v)
        g = _row_scale(g, _pair_inv_unit(unit, u, p, m - v), u, mod)
        # reduce the rest of the active set at this column
        new_active = []
        for r in active:
            if r is g:
                continue
            if r[col] != (0, 0):
                t = (r[col][0] // p ** v, r[col][1] // p ** v)
                r = _row_sub(r, _row_scale(g, t, u, mod), mod)
            if any(x != (0, 0) for x in r):
                new_active.append(r)
        # saturation: pi^{m-v} g lives strictly to the right of col
        if v > 0:
            sat = _row_scale(g, (p ** (m - v), 0), u, mod)
            if any(x != (0, 0) for x in sat):
                new_active.append(sat)
        active = new_active
        pivots.append((col, v, g))
    # normalize entries above each pivot
    out = [list(g) for _, _, g in pivots]
    for j, (col, v, _) in enumerate(pivots):
        pv = p ** v
        for i in range(j):
            a, b = out[i][col]
            t = (a // pv, b // pv)
            if t != (0, 0):
                red = _row_scale(tuple(out[j]), t, u, mod)
                out[i] = list(_row_sub(tuple(out[i]), red, mod))
    return tuple(tuple(r) for r in out)


def submodules(model, n, m, budget=10 ** 8):
    """All O/pi^m-submodules of (O/pi^m)^n, as canonical Howell rows."""
    p, u = model.p, model.u
    if model.q ** (2 * m * n) > budget:
        raise BudgetExceeded("submodule window needs q^%d states" % (2 * m * n))
    mod = p ** m
    residues = [list(itertools.product(range(p ** k), repeat=2))
                for k in range(m + 1)]
    seen = {}
    for prof in itertools.product(range(m + 1), repeat=n):
        pivoted = [j for j in range(n) if prof[j] < m]
        entry_ranges = []
        for j in pivoted:
            row_ranges = []
            for k in range(j + 1, n):
                depth = prof[k] if prof[k] < m else m
                row_ranges.append((k, residues[depth]))
            entry_ranges.append((j, row_ranges))
        pools = []
        for j, row_ranges in entry_ranges:
            pools.extend(opts for _, opts in row_ranges)
        for combo in itertools.product(*pools):
            rows = []
            pos = 0
            for j, row_ranges in entry_ranges:
                row = [(0, 0)] * n
                row[j] = (p ** prof[j] % mod, 0)
                for (k, _), val in zip(row_ranges, combo[pos:pos + len(row_ranges)]):
                    row[k] = val
                pos += len(row_ranges)
                rows.append(tuple(row))
            key = howell_key(rows, model, m) if rows else ()
            if key not in seen:
                seen[key] = key
    return list(seen.values())


# ---------------------------------------------------------------------------
# overlattices
# ---------------------------------------------------------------------------

class OverlatticeItem:
    """One overlattice: its lattice, generator rows over F, length, flags."""

    __slots__ = ("lattice", "rows", "length", "integral", "key_rows")

    def __init__(self, lattice, rows, length, integral, key_rows=None):
        self.lattice = lattice
        self.rows = rows
        self.length = length
        self.integral = integral
        self.key_rows = key_rows

    def to_json(self):
        return {
            "invariants": list(self.lattice.invariants()),
            "length": self.length,
            "integral": self.integral,
        }


def lattice_sum_basis(model, rows):
    """Basis of the lattice generated by the given vectors over O_F.

    Hermite-style column elimination over the valuation ring: at each
    column the minimum-valuation active row becomes the pivot and clears
    the column from the others; the pivot rows form the basis.
    """
    n = len(rows[0])
    active = [list(r) for r in rows]
    basis = []
    for col in range(n):
        cand = [r for r in active if r[col].val() is not INF]
        if not cand:
            raise InvalidInvariants("generators do not span full rank")
        g = min(cand, key=lambda r: r[col].val())
        active.remove(g)
        nxt = []
        for r in active:
            if r[col].val() is not INF:
                t = r[col] / g[col]
                r = [x - t * y for x, y in zip(r, g)]
            nxt.append(r)
        active = nxt
        basis.append(g)
    return basis


def _scalar_from_pair(model, pair, denom_pow):
    a, b = pair
    return model.scalar(Fraction(a, model.p ** denom_pow),
                        Fraction(b, model.p ** denom_pow))


def overlattices(lattice, m=1, filter="all", budget=10 ** 8):
    """All L' with L <= L' <= pi^{-m} L, as OverlatticeItem records."""
    model = lattice.gram.model
    n = lattice.gram.n
    base_val = lattice.val()
    items = []
    one = model.scalar(1, 0)
    zero = model.scalar(0, 0)
    for key in submodules(model, n, m, budget=budget):
        gens = [[one if j == i else zero for j in range(n)] for i in range(n)]
        for row in key:
            gens.append([_scalar_from_pair(model, pair, m) for pair in row])
        basis = lattice_sum_basis(model, gens)
        gram = gram_conjugate(lattice.gram, basis)
        sub = HermLattice(gram)
        drop = base_val - sub.val()
        if drop % 2 != 0:
            raise InvalidInvariants("odd valuation drop in overlattice")
        item = OverlatticeItem(sub, basis, drop // 2, sub.is_integral())
        if filter == "integral" and not item.integral:
            continue
        items.append(item)
    return items


def overlattice_key(lattice, item, depth):
    """Canonical key of item.lattice/L inside pi^{-depth} L."""
    model = lattice.gram.model
    scale = model.p ** depth
    rows = []
    for r in item.rows:
        pairs = []
        for x in r:
            s = x.scale(Fraction(scale))
            pairs.append(s.residue_pair(depth))
        rows.append(tuple(pairs))
    return howell_key(rows, model, depth)


def line_reps(model, n):
    """Vectors of F_{q^2}^n with first nonzero coordinate 1, as digit pairs."""
    p = model.p
    elements = [(a, b) for a in range(p) for b in range(p)]
    for pivot in range(n):
        head = ((0, 0),) * pivot + ((1, 0),)
        for tail in itertools.product(elements, repeat=n - 1 - pivot):
            yield head + tail


def _residue_int(fr, mod, p):
    num, den = fr.numerator, fr.denominator
    if den == 1:
        return num % mod
    if den % p == 0:
        raise PrecisionLoss("denominator not prime to p in residue")
    return num * pow(den, -1, mod) % mod


def integral_overlattice_closure(lattice, budget=10 ** 8, keep=None):
    """Every integral overlattice of L, found by repeated cyclic steps.

    Each step adjoins one vector of pi^{-1} L' / L'; chains of such steps
    reach every integral overlattice because torsion quotients always have
    nonzero socle.  Lattices are deduplicated by the canonical form of
    L'/L inside pi^{-K} L with K = val(L), and integrality is decided on
    generator pairings, both in residue arithmetic mod p^{2K+2}; exact
    basis and Gram work happens only for the integral survivors.
    ``keep`` may reject a lattice, pruning it and everything above it.
    """
    if not lattice.is_integral():
        return []
    kdepth = max(lattice.val(), 1)
    model = lattice.gram.model
    n = lattice.gram.n
    p, u = model.p, model.u
    mod_key = p ** kdepth
    prec = p ** (2 * kdepth + 2)
    int_test = p ** (2 * kdepth)
    scale_full = Fraction(p ** kdepth)
    one = model.scalar(1, 0)
    zero = model.scalar(0, 0)
    base_rows = [[one if j == i else zero for j in range(n)] for i in range(n)]

    gram_res = [[(_residue_int(e.a, prec, p), _residue_int(e.b, prec, p))
                 for e in row] for row in lattice.gram.entries]
    gram_support = [tuple(j for j in range(n) if gram_res[i][j] != (0, 0))
                    for i in range(n)]

    def residue_rows(rows):
        return [tuple((_residue_int(x.a * scale_full, prec, p),
                       _residue_int(x.b * scale_full, prec, p)) for x in r)
                for r in rows]

    def pairing(v, w):
        # p^{2K} (v, w) mod prec, with v, w residue rows scaled by p^K
        ra = rb = 0
        for i in range(n):
            va, vb = v[i]
            if va == 0 and vb == 0:
                continue
            for j in gram_support[i]:
                ga, gb = gram_res[i][j]
                xa = va * ga + u * vb * gb
                xb = va * gb + vb * ga
                wa, wb = w[j]
                ra += xa * wa - u * xb * wb
                rb += xb * wa - xa * wb
        return ra, rb

    base = OverlatticeItem(lattice, base_rows, 0, True, key_rows=())
    seen = {(): base}
    frontier = [(base, residue_rows(base_rows))]
    out = [base]
    work = 0
    lines = list(line_reps(model, n))
    inv_p = Fraction(1, p)
    while frontier:
        nxt = []
        for item, int_rows in frontier:
            for c in lines:
                work += 1
                if work > budget:
                    raise BudgetExceeded("closure visited %d candidates" % work)
                acc = [(0, 0)] * n
                for k in range(n):
                    ca, cb = c[k]
                    if ca == 0 and cb == 0:
                        continue
                    rk = int_rows[k]
                    if cb == 0 and ca == 1:
                        acc = [(A + ra, B + rb)
                               for (A, B), (ra, rb) in zip(acc, rk)]
                    else:
                        acc = [(A + ca * ra + u * cb * rb, B + ca * rb + cb * ra)
                               for (A, B), (ra, rb) in zip(acc, rk)]
                w_int = tuple((A % prec // p, B % prec // p) for A, B in acc)
                pairs = tuple((A % mod_key, B % mod_key) for A, B in w_int)
                key = howell_key(list(item.key_rows) + [pairs], model, kdepth)
                if key in seen:
                    continue
                integral = True
                for rk in int_rows:
                    ra, rb = pairing(w_int, rk)
                    if ra % int_test or rb % int_test:
                        integral = False
                        break
                if integral:
                    ra, rb = pairing(w_int, w_int)
                    if ra % int_test or rb % int_test:
                        integral = False
                if not integral:
                    seen[key] = None
                    continue
                w = []
                for j in range(n):
                    s = zero
                    for k in range(n):
                        a, b = c[k]
                        if a or b:
                            s = s + item.rows[k][j] * model.scalar(a, b)
                    w.append(s.scale(inv_p))
                basis = lattice_sum_basis(model, item.rows + [w])
                gram = gram_conjugate(lattice.gram, basis)
                sub = HermLattice(gram)
                drop = lattice.val() - sub.val()
                cand = OverlatticeItem(sub, basis, drop // 2, True, key_rows=key)
                if keep is not None and not keep(cand):
                    seen[key] = None
                    continue
                seen[key] = cand
                nxt.append((cand, residue_rows(basis)))
                out.append(cand)
        frontier = nxt
    return out


def coordinate_kernel_rows(rows, coord):
    """Rows spanning {v in the row lattice : v_coord = 0} (rows a basis)."""
    active = [list(r) for r in rows]
    cand = [r for r in active if r[coord].val() is not INF]
    if not cand:
        return active
    g = min(cand, key=lambda r: r[coord].val())
    active.remove(g)
    out = []
    for r in active:
        if r[coord].val() is not INF:
            t = r[coord] / g[coord]
            r = [x - t * y for x, y in zip(r, g)]
        out.append(r)
    return out


def count_isomorphic_overlattices(target_invariants, lattice, budget=10 ** 8):
    """n(M, L): overlattices of L isomorphic (same invariants) to M."""
    target = check_invariants(target_invariants)
    diff = lattice.val() - sum(target)
    if diff < 0 or diff % 2 != 0:
        return 0
    m = diff // 2
    if m == 0:
        return 1 if lattice.invariants() == target else 0
    return sum(1 for it in overlattices(lattice, m, "all", budget)
               if it.lattice.invariants() == target)


def count_split_summand_overlattices(lam0, h, model, budget=10 ** 8):
    """Overlattices of <pi^lam0> + (pi)^h inside the depth-1 window whose
    invariants match a <pi^lam0> summand plus a dual-scaled rank-h piece."""
    if lam0 < 1 or h < 1:
        raise IndexOutOfRange("need lam0 >= 1 and h >= 1")
    lam = (lam0,) + (1,) * h
    lattice = HermLattice.from_invariants(model, lam)
    target = check_invariants((lam0,) + (-1,) * h)
    return sum(1 for it in overlattices(lattice, 1, "all", budget)
               if it.lattice.invariants() == target)


def reduced_overlattice(model, lam):
    """M = L + Ov one reduction step above L = diag(pi^lam).

    lam nonincreasing with all parts >= 1; lam_1 >= 3 lifts e_1 by pi^{-1},
    lam_1 = lam_2 = 2 adjoins the hyperbolic pi^{-1}(e_1 + u0 e_2) with
    1 + N(u0) = 0 mod p.  Returns (generator rows of M, M as HermLattice).
    """
    lam = check_invariants(lam)
    if not lam or lam[-1] < 1:
        raise InvalidCase("reduction needs all parts >= 1")
    p = model.p
    n = len(lam)
    one = model.scalar(1, 0)
    zero = model.scalar(0, 0)
    rows = [[one if j == i else zero for j in range(n)] for i in range(n)]
    v = [zero] * n
    if lam[0] >= 3:
        v[0] = ExactScalar(model, Fraction(1, p), Fraction(0))
    elif n >= 2 and lam[0] == 2 and lam[1] == 2:
        u0 = None
        for x in range(p):
            for y in range(p):
                if (x * x - model.u * y * y + 1) % p == 0:
                    u0 = (x, y)
                    break
            if u0 is not None:
                break
        v[0] = ExactScalar(model, Fraction(1, p), Fraction(0))
        v[1] = ExactScalar(model, Fraction(u0[0], p), Fraction(u0[1], p))
    else:
        raise InvalidCase("no integral one-step reduction for %s" % (lam,))
    rows.append(v)
    gram = GramMatrix.from_diag(model, lam)
    basis = lattice_sum_basis(model, rows)
    m_lat = HermLattice(gram_conjugate(gram, basis))
    return rows, m_lat


def dump_json_lines(items):
    """JSON-lines dump of an overlattice listing."""
    import json

    return "\n".join(json.dumps(it.to_json(), sort_keys=True) for it in items)
