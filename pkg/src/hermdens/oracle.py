"""Brute-force ground truth: counting hermitian matrix congruences.

herm_count enumerates phi in M_{m x n}(O/p^d) with phi* A phi = B (mod p^d)
by layers: residue classes mod p are enumerated outright, and each class is
lifted layer by layer.  The lift condition is linear with a coefficient
matrix T depending only on the class, so classes with surjective T
contribute a closed-form count, the zero class reduces to a scaled problem
of lower depth, and only the remaining classes are walked explicitly.
"""

from fractions import Fraction
from itertools import permutations, product

from .errors import BudgetExceeded, InvalidCase, NotStabilized, UnderdeterminedFit
from .padic_model import GramMatrix, RingModel, gram_invariants


class CountJob:
    """One counting task: target M, source L, ring O/p^d, mode all|primitive."""

    __slots__ = ("m_gram", "l_gram", "ring", "mode")

    def __init__(self, m_gram, l_gram, ring, mode="all"):
        if mode not in ("all", "primitive"):
            raise InvalidCase("mode must be all or primitive, got %r" % (mode,))
        self.m_gram = m_gram
        self.l_gram = l_gram
        self.ring = ring
        self.mode = mode


def _embed(gram, p, u, d):
    mod = p ** d
    n = gram.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            a, b = gram.entry(i, j).residue_pair(d)
            row.append((a % mod, b % mod))
        out.append(row)
    return out


def _cmul(x, y, u, mod):
    xa, xb = x
    ya, yb = y
    return ((xa * ya + u * xb * yb) % mod, (xa * yb + xb * ya) % mod)


def _phi_product(phi, A, B, m, n, u, mod):
    """Constraint vector of phi* A phi - B, flattened mod `mod`."""
    # W = A phi
    w = [[None] * n for _ in range(m)]
    for s in range(m):
        arow = A[s]
        for j in range(n):
            wa = 0
            wb = 0
            for t in range(m):
                aa, ab = arow[t]
                pa = phi[2 * (t * n + j)]
                pb = phi[2 * (t * n + j) + 1]
                wa += aa * pa + u * ab * pb
                wb += aa * pb + ab * pa
            w[s][j] = (wa % mod, wb % mod)
    out = []
    for i in range(n):
        for j in range(i, n):
            ga = 0
            gb = 0
            for s in range(m):
                pa = phi[2 * (s * n + i)]
                pb = phi[2 * (s * n + i) + 1]
                wa, wb = w[s][j]
                # conj(phi_si) * w_sj
                ga += pa * wa - u * pb * wb
                gb += pa * wb - pb * wa
            ba, bb = B[i][j]
            if i == j:
                out.append((ga - ba) % mod)
            else:
                out.append((ga - ba) % mod)
                out.append((gb - bb) % mod)
    return out


def _rank_fq2(phi, p, u, m, n):
    """Rank over F_{q^2} of the m x n matrix of residue pairs."""
    rows = [[(phi[2 * (s * n + j)] % p, phi[2 * (s * n + j) + 1] % p)
             for j in range(n)] for s in range(m)]
    rank = 0
    for col in range(n):
        piv = None
        for r in range(rank, m):
            if rows[r][col] != (0, 0):
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        a, b = rows[rank][col]
        nrm = (a * a - u * b * b) % p
        inv = pow(nrm, p - 2, p)
        ia, ib = (a * inv) % p, (-b * inv) % p
        rows[rank] = [_cmul(x, (ia, ib), u, p) for x in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col] != (0, 0):
                f = rows[r][col]
                prods = [_cmul(f, x, u, p) for x in rows[rank]]
                rows[r] = [((xa - ya) % p, (xb - yb) % p)
                           for (xa, xb), (ya, yb) in zip(rows[r], prods)]
        rank += 1
    return rank


def _rref(mat, p):
    """Row-reduce over F_p; returns (rows, pivot column list)."""
    rows = [list(r) for r in mat]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _solve_linear(mat, rhs, p):
    """Particular solution of mat x = rhs over F_p, else None."""
    aug = [list(r) + [v % p] for r, v in zip(mat, rhs)]
    red, piv = _rref(aug, p)
    ncols = len(mat[0])
    sol = [0] * ncols
    for row, c in zip(red, piv):
        if c == ncols:
            return None
        sol[c] = row[-1]
    return sol


def _kernel_basis(rows, pivots, ncols, p):
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(rows, pivots):
            v[c] = (-row[f]) % p
        basis.append(v)
    return basis


class _ClassData:
    __slots__ = ("tmat", "rref", "pivots", "kernel", "smooth")

    def __init__(self, tmat, p, ncols):
        self.tmat = tmat
        self.rref, self.pivots = _rref(tmat, p) if tmat else ([], [])
        self.smooth = len(self.pivots) == len(tmat)
        self.kernel = None  # filled lazily with full vector list


def _t_matrix(phi1, A, m, n, u, p):
    """Linearization psi* A phi + phi* A psi at the class phi1, over F_p."""
    ncols = 2 * m * n
    nrows = n * n
    # V = A phi1 mod p
    v = [[None] * n for _ in range(m)]
    for s in range(m):
        for j in range(n):
            wa = 0
            wb = 0
            for t in range(m):
                aa, ab = A[s][t]
                pa = phi1[2 * (t * n + j)]
                pb = phi1[2 * (t * n + j) + 1]
                wa += aa * pa + u * ab * pb
                wb += aa * pb + ab * pa
            v[s][j] = (wa % p, wb % p)
    cols = []
    for k in range(ncols):
        ent, part = divmod(k, 2)
        s0, j0 = divmod(ent, n)
        # psi has a single entry at (s0, j0): 1 if part==0 else omega
        col = []
        for i in range(n):
            for j in range(i, n):
                # (psi* V)_{ij} = conj(psi_{s0 i}) V_{s0 j} when i == j0
                ca = cb = 0
                if i == j0:
                    wa, wb = v[s0][j]
                    if part == 0:
                        ca, cb = wa, wb
                    else:
                        ca, cb = (-u * wb) % p, (-wa) % p
                da = db = 0
                if j == j0:
                    wa, wb = v[s0][i]
                    # conj((psi* V)_{ji})
                    if part == 0:
                        da, db = wa, (-wb) % p
                    else:
                        da, db = (-u * wb) % p, wa % p
                ga = (ca + da) % p
                gb = (cb + db) % p
                if i == j:
                    col.append(ga)
                else:
                    col.append(ga)
                    col.append(gb)
        cols.append(col)
    return [[cols[k][r] for k in range(ncols)] for r in range(nrows)]


def _scale_gram(gram, shift):
    """gram / p^shift as exact scalars; None if not losslessly divisible."""
    model = gram.model
    fr = Fraction(1, model.p ** shift)
    entries = []
    for i in range(gram.n):
        row = []
        for j in range(gram.n):
            e = gram.entry(i, j)
            if not e.is_zero() and e.val() < shift:
                return None
            row.append(e.scale(fr))
        entries.append(row)
    return GramMatrix(model, entries)


def herm_count(job, budget=10 ** 8):
    """Exact number of phi with phi* A_M phi = A_L over O/p^d."""
    ring = job.ring
    p, d, u = ring.p, ring.d, ring.u
    m, n = job.m_gram.n, job.l_gram.n
    A = _embed(job.m_gram, p, u, d)
    B = _embed(job.l_gram, p, u, d)
    counter = [0]
    return _count_layers(job, A, B, p, u, d, m, n, counter, budget)


def _scaled_rows(gram):
    """Rows of the target whose entries all have valuation >= 1."""
    out = []
    for i in range(gram.n):
        if all(gram.entry(i, j).is_zero() or gram.entry(i, j).val() >= 1
               for j in range(gram.n)):
            out.append(i)
    return out


def _swap_scaling(gram, scaled):
    """Divide the scaled block by pi, multiply the complementary block by pi.

    Exact identity behind it: restricting phi to vanish mod p on the unit
    rows and substituting phi_u = p zeta turns phi* A phi = B into
    (phi_s, zeta)* A' (phi_s, zeta) = B/p with this A'.
    """
    model = gram.model
    inv = Fraction(1, model.p)
    entries = []
    for i in range(gram.n):
        row = []
        for j in range(gram.n):
            e = gram.entry(i, j)
            if i in scaled and j in scaled:
                row.append(e.scale(inv))
            elif i not in scaled and j not in scaled:
                row.append(e.scale(Fraction(model.p)))
            else:
                row.append(e)
        entries.append(row)
    return GramMatrix(model, entries)


def _primitive_total(p, m, n):
    """Full-rank m x n matrices over the residue field F_{p^2}."""
    cnt = 1
    for i in range(n):
        cnt *= p ** (2 * m) - p ** (2 * i)
    return cnt


def _monomial_maps(gram, p, u):
    """Monomial isometries of an exact-diagonal gram, mod p.

    Norm-one scalings of each coordinate plus permutations of positions
    with equal diagonal entry; each lifts to an exact isometry mod any
    p-power (p odd, Hensel on the norm form), so residue classes in one
    two-sided orbit have equal lift counts at every depth.  None if the
    gram is not diagonal.
    """
    n = gram.n
    if any(not gram.entry(i, j).is_zero()
           for i in range(n) for j in range(n) if i != j):
        return None
    diag = [gram.entry(i, i) for i in range(n)]
    units = [(a, b) for a in range(p) for b in range(p)
             if (a * a - u * b * b) % p == 1]
    perms = [perm for perm in permutations(range(n))
             if all(diag[perm[i]] == diag[i] for i in range(n))]
    return [(perm, alphas)
            for perm in perms for alphas in product(units, repeat=n)]


def _compiled_orbit_maps(m_gram, l_gram, p, u, m, n):
    """Flat slot programs for phi -> g phi h over both monomial groups."""
    triv_m = [(tuple(range(m)), ((1, 0),) * m)]
    triv_n = [(tuple(range(n)), ((1, 0),) * n)]
    left = _monomial_maps(m_gram, p, u) or triv_m
    right = _monomial_maps(l_gram, p, u) or triv_n
    if len(left) * len(right) == 1:
        return None
    progs = {}
    for ps, als in left:
        for pt, bes in right:
            prog = []
            for s in range(m):
                aa, ab = als[s]
                for j in range(n):
                    ba, bb = bes[j]
                    ga = (aa * ba + u * ab * bb) % p
                    gb = (aa * bb + ab * ba) % p
                    prog.append((2 * (ps[s] * n + pt[j]), ga, gb))
            progs[tuple(prog)] = None
    return list(progs)


def _apply_orbit_map(digits, prog, p, u):
    out = []
    for src, ga, gb in prog:
        pa = digits[src]
        pb = digits[src + 1]
        out.append((ga * pa + u * gb * pb) % p)
        out.append((ga * pb + gb * pa) % p)
    return tuple(out)


def _count_layers(job, A, B, p, u, d, m, n, counter, budget):
    ncols = 2 * m * n
    nconstr = n * n
    pd = p ** d
    total = 0
    scaled = _scaled_rows(job.m_gram)
    if len(scaled) == m:
        # the whole target is divisible by pi: phi* (p A') phi = B demands
        # p | B, and then the condition only constrains phi mod p^{d-1}
        b1 = _scale_gram(job.l_gram, 1)
        if b1 is None:
            return 0
        if d == 1:
            return (p ** ncols if job.mode == "all"
                    else _primitive_total(p, m, n))
        a1 = _scale_gram(job.m_gram, 1)
        sub = CountJob(a1, b1, RingModel(p, d - 1), job.mode)
        return p ** ncols * herm_count(sub, budget - counter[0])
    split = job.mode == "all" and scaled and d >= 2
    if split:
        b1 = _scale_gram(job.l_gram, 1)
        if b1 is not None:
            a1 = _swap_scaling(job.m_gram, scaled)
            sub = CountJob(a1, b1, RingModel(p, d - 1), job.mode)
            total += (p ** (2 * len(scaled) * n)
                      * herm_count(sub, budget - counter[0]))
    unit_slots = [2 * (s * n + j) + w for s in range(m) if s not in scaled
                  for j in range(n) for w in (0, 1)]
    orbit_maps = None
    if m >= 2 and d >= 3:
        orbit_maps = _compiled_orbit_maps(job.m_gram, job.l_gram, p, u, m, n)
    Ap = [[(a % p, b % p) for (a, b) in row] for row in A]
    for digits in product(range(p), repeat=ncols):
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded("state count passed %d" % budget)
        if split and not any(digits[i] for i in unit_slots):
            continue
        if any(x % p for x in _phi_product(digits, Ap, B, m, n, u, p)):
            continue
        if job.mode == "primitive" and _rank_fq2(digits, p, u, m, n) < n:
            continue
        if d == 1:
            total += 1
            continue
        if not any(digits):
            # zero class: phi = p phi', a scaled problem of depth d-2
            scaled = _scale_gram(job.l_gram, 2)
            if scaled is None:
                continue
            if d == 2:
                total += p ** ncols
            else:
                sub = CountJob(job.m_gram, scaled, RingModel(p, d - 2),
                               job.mode)
                total += p ** ncols * herm_count(sub, budget - counter[0])
            continue
        cls = _ClassData(_t_matrix(digits, Ap, m, n, u, p), p, ncols)
        if cls.smooth:
            total += p ** ((d - 1) * (ncols - nconstr))
            continue
        mult = 1
        if orbit_maps is not None:
            orbit = {_apply_orbit_map(digits, prog, p, u)
                     for prog in orbit_maps}
            if digits != min(orbit):
                continue
            mult = len(orbit)
        kb = _kernel_basis(cls.rref, cls.pivots, ncols, p)
        kernel = []
        for combo in product(range(p), repeat=len(kb)):
            vec = [0] * ncols
            for cf, bv in zip(combo, kb):
                if cf:
                    for idx in range(ncols):
                        vec[idx] = (vec[idx] + cf * bv[idx]) % p
            kernel.append(tuple(vec))
        cls.kernel = kernel
        walked = 0
        stack = [(digits, 1)]
        while stack:
            phi, k = stack.pop()
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceeded("state count passed %d" % budget)
            pk = p ** k
            defect = _phi_product(phi, A, B, m, n, u, pk * p)
            rhs = []
            dead = False
            for x in defect:
                if x % pk:
                    raise AssertionError("defect not divisible at layer %d" % k)
                rhs.append((-(x // pk)) % p)
            sol = _solve_linear(cls.tmat, rhs, p)
            if sol is None:
                continue
            if k + 1 == d:
                walked += len(cls.kernel)
                continue
            for kv in cls.kernel:
                child = tuple((phi[i] + pk * ((sol[i] + kv[i]) % p)) % (pd)
                              for i in range(ncols))
                stack.append((child, k + 1))
        total += mult * walked
    return total


def density(m_gram, l_gram, p, budget=10 ** 8, mode="all"):
    """Den(M, L) at the given odd prime: stabilized normalized count."""
    inv = gram_invariants(l_gram)
    m, n = m_gram.n, l_gram.n
    d0 = max([v for v in inv] + [0]) + 1
    vals = []
    for d in (d0, d0 + 1):
        job = CountJob(m_gram, l_gram, RingModel(p, d), mode)
        cnt = herm_count(job, budget)
        e = d * n * (2 * m - n)
        vals.append(Fraction(cnt, p ** e) if e >= 0
                    else Fraction(cnt * p ** (-e)))
    if vals[0] != vals[1]:
        raise NotStabilized("d=%d gives %s, d=%d gives %s"
                            % (d0, vals[0], d0 + 1, vals[1]))
    return vals[0]


def _pad_identity(gram, k):
    """I_k perp gram."""
    model = gram.model
    n = gram.n
    z = model.scalar(0)
    one = model.scalar(1)
    entries = []
    for i in range(k + n):
        row = []
        for j in range(k + n):
            if i < k or j < k:
                row.append(one if i == j else z)
            else:
                row.append(gram.entry(i - k, j - k))
        entries.append(row)
    return GramMatrix(model, entries)


def _poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _lagrange_fit(points):
    """Coefficients (low to high) of the interpolating polynomial."""
    k = len(points)
    coeffs = [Fraction(0)] * k
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            # basis *= (X - xj)
            nxt = [Fraction(0)] * (len(basis) + 1)
            for t, c in enumerate(basis):
                nxt[t] -= c * xj
                nxt[t + 1] += c
            basis = nxt
            denom *= xi - xj
        scale = yi / denom
        for t, c in enumerate(basis):
            coeffs[t] += c * scale
    return coeffs


def density_poly(m_gram, l_gram, p, kmax, budget=10 ** 8):
    """Fit Den(I_k perp M, L) against X = (-q)^{-k}; returns (coeffs, -d/dX at 1).

    The fit is checked at the extra point k = kmax+1 whenever the budget
    allows that count; a nonzero residual raises UnderdeterminedFit.
    """
    points = []
    for k in range(kmax + 1):
        v = density(_pad_identity(m_gram, k), l_gram, p, budget)
        points.append((Fraction((-1) ** k, p ** k), v))
    coeffs = _lagrange_fit(points)
    try:
        v = density(_pad_identity(m_gram, kmax + 1), l_gram, p, budget)
        x = Fraction((-1) ** (kmax + 1), p ** (kmax + 1))
        if _poly_eval(coeffs, x) != v:
            raise UnderdeterminedFit(
                "check point k=%d: poly gives %s, count gives %s"
                % (kmax + 1, _poly_eval(coeffs, x), v))
    except BudgetExceeded:
        pass
    deriv = -sum(i * c for i, c in enumerate(coeffs) if i)
    return tuple(coeffs), deriv
