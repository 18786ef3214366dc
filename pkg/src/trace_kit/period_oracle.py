"""Exact linear algebra on induced polynomial modules over the projective line.

The degree-w module attached to (level N, character chi) has one polynomial
block of dimension w+1 per point of P^1(Z/N).  Unimodular matrices act by
coset permutation, a chi twist, and the weight -w substitution action; a
double coset acts through the same recipe with a membership scan deciding
which block (if any) each point feeds.

Representation: a vector over Q(zeta_m) is stored as phi(m) parallel
"planes" of rationals, one per power basis coefficient.  The weight action
has integer entries and acts on each plane independently; multiplying by a
root of unity mixes planes through a precomputed integer matrix.  This keeps
the hot loops in plain rational arithmetic.  Eliminations stay linear over
the cyclotomic field (entry = coefficient tuple), so kernels and restricted
traces are genuinely Q(zeta)-spaces and the traces are exact cyclotomic
numbers, asserted to leave the subspace residual exactly zero.
"""

import math
import threading
from functools import lru_cache

from .arith import QQ, sigma1_N
from .dirichlet import CycloNum, cyclotomic_poly, euler_phi
from .local_counts import in_atkin_coset, in_hecke_coset
from .matrix_forms import S, T, U, mat_inv_unimodular, mat_mul

__all__ = [
    "coset_table",
    "CosetTable",
    "weight_action",
    "hecke_coset_desc",
    "atkin_coset_desc",
    "sigma_det",
    "sigma_contains",
    "PeriodModule",
    "period_module",
    "dim_period_space",
    "dim_translation_fixed",
    "trace_on_W",
    "trace_on_V",
    "trace_coboundary",
]


# -- the projective line and unimodular lifts ---------------------------------


class CosetTable:
    """Canonical points of P^1(Z/N) with unimodular lifts.

    points[i] is the canonical pair (c, d); lifts[i] is an integral
    determinant-1 matrix whose bottom row reduces to it.  lookup(g) returns
    (index, gamma) with g = gamma * lift and gamma in the level-N group.
    """

    def __init__(self, N):
        self.N = N
        units = [x for x in range(max(N, 1)) if math.gcd(x, N) == 1] or [0]
        canon = {}
        points = set()
        for c in range(N or 1):
            for d in range(N or 1):
                if N > 1 and math.gcd(math.gcd(c, d), N) != 1:
                    continue
                rep = min(((u * c) % N, (u * d) % N) for u in units) if N > 1 else (0, 0)
                canon[(c, d)] = rep
                points.add(rep)
        self.points = sorted(points)
        self._index = {p: i for i, p in enumerate(self.points)}
        self._canon = canon
        self.lifts = [self._lift(p) for p in self.points]

    def _lift(self, point):
        N = self.N
        c, d = point
        if N == 1:
            return (1, 0, 0, 1)
        if c % N == 0:
            c1, d1 = 0, 1
        else:
            c1, d1 = c, d
            while math.gcd(c1, d1) != 1:
                d1 += N
        g, a, y = _xgcd(d1, c1)
        assert g == 1
        return (a, -y, c1, d1)

    def index_of(self, c, d):
        if self.N == 1:
            return 0
        return self._index[self._canon[(c % self.N, d % self.N)]]

    def lookup(self, g):
        """(point index, connecting gamma) for a determinant-1 matrix g."""
        i = self.index_of(g[2], g[3])
        gamma = mat_mul(g, mat_inv_unimodular(self.lifts[i]))
        if gamma[2] % self.N:
            raise RuntimeError("coset lookup produced a bad connector")
        return i, gamma

    def __len__(self):
        return len(self.points)


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@lru_cache(maxsize=None)
def coset_table(N):
    return CosetTable(N)


# -- weight actions ------------------------------------------------------------


@lru_cache(maxsize=200000)
def weight_action(m, w):
    """Matrix of P -> (cX+d)^w P((aX+b)/(cX+d)) on the monomial basis.

    Column i holds the coefficients of (aX+b)^i (cX+d)^(w-i); all integer.
    """
    a, b, c, d = m
    top = [(1,)]
    bot = [(1,)]
    for _ in range(w):
        top.append(_poly_shift(top[-1], b, a))
        bot.append(_poly_shift(bot[-1], d, c))
    cols = [_poly_mul_int(top[i], bot[w - i], w + 1) for i in range(w + 1)]
    return tuple(tuple(cols[j][r] for j in range(w + 1)) for r in range(w + 1))


def _poly_shift(p, c0, c1):
    out = [0] * (len(p) + 1)
    for i, v in enumerate(p):
        out[i] += v * c0
        out[i + 1] += v * c1
    return tuple(out)


def _poly_mul_int(p, q, size):
    out = [0] * size
    for i, v in enumerate(p):
        if v:
            for j, u in enumerate(q):
                if u and i + j < size:
                    out[i + j] += v * u
    return out


@lru_cache(maxsize=200000)
def _weight_rows_nz(m, w):
    """weight_action rows with zero entries stripped: ((idx, coef), ...)."""
    wm = weight_action(m, w)
    return tuple(
        tuple((idx, coef) for idx, coef in enumerate(row) if coef) for row in wm
    )


# -- double coset descriptors ---------------------------------------------------


def hecke_coset_desc(N, n):
    """Descriptor for the determinant-n Hecke double coset at level N."""
    return ("hecke", N, n)


def atkin_coset_desc(N, ell, n):
    """Descriptor for the composed Hecke/Atkin-Lehner coset (det = ell*n)."""
    if N % ell or math.gcd(ell, N // ell) != 1:
        raise ValueError("ell must be an exact divisor of N")
    return ("atkin", N, ell, n)


def sigma_det(sigma):
    if sigma[0] == "hecke":
        return sigma[2]
    return sigma[2] * sigma[3]


def sigma_contains(sigma, m):
    if sigma[0] == "hecke":
        return in_hecke_coset(m, sigma[1], sigma[2])
    return in_atkin_coset(m, sigma[1], sigma[2], sigma[3])


_sigma_block_cache: dict = {}
_cache_lock = threading.Lock()


def sigma_block_map(sigma, m):
    """Per point j: None, or (source point i, chi argument mod N).

    Encodes the double-coset action: the value block at point j of the image
    is the twist by chi(argument) times the weight action applied to the
    block at point i of the input.
    """
    key = (sigma, m)
    cached = _sigma_block_cache.get(key)
    if cached is not None:
        return cached
    N = sigma[1]
    table = coset_table(N)
    out = []
    for Aj in table.lifts:
        y = mat_mul(m, mat_inv_unimodular(Aj))
        entry = None
        for i, Ai in enumerate(table.lifts):
            cand = mat_mul(Ai, y)
            if sigma_contains(sigma, cand):
                if N == 1:
                    arg = 0
                elif sigma[0] == "hecke":
                    arg = cand[0] % N
                else:
                    arg = 1
                entry = (i, arg)
                break
        out.append(entry)
    out = tuple(out)
    with _cache_lock:
        _sigma_block_cache[key] = out
    return out


@lru_cache(maxsize=None)
def _gamma_point_map(N, g):
    """For each point j: (target point, d-entry of the connector mod N)."""
    table = coset_table(N)
    ginv = mat_inv_unimodular(g)
    out = []
    for Aj in table.lifts:
        i, gamma = table.lookup(mat_mul(Aj, ginv))
        out.append((i, gamma[3] % N if N > 1 else 0))
    return tuple(out)


# -- cyclotomic coefficient planes ----------------------------------------------


@lru_cache(maxsize=None)
def _power_table(m):
    """x^k mod Phi_m for k = 0..2*deg-2, integer coefficient tuples."""
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    base = [-c for c in phi[:-1]]
    rows = []
    cur = [0] * deg
    cur[0] = 1
    rows.append(tuple(cur))
    for _ in range(2 * deg - 2):
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [a + top * b for a, b in zip(cur, base)]
        rows.append(tuple(cur))
    return tuple(rows)


def _power_mod_phi(m, e):
    """Integer coefficients of x^e mod Phi_m."""
    deg = euler_phi(m)
    phi = cyclotomic_poly(m)
    base = [-c for c in phi[:-1]]
    work = [0] * (e + 1)
    work[e] = 1
    for i in range(e, deg - 1, -1):
        c = work[i]
        if c:
            work[i] = 0
            lo = i - deg
            for j, b in enumerate(base):
                if b:
                    work[lo + j] += c * b
    return tuple(work[:deg]) + (0,) * (deg - min(deg, e + 1))


@lru_cache(maxsize=None)
def _zeta_matrix(m, k):
    """Integer matrix of multiplication by zeta_m^k on the power basis."""
    deg = euler_phi(m)
    k %= m
    cols = [_power_mod_phi(m, k + c) for c in range(deg)]
    return tuple(tuple(cols[c][r] for c in range(deg)) for r in range(deg))


# -- the module ---------------------------------------------------------------


class PeriodModule:
    """Induced polynomial module for (N, chi, w); requires chi(-1) = (-1)^w.

    Vectors are (plane-count x dim) nested lists of exact rationals; the
    plane count is phi(order(chi)) and collapses to 1 for rational (trivial
    or quadratic) characters.
    """

    def __init__(self, N, chi, w):
        if chi.parity() != (1 if w % 2 == 0 else -1):
            raise ValueError("character parity must match the weight")
        self.N = N
        self.chi = chi
        self.w = w
        self.table = coset_table(N)
        self.npoints = len(self.table)
        self.dim = self.npoints * (w + 1)
        self.order = chi.order
        self.g = euler_phi(self.order)
        # chi exponent per residue (None on non-units)
        self._chi_exp = [chi.value_exponent(x) for x in range(max(N, 1))] if N > 1 else [0]

    # -- plane vectors -------------------------------------------------------

    def zero_vec(self):
        # integer zeros: vectors stay in plain ints whenever the inputs are
        # integral, which is what the hot paths arrange
        return [[0] * self.dim for _ in range(self.g)]

    def _twist_exact(self, block, exponent, scale):
        """Multiply a g-plane block by scale * zeta^exponent."""
        if self.order <= 2:
            s = scale if exponent == 0 else -scale
            return [[s * x for x in block[0]]]
        zm = _zeta_matrix(self.order, exponent)
        out = []
        for r in range(self.g):
            row = zm[r]
            acc = None
            for c in range(self.g):
                coef = row[c]
                if coef:
                    part = [coef * x for x in block[c]]
                    acc = part if acc is None else [a + b for a, b in zip(acc, part)]
            if acc is None:
                acc = [QQ(0)] * len(block[0])
            out.append([scale * x for x in acc])
        return out

    def _block_apply(self, rows_nz, vec, i):
        """Integer weight action (nonzero-structured rows) on block i."""
        w1 = self.w + 1
        lo = i * w1
        out = []
        for c in range(self.g):
            src = vec[c][lo : lo + w1]
            plane = []
            for row in rows_nz:
                acc = 0
                for cidx, coef in row:
                    s = src[cidx]
                    if s:
                        acc += coef * s
                plane.append(acc)
            out.append(plane)
        return out

    def _chi_exponent(self, arg):
        e = self._chi_exp[arg % self.N if self.N > 1 else 0]
        if e is None:
            raise RuntimeError("character argument is not a unit")
        # exponent is in units of zeta_order
        return e

    def apply_gamma(self, g, vec):
        """vec |-> vec | g for unimodular g."""
        w1 = self.w + 1
        wm = _weight_rows_nz(g, self.w)
        pmap = _gamma_point_map(self.N, g)
        out = self.zero_vec()
        for j in range(self.npoints):
            i, dg = pmap[j]
            sub = self._block_apply(wm, vec, i)
            tw = self._twist_exact(sub, self._chi_exponent(dg), QQ(1))
            lo = j * w1
            for c in range(self.g):
                dst = out[c]
                srcp = tw[c]
                for r in range(w1):
                    dst[lo + r] = srcp[r]
        return out

    def apply_operator(self, sigma, op, vectors):
        """Apply sum(q_M * |_Sigma M) to a list of plane vectors.

        Contributions accumulate untwisted in buckets keyed by the chi twist
        exponent; each bucket is mixed through the integer zeta matrix once
        at the end.  With integer-scaled operators and basis vectors (what
        the cached spaces provide) the inner loops are pure int arithmetic.
        """
        w1 = self.w + 1
        nv = len(vectors)
        buckets = {}
        for m, qq in op.items():
            wm = _weight_rows_nz(m, self.w)
            bmap = sigma_block_map(sigma, m)
            sub_cache = {}
            for j in range(self.npoints):
                ent = bmap[j]
                if ent is None:
                    continue
                i, arg = ent
                exp = self._chi_exponent(arg)
                bucket = buckets.get(exp)
                if bucket is None:
                    bucket = buckets[exp] = [self.zero_vec() for _ in range(nv)]
                lo = j * w1
                for vi in range(nv):
                    ck = (i, vi)
                    sub = sub_cache.get(ck)
                    if sub is None:
                        sub = self._block_apply(wm, vectors[vi], i)
                        sub_cache[ck] = sub
                    dstv = bucket[vi]
                    for c in range(self.g):
                        dst = dstv[c]
                        srcp = sub[c]
                        for r in range(w1):
                            v = srcp[r]
                            if v:
                                dst[lo + r] += qq * v
        outs = [self.zero_vec() for _ in range(nv)]
        for exp, bucket in buckets.items():
            if self.order <= 2:
                sgn = 1 if exp == 0 else -1
                for vi in range(nv):
                    dst = outs[vi][0]
                    src = bucket[vi][0]
                    if sgn == 1:
                        for idx, v in enumerate(src):
                            if v:
                                dst[idx] += v
                    else:
                        for idx, v in enumerate(src):
                            if v:
                                dst[idx] -= v
            else:
                zm = _zeta_matrix(self.order, exp)
                for vi in range(nv):
                    out = outs[vi]
                    src = bucket[vi]
                    for cp in range(self.g):
                        dst = out[cp]
                        row = zm[cp]
                        for c in range(self.g):
                            coef = row[c]
                            if coef:
                                plane = src[c]
                                if coef == 1:
                                    for idx, v in enumerate(plane):
                                        if v:
                                            dst[idx] += v
                                else:
                                    for idx, v in enumerate(plane):
                                        if v:
                                            dst[idx] += coef * v
        return outs

    def apply_sigma(self, sigma, m, vec):
        return self.apply_operator(sigma, {m: QQ(1)}, [vec])[0]

    # -- entry-level (cyclotomic) helpers for eliminations ---------------------

    def _entries(self, vec):
        """Vector as a list of coefficient tuples (field entries)."""
        if self.g == 1:
            return list(vec[0])
        return [tuple(vec[c][i] for c in range(self.g)) for i in range(self.dim)]

    def _e_ops(self):
        """(add, sub, mul, div, is_zero, zero, one) over field entries."""
        if self.g == 1:
            zero, one = QQ(0), QQ(1)
            return (
                lambda a, b: a + b,
                lambda a, b: a - b,
                lambda a, b: a * b,
                lambda a, b: QQ(a) / b,  # exact: guards against int/int
                lambda a: not a,
                zero,
                one,
            )
        m = self.order
        g = self.g
        pows = _power_table(m)

        def add(a, b):
            return tuple(x + y for x, y in zip(a, b))

        def sub(a, b):
            return tuple(x - y for x, y in zip(a, b))

        def mul(a, b):
            raw = [QQ(0)] * (2 * g - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            raw[i + j] += x * y
            out = list(raw[:g])
            for k in range(g, 2 * g - 1):
                ck = raw[k]
                if ck:
                    row = pows[k]
                    for idx, val in enumerate(row):
                        if val:
                            out[idx] += ck * val
            return tuple(out)

        def div(a, b):
            bc = CycloNum(m, tuple(QQ(x) for x in b)).inverse()
            return mul(a, tuple(QQ(c) for c in bc.coeffs))

        def is_zero(a):
            return not any(a)

        zero = (QQ(0),) * g
        one = (QQ(1),) + (QQ(0),) * (g - 1)
        return add, sub, mul, div, is_zero, zero, one

    # -- structured kernels ------------------------------------------------------

    def kernel_one_plus_S(self):
        """Basis of Ker(1 + S): free blocks on point pairs, local kernels at
        fixed points.  Entries rational on the free side by construction."""
        w1 = self.w + 1
        pmap = _gamma_point_map(self.N, S)
        wm = weight_action(S, self.w)
        basis = []
        seen = set()
        for j in range(self.npoints):
            if j in seen:
                continue
            i, dg = pmap[j]
            if i == j:
                # local condition (I + twist * W_S) x = 0 over the field
                add, sub_, mul, div, is_zero, zero, one = self._e_ops()
                exp = self._chi_exponent(dg)
                tw = self._field_scalar(exp)
                rows = []
                for r in range(w1):
                    row = []
                    for cidx in range(w1):
                        val = self._int_to_entry(wm[r][cidx])
                        val = mul(tw, val)
                        if r == cidx:
                            val = add(val, one)
                        row.append(val)
                    rows.append(row)
                for sol in _nullspace_entries(rows, w1, self._e_ops()):
                    vec = self.zero_vec()
                    self._set_block_entries(vec, j, sol)
                    basis.append(vec)
                seen.add(j)
            else:
                # free block at i, determined block at j = -(twist) W_S block_i
                for k in range(w1):
                    vec = self.zero_vec()
                    vec[0][i * w1 + k] = QQ(1)
                    col = [QQ(wm[r][k]) for r in range(w1)]
                    tw = self._twist_exact([col] + [[QQ(0)] * w1 for _ in range(self.g - 1)],
                                           self._chi_exponent(dg), QQ(-1))
                    for c in range(self.g):
                        for r in range(w1):
                            vec[c][j * w1 + r] = tw[c][r]
                    basis.append(vec)
                seen.add(i)
                seen.add(j)
        return basis

    def _field_scalar(self, exponent):
        if self.g == 1:
            return QQ(1) if exponent == 0 else QQ(-1)
        vec = [QQ(0)] * self.g
        zm = _zeta_matrix(self.order, exponent)
        for r in range(self.g):
            vec[r] = QQ(zm[r][0])
        return tuple(vec)

    def _int_to_entry(self, x):
        if self.g == 1:
            return QQ(x)
        return (QQ(x),) + (QQ(0),) * (self.g - 1)

    def _set_block_entries(self, vec, j, entries):
        w1 = self.w + 1
        for r, e in enumerate(entries):
            if self.g == 1:
                vec[0][j * w1 + r] = e
            else:
                for c in range(self.g):
                    vec[c][j * w1 + r] = e[c]

    def period_space(self):
        """Basis of Ker(1+S) intersect Ker(1+U+U^2), over the value field."""
        bs = self.kernel_one_plus_S()
        if not bs:
            return []
        images = []
        for v in bs:
            vu = self.apply_gamma(U, v)
            vuu = self.apply_gamma(U, vu)
            img = [
                [a + b + c for a, b, c in zip(v[p], vu[p], vuu[p])]
                for p in range(self.g)
            ]
            images.append(self._entries(img))
        ops = self._e_ops()
        rows = [[images[c][r] for c in range(len(bs))] for r in range(self.dim)]
        combos = _nullspace_entries(rows, len(bs), ops)
        add, sub_, mul, div, is_zero, zero, one = ops
        out = []
        for combo in combos:
            acc = self.zero_vec()
            for coef, bvec in zip(combo, bs):
                if is_zero(coef):
                    continue
                if self.g == 1:
                    dst = acc[0]
                    for idx, bv in enumerate(bvec[0]):
                        if bv:
                            dst[idx] += coef * bv
                else:
                    for idx, be in enumerate(self._entries(bvec)):
                        if not is_zero(be):
                            prod = mul(coef, be)
                            for c in range(self.g):
                                acc[c][idx] += prod[c]
            out.append(acc)
        return out

    def translation_fixed_space(self):
        """Basis of Ker(1 - T): one vector per admissible translation orbit."""
        w1 = self.w + 1
        pmap = _gamma_point_map(self.N, T)
        add, sub_, mul, div, is_zero, zero, one = self._e_ops()
        basis = []
        done = set()
        for j0 in range(self.npoints):
            if j0 in done:
                continue
            cycle = [j0]
            exps = []
            cur = j0
            while True:
                i, dg = pmap[cur]
                exps.append(self._chi_exponent(dg))
                if i == j0:
                    break
                cycle.append(i)
                cur = i
            done.update(cycle)
            if sum(exps) % self.order:
                continue  # inadmissible orbit: only the zero invariant vector
            vec = self.zero_vec()
            self._set_entry_scalar(vec, j0 * w1, 0)
            run = 0
            for k in range(len(cycle) - 1, 0, -1):
                run = (run + exps[k]) % self.order
                self._set_entry_scalar(vec, cycle[k] * w1, run)
            basis.append(vec)
        return basis

    def _set_entry_scalar(self, vec, index, exponent):
        """Set slot to zeta^exponent."""
        if self.g == 1:
            vec[0][index] = QQ(1) if exponent == 0 else QQ(-1)
        else:
            zm = _zeta_matrix(self.order, exponent)
            for c in range(self.g):
                vec[c][index] = QQ(zm[c][0])


# -- eliminations over field entries ----------------------------------------------


def _rref_entries(rows, ncols, ops, pivot_limit=None):
    add, sub, mul, div, is_zero, zero, one = ops
    limit = ncols if pivot_limit is None else pivot_limit
    pivots = []
    r = 0
    for col in range(limit):
        piv = None
        for rr in range(r, len(rows)):
            if not is_zero(rows[rr][col]):
                piv = rr
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col]
        if inv != one:
            rows[r] = [div(x, inv) for x in rows[r]]
        for rr in range(len(rows)):
            if rr != r and not is_zero(rows[rr][col]):
                f = rows[rr][col]
                rows[rr] = [sub(x, mul(f, y)) for x, y in zip(rows[rr], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def _nullspace_entries(rows, ncols, ops):
    add, sub, mul, div, is_zero, zero, one = ops
    work = [list(r) for r in rows if not all(is_zero(x) for x in r)]
    pivots = _rref_entries(work, ncols, ops)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for ridx, pc in enumerate(pivots):
            v = work[ridx][fc]
            if not is_zero(v):
                vec[pc] = sub(zero, v)
        basis.append(vec)
    return basis


class _SpanData:
    """Echelonized span of a basis with the transform back to it."""

    __slots__ = ("echelon", "pivots", "tmat", "dim", "ops", "plane_echelon", "mod")

    def __init__(self, entry_rows, dim, mod):
        ops = mod._e_ops()
        add, sub, mul, div, is_zero, zero, one = ops
        r = len(entry_rows)
        aug = []
        for i, v in enumerate(entry_rows):
            row = list(v) + [zero] * r
            row[dim + i] = one
            aug.append(row)
        pivots = _rref_entries(aug, dim + r, ops, pivot_limit=dim)
        if len(pivots) != r:
            raise RuntimeError("basis vectors are dependent")
        self.echelon = [row[:dim] for row in aug]
        self.tmat = [row[dim:] for row in aug]
        self.pivots = pivots
        self.dim = dim
        self.ops = ops
        self.mod = mod
        # plane view of the echelon rows for the fast residual path
        g = mod.g
        self.plane_echelon = []
        for row in self.echelon:
            if g == 1:
                self.plane_echelon.append([list(row)])
            else:
                self.plane_echelon.append(
                    [[e[c] for e in row] for c in range(g)]
                )


def _scalar_mult_matrix(mod, entry):
    """g x g rational matrix of multiplication by a field entry."""
    g = mod.g
    if g == 1:
        return entry
    out = [[QQ(0)] * g for _ in range(g)]
    for u in range(g):
        cu = entry[u]
        if cu:
            zm = _zeta_matrix(mod.order, u) if u else None
            for rr in range(g):
                if u == 0:
                    out[rr][rr] += cu
                else:
                    row = zm[rr]
                    for cc in range(g):
                        if row[cc]:
                            out[rr][cc] += cu * row[cc]
    return out


def _restricted_trace(span, image_planes):
    """Trace of the restriction given plane-vector images; asserts the images
    lie exactly in the span (zero residual) before trusting anything."""
    mod = span.mod
    g = mod.g
    add, sub, mul, div, is_zero, zero, one = span.ops
    total = zero
    for i, v in enumerate(image_planes):
        if g == 1:
            coeffs = [v[0][p] for p in span.pivots]
        else:
            coeffs = [tuple(v[c][p] for c in range(g)) for p in span.pivots]
        resid = [list(v[c]) for c in range(g)]
        for k, ck in enumerate(coeffs):
            if is_zero(ck):
                continue
            eplanes = span.plane_echelon[k]
            if g == 1:
                dst = resid[0]
                src = eplanes[0]
                for idx, s in enumerate(src):
                    if s:
                        dst[idx] -= ck * s
            else:
                qmat = _scalar_mult_matrix(mod, ck)
                for cp in range(g):
                    dst = resid[cp]
                    qrow = qmat[cp]
                    for cc in range(g):
                        qv = qrow[cc]
                        if qv:
                            src = eplanes[cc]
                            for idx, s in enumerate(src):
                                if s:
                                    dst[idx] -= qv * s
        if any(any(x for x in plane) for plane in resid):
            raise RuntimeError("operator does not preserve the subspace")
        for ck, trow in zip(coeffs, span.tmat):
            if not is_zero(ck):
                total = add(total, mul(ck, trow[i]))
    return total


# -- cached module assembly ---------------------------------------------------------


_module_cache: dict = {}
_pspace_cache: dict = {}
_dspace_cache: dict = {}


def _scale_planes_to_int(planes):
    """Rescale a plane vector to integer entries (span-preserving)."""
    den = 1
    for plane in planes:
        for x in plane:
            d = getattr(x, "denominator", 1)
            if d != 1:
                den = den * d // math.gcd(den, d)
    out = []
    for plane in planes:
        out.append([int(x * den) if den != 1 else int(x) for x in plane])
    return out


def _int_scaled_op(coeffs):
    """(integer coefficient dict, denominator) for a group-ring element."""
    den = 1
    for q in coeffs.values():
        d = getattr(q, "denominator", 1)
        if d != 1:
            den = den * d // math.gcd(den, d)
    return {m: int(q * den) for m, q in coeffs.items()}, den


def period_module(N, chi, w):
    key = (N, chi.exponents, w)
    mod = _module_cache.get(key)
    if mod is None:
        mod = PeriodModule(N, chi, w)
        with _cache_lock:
            _module_cache[key] = mod
    return mod


def _cached_period_space(mod):
    key = (mod.N, mod.chi.exponents, mod.w)
    got = _pspace_cache.get(key)
    if got is None:
        basis = [_scale_planes_to_int(v) for v in mod.period_space()]
        if basis:
            rows = [mod._entries(v) for v in basis]
            span = _SpanData(rows, mod.dim, mod)
        else:
            span = None
        got = (basis, span)
        with _cache_lock:
            _pspace_cache[key] = got
    return got


def _cached_translation_space(mod):
    key = (mod.N, mod.chi.exponents, mod.w)
    got = _dspace_cache.get(key)
    if got is None:
        basis = [_scale_planes_to_int(v) for v in mod.translation_fixed_space()]
        if basis:
            rows = [mod._entries(v) for v in basis]
            span = _SpanData(rows, mod.dim, mod)
        else:
            span = None
        got = (basis, span)
        with _cache_lock:
            _dspace_cache[key] = got
    return got


def dim_period_space(N, chi, w):
    mod = period_module(N, chi, w)
    return len(_cached_period_space(mod)[0])


def dim_translation_fixed(N, chi, w):
    mod = period_module(N, chi, w)
    return len(_cached_translation_space(mod)[0])


def _entry_to_cyclo(val, mod):
    if mod.g == 1:
        q = val
        return CycloNum(1, (QQ(q),))
    return CycloNum(mod.order, tuple(val))


def trace_on_W(N, chi, w, sigma, op):
    """Trace of the group-ring element op acting through sigma on the period
    space; raises if the space is not preserved exactly."""
    if sigma_det(sigma) != op.det:
        raise ValueError("operator determinant does not match the double coset")
    mod = period_module(N, chi, w)
    basis, span = _cached_period_space(mod)
    if not basis:
        return CycloNum.zero(1)
    int_op, den = _int_scaled_op(op.coeffs)
    images = mod.apply_operator(sigma, int_op, basis)
    val = _restricted_trace(span, images)
    if den != 1:
        if mod.g == 1:
            val = val / den
        else:
            val = tuple(x / den for x in val)
    return _entry_to_cyclo(val, mod)


def trace_on_V(N, chi, w, sigma, op):
    """Trace of op on the full module (blockwise, no elimination)."""
    mod = period_module(N, chi, w)
    total = CycloNum.zero(chi.order)
    for m, q in op.coeffs.items():
        bmap = sigma_block_map(sigma, m)
        wm = weight_action(m, w)
        ptrace = sum(wm[r][r] for r in range(w + 1))
        if not ptrace:
            continue
        for j in range(mod.npoints):
            ent = bmap[j]
            if ent is not None and ent[0] == j:
                zeta = CycloNum.root_of_unity(chi.order, mod._chi_exponent(ent[1]))
                total = total + zeta * (QQ(q) * ptrace)
    return total


def trace_coboundary(N, chi, w, sigma, n_infinity_op):
    """Trace of the infinity-coset operator on Ker(1-T), with the weight-2
    trivial-character correction; equals the Eisenstein trace."""
    mod = period_module(N, chi, w)
    basis, span = _cached_translation_space(mod)
    if not basis:
        val = CycloNum.zero(1)
    else:
        int_op, den = _int_scaled_op(n_infinity_op.coeffs)
        images = mod.apply_operator(sigma, int_op, basis)
        raw = _restricted_trace(span, images)
        if den != 1:
            raw = raw / den if mod.g == 1 else tuple(x / den for x in raw)
        val = _entry_to_cyclo(raw, mod)
    if w == 0 and chi.is_trivial():
        n = sigma[2] if sigma[0] == "hecke" else sigma[3]
        val = val - sigma1_N(N, n)
    return val
