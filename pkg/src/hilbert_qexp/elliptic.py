"""Level-one elliptic modular forms over Q: Bernoulli numbers, Eisenstein
series, the dimension formula and the Miller (echelon) basis.

This is the engine behind the exact zeta oracle: a pulled-back Hilbert
Eisenstein tail is completed to a full level-one form here, which recovers
the constant term and hence the zeta value.
"""

import threading
from fractions import Fraction
from math import comb

from .errors import BadWeight, InconsistentTail

_bernoulli_cache = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(n):
    """B_n, with the B_1 = -1/2 convention."""
    if n < 0:
        raise BadWeight("Bernoulli index must be nonnegative")
    with _bernoulli_lock:
        while len(_bernoulli_cache) <= n:
            k = len(_bernoulli_cache)
            # sum_{j=0}^{k} C(k+1, j) B_j = 0 for k >= 1
            s = sum(comb(k + 1, j) * _bernoulli_cache[j] for j in range(k))
            _bernoulli_cache.append(-s / (k + 1))
        return _bernoulli_cache[n]


def _sigma(n, k):
    out = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            out += d ** k
            e = n // d
            if e != d:
                out += e ** k
        d += 1
    return out


class EllipticQExp:
    """Truncated q-expansion of a level-one form: coefficients a_0..a_{N-1}."""

    def __init__(self, weight, coeffs):
        self.weight = weight
        self.coeffs = [Fraction(c) for c in coeffs]

    @property
    def precision(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, EllipticQExp) and self.weight == other.weight
                and self.coeffs == other.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def truncate(self, n):
        return EllipticQExp(self.weight, self.coeffs[:n])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return EllipticQExp(self.weight, [Fraction(other) * c for c in self.coeffs])
        n = min(self.precision, other.precision)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs[: n - i]):
                out[i + j] += a * b
        return EllipticQExp(self.weight + other.weight, out)

    __rmul__ = __mul__

    def __add__(self, other):
        if self.weight != other.weight:
            raise BadWeight("adding forms of different weights")
        n = min(self.precision, other.precision)
        return EllipticQExp(self.weight,
                            [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])])

    def __sub__(self, other):
        return self + (-1) * other

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:5])
        return "EllipticQExp(w=%d, [%s, ...])" % (self.weight, head)


def eisenstein_level1(w, N):
    """Normalized E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n."""
    if w < 4 or w % 2:
        raise BadWeight("level-one Eisenstein series needs even weight >= 4")
    factor = Fraction(-2 * w) / bernoulli(w)
    coeffs = [Fraction(1)] + [factor * _sigma(n, w - 1) for n in range(1, N)]
    return EllipticQExp(w, coeffs)


def dim_M(w):
    """dim M_w(SL_2(Z)) for even w >= 0 (0 for odd or negative weights)."""
    if w < 0 or w % 2:
        return 0
    if w % 12 == 2:
        return w // 12
    return w // 12 + 1


def delta_qexp(N):
    e4 = eisenstein_level1(4, N)
    e6 = eisenstein_level1(6, N)
    diff = e4 * e4 * e4 - e6 * e6
    return EllipticQExp(12, [c / 1728 for c in diff.coeffs])


_miller_lock = threading.Lock()
_miller_cache = {}


def miller_basis(w, N):
    """Echelon basis f_0..f_{d-1} of M_w with f_i = q^i + O(q^d), to N terms."""
    d = dim_M(w)
    if w < 0 or w % 2:
        raise BadWeight("no odd or negative weights at level one")
    if N <= d:
        raise BadWeight("precision %d too small for dim %d" % (N, d))
    with _miller_lock:
        cached = _miller_cache.get((w, N))
        if cached is not None:
            return [EllipticQExp(w, list(f.coeffs)) for f in cached]
    if d == 0:
        return []
    if w == 0:
        basis = [EllipticQExp(0, [1] + [0] * (N - 1))]
        with _miller_lock:
            _miller_cache[(w, N)] = basis
        return [EllipticQExp(0, list(f.coeffs)) for f in basis]
    e4 = eisenstein_level1(4, N)
    e6 = eisenstein_level1(6, N)
    monomials = []
    for a in range(w // 4 + 1):
        rem = w - 4 * a
        if rem % 6 == 0:
            b = rem // 6
            acc = EllipticQExp(0, [Fraction(1)] + [Fraction(0)] * (N - 1))
            for _ in range(a):
                acc = acc * e4
            for _ in range(b):
                acc = acc * e6
            monomials.append(EllipticQExp(w, acc.coeffs[:N]))
    rows = [list(m.coeffs) for m in monomials]
    basis_rows = _echelonize(rows, d)
    basis = [EllipticQExp(w, row) for row in basis_rows]
    with _miller_lock:
        _miller_cache[(w, N)] = basis
    return [EllipticQExp(w, list(f.coeffs)) for f in basis]


def _echelonize(rows, d):
    """Row-reduce so that row i starts with q^i (unit pivot), i < d."""
    rows = [list(r) for r in rows]
    out = []
    for pivot_col in range(d):
        pick = None
        for r in rows:
            if all(c == 0 for c in r[:pivot_col]) and r[pivot_col] != 0:
                pick = r
                break
        if pick is None:
            raise BadWeight("monomial span failed to echelonize (bug)")
        rows.remove(pick)
        inv = Fraction(1) / pick[pivot_col]
        pick = [c * inv for c in pick]
        out.append(pick)
        rows = [[c - r[pivot_col] * pc for c, pc in zip(r, pick)] for r in rows]
    # back-substitute to clear columns < d above the pivots
    for i in range(d):
        for j in range(d):
            if j != i and out[i][j] != 0:
                f = out[i][j]
                out[i] = [c - f * pc for c, pc in zip(out[i], out[j])]
    return out


def complete_constant_term(w, tail):
    """Unique a_0 such that (a_0, tail...) is in M_w; raises InconsistentTail.

    tail is (a_1, ..., a_N) with N >= dim M_w.
    """
    d = dim_M(w)
    tail = [Fraction(c) for c in tail]
    N = len(tail) + 1
    if d == 0:
        if any(tail):
            raise InconsistentTail("M_%d = 0 but the tail is nonzero" % w)
        return Fraction(0)
    if N <= d:
        raise InconsistentTail("tail too short: need at least dim M_w = %d" % d)
    basis = miller_basis(w, N)
    # combination of f_1..f_{d-1} fixed by the tail; f_0 carries the constant
    resid = [Fraction(0)] + tail
    for i in range(1, d):
        c = resid[i]
        if c:
            resid = [r - c * fc for r, fc in zip(resid, basis[i].coeffs)]
    f0 = basis[0]
    s = next((k for k in range(d, N) if f0.coeffs[k] != 0), None)
    if s is None:
        # only w = 0, where the constant is not pinned by the tail
        raise BadWeight("constant term undetermined at weight %d" % w)
    a0 = resid[s] / f0.coeffs[s]
    check = [r - a0 * fc for r, fc in zip(resid, f0.coeffs)]
    if any(check[1:]):
        raise InconsistentTail("tail is not the tail of a weight-%d form" % w)
    return a0
