"""Exact univariate polynomial arithmetic over Q, Sturm chains and real root isolation.

Polynomials are lists of Fractions, index = degree of the monomial. The degree-g
defining polynomials handled here are tiny, so everything is written for clarity
over asymptotics.
"""

from fractions import Fraction


def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_deg(p):
    return len(p) - 1


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                      for i in range(n)])


def poly_neg(a):
    return [-c for c in a]


def poly_sub(a, b):
    return poly_add(a, poly_neg(b))


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return poly_trim(out)


def poly_scale(a, c):
    return poly_trim([Fraction(c) * x for x in a])


def poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = poly_trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while poly_trim(r) and len(poly_trim(r)) >= len(b):
        r = poly_trim(r)
        shift = len(r) - len(b)
        coef = r[-1] / b[-1]
        q[shift] = coef
        for i, cb in enumerate(b):
            r[shift + i] -= coef * cb
        r = r[:-1]
    return poly_trim(q), poly_trim(r)


def poly_mod(a, b):
    return poly_divmod(a, b)[1]


def poly_gcd(a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(a, b)
    if a:
        a = poly_scale(a, Fraction(1) / a[-1])
    return a


def poly_deriv(a):
    return poly_trim([i * c for i, c in enumerate(a)][1:])


def poly_eval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_eval_interval(a, lo, hi):
    """Bounds of p over [lo, hi] by interval Horner. Returns (min, max)."""
    mn, mx = Fraction(0), Fraction(0)
    for c in reversed(a):
        cands = (mn * lo, mn * hi, mx * lo, mx * hi)
        mn, mx = min(cands) + c, max(cands) + c
    return mn, mx


def sturm_chain(f):
    chain = [poly_trim(f), poly_deriv(f)]
    while poly_trim(chain[-1]):
        rem = poly_mod(chain[-2], chain[-1])
        if not poly_trim(rem):
            break
        chain.append(poly_neg(rem))
    return [c for c in chain if poly_trim(c)]


def _sign(x):
    return (x > 0) - (x < 0)


def _sign_changes(values):
    vals = [v for v in values if v != 0]
    return sum(1 for a, b in zip(vals, vals[1:]) if _sign(a) != _sign(b))


def sturm_count(chain, lo, hi):
    """Number of distinct real roots in (lo, hi]."""
    at_lo = _sign_changes([poly_eval(c, lo) for c in chain])
    at_hi = _sign_changes([poly_eval(c, hi) for c in chain])
    return at_lo - at_hi


def count_real_roots(f):
    f = poly_trim(f)
    if poly_deg(f) < 1:
        return 0
    chain = sturm_chain(f)
    bound = root_bound(f)
    return sturm_count(chain, -bound, bound)


def root_bound(f):
    """Cauchy bound: all real roots lie in (-B, B)."""
    f = poly_trim(f)
    lead = abs(f[-1])
    b = 1 + max(abs(c) / lead for c in f[:-1]) if len(f) > 1 else Fraction(1)
    return Fraction(b)


def isolate_real_roots(f):
    """Disjoint intervals (lo, hi], each containing exactly one real root.

    Rational roots may be returned as degenerate intervals (r, r). Assumes f
    squarefree (true for irreducible defining polynomials).
    """
    f = poly_trim(f)
    chain = sturm_chain(f)
    bound = root_bound(f)
    out = []

    def recurse(lo, hi):
        n = sturm_count(chain, lo, hi)
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if poly_eval(f, mid) == 0:
            out.append((mid, mid))
            # shrink around the exact root so the halves miss it
            eps = (hi - lo) / (4 * len(f) * max(1, n))
            lo2, hi2 = mid - eps, mid + eps
            while sturm_count(chain, lo2, hi2) != 1:
                eps /= 2
                lo2, hi2 = mid - eps, mid + eps
            recurse(lo, lo2)
            recurse(hi2, hi)
        else:
            recurse(lo, mid)
            recurse(mid, hi)

    recurse(-bound, bound)
    return sorted(out)


def refine_root(f, lo, hi, max_width):
    """Bisect an isolating interval of f until hi - lo <= max_width."""
    if lo == hi or hi - lo <= max_width:
        return lo, hi
    slo = _sign(poly_eval(f, lo))
    if slo == 0:
        return lo, lo
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        smid = _sign(poly_eval(f, mid))
        if smid == 0:
            return mid, mid
        if smid == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi
