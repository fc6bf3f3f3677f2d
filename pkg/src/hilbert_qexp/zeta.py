"""Exact Dedekind zeta special values and their p-adic interpolations.

zeta_L(1-k) is recovered by pulling the Eisenstein series E_k back to Q along
the base-change map (coefficient at q^n = sum of divisor power sums over the
trace-n fiber of the inverse different) and completing the constant term of
the resulting level-one form of weight g*k via the Miller basis.
"""

import json
import os
import threading
from fractions import Fraction

from .elliptic import complete_constant_term, dim_M
from .errors import BadWeight, NonConvergent
from .fields import (enumerate_totally_positive, factor_int,
                     factor_rational_prime)
from .rings import PadicElem, RingPadic, val_p

CACHE_ENV = "HILBERT_QEXP_CACHE_DIR"

_memo = {}
_memo_lock = threading.Lock()


class ZetaValue:
    """zeta_L(1-k) with factored numerator and denominator.

    The denominator factors completely (its primes are small by the
    integrality theorem); the numerator is factored opportunistically and a
    possibly-composite cofactor is kept explicit, so the factorization always
    multiplies back exactly.
    """

    def __init__(self, field, k, value):
        self.field = field
        self.argument = 1 - k
        self.k = k
        self.value = Fraction(value)
        self.denominator_factors = factor_int(self.value.denominator)
        num = abs(self.value.numerator)
        self.sign = -1 if self.value.numerator < 0 else 1
        self.numerator_factors, self.numerator_cofactor = \
            _opportunistic_factor(num)

    def check(self):
        num = self.sign * self.numerator_cofactor
        for q, e in self.numerator_factors.items():
            num *= q ** e
        den = 1
        for q, e in self.denominator_factors.items():
            den *= q ** e
        return Fraction(num, den) == self.value

    def __repr__(self):
        return "ZetaValue(zeta_L(%d) = %s)" % (self.argument, self.value)


def _opportunistic_factor(n, small_bound=10 ** 5):
    out = {}
    if n == 0:
        return out, 0
    d = 2
    while d * d <= n and d <= small_bound:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n == 1:
        return out, 1
    try:
        import sympy
        if n < 10 ** 24 or sympy.isprime(n):
            for q, e in sympy.factorint(n).items():
                out[int(q)] = out.get(int(q), 0) + int(e)
            return out, 1
    except Exception:
        pass
    return out, n


def _cache_path():
    base = os.environ.get(CACHE_ENV)
    if not base:
        return None
    os.makedirs(base, exist_ok=True)
    return os.path.join(base, "zeta_cache.json")


def _field_cache_key(field):
    return json.dumps({"poly": list(field.poly),
                       "basis": [[str(c) for c in row] for row in field.basis]},
                      sort_keys=True)


def _load_disk(field, k):
    path = _cache_path()
    if not path or not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
        val = data.get(_field_cache_key(field), {}).get(str(k))
        return Fraction(val) if val is not None else None
    except (OSError, ValueError):
        return None


def _store_disk(field, k, value):
    path = _cache_path()
    if not path:
        return
    try:
        data = {}
        if os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
        data.setdefault(_field_cache_key(field), {})[str(k)] = str(value)
        with open(path, "w") as fh:
            json.dump(data, fh, indent=0, sort_keys=True)
    except (OSError, ValueError):
        pass


def pullback_eisenstein_tail(field, k, n_terms):
    """Coefficients a_1..a_n of the pullback of E_k to level one over Q.

    a_n = sum over totally positive nu in the inverse different with
    Tr(nu) = n of the divisor power sum of E_k at the cusp (O_L, D^{-1}).
    """
    from .eisenstein import divisor_power_sum
    Dinv = field.different_inverse()
    tail = [Fraction(0)] * n_terms
    for nu in enumerate_totally_positive(Dinv, n_terms):
        t = nu.trace()
        assert t.denominator == 1
        tail[int(t) - 1] += divisor_power_sum(nu, Dinv, k, trusted=True)
    return tail


def zeta_special_value(field, k):
    """Exact zeta_L(1-k) for even k >= 2 (refused otherwise)."""
    if k < 2 or k % 2:
        raise BadWeight("only even k >= 2 (the paper uses no other values)")
    with _memo_lock:
        if (field.key, k) in _memo:
            return _memo[(field.key, k)]
    cached = _load_disk(field, k)
    if cached is not None:
        zv = ZetaValue(field, k, cached)
        with _memo_lock:
            _memo[(field.key, k)] = zv
        return zv
    w = field.g * k
    n_terms = dim_M(w) + 5
    tail = pullback_eisenstein_tail(field, k, n_terms)
    a0 = complete_constant_term(w, tail)
    value = (2 ** field.g) * a0
    zv = ZetaValue(field, k, value)
    assert zv.check()
    with _memo_lock:
        _memo[(field.key, k)] = zv
    _store_disk(field, k, value)
    return zv


def p_adic_zeta(field, p, k):
    """zeta*_L(1-k) = prod_{P|p} (1 - Nm(P)^(k-1)) * zeta_L(1-k), exactly."""
    if k < 2 or k % 2:
        raise BadWeight("only even k >= 2")
    euler = Fraction(1)
    for P in factor_rational_prime(field, p):
        euler *= 1 - Fraction(P.p ** P.f) ** (k - 1)
    return euler * zeta_special_value(field, k).value


class PadicExponent:
    """A p-adic even weight exponent: residue r mod (p-1) plus p-adic digits.

    digits are specified modulo p^digit_prec; representative(a) produces an
    even integer k >= 2 with k = digits mod p^min(a, digit_prec) and
    k = r mod (p-1).
    """

    def __init__(self, p, residue, digits, digit_prec=64):
        self.p = p
        self.residue = residue % (p - 1) if p > 2 else 0
        self.digits = digits
        self.digit_prec = digit_prec
        if p > 2 and self.residue % 2:
            raise BadWeight("even weights need an even residue mod p-1")
        if p == 2 and digits % 2:
            raise BadWeight("even weights need even 2-adic digits")

    @classmethod
    def from_integer(cls, p, k):
        if k % 2 or k < 2:
            raise BadWeight("integer weight classes come from even k >= 2")
        return cls(p, k % (p - 1) if p > 2 else 0, k)

    def representative(self, a, bump=0):
        """Even integer k >= 2 matching the class mod (p-1) p^a."""
        a = min(a, self.digit_prec)
        pa = self.p ** a
        if self.p == 2:
            k = self.digits % pa
            mod = pa
        else:
            # CRT: k = digits mod p^a, k = residue mod (p-1)
            m1, m2 = pa, self.p - 1
            r1, r2 = self.digits % m1, self.residue % m2
            inv = pow(m1 % m2, -1, m2) if m2 > 1 else 0
            k = (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)
            mod = m1 * m2
        k += (1 + bump) * mod if k < 2 or k % 2 else bump * mod
        while k < 2 or k % 2:
            k += mod
        return k

    def val_p_of_digits(self, cap):
        if self.digits == 0:
            return cap
        v = 0
        d = self.digits
        while d % self.p == 0 and v < cap:
            d //= self.p
            v += 1
        return v

    def spacing_exponent(self, field, n):
        """Congruence depth a so that representatives agreeing mod
        (p-1) p^a have zeta* values agreeing mod p^n, by the three-case
        congruence theorem (case read off the residue class)."""
        from .congruences import local_abelian_data
        data = local_abelian_data(field, self.p)
        vd = self.val_p_of_digits(n + 2)
        if self.p == 2:
            return n + 2 + 2 * val_p(data.e2, 2) + 2 * vd
        tame_div = (self.p - 1) // data.e_p_t
        if self.residue % tame_div:
            return max(0, n - 1)                      # case (i): bound m + 1
        return n + 1 + 2 * val_p(data.e_p_w, self.p) + 2 * vd


def p_adic_zeta_limit(field, p, weight_class, n):
    """zeta*_L(1-k) for a p-adic weight class, known mod p^n.

    Two integer representatives are evaluated; they must agree mod p^n
    (NonConvergent otherwise, after escalating the congruence depth).
    The result may have negative valuation: it is returned as a truncated
    p-adic number with precision bookkeeping.
    """
    if isinstance(weight_class, int):
        weight_class = PadicExponent.from_integer(p, weight_class)
    ring = RingPadic(p, n)
    for attempt in range(3):
        a = weight_class.spacing_exponent(field, n) + attempt
        k1 = weight_class.representative(a)
        k2 = weight_class.representative(a, bump=1)
        v1 = p_adic_zeta(field, p, k1)
        v2 = p_adic_zeta(field, p, k2)
        if v1 == v2 or val_p(v1 - v2, p) >= n:
            return ring.elem(v1, n)
    raise NonConvergent("p-adic zeta limit unstable at precision %d" % n)
