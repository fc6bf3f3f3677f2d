"""Class-field-theoretic exponent formulas, the integrality theorem, the
three-case congruence bounds, and the section-by-section verification
harnesses for the numerical examples.

e'(P/p) (the ramification index of the maximal abelian subextension of the
completion) is decided by cases: unramified or degree <= 2 completions are
abelian; tame totally ramified cubics are abelian iff 3 | p - 1; everything
wilder needs an explicit override. The fields used in the worked examples
ship as preloaded profiles.
"""

import threading
from fractions import Fraction
from math import gcd, lcm

from . import _kernels
from .errors import NeedsOverride, NonConvergent
from .fields import factor_rational_prime
from .rings import val_p
from .zeta import p_adic_zeta, zeta_special_value

# preloaded e'(P/p) profiles for wild cases the paper argues by hand:
# x^3 - 9x - 6 at p = 3: the completion is a non-Galois cubic, so the
# maximal abelian subextension is Q_3 itself.
FIELD_PROFILES = {
    ((-6, -9, 0, 1), 3): {"P1": 1},
}


class LocalRamData:
    def __init__(self, field, p, per_prime, e_p_t, e_p_w, eps=None):
        self.field = field
        self.p = p
        self.per_prime = per_prime          # label -> dict with d, e, eprime, t, w
        self.e_p_t = e_p_t
        self.e_p_w = e_p_w
        self.e2 = e_p_w if p == 2 else None
        self.eps = eps                      # only for p = 2

    def __repr__(self):
        return ("LocalRamData(p=%d, e_t=%d, e_w=%d%s)"
                % (self.p, self.e_p_t, self.e_p_w,
                   ", eps=%s" % self.eps if self.p == 2 else ""))


def _split_tame_wild(e, p):
    w = 1
    while e % p == 0:
        e //= p
        w *= p
    return e, w


def local_abelian_data(field, p, overrides=None):
    """e'(P/p) data for every P over p, by cases (NeedsOverride if stuck)."""
    profile = dict(FIELD_PROFILES.get((field.poly, p), {}))
    if overrides:
        profile.update(overrides)
    per_prime = {}
    for P in factor_rational_prime(field, p):
        d = P.e * P.f
        if P.label in profile:
            eprime = profile[P.label]
        elif P.e == 1:
            eprime = 1
        elif d <= 2:
            eprime = P.e
        elif d == 3 and P.e == 3:
            if p == 3:
                raise NeedsOverride("wild ramified cubic completion at p=3: "
                                    "supply e'(%s/3)" % P.label)
            eprime = 3 if p % 3 == 1 else 1
        else:
            raise NeedsOverride("no case rule for a completion of degree %d "
                                "at %s" % (d, P.label))
        if P.e % eprime:
            raise NeedsOverride("override e'=%d does not divide e_P=%d"
                                % (eprime, P.e))
        t, w = _split_tame_wild(eprime, p)
        per_prime[P.label] = {"d": d, "e": P.e, "f": P.f,
                              "eprime": eprime, "t": t, "w": w}
    e_p_t = min(v["t"] for v in per_prime.values())
    e_p_w = min(v["w"] for v in per_prime.values())
    eps = None
    if p == 2:
        eps = 0 if minus_one_is_norm(field) else 1
    return LocalRamData(field, p, per_prime, e_p_t, e_p_w, eps)


# ---------------------------------------------------------------------------
# brute-force norm image in (Z/p^n)^*
# ---------------------------------------------------------------------------

_ENUM_BUDGET = 2 * 10 ** 6
_norm_image_cache = {}
_norm_image_lock = threading.Lock()


def norm_image_subgroup(field, p, n, method="auto"):
    """The image of Nm((O_L tensor Z_p)^*) in (Z/p^n)^*, as a frozenset.

    method "enumerate": all residue vectors via the numpy/numba norm kernel.
    method "generators": exact local generators per prime, CRT-lifted.
    "auto" enumerates when p^(n g) fits the budget. Both paths are compared
    in the test suite wherever both run.
    """
    key = (field.key, p, n, method)
    with _norm_image_lock:
        if key in _norm_image_cache:
            return _norm_image_cache[key]
    if method == "auto":
        method = "enumerate" if p ** (n * field.g) <= _ENUM_BUDGET else "generators"
        result = norm_image_subgroup(field, p, n, method)
    elif method == "enumerate":
        result = _norm_image_enumerate(field, p, n)
    elif method == "generators":
        result = _norm_image_generators(field, p, n)
    else:
        raise ValueError("unknown method %r" % (method,))
    with _norm_image_lock:
        _norm_image_cache[key] = result
    return result


def _norm_image_enumerate(field, p, n):
    pn = p ** n
    g = field.g
    mul_tables = [field.int_mul_matrix([int(i == t) for t in range(g)])
                  for i in range(g)]
    dets = _kernels.norm_table(mul_tables, pn, g)
    out = set()
    for d in dets:
        d = int(d) % pn
        if d % p:
            out.add(d)
    return frozenset(out)


def _norm_image_generators(field, p, n):
    pn = p ** n
    gens = []
    primes = factor_rational_prime(field, p)
    for P in primes:
        gens.extend(_local_unit_generators(P, primes, n))
    norms = set()
    for x in gens:
        nr = int(x.norm())
        assert nr % p, "generator is not a unit at p"
        norms.add(nr % pn)
    return _subgroup_closure(norms, pn)


def _subgroup_closure(gens, modulus):
    group = {1}
    frontier = set(gens) - group
    while frontier:
        new = set()
        for a in frontier:
            for b in list(group) + list(frontier):
                c = a * b % modulus
                if c not in group and c not in frontier and c not in new:
                    new.add(c)
        group |= frontier
        frontier = new
    return frozenset(group)


def _local_unit_generators(P, primes, n):
    """Generators of the P-component of (O_L/p^n)^*, congruent to 1 at the
    other primes deeply enough that global norms match local norms mod p^n."""
    from .fields import _coprime_split
    field = P.field
    m_loc = n * P.e
    others = [Q for Q in primes if Q is not P]
    out_local = []
    # a lift of a generator of the residue field k_P^*
    out_local.append(_residue_generator_lift(P))
    # filtration generators 1 + (basis of P^s)
    for s in range(1, m_loc):
        for b in P.power(s).basis_elements():
            out_local.append(field.one() + b)
    if not others:
        return out_local
    B = None
    for Q in others:
        Qdeep = Q.power((n + 4) * Q.e)
        B = Qdeep if B is None else B * Qdeep
    A = P.power(m_loc)
    a, b = _coprime_split(A, B)
    # x = b*y + a = y mod A, = 1 mod B
    return [b * y + a for y in out_local]


def _residue_generator_lift(P):
    """An element of O_L whose reduction generates k_P^*."""
    q = P.p ** P.f
    target_order = q - 1
    # search residue tuples in canonical order for a generator
    for code in range(1, q):
        tup = []
        c = code
        for _ in range(P.f):
            tup.append(c % P.p)
            c //= P.p
        if _residue_order(P, tuple(tup)) == target_order:
            alpha = P._gen_elem
            x = P.field.zero()
            for j, cj in enumerate(tup):
                x = x + cj * alpha ** j
            assert P.reduce(x) == tuple(tup)
            return x
    raise ArithmeticError("no residue generator found (bug)")


def _residue_order(P, tup):
    one = tuple([1] + [0] * (P.f - 1))
    acc = tup
    for d in range(1, P.p ** P.f):
        if acc == one:
            return d
        acc = P._residue_mul(acc, tup)
    return 0


def subgroup_exponent(group, modulus):
    exp = 1
    for h in group:
        order, acc = 1, h
        while acc != 1:
            acc = acc * h % modulus
            order += 1
        exp = lcm(exp, order)
    return exp


def minus_one_is_norm(field, max_n=8):
    """-1 in the closure of the 2-adic norm group, decided by stabilized
    brute force (the spec's epsilon bit)."""
    for n in range(2, max_n + 1):
        H = norm_image_subgroup(field, 2, n)
        if (-1) % (2 ** n) not in H:
            return False
    return True


def _norm_group_in_1_plus_4(field):
    return norm_image_subgroup(field, 2, 2) == frozenset({1})


# ---------------------------------------------------------------------------
# the exponent formula
# ---------------------------------------------------------------------------

def _l2(n):
    return n - 1 if n <= 2 else n - 2


def hbar_exponent(field, p, n, data=None):
    """Exponent of the norm-image subgroup of (Z/p^n)^* (closed form).

    p odd: (p-1)/e_p^t * ceil(p^(n-1)/e_p^w), exact for all n.
    p = 2: 2^eps * ceil(2^l(n)/e_2), the paper's form, valid once
    2^l(n) >= e_2; for the remaining small n the group is tiny and the
    exponent is read off the -1 and mod-4 bits directly.
    """
    if n < 1:
        raise ValueError("n >= 1")
    if data is None:
        data = local_abelian_data(field, p)
    if p != 2:
        tame = (p - 1) // data.e_p_t
        wild = -(-p ** (n - 1) // data.e_p_w)  # ceil
        return tame * wild
    if n == 1:
        return 1
    sigma = 0 if _norm_group_in_1_plus_4(field) else 1
    if n == 2:
        return 2 if sigma else 1
    eps = data.eps
    base = -(-2 ** _l2(n) // data.e2)
    if 2 ** _l2(n) >= data.e2:
        return (2 ** eps) * base
    # below the paper's regime: cyclic part is trivial, only the order-2 bit
    return 2 if sigma else 1


# ---------------------------------------------------------------------------
# integrality and congruence checks
# ---------------------------------------------------------------------------

def check_integrality(field, p, k, data=None):
    """Theorem on denominators: if 2^-g zeta_L(1-k) has val_p = -n < 0 then
    k = 0 mod (p-1)/e_t * ceil(p^(n-1)/e_w) (p odd), or ceil(2^l(n)/e_2)."""
    zv = zeta_special_value(field, k).value
    a0 = Fraction(1, 2 ** field.g) * zv
    n = -val_p(a0, p) if a0 != 0 else 0
    report = {"field": list(field.poly), "p": p, "k": k, "n": n}
    if n <= 0:
        report.update({"integral": True, "pass": True})
        return report
    if data is None:
        data = local_abelian_data(field, p)
    if p != 2:
        req = ((p - 1) // data.e_p_t) * (-(-p ** (n - 1) // data.e_p_w))
    else:
        req = -(-2 ** _l2(n) // data.e2)
    report.update({"integral": False, "required_divisor": req,
                   "pass": k % req == 0})
    return report


def congruence_bound(field, p, k, kp, data=None):
    """Predicted lower bound for val_p of the E-dagger constant difference.

    Returns (bound, m, case) or (None, None, None) when the k = k' mod (p-1)
    hypothesis fails.
    """
    if data is None:
        data = local_abelian_data(field, p)
    diff = abs(k - kp)
    if diff == 0:
        return (None, None, "equal")
    if diff % (p - 1):
        return (None, None, None)
    m = 0
    while diff % ((p - 1) * p ** (m + 1)) == 0:
        m += 1
    if p == 2:
        bound = m - 2 - val_p(k * kp, 2) - 2 * val_p(data.e2, 2)
        return (bound, m, "iii")
    tame_div = (p - 1) // data.e_p_t
    if k % tame_div:
        return (m + 1, m, "i")
    bound = m - val_p(k * kp, p) - 1 - 2 * val_p(data.e_p_w, p)
    return (bound, m, "ii")


def dagger_constant(field, p, k):
    """prod_{P|p}(1 - Nm(P)^(k-1)) * 2^-g * zeta_L(1-k)."""
    return Fraction(1, 2 ** field.g) * p_adic_zeta(field, p, k)


def verify_congruence(field, p, k, kp, data=None):
    """Exact valuation of the E-dagger constant difference vs the bound."""
    bound, m, case = congruence_bound(field, p, k, kp, data)
    delta = dagger_constant(field, p, k) - dagger_constant(field, p, kp)
    actual = val_p(delta, p)
    report = {"field": list(field.poly), "p": p, "k": k, "kprime": kp,
              "m": m, "case": case, "predicted_min": bound, "actual": actual}
    report["pass"] = bound is None or actual >= bound
    return report


def section14_check(p, r):
    """Spot checks of the two quadratic-field valuation propositions at
    K = Q(sqrt p), p = 1 mod 4.

    The first (k = r(p-1)) assumes Vandiver's conjecture and is report-only;
    the second (k = r(p-1)/2) is stated for odd r. Both valuations are
    computed exactly and compared with -1 - val_p(r).
    """
    if p % 4 != 1:
        raise ValueError("p must be 1 mod 4")
    from .fields import construct_field
    K = construct_field([-p, 0, 1], [[1, 0], [Fraction(1, 2), Fraction(1, 2)]])
    expected = -1 - val_p(r, p)
    out = {"p": p, "r": r, "expected": expected}
    k1 = r * (p - 1)
    v1 = val_p(zeta_special_value(K, k1).value, p)
    out["prop1"] = {"k": k1, "valuation": v1, "matches": v1 == expected,
                    "conditional_on_vandiver": True}
    k2 = r * (p - 1) // 2
    v2 = val_p(zeta_special_value(K, k2).value, p)
    out["prop2"] = {"k": k2, "valuation": v2, "matches": v2 == expected,
                    "in_hypothesis": r % 2 == 1}
    out["pass"] = (v2 == expected if r % 2 == 1 else True) and \
                  out["prop1"]["matches"]
    return out
