"""The acceptance suite: one callable per criterion, each returning
(ok, detail). `run_acceptance` executes all of them and returns rows for the
CLI selftest table; the pytest module drives the same functions.

Expected values marked from the worked examples are asserted exactly; the
derived ones were computed with the independent oracles in the test suite
and frozen here.
"""

import itertools
from fractions import Fraction

from .fields import (construct_field, enumerate_totally_positive,
                     factor_integral_ideal, factor_rational_prime)
from .rings import RingFq, val_p


def fleet():
    sqrt3 = construct_field([-3, 0, 1])
    c49 = construct_field([-1, -2, 1, 1])
    c3 = construct_field([-6, -9, 0, 1])
    return sqrt3, c49, c3


def extended_fleet():
    half = Fraction(1, 2)
    return fleet() + (
        construct_field([-5, 0, 1], [[1, 0], [half, half]]),
        construct_field([-13, 0, 1], [[1, 0], [half, half]]),
    )


# -- criterion 1: zeta golden values ----------------------------------------

GOLDEN_ZETA = {
    # (poly, k): exact value as a string (None: only the denominator is pinned)
    ((-3, 0, 1), 2): "1/6",
    ((-3, 0, 1), 18): "514802473837215246476827/7182",
    ((-3, 0, 1), 26): "59603426243912408678663547473670548011/6",
    ((-1, -2, 1, 1), 2): "-1/21",
    ((-1, -2, 1, 1), 10): "-1141452324871/231",
    ((-1, -2, 1, 1), 14): "-5589087133015782866737/147",
    ((-6, -9, 0, 1), 2): "-70/3",
    ((-6, -9, 0, 1), 4): "2556221/15",
    ((-6, -9, 0, 1), 6): str(Fraction(-2 * 5 ** 2 * 184669 * 512249, 3 ** 2 * 7)),
    ((-6, -9, 0, 1), 16):
        "83822500848624173596590790551322515127580563498549957/1020",
}

ZETA_DENOM_ONLY = {
    ((-3, 0, 1), 36): 2 ** 2 * 3 ** 3 * 5 * 7 * 13 * 19 * 37,
}


def criterion_zeta_golden(fast=False):
    from .zeta import zeta_special_value
    bad = []
    for (poly, k), expect in GOLDEN_ZETA.items():
        if fast and k > 18:
            continue
        field = construct_field(list(poly))
        got = zeta_special_value(field, k).value
        if got != Fraction(expect):
            bad.append("zeta(1-%d) over %s: got %s" % (k, list(poly), got))
    for (poly, k), denom in ZETA_DENOM_ONLY.items():
        if fast:
            continue
        field = construct_field(list(poly))
        got = zeta_special_value(field, k).value.denominator
        if got != denom:
            bad.append("denominator of zeta(1-%d): got %s" % (k, got))
    return not bad, "; ".join(bad) or "%d values exact" % len(GOLDEN_ZETA)


# -- criterion 2: the worked congruences ------------------------------------

# (poly, p, k, k', expected bound, expected actual valuation or None)
SECTION13_CONGRUENCES = [
    ((-3, 0, 1), 2, 2, 26, -3, -1),
    ((-3, 0, 1), 3, 2, 26, 0, 0),
    ((-3, 0, 1), 7, 2, 26, 1, 1),
    ((-3, 0, 1), 13, 2, 26, 1, 1),
    ((-1, -2, 1, 1), 7, 2, 14, -2, None),
    ((-1, -2, 1, 1), 2, 2, 14, -2, None),
    ((-1, -2, 1, 1), 13, 2, 14, 1, 1),
    ((-6, -9, 0, 1), 7, 2, 14, 1, None),
    ((-6, -9, 0, 1), 7, 4, 16, 1, 1),
    ((-6, -9, 0, 1), 2, 4, 16, -6, -5),
    ((-6, -9, 0, 1), 2, 2, 18, 0, 1),
]


def criterion_section13_congruences(fast=False):
    from .congruences import dagger_constant, verify_congruence
    bad = []
    for poly, p, k, kp, bound, actual in SECTION13_CONGRUENCES:
        field = construct_field(list(poly))
        rep = verify_congruence(field, p, k, kp)
        if rep["predicted_min"] != bound:
            bad.append("%s p=%d: bound %s != %s" % (list(poly), p,
                                                    rep["predicted_min"], bound))
        if actual is not None and rep["actual"] != actual:
            bad.append("%s p=%d: actual %s != %s" % (list(poly), p,
                                                     rep["actual"], actual))
        if not rep["pass"]:
            bad.append("%s p=%d: bound above actual" % (list(poly), p))
    # the divisibility remarks made in the examples
    c3 = construct_field([-6, -9, 0, 1])
    for k in (2, 14):
        if val_p(dagger_constant(c3, 7, k), 7) < 1:
            bad.append("x^3-9x-6: dagger constant at k=%d not divisible by 7" % k)
    from .zeta import zeta_special_value
    c49 = construct_field([-1, -2, 1, 1])
    for k in (2, 14):
        if zeta_special_value(c49, k).value.numerator % 2 == 0:
            bad.append("disc-49: zeta numerator at k=%d is even" % k)
    return not bad, "; ".join(bad) or "%d statements" % len(SECTION13_CONGRUENCES)


# -- criterion 3: integrality sweep ------------------------------------------

def criterion_integrality_sweep(fast=False):
    from .congruences import check_integrality
    from .zeta import zeta_special_value
    bad = []
    checked = 0
    ks = range(2, 21, 2) if not fast else range(2, 11, 2)
    for field in fleet():
        for k in ks:
            a0 = zeta_special_value(field, k).value / 2 ** field.g
            for p in sorted(set(_prime_factors(a0.denominator))):
                if p > 40:
                    continue
                rep = check_integrality(field, p, k)
                checked += 1
                if not rep["pass"]:
                    bad.append("%s p=%d k=%d" % (list(field.poly), p, k))
    return not bad, "; ".join(bad) or "%d (field,p,k) checks" % checked


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- criterion 4: Eisenstein vs brute-force divisor oracle -------------------

def divisor_sum_oracle(nu, M, k):
    """Independent oracle: enumerate the divisors of (nu) M^-1 as ideals and
    sum ideal-norm powers directly."""
    field = M.field
    J = field.principal_ideal(nu) * M.inverse()
    facs = factor_integral_ideal(J)
    total = Fraction(0)
    for exps in itertools.product(*[range(a + 1) for _, a in facs]):
        D = field.unit_ideal()
        for (P, _), e in zip(facs, exps):
            if e:
                D = D * P.power(e)
        total += (J * D.inverse()).norm() ** (k - 1)
    return total


def criterion_eisenstein_oracle(fast=False):
    from .eisenstein import eisenstein_qexp
    from .qexp import standard_cusp
    bad = []
    T = 8 if fast else 12
    for field in fleet():
        cusp = standard_cusp(field)
        f = eisenstein_qexp(field, 2, cusp=cusp, trace_bound=T)
        for nu in enumerate_totally_positive(cusp.M, T):
            expect = divisor_sum_oracle(nu, cusp.M, 2)
            if f.coefficient(nu) != expect:
                bad.append("%s at %s" % (list(field.poly), nu.coords))
    return not bad, "; ".join(bad[:4]) or "T <= %d, all three fields" % T


# -- criterion 5: pullback identity ------------------------------------------

def criterion_pullback(fast=False):
    from .eisenstein import eisenstein_qexp
    from .elliptic import complete_constant_term, eisenstein_level1
    from .functorial import elliptic_from_pullback, pullback_qexp
    from .qexp import dual_cusp
    from .zeta import zeta_special_value
    bad = []
    sqrt3 = fleet()[0]
    E2 = eisenstein_qexp(sqrt3, 2, cusp=dual_cusp(sqrt3), trace_bound=10)
    coeffs = elliptic_from_pullback(pullback_qexp(E2))
    E4 = eisenstein_level1(4, 11)
    if any(c != e / 24 for c, e in zip(coeffs, E4.coeffs)):
        bad.append("pullback of E_2 is not E_4/24")
    for k in (2, 4, 6):
        Ek = eisenstein_qexp(sqrt3, k, cusp=dual_cusp(sqrt3), trace_bound=10)
        tail = elliptic_from_pullback(pullback_qexp(Ek))[1:]
        try:
            a0 = complete_constant_term(2 * k, tail)
        except Exception as exc:
            bad.append("k=%d: %s" % (k, exc))
            continue
        if a0 != zeta_special_value(sqrt3, k).value / 4:
            bad.append("k=%d: completed constant != 2^-g zeta" % k)
    return not bad, "; ".join(bad) or "E_2 -> E_4/24; k=2,4,6 in M_2k"


# -- criterion 6: operator identities ----------------------------------------

def _test_expansion(field, ring, T, salt=0):
    """Deterministic full-support expansion over F_{p^m}."""
    from .qexp import QExpansion, standard_cusp
    cusp = standard_cusp(field)
    pts = enumerate_totally_positive(cusp.M, T)
    order = ring.field.order
    coeffs = {}
    for idx, nu in enumerate(pts):
        code = (idx * 7 + salt * 13 + 1) % order
        coeffs[nu] = ring.field._element_by_code(code)
    return QExpansion(cusp, ring, T, ring.coerce(1), coeffs)


def criterion_operator_identities(fast=False):
    from .qexp import linear_combine
    from .theta_ops import Lambda, U, V, theta
    bad = []
    fields = [fleet()[0], fleet()[2]]
    primes = (2, 3) if fast else (2, 3, 5)
    T = 6 if fast else 9
    for field in fields:
        for p in primes:
            plist = factor_rational_prime(field, p)
            m = plist[0].working_m
            ring = RingFq(p, m)
            f = _test_expansion(field, ring, T, salt=p)
            # U(V(f)) = f
            if U(V(f)) != f:
                bad.append("UV != id (%s, p=%d)" % (list(field.poly), p))
            # Lambda = V(U(f)) coefficientwise
            lam = Lambda(f)
            vu = V(U(f)).truncate(T)
            if lam != vu:
                bad.append("Lambda != VU (%s, p=%d)" % (list(field.poly), p))
            # exactness: U(Lambda f - f) = 0 and the kernel statements
            th = linear_combine(1, lam, -1, f)
            if not U(th).is_zero():
                bad.append("U(Lambda-Id) != 0 (%s, p=%d)" % (list(field.poly), p))
            if Lambda(th).is_zero() != th.is_zero():
                pass
            # ker(Lambda - Id) = im V on the truncation
            lv = Lambda(vu)
            if lv != vu:
                bad.append("im V not Lambda-fixed (%s, p=%d)"
                           % (list(field.poly), p))
            # theta commutativity across all pairs
            pairs = [(P, i) for P in plist for i in range(1, P.f + 1)]
            for (P1, i1), (P2, i2) in itertools.combinations(pairs, 2):
                ab = theta(theta(f, P1, i1), P2, i2)
                ba = theta(theta(f, P2, i2), P1, i1)
                if ab != ba:
                    bad.append("theta no commute (%s, p=%d)"
                               % (list(field.poly), p))
    # inert-case product formula VU = Id - prod Theta_i^(p-1) over F_{p^m}
    sqrt3 = fields[0]
    for p in (5, 7):
        if fast and p == 7:
            continue
        P = factor_rational_prime(sqrt3, p)[0]
        if P.f != 2 or P.e != 1:
            bad.append("p=%d not inert in Q(sqrt 3)?" % p)
            continue
        ring = RingFq(p, 2)
        f = _test_expansion(sqrt3, ring, 6, salt=p)
        comp = f
        for i in (1, 2):
            for _ in range(p - 1):
                comp = theta(comp, P, i)
        rhs = linear_combine(1, f, -1, comp)
        from .theta_ops import U as _U, V as _V
        lhs = _V(_U(f)).truncate(6)
        if lhs != rhs:
            bad.append("VU != prod(Id - Theta^(p-1)) at inert p=%d" % p)
    return not bad, "; ".join(bad) or "U,V,Lambda,theta identities hold"


# -- criterion 7: weight lattice suite ----------------------------------------

def criterion_weight_lattice(fast=False):
    from .weights import (WeightSpace, filtration_bound, frobenius_twist,
                          in_Xk1, leq_k)
    bad = []
    for field in fleet():
        for p in (2, 3, 5):
            space = WeightSpace(field, p)
            expect = 1
            for P in space.primes:
                expect *= p ** P.f - 1
            if space.hasse_lattice_index() != expect:
                bad.append("index (%s, p=%d)" % (list(field.poly), p))
            # circulant inverse identity: psi-coordinates of psi are unit rows
            for pair in space.pairs:
                coords = space.psi_coordinates(space.psi(*pair))
                if any(coords[q] != (1 if q == pair else 0) for q in space.pairs):
                    bad.append("psi coords (%s, p=%d)" % (list(field.poly), p))
            # twist stability on the generators: psi_{P,i} -> p psi_{P,i-1}
            for (label, i) in space.pairs:
                tw = frobenius_twist(space.psi(label, i))
                if tw != space.psi(label, i - 1) ** p:
                    bad.append("twist of psi (%s, p=%d)" % (list(field.poly), p))
            # norm weight lies in the rational cone; Nm^(p-1) in X_k(1)
            nm = space.norm_weight(p - 1)
            if not leq_k(space.zero(), nm) or not in_Xk1(nm):
                bad.append("cone/X_k(1) (%s, p=%d)" % (list(field.poly), p))
            # ordinary box values
            box = space.ordinary_box()["box"]
            t = 0 if p == 2 else 1
            if any(v != (t, p + 1) for v in box.values()):
                bad.append("ordinary box (%s, p=%d)" % (list(field.poly), p))
            # filtration rules on a symbolic weight
            w = space.norm_weight(4)
            fv = filtration_bound(("V",), w)
            if any(fv.exponent(*pair) != p * 4 for pair in space.pairs):
                bad.append("PhiV (%s, p=%d)" % (list(field.poly), p))
            label, i = space.pairs[0]
            ft = filtration_bound(("theta", label, i), w)
            expect_strict = 4 % p == 0
            if ft.strict != expect_strict:
                bad.append("PhiTheta strictness (%s, p=%d)" % (list(field.poly), p))
            fu = filtration_bound(("U",), space.norm_weight(4))
            want = Fraction(4 + p ** 2 - 1, p)
            if fu.parallel_value() != want:
                bad.append("PhiU (%s, p=%d)" % (list(field.poly), p))
    return not bad, "; ".join(bad[:4]) or "lattice identities hold at p=2,3,5"


# -- criterion 8: exponent formula vs brute force -----------------------------

def criterion_hbar(fast=False):
    from .congruences import (hbar_exponent, norm_image_subgroup,
                              subgroup_exponent)
    bad = []
    ns = (1, 2) if fast else (1, 2, 3)
    primes = (2, 3, 5, 7, 13)
    for field in extended_fleet():
        for p in primes:
            for n in ns:
                closed = hbar_exponent(field, p, n)
                H = norm_image_subgroup(field, p, n)
                brute = subgroup_exponent(H, p ** n)
                if closed != brute:
                    bad.append("%s p=%d n=%d: %d != %d"
                               % (list(field.poly), p, n, closed, brute))
    return not bad, "; ".join(bad[:4]) or "agrees on the full grid"


# -- criterion 9: p-adic suite -------------------------------------------------

def criterion_padic(fast=False):
    from .congruences import section14_check
    from .eisenstein import eisenstein_dagger, eisenstein_pstar
    from .qexp import standard_cusp
    from .zeta import PadicExponent, p_adic_zeta, p_adic_zeta_limit
    bad = []
    sqrt3 = fleet()[0]
    # E* mod p^n equals E-dagger for integer weights
    for p, k, n in ((7, 2, 2), (3, 4, 2), (2, 4, 3)):
        star = eisenstein_pstar(sqrt3, p, k, trace_bound=5, precision=n)
        dag = eisenstein_dagger(sqrt3, k, p, cusp=standard_cusp(sqrt3),
                                trace_bound=5)
        pn = p ** n
        for nu in set(star.coeffs) | set(dag.coeffs):
            s = star.coefficient(nu)
            d = dag.coefficient(nu)
            if (Fraction(s.rep) - d) % pn != 0:
                bad.append("E* != E-dagger mod %d^%d at p=%d" % (p, n, p))
                break
    # representative independence of the zeta limit at n <= 3
    # (p = 13 stops at n = 2: the case-(i) representative at n = 3 would be
    # k = 2030, far past desk scale)
    grid = [(3, 1), (3, 2), (3, 3), (7, 1), (7, 2), (7, 3), (13, 1), (13, 2)]
    for p, n in grid:
        if fast and n >= 3:
            continue
        cls = PadicExponent.from_integer(p, 2)
        lim = p_adic_zeta_limit(sqrt3, p, cls, n)
        direct = p_adic_zeta(sqrt3, p, 2)
        if val_p(Fraction(lim.rep) - direct, p) < n:
            bad.append("zeta limit mismatch p=%d n=%d" % (p, n))
    # section 14 spot checks
    for p in (5, 13):
        rep = section14_check(p, 1)
        if not rep["pass"]:
            bad.append("section-14 check failed at p=%d" % p)
    return not bad, "; ".join(bad) or "E*=E-dagger; limits stable; sect-14 PASS"


CRITERIA = [
    ("1 zeta golden values", criterion_zeta_golden),
    ("2 section-13 congruences", criterion_section13_congruences),
    ("3 integrality sweep", criterion_integrality_sweep),
    ("4 eisenstein oracle", criterion_eisenstein_oracle),
    ("5 pullback identity", criterion_pullback),
    ("6 operator identities", criterion_operator_identities),
    ("7 weight lattice", criterion_weight_lattice),
    ("8 hbar exponent", criterion_hbar),
    ("9 p-adic suite", criterion_padic),
]


def run_acceptance(fast=False):
    rows = []
    for name, fn in CRITERIA:
        try:
            ok, detail = fn(fast=fast)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
        rows.append({"name": name, "ok": ok, "detail": detail})
    return rows
