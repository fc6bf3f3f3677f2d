"""Eisenstein q-expansions: E_k, the p-stabilization E_k^dagger, and the
p-adic family E_k^*.

Coefficients are divisor power sums over C with nu in C inside M = A*B,
reparametrized as sums over integral divisors of (nu) M^{-1} and evaluated
multiplicatively from the ideal factorization. The dagger series is computed
both by the prime-to-p norm filter and by inclusion-exclusion over the primes
above p; the two must agree identically.
"""

from fractions import Fraction

from .errors import BadWeight, NonConvergent
from .fields import (enumerate_totally_positive, factor_int,
                     factor_rational_prime, is_totally_positive)
from .qexp import Cusp, QExpansion, standard_cusp
from .rings import RingPadic, RingQ, RingQTrack
from .weights import UniversalWeight


def divisor_power_sum(nu, M, k, prime_to=None, trusted=False):
    """sum over integral D | (nu) M^{-1} of Nm((nu) M^{-1} D^{-1})^(k-1).

    With prime_to = p, terms whose norm is divisible by p are dropped (the
    Nm' of the p-stabilized series). trusted=True skips the positivity check
    (callers iterating enumerate_totally_positive output use it).
    """
    field = M.field
    nu = field.coerce(nu)
    if not M.contains(nu):
        raise ValueError("nu does not lie in the cusp lattice")
    if not trusted and not is_totally_positive(nu):
        raise ValueError("nu is not totally positive")
    # v_P((nu) M^-1) = v_P(nu) - v_P(M); only primes over Nm((nu) M^-1) matter
    from math import lcm
    den = 1
    for c in nu.coords:
        den = lcm(den, c.denominator)
    y = [int(c * den) for c in nu.coords]
    jnorm = Fraction(abs(nu.norm())) / M.norm()
    assert jnorm.denominator == 1
    total = 1
    for p in sorted(factor_int(int(jnorm))):
        den_shift = 0
        dd = den
        while dd % p == 0:
            dd //= p
            den_shift += 1
        for P in factor_rational_prime(field, p):
            a = P.int_valuation(y) - den_shift * P.e - M.valuation_at(P)
            assert a >= 0
            if a == 0:
                continue
            if prime_to is not None and P.p == prime_to:
                # only the full-exponent divisor keeps the norm prime to p
                continue
            q = int(P.p ** P.f)
            total *= sum(q ** (d * (k - 1)) for d in range(a + 1))
    return Fraction(total)


def _check_even_weight(k):
    if k < 2 or k % 2:
        raise BadWeight("Eisenstein weight must be even and >= 2")


def _coefficient_indices(cusp, T):
    return enumerate_totally_positive(cusp.M, T)


def eisenstein_qexp(field, k, cusp=None, trace_bound=4, ring=None):
    """E_k at the cusp (A, B): Nm(A)^(k-1) (2^-g zeta_L(1-k) + sum ...)."""
    from .zeta import zeta_special_value
    _check_even_weight(k)
    if cusp is None:
        cusp = standard_cusp(field)
    if ring is None:
        ring = RingQ()
    scale = cusp.A.norm() ** (k - 1)
    zv = zeta_special_value(field, k).value
    a0 = scale * Fraction(1, 2 ** field.g) * zv
    coeffs = {}
    for nu in _coefficient_indices(cusp, trace_bound):
        coeffs[nu] = ring.coerce(scale * divisor_power_sum(nu, cusp.M, k, trusted=True))
    return QExpansion(cusp, ring, Fraction(trace_bound), ring.coerce(a0), coeffs,
                      weight=UniversalWeight([k] * field.g))


def _pullback_scaled_series(field, k, D, cusp, trace_bound):
    """Coefficient map of pi*_D(E_k) at (A, B); index set (D M)^+."""
    DM = D * cusp.M
    scale = cusp.A.norm() ** (k - 1) * D.norm() ** (k - 1)
    out = {}
    for nu in enumerate_totally_positive(DM, trace_bound):
        out[nu] = scale * divisor_power_sum(nu, DM, k, trusted=True)
    return scale, out


def eisenstein_dagger(field, k, p, cusp=None, trace_bound=4, ring=None):
    """p-stabilized Eisenstein series: Euler factors at p removed.

    Computed twice (norm filter vs inclusion-exclusion over subsets of the
    primes above p) with a mandatory agreement check.
    """
    from .zeta import zeta_special_value
    _check_even_weight(k)
    if cusp is None:
        cusp = standard_cusp(field)
    if ring is None:
        ring = RingQTrack(p)
    primes = factor_rational_prime(field, p)
    scale = cusp.A.norm() ** (k - 1)
    euler = Fraction(1)
    for P in primes:
        euler *= 1 - Fraction(P.p ** P.f) ** (k - 1)
    zv = zeta_special_value(field, k).value
    a0 = scale * euler * Fraction(1, 2 ** field.g) * zv

    indices = _coefficient_indices(cusp, trace_bound)
    path1 = {nu: scale * divisor_power_sum(nu, cusp.M, k, prime_to=p, trusted=True)
             for nu in indices}

    # inclusion-exclusion over D_I = prod_{P in I} P
    path2 = {nu: Fraction(0) for nu in indices}
    subsets = [[]]
    for P in primes:
        subsets += [s + [P] for s in subsets]
    for sub in subsets:
        D = field.unit_ideal()
        for P in sub:
            D = D * P.ideal
        _, coeffs = _pullback_scaled_series(field, k, D, cusp, trace_bound)
        sign = -1 if len(sub) % 2 else 1
        for nu, c in coeffs.items():
            if nu in path2:
                path2[nu] += sign * c
    mismatch = [nu for nu in indices if path1[nu] != path2[nu]]
    assert not mismatch, "dagger paths disagree at %r" % mismatch[:3]

    coeffs = {nu: ring.coerce(c) for nu, c in path1.items()}
    return QExpansion(cusp, ring, Fraction(trace_bound), ring.coerce(a0), coeffs,
                      weight=UniversalWeight([k] * field.g))


def eisenstein_pstar(field, p, weight_class, trace_bound=4, precision=2,
                     cusp=None):
    """The p-adic Eisenstein series E*_k, coefficients known mod p^precision.

    weight_class is an integer or a zeta.PadicExponent; coefficients are
    evaluated at a representative exponent and the result is checked against
    a second representative (NonConvergent on mismatch).
    """
    from .zeta import PadicExponent, p_adic_zeta_limit
    if cusp is None:
        cusp = standard_cusp(field)
    if cusp.A.norm() != 1:
        raise BadWeight("E* implemented at cusps with Nm(A) = 1")
    if isinstance(weight_class, int):
        weight_class = PadicExponent.from_integer(p, weight_class)
    ring = RingPadic(p, precision)
    n = precision

    zstar = p_adic_zeta_limit(field, p, weight_class, n)
    a0 = ring.elem(zstar.rep / 2 ** field.g, zstar.prec)

    indices = _coefficient_indices(cusp, trace_bound)
    a = max(weight_class.spacing_exponent(field, n), n - 1)
    k1 = weight_class.representative(a)
    k2 = weight_class.representative(a, bump=1)
    coeffs = {}
    pn = p ** n
    for nu in indices:
        c1 = divisor_power_sum(nu, cusp.M, k1, prime_to=p, trusted=True)
        c2 = divisor_power_sum(nu, cusp.M, k2, prime_to=p, trusted=True)
        if (c1 - c2) % pn != 0:
            raise NonConvergent("coefficient at %r unstable mod %d^%d"
                                % (nu, p, n))
        coeffs[nu] = ring.elem(c1 % pn, n)
    return QExpansion(cusp, ring, Fraction(trace_bound), a0, coeffs)
