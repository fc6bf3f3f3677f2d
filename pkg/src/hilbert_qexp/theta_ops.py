"""The operators Theta_{P,i}^[j], V, U, Lambda(P,j) and Lambda on truncated
q-expansions, in characteristic p and p-adically.

Theta multiplies the coefficient of q^nu by the residue character value of
nu * pi_P^{-(j + v_P(M))}: the uniformizer power trivializes the P-content of
the cusp lattice M, so the standard cusps (O_L, O_L) and (O_L, D^{-1}) get
the normalization with l = 1 whenever p is unramified. Lambda is built twice,
as the operator composition Id - prod Theta^a and as the plain index filter;
the two must agree coefficientwise.
"""

import threading
from fractions import Fraction

from .errors import (NotInPj, RingMismatch, SupportViolation,
                     UnsupportedOperation)
from .fields import factor_rational_prime
from .qexp import QExpansion
from .rings import RingFq, RingPadic
from .weights import ResidueWeight, WeightSpace, leq_k, transform_weight


class ResidueCharacterTable:
    """Memoized chi-tilde evaluators for one (field, p) and cusp lattice."""

    _cache = {}
    _cache_lock = threading.Lock()

    def __new__(cls, field, p):
        key = (field.key, p)
        with cls._cache_lock:
            if key not in cls._cache:
                obj = super().__new__(cls)
                obj.field = field
                obj.p = p
                obj.primes = factor_rational_prime(field, p)
                obj.by_label = {P.label: P for P in obj.primes}
                obj.working_m = obj.primes[0].working_m
                obj._memo = {}
                obj._lock = threading.Lock()
                cls._cache[key] = obj
            return cls._cache[key]

    def chi_tilde(self, nu, P, i, j, M):
        """chi-tilde_{P,i}^[j](nu) in F_{p^m}, for nu in P^j M."""
        key = (P.label, i % P.f, j, nu.coords, M.key)
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        s = j + M.valuation_at(P)
        x = nu / (P.uniformizer ** s) if s else nu
        if P.elem_valuation(x) < 0:
            raise NotInPj("nu lies outside P^%d times the cusp lattice" % j)
        val = P.embed_element(x, i)
        with self._lock:
            self._memo[key] = val
        return val


def chi_tilde(nu, P, i, j, M=None):
    """Standalone chi-tilde; M defaults to O_L (the (O_L, O_L) cusp)."""
    field = P.field
    if M is None:
        M = field.unit_ideal()
    table = ResidueCharacterTable(field, P.p)
    if not (P.power(j) * M).contains(nu):
        raise NotInPj("nu not in P^%d M" % j)
    return table.chi_tilde(nu, P, i, j, M)


def _require_fq(f, p, m):
    if not isinstance(f.ring, RingFq) or f.ring.p != p:
        raise RingMismatch("operator needs F_{p^m} coefficients at p=%d" % p)
    if f.ring.m != m and m != 1:
        raise RingMismatch("working field mismatch: ring F_{%d^%d}, need m=%d"
                           % (p, f.ring.m, m))


def _check_support(f, P, j):
    if j == 0:
        return
    lattice = P.power(j) * f.cusp.M
    for nu in f.coeffs:
        if not lattice.contains(nu):
            raise SupportViolation("coefficient at index outside P^%d M" % j)


def theta(f, P, i, j=0):
    """Theta_{P,i}^[j]: a_0 -> 0, a_nu -> chi-tilde(nu) a_nu."""
    _require_fq(f, P.p, P.working_m)
    _check_support(f, P, j)
    table = ResidueCharacterTable(f.field, P.p)
    ring = f.ring
    out = {}
    for nu, a in f.coeffs.items():
        c = table.chi_tilde(nu, P, i, j, f.cusp.M)
        if not c:
            continue
        if c.field is ring.field:
            cc = c
        elif P.working_m == 1:
            cc = ring.coerce(int(c.coeffs[0]))
        else:
            raise RingMismatch("cannot embed F_{p^%d} values into the ring"
                               % P.working_m)
        out[nu] = ring.mul(a, cc)
    weight = None
    if isinstance(f.weight, ResidueWeight):
        weight = transform_weight(f.weight, ("theta", P.label, i))
        _assert_cone(weight)
    return f.copy_with(a0=ring.zero(), coeffs=out, weight=weight)


def _assert_cone(w):
    # Prop "positivity": weights produced by the pipelines stay in the cone
    assert leq_k(w.space.zero(), w), "produced weight left the positive cone"


def V(f):
    """a_nu q^nu -> a_nu q^(p nu); constant kept; weight Frobenius-twisted."""
    p = _ring_prime(f)
    coeffs = {p * nu: a for nu, a in f.coeffs.items()}
    weight = None
    if isinstance(f.weight, ResidueWeight):
        weight = transform_weight(f.weight, ("V",))
        _assert_cone(weight)
    return f.copy_with(coeffs=coeffs, trace_bound=f.trace_bound * p,
                       weight=weight)


def U(f):
    """a_nu -> a_{p nu}; constant kept; weight unchanged."""
    p = _ring_prime(f)
    coeffs = {}
    for nu, a in f.coeffs.items():
        scaled = nu * Fraction(1, p)
        if f.cusp.M.contains(scaled):
            coeffs[scaled] = a
    return f.copy_with(coeffs=coeffs, trace_bound=f.trace_bound / p)


def _ring_prime(f):
    p = getattr(f.ring, "p", None)
    if p is None:
        raise RingMismatch("U/V/Lambda need a ring with a distinguished p")
    return p


def lambda_Pj(f, P, j=0, psi_exponents=None):
    """Lambda(P, j) = Id - prod_i (Theta_{P,i}^[j])^{a_i}.

    psi_exponents must give a weight in X_k(1) with nonnegative entries;
    default a_i = p - 1. Computed both as the theta composition and as the
    index filter onto P^{j+1} M; the two must agree.
    """
    p = P.p
    if psi_exponents is None:
        psi_exponents = [p - 1] * P.f
    if len(psi_exponents) != P.f or any(a < 0 for a in psi_exponents):
        raise ValueError("need f_P nonnegative exponents")
    weighted = sum(a * p ** (idx) for idx, a in enumerate(psi_exponents))
    if weighted % (p ** P.f - 1):
        raise ValueError("exponents do not give a weight trivial on k_P^*")
    _require_fq(f, p, P.working_m)
    _check_support(f, P, j)

    # path 1: operator composition
    comp = f
    for idx, a in enumerate(psi_exponents, start=1):
        for _ in range(a):
            comp = theta(comp, P, idx, j)
    path1 = {}
    ring = f.ring
    for nu, a in f.coeffs.items():
        diff = ring.add(a, ring.neg(comp.coefficient(nu)))
        if not ring.is_zero(diff):
            path1[nu] = diff

    # path 2: index filter
    lattice = P.power(j + 1) * f.cusp.M
    path2 = {nu: a for nu, a in f.coeffs.items() if lattice.contains(nu)}

    assert path1 == path2, "Lambda(P,j) paths disagree"
    return f.copy_with(coeffs=path2)


def Lambda(f):
    """Composition of Lambda(P, j) over all P | p and 0 <= j < e_P.

    Keeps a_0 plus exactly the p-divisible indices (checked against the
    direct filter).
    """
    p = _ring_prime(f)
    out = f
    for P in factor_rational_prime(f.field, p):
        for j in range(P.e):
            out = lambda_Pj(out, P, j)
    direct = {nu: a for nu, a in f.coeffs.items()
              if f.cusp.M.contains(nu * Fraction(1, p))}
    assert out.coeffs == direct, "Lambda disagrees with the p | nu filter"
    return out


# ---------------------------------------------------------------------------
# p-adic theta
# ---------------------------------------------------------------------------

_padic_lock = threading.Lock()
_padic_roots = {}


def _padic_embedding_roots(P, prec):
    """Hensel lifts into GR(p^prec, m) of the conjugate roots of P's factor.

    Only unramified P: the defining-polynomial root over k_P is simple, so it
    lifts uniquely; the i-th embedding evaluates alpha-power coordinates at
    the i-th conjugate root.
    """
    from .ffield import GaloisRing
    key = (P.field.key, P.p, P.label, prec)
    with _padic_lock:
        if key in _padic_roots:
            return _padic_roots[key]
    gr = GaloisRing(P.p, prec, P.working_m)
    minpoly = _generator_minpoly(P)
    roots = []
    base = P.base_root()
    for i in range(P.f):
        r_bar = base ** (P.p ** i)
        roots.append(gr.hensel_root(r_bar, minpoly))
    with _padic_lock:
        _padic_roots[key] = (gr, roots)
    return gr, roots


def _generator_minpoly(P):
    from .fields import _minpoly_int
    return _minpoly_int(P._gen_elem)


def padic_theta(f, P, i, j=0):
    """Theta_{P,i} on p-adic expansions: multiply a_nu by the lifted
    character value; weight gains chi_{P,i}^2; constants die.

    Supported for unramified P (so j = 0): the character values then live in
    the Galois ring Z_{p^m}/p^prec matching the coefficient ring. Ramified
    p-adic theta would need coefficient rings in ramified extensions of Z_p,
    which the coefficient-ring menu does not provide.
    """
    if P.e > 1:
        raise UnsupportedOperation(
            "p-adic theta at a ramified prime needs ramified coefficient "
            "rings; use the characteristic-p theta instead")
    if j != 0:
        raise NotInPj("unramified primes only admit j = 0")
    ring = f.ring
    if not isinstance(ring, RingPadic) or ring.p != P.p or ring.m != P.working_m:
        raise RingMismatch("need a p-adic ring of extension degree %d"
                           % P.working_m)
    gr, roots = _padic_embedding_roots(P, ring.prec)
    root = roots[(i - 1) % P.f]
    out = {}
    for nu, a in f.coeffs.items():
        val = _padic_chi_value(P, nu, root, gr)
        term = ring.mul(a, ring.elem(val, ring.prec))
        if not ring.is_zero(term):
            out[nu] = term
    weight = None
    if isinstance(f.weight, ResidueWeight):
        weight = transform_weight(f.weight, ("padic_theta", P.label, i))
    return f.copy_with(a0=ring.zero(), coeffs=out, weight=weight)


def _padic_chi_value(P, nu, root, gr):
    """sigma_{P,i}(nu) computed in the Galois ring via alpha-coordinates."""
    num, den_unit = P._local_integral_pair(nu)
    zn = _alpha_coords_mod(P, num, gr.q)
    zd = _alpha_coords_mod(P, den_unit, gr.q)
    vn = _eval_at_root(zn, root, gr)
    vd = _eval_at_root(zd, root, gr)
    return gr.mul(vn, gr.inverse(vd))


def _alpha_coords_mod(P, x, q):
    from .fields import vec_mat
    z = vec_mat(list(x.coords), P._gen_pow_inv)
    out = []
    for c in z:
        if c.denominator % P.p == 0:
            raise NotInPj("denominator not prime to p")
        out.append(int(c.numerator) * pow(int(c.denominator) % q, -1, q) % q)
    return out


def _eval_at_root(coeffs, root, gr):
    acc = gr(0)
    for c in reversed(coeffs):
        acc = gr.add(gr.mul(acc, root), gr(int(c)))
    return acc
