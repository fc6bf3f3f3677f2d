"""Base-change functoriality: the pullback of q-expansions along trace
fibers, the weight restriction, and the theta compatibility check.

The pullback sends an expansion over L_2 at the cusp (A O_{L2}, B D^{-1})
to one over L_1 at (A, B): the coefficient at delta is the sum of a_nu over
the fiber Tr_{L2/L1}(nu) = delta, the constant term is kept. First-class
support covers L_1 = Q; larger base fields work when the caller supplies the
coordinate embedding and relative trace.
"""

from fractions import Fraction

from .errors import IncompatibleCusp
from .fields import factor_rational_prime
from .qexp import Cusp, QExpansion, linear_combine, zero_expansion
from .weights import UniversalWeight


def rationals():
    from .fields import construct_field
    return construct_field([-1, 1])


def pullback_qexp(f, target_field=None, rel_trace=None, target_cusp=None):
    """Upsilon^* on q-expansions: bucket coefficients by relative trace.

    Defaults implement L_1 = Q: the input must sit at (O_L, D^{-1}) and the
    output lands at (Z, Z). For a general base, supply rel_trace (a function
    of field elements of L_2 returning elements of L_1) and the target cusp.
    """
    field2 = f.field
    if target_field is None:
        target_field = rationals()
    if target_field.g == 1:
        expected = Cusp(field2.unit_ideal(), field2.different_inverse(),
                        f.cusp.label)
        if f.cusp != expected:
            raise IncompatibleCusp("pullback to Q expects the cusp "
                                   "(O_L, D^{-1})")
        if rel_trace is None:
            def rel_trace(nu):
                return target_field.from_rational(nu.trace())
        if target_cusp is None:
            target_cusp = Cusp(target_field.unit_ideal(),
                               target_field.unit_ideal(), f.cusp.label)
    elif rel_trace is None or target_cusp is None:
        raise IncompatibleCusp("general base change needs rel_trace and "
                               "target_cusp")
    ring = f.ring
    out = {}
    for nu, a in f.coeffs.items():
        delta = rel_trace(nu)
        if not target_cusp.M.contains(delta):
            raise IncompatibleCusp("trace image leaves the target lattice")
        key = delta
        out[key] = ring.add(out.get(key, ring.zero()), a)
    weight = None
    if isinstance(f.weight, UniversalWeight):
        weight = restrict_weight(f.weight, target_field.g)
    return QExpansion(target_cusp, ring, f.trace_bound, f.a0, out,
                      weight=weight)


def restrict_weight(w, target_g, restriction_map=None):
    """Psi on weights: sum exponents over embeddings with the same
    restriction. Default: all embeddings restrict to the g_1 = 1 base."""
    if restriction_map is None:
        if target_g != 1:
            raise IncompatibleCusp("supply a restriction map for g_1 > 1")
        restriction_map = [0] * w.g
    out = [0] * target_g
    for a, t in zip(w.exps, restriction_map):
        out[t] += a
    return UniversalWeight(out)


def elliptic_from_pullback(f):
    """Coefficient list (a_0, a_1, ..., a_T) of a pullback over Q."""
    assert f.field.g == 1
    T = int(f.trace_bound)
    out = [f.a0] + [f.ring.zero()] * T
    for nu, a in f.coeffs.items():
        out[int(nu.trace())] = a
    return out


def check_theta_compat(f, p, i=1):
    """Report on Theta_{Q,1} o Upsilon^* = Upsilon^* o sum e_P Theta_{P,j}.

    f is a characteristic-p expansion over L at the cusp (O_L, D^{-1}).
    Returns a dict with both sides and the mismatch list; the identity is a
    theorem for p unramified in L and is reported as computed either way.
    """
    from .theta_ops import theta
    field = f.field
    Q = rationals()
    # right side: sum over all P | p and all embeddings, weighted by e_P
    rhs_inner = zero_expansion(f.cusp, f.ring, f.trace_bound)
    for P in factor_rational_prime(field, p):
        for jj in range(1, P.f + 1):
            rhs_inner = linear_combine(1, rhs_inner, P.e, theta(f, P, jj))
    rhs = pullback_qexp(rhs_inner)
    # left side: Serre theta over Q (q d/dq mod p)
    pb = pullback_qexp(f)
    PQ = factor_rational_prime(Q, p)[0]
    lhs = theta(pb, PQ, 1, 0)
    mismatches = []
    for nu in set(lhs.coeffs) | set(rhs.coeffs):
        if lhs.coefficient(nu) != rhs.coefficient(nu):
            mismatches.append(nu)
    unramified = all(P.e == 1 for P in factor_rational_prime(field, p))
    return {
        "equal": not mismatches,
        "unramified": unramified,
        "lhs": lhs,
        "rhs": rhs,
        "mismatches": sorted(mismatches, key=lambda nu: (nu.trace(), nu.coords)),
    }
