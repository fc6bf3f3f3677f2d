"""Truncated q-expansions at an unramified cusp.

A QExpansion holds the constant term and a finite map nu -> a_nu over totally
positive nu in M = A*B with Tr(nu) <= trace_bound. Stored zeros are pruned, so
two expansions at the same cusp, ring and bound agree iff their maps agree.
Comparing at mismatched bounds raises instead of silently truncating.
"""

import json
from fractions import Fraction

from .errors import CuspMismatch, NoTrackedPrime, ParseError, RingMismatch
from .fields import FracIdeal, enumerate_totally_positive, ideal_valuation
from .rings import (RingQ, RingQTrack, format_rational, parse_rational,
                    ring_from_description)
from .serialize import (field_from_spec, field_to_spec, ideal_from_json,
                        ideal_to_json)


class Cusp:
    """Unramified cusp (A, B); q-expansions are indexed by (A*B)^+ and 0."""

    def __init__(self, A, B, label="standard"):
        if A.field != B.field:
            raise CuspMismatch("cusp ideals over different fields")
        self.field = A.field
        self.A = A
        self.B = B
        self.M = A * B
        self.label = label

    def __eq__(self, other):
        return (isinstance(other, Cusp) and self.A == other.A
                and self.B == other.B and self.label == other.label)

    def __hash__(self):
        return hash((self.A.key, self.B.key, self.label))

    def __repr__(self):
        return "Cusp(A=%r, B=%r, %s)" % (self.A, self.B, self.label)


def standard_cusp(field):
    """(O_L, O_L): lattice M = O_L."""
    O = field.unit_ideal()
    return Cusp(O, O)


def dual_cusp(field):
    """(O_L, D^{-1}): the base-change cusp lying over (Z, Z) of Q."""
    return Cusp(field.unit_ideal(), field.different_inverse())


class QExpansion:
    def __init__(self, cusp, ring, trace_bound, a0, coeffs, weight=None,
                 validate=False):
        self.cusp = cusp
        self.ring = ring
        self.trace_bound = Fraction(trace_bound)
        self.a0 = ring.coerce(a0)
        cleaned = {}
        for nu, a in coeffs.items():
            a = ring.coerce(a)
            if not ring.is_zero(a):
                cleaned[nu] = a
        self.coeffs = cleaned
        self.weight = weight
        if validate:
            self._validate()

    def _validate(self):
        from .fields import is_totally_positive
        for nu in self.coeffs:
            if nu.trace() > self.trace_bound:
                raise ValueError("stored index above the trace bound")
            if not self.cusp.M.contains(nu):
                raise ValueError("stored index outside the cusp lattice")
            if not is_totally_positive(nu):
                raise ValueError("stored index not totally positive")

    # -- basics --

    @property
    def field(self):
        return self.cusp.field

    def coefficient(self, nu):
        return self.coeffs.get(nu, self.ring.zero())

    def support(self):
        return sorted(self.coeffs, key=lambda nu: (nu.trace(), nu.coords))

    def is_zero(self):
        return self.ring.is_zero(self.a0) and not self.coeffs

    def copy_with(self, a0=None, coeffs=None, trace_bound=None, ring=None,
                  weight="keep"):
        return QExpansion(self.cusp,
                          self.ring if ring is None else ring,
                          self.trace_bound if trace_bound is None else trace_bound,
                          self.a0 if a0 is None else a0,
                          dict(self.coeffs) if coeffs is None else coeffs,
                          self.weight if weight == "keep" else weight)

    def truncate(self, new_bound):
        new_bound = Fraction(new_bound)
        if new_bound > self.trace_bound:
            raise ValueError("cannot raise a trace bound")
        kept = {nu: a for nu, a in self.coeffs.items() if nu.trace() <= new_bound}
        return self.copy_with(coeffs=kept, trace_bound=new_bound)

    def _check_compatible(self, other):
        if self.cusp != other.cusp:
            raise CuspMismatch("expansions at different cusps")
        if self.ring != other.ring:
            raise RingMismatch("expansions over different rings")

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        self._check_compatible(other)
        if self.trace_bound != other.trace_bound:
            raise ValueError("comparison at mismatched trace bounds; truncate first")
        return self.a0 == other.a0 and self.coeffs == other.coeffs

    def __repr__(self):
        return ("QExpansion(T=%s, a0=%s, %d terms)"
                % (self.trace_bound, self.ring.to_text(self.a0), len(self.coeffs)))

    # -- serialization --

    def to_json(self):
        order = self.support()
        doc = {
            "field": field_to_spec(self.field),
            "cusp": {"A": ideal_to_json(self.cusp.A),
                     "B": ideal_to_json(self.cusp.B),
                     "label": self.cusp.label},
            "ring": self.ring.describe(),
            "trace_bound": format_rational(self.trace_bound),
            "a0": self.ring.to_text(self.a0),
            "coeffs": [{"nu": [format_rational(c) for c in nu.coords],
                        "a": self.ring.to_text(self.coeffs[nu])}
                       for nu in order],
        }
        p = getattr(self.ring, "p", None)
        if p is not None:
            doc["headers"] = _prime_headers(self.field, p)
        if self.weight is not None and hasattr(self.weight, "describe"):
            doc["weight"] = self.weight.describe()
        return doc

    def serialize(self):
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, doc):
        try:
            field = field_from_spec(doc["field"])
            A = ideal_from_json(field, doc["cusp"]["A"])
            B = ideal_from_json(field, doc["cusp"]["B"])
            cusp = Cusp(A, B, doc["cusp"].get("label", "standard"))
            ring = ring_from_description(doc["ring"])
            coeffs = {}
            for item in doc["coeffs"]:
                nu = field.element([parse_rational(c) for c in item["nu"]])
                coeffs[nu] = ring.from_text(item["a"])
            weight = None
            if "weight" in doc:
                from .weights import weight_from_description
                weight = weight_from_description(doc["weight"])
            return cls(cusp, ring, parse_rational(doc["trace_bound"]),
                       ring.from_text(doc["a0"]), coeffs, weight)
        except (KeyError, TypeError) as exc:
            raise ParseError("malformed q-expansion document: %s" % exc) from exc

    @classmethod
    def deserialize(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError("bad JSON: %s" % exc.msg, exc.pos) from exc
        return cls.from_json(doc)


def _prime_headers(field, p):
    """Reproducibility record: canonical uniformizers entering chi-tilde."""
    from .fields import factor_rational_prime
    headers = {"p": p, "uniformizers": {}}
    for P in factor_rational_prime(field, p):
        headers["uniformizers"][P.label] = [format_rational(c)
                                            for c in P.uniformizer.coords]
    return headers


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def linear_combine(c1, f, c2, g):
    """c1*f + c2*g coefficientwise; bound is the min of the two bounds."""
    f._check_compatible(g)
    ring = f.ring
    c1, c2 = ring.coerce(c1), ring.coerce(c2)
    T = min(f.trace_bound, g.trace_bound)
    out = {}
    for nu, a in f.coeffs.items():
        if nu.trace() <= T:
            out[nu] = ring.mul(c1, a)
    for nu, b in g.coeffs.items():
        if nu.trace() <= T:
            out[nu] = ring.add(out.get(nu, ring.zero()), ring.mul(c2, b))
    a0 = ring.add(ring.mul(c1, f.a0), ring.mul(c2, g.a0))
    return QExpansion(f.cusp, ring, T, a0, out)


def multiply(f, g):
    """Cauchy product truncated at min(T_f, T_g)."""
    f._check_compatible(g)
    ring = f.ring
    T = min(f.trace_bound, g.trace_bound)
    out = {}

    def bump(nu, val):
        out[nu] = ring.add(out.get(nu, ring.zero()), val)

    for nu, a in f.coeffs.items():
        tn = nu.trace()
        if tn > T:
            continue
        if not ring.is_zero(g.a0):
            bump(nu, ring.mul(a, g.a0))
        for mu, b in g.coeffs.items():
            if tn + mu.trace() <= T:
                bump(nu + mu, ring.mul(a, b))
    if not ring.is_zero(f.a0):
        for mu, b in g.coeffs.items():
            if mu.trace() <= T:
                bump(mu, ring.mul(f.a0, b))
    a0 = ring.mul(f.a0, g.a0)
    return QExpansion(f.cusp, ring, T, a0, out)


def val(f):
    """min p-valuation over all coefficients (tracked-prime rings); inf if 0."""
    ring = f.ring
    if not isinstance(ring, RingQTrack):
        raise NoTrackedPrime("val needs a rationals-with-tracked-prime ring")
    best = ring.valuation(f.a0)
    for a in f.coeffs.values():
        v = ring.valuation(a)
        if v < best:
            best = v
    return best


def zero_expansion(cusp, ring, trace_bound):
    return QExpansion(cusp, ring, trace_bound, ring.zero(), {})
