"""Coefficient rings for q-expansions.

Four kinds: exact rationals, rationals with a tracked prime (for valuation
queries), finite fields F_{p^m}, and truncated p-adics. p-adic elements are
(representative, precision) pairs; arithmetic takes the minimum precision.
The p-adic representative is either a rational (m = 1) or a Galois-ring
coefficient tuple (m > 1, used by the p-adic theta operator).
"""

from fractions import Fraction

from .errors import NoTrackedPrime, ParseError, RingMismatch
from .ffield import FFElem, FiniteField, GaloisRing


def val_p(r, p):
    """p-adic valuation of a rational; inf for zero."""
    r = Fraction(r)
    if r == 0:
        return float("inf")
    v = 0
    n = r.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = r.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def format_rational(r):
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else "%d/%d" % (r.numerator, r.denominator)


def parse_rational(s):
    try:
        if isinstance(s, int):
            return Fraction(s)
        return Fraction(s.strip())
    except (ValueError, AttributeError) as exc:
        raise ParseError("bad rational %r" % (s,)) from exc


class PadicElem:
    """Truncated p-adic number: value known modulo p^prec.

    rep is a Fraction (possibly with p in the denominator, as p-adic zeta
    values are not always integral) or, for extension rings, a coefficient
    tuple over the Galois ring.
    """

    __slots__ = ("ring", "rep", "prec")

    def __init__(self, ring, rep, prec):
        self.ring = ring
        self.prec = prec
        self.rep = ring._normalize(rep, prec)

    def valuation(self):
        return self.ring._valuation(self.rep)

    def __eq__(self, other):
        return (isinstance(other, PadicElem) and self.ring == other.ring
                and self.prec == other.prec and self.rep == other.rep)

    def __hash__(self):
        return hash((self.ring.key, self.rep, self.prec))

    def __repr__(self):
        return "Padic(%s + O(%d^%d))" % (self.rep, self.ring.p, self.prec)


class RingQ:
    kind = "Q"
    key = ("Q",)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise RingMismatch("cannot coerce %r into Q" % (x,))

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def to_text(self, a):
        return format_rational(a)

    def from_text(self, s):
        return parse_rational(s)

    def __eq__(self, other):
        return isinstance(other, RingQ)

    def __hash__(self):
        return hash(self.key)

    def describe(self):
        return {"kind": "Q"}


class RingQTrack(RingQ):
    """Rationals with a distinguished prime for valuation bookkeeping."""

    kind = "Qp"

    def __init__(self, p):
        self.p = p
        self.key = ("Qp", p)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise RingMismatch("cannot coerce %r into Q (tracking %d)" % (x, self.p))

    def valuation(self, a):
        return val_p(a, self.p)

    def __eq__(self, other):
        return isinstance(other, RingQTrack) and other.p == self.p

    def __hash__(self):
        return hash(self.key)

    def describe(self):
        return {"kind": "Qp", "p": self.p}


class RingFq:
    kind = "Fq"

    def __init__(self, p, m=1):
        self.p = p
        self.m = m
        self.field = FiniteField(p, m)
        self.key = ("Fq", p, m)

    def zero(self):
        return self.field.zero()

    def one(self):
        return self.field.one()

    def coerce(self, x):
        if isinstance(x, FFElem):
            if x.field is not self.field:
                raise RingMismatch("element of a different finite field")
            return x
        if isinstance(x, int):
            return self.field(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise RingMismatch("denominator divisible by p in F_q reduction")
            return self.field(int(x.numerator) * pow(x.denominator, -1, self.p))
        raise RingMismatch("cannot coerce %r into F_{%d^%d}" % (x, self.p, self.m))

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return not a

    def to_text(self, a):
        return ",".join(str(c) for c in a.coeffs)

    def from_text(self, s):
        try:
            return self.field([int(c) for c in str(s).split(",")])
        except ValueError as exc:
            raise ParseError("bad F_q element %r" % (s,)) from exc

    def __eq__(self, other):
        return isinstance(other, RingFq) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def describe(self):
        return {"kind": "Fq", "p": self.p, "m": self.m,
                "modulus": list(self.field.modulus)}


class RingPadic:
    """Truncated p-adics Q_p (m = 1) or the unramified extension (m > 1)."""

    kind = "padic"

    def __init__(self, p, prec, m=1):
        self.p = p
        self.prec = prec
        self.m = m
        self.key = ("padic", p, prec, m)
        self.gr = GaloisRing(p, prec, m) if m > 1 else None

    # element plumbing ------------------------------------------------------

    def _normalize(self, rep, prec):
        if self.m > 1:
            return tuple(int(c) % (self.p ** max(prec, 0)) if prec > 0 else 0
                         for c in rep)
        rep = Fraction(rep)
        if rep == 0:
            return Fraction(0)
        v = val_p(rep, self.p)
        if v >= prec:
            return Fraction(0)
        # canonical representative p^v * (u mod p^(prec - v)) with u a unit
        pv = Fraction(self.p) ** v
        u = rep / pv
        mod = self.p ** (prec - v)
        un = int(u.numerator) % mod
        ud = int(u.denominator) % mod
        c = un * pow(ud, -1, mod) % mod
        return pv * c

    def _valuation(self, rep):
        if self.m > 1:
            if not any(rep):
                return float("inf")
            v = 0
            r = list(rep)
            while all(c % self.p == 0 for c in r):
                r = [c // self.p for c in r]
                v += 1
            return v
        return val_p(rep, self.p)

    def elem(self, rep, prec=None):
        return PadicElem(self, rep, self.prec if prec is None else min(prec, self.prec))

    def zero(self):
        return self.elem(0 if self.m == 1 else (0,) * self.m)

    def one(self):
        return self.elem(1 if self.m == 1 else (1,) + (0,) * (self.m - 1))

    def coerce(self, x):
        if isinstance(x, PadicElem):
            if x.ring != self:
                raise RingMismatch("p-adic ring mismatch")
            return x
        if isinstance(x, (int, Fraction)):
            if self.m == 1:
                return self.elem(Fraction(x))
            xf = Fraction(x)
            if xf.denominator % self.p == 0:
                raise RingMismatch("non-integral rational in extension p-adic ring")
            mod = self.p ** self.prec
            c = int(xf.numerator) * pow(int(xf.denominator) % mod, -1, mod) % mod
            return self.elem((c,) + (0,) * (self.m - 1))
        raise RingMismatch("cannot coerce %r p-adically" % (x,))

    # arithmetic -------------------------------------------------------------

    def add(self, a, b):
        a, b = self.coerce(a), self.coerce(b)
        prec = min(a.prec, b.prec)
        if self.m > 1:
            return self.elem(self.gr.add(self.gr(list(a.rep)), self.gr(list(b.rep))), prec)
        return self.elem(a.rep + b.rep, prec)

    def mul(self, a, b):
        a, b = self.coerce(a), self.coerce(b)
        prec = min(a.prec, b.prec)
        if self.m > 1:
            return self.elem(self.gr.mul(self.gr(list(a.rep)), self.gr(list(b.rep))), prec)
        return self.elem(a.rep * b.rep, prec)

    def neg(self, a):
        a = self.coerce(a)
        if self.m > 1:
            return self.elem(self.gr.sub(self.gr(0), self.gr(list(a.rep))), a.prec)
        return self.elem(-a.rep, a.prec)

    def is_zero(self, a):
        a = self.coerce(a)
        if self.m > 1:
            return not any(a.rep)
        return a.rep == 0

    def reduce_mod_p(self, a):
        """Image in F_{p^m}; requires valuation >= 0."""
        a = self.coerce(a)
        F = FiniteField(self.p, self.m)
        if self.m > 1:
            return F([c % self.p for c in a.rep])
        if a.rep.denominator % self.p == 0:
            raise RingMismatch("negative valuation, no mod-p reduction")
        return F(int(a.rep.numerator) * pow(a.rep.denominator, -1, self.p))

    def to_text(self, a):
        a = self.coerce(a)
        if self.m > 1:
            return ",".join(str(c) for c in a.rep) + ";%d" % a.prec
        return format_rational(a.rep) + ";%d" % a.prec

    def from_text(self, s):
        try:
            body, prec = str(s).rsplit(";", 1)
            prec = int(prec)
            if self.m > 1:
                return self.elem(tuple(int(c) for c in body.split(",")), prec)
            return self.elem(parse_rational(body), prec)
        except (ValueError, ParseError) as exc:
            raise ParseError("bad p-adic element %r" % (s,)) from exc

    def __eq__(self, other):
        return isinstance(other, RingPadic) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def describe(self):
        return {"kind": "padic", "p": self.p, "prec": self.prec, "m": self.m}


def ring_from_description(d):
    kind = d.get("kind")
    if kind == "Q":
        return RingQ()
    if kind == "Qp":
        return RingQTrack(int(d["p"]))
    if kind == "Fq":
        return RingFq(int(d["p"]), int(d.get("m", 1)))
    if kind == "padic":
        return RingPadic(int(d["p"]), int(d["prec"]), int(d.get("m", 1)))
    raise ParseError("unknown ring kind %r" % (kind,))
