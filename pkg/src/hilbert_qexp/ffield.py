"""Finite fields F_{p^m} in polynomial basis, and the Galois rings above them.

The modulus is the canonical irreducible: the first monic irreducible of degree
m over F_p when coefficient vectors (a_0, ..., a_{m-1}) are ordered as base-p
integers. This pins every residue-field embedding downstream, so serialized
operator output is reproducible.
"""

from functools import lru_cache

from .errors import HilbertQexpError


def _gf_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _gf_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    return _gf_polymod(out, mod, p)


def _gf_polymod(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    while len(_gf_trim(a)) > dm:
        a = _gf_trim(a)
        shift = len(a) - 1 - dm
        c = (a[-1] * inv_lead) % p
        for i, cm in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * cm) % p
        a = a[:-1]
    return _gf_trim(a)


def _gf_powmod(a, e, mod, p):
    result = [1]
    base = _gf_polymod(list(a), mod, p)
    while e:
        if e & 1:
            result = _gf_mulmod(result, base, mod, p)
        base = _gf_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _gf_gcd(a, b, p):
    a, b = _gf_trim(list(a)), _gf_trim(list(b))
    while b:
        a, b = b, _gf_polymod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _gf_sub(a, b, p):
    n = max(len(a), len(b))
    return _gf_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
                     for i in range(n)])


def _is_irreducible(mod, p):
    m = len(mod) - 1
    x = [0, 1]
    if _gf_sub(_gf_powmod(x, p ** m, mod, p), _gf_polymod(x, mod, p), p):
        return False
    for ell in _prime_divisors(m):
        xq = _gf_powmod(x, p ** (m // ell), mod, p)
        if len(_gf_gcd(mod, _gf_sub(xq, x, p), p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_irreducible(p, m):
    """First monic irreducible of degree m over F_p in base-p coefficient order."""
    if m == 1:
        return (0, 1)
    for t in range(p ** m):
        coeffs = []
        tt = t
        for _ in range(m):
            coeffs.append(tt % p)
            tt //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise HilbertQexpError("no irreducible found (unreachable)")


class FFElem:
    """Element of F_{p^m}, coefficients over the polynomial basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        c = list(coeffs)[: field.m]
        c += [0] * (field.m - len(c))
        self.coeffs = tuple(x % field.p for x in c)

    def __eq__(self, other):
        return (isinstance(other, FFElem) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        other = self.field.coerce(other)
        return FFElem(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return FFElem(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __mul__(self, other):
        other = self.field.coerce(other)
        F = self.field
        return FFElem(F, _gf_mulmod(list(self.coeffs), list(other.coeffs),
                                    list(F.modulus), F.p))

    __radd__ = __add__
    __rmul__ = __mul__

    def __pow__(self, e):
        F = self.field
        if e < 0:
            return self.inverse() ** (-e)
        return FFElem(F, _gf_powmod(list(self.coeffs), e, list(F.modulus), F.p))

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in finite field")
        # a^(q-2) = a^-1
        return self ** (self.field.order - 2)

    def frobenius(self, times=1):
        return self ** (self.field.p ** (times % self.field.m))

    def encode(self):
        """Canonical integer encoding sum c_i p^i (used for deterministic choices)."""
        return sum(c * self.field.p ** i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        return "FF(%d^%d: %s)" % (self.field.p, self.field.m, list(self.coeffs))


class FiniteField:
    """F_{p^m} with the canonical modulus."""

    _cache = {}

    def __new__(cls, p, m):
        key = (p, m)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj.p = p
            obj.m = m
            obj.order = p ** m
            obj.modulus = canonical_irreducible(p, m)
            cls._cache[key] = obj
        return cls._cache[key]

    def __call__(self, coeffs):
        if isinstance(coeffs, int):
            return FFElem(self, [coeffs])
        return FFElem(self, coeffs)

    def coerce(self, x):
        if isinstance(x, FFElem):
            if x.field is not self:
                raise HilbertQexpError("finite field mismatch")
            return x
        if isinstance(x, int):
            return FFElem(self, [x])
        raise HilbertQexpError("cannot coerce %r into F_%d^%d" % (x, self.p, self.m))

    def zero(self):
        return FFElem(self, [0])

    def one(self):
        return FFElem(self, [1])

    def gen(self):
        return FFElem(self, [0, 1])

    def elements(self):
        for t in range(self.order):
            coeffs, tt = [], t
            for _ in range(self.m):
                coeffs.append(tt % self.p)
                tt //= self.p
            yield FFElem(self, coeffs)

    def poly_roots(self, coeffs):
        """All roots in F_{p^m} of a polynomial with FFElem coefficients.

        Deterministic Cantor-Zassenhaus down to linear factors; the shift
        elements are tried in canonical encoding order.
        """
        poly = [self.coerce(c) for c in coeffs]
        # strip to the product of linear factors: gcd(poly, x^q - x)
        poly = _ff_trim(poly)
        if len(poly) <= 1:
            return []
        xq = _ff_powmod([self.zero(), self.one()], self.order, poly, self)
        xq_minus_x = _ff_trim([a - b for a, b in
                               zip(xq + [self.zero()] * 2,
                                   [self.zero(), self.one()] + [self.zero()] * len(xq))])
        split = _ff_gcd(poly, xq_minus_x, self)
        roots = []
        stack = [split]
        shift_iter_bound = 4 * self.order + 8
        while stack:
            g = _ff_trim(stack.pop())
            d = len(g) - 1
            if d <= 0:
                continue
            if d == 1:
                roots.append(-(g[0] * g[1].inverse()))
                continue
            found = False
            for t in range(shift_iter_bound):
                c = self._element_by_code(t % self.order)
                h = self._splitting_poly(g, c)
                fac = _ff_gcd(g, h, self)
                if 0 < len(fac) - 1 < d:
                    stack.append(fac)
                    stack.append(_ff_divexact(g, fac, self))
                    found = True
                    break
            if not found:
                raise HilbertQexpError("root splitting failed")
        roots.sort(key=lambda r: r.encode())
        return roots

    def _element_by_code(self, t):
        coeffs = []
        for _ in range(self.m):
            coeffs.append(t % self.p)
            t //= self.p
        return FFElem(self, coeffs)

    def _splitting_poly(self, g, c):
        """(x+c)^((q-1)/2) - 1 mod g for odd p; trace polynomial of cx for p = 2."""
        x_plus_c = [c, self.one()]
        if self.p != 2:
            h = _ff_powmod(x_plus_c, (self.order - 1) // 2, g, self)
            return _ff_trim([h[0] - self.one()] + h[1:]) if h else [-self.one()]
        # p = 2: absolute trace Tr(cx) = sum_{i<m} (cx)^(2^i) mod g
        acc = [self.zero()]
        term = _ff_polymod([self.zero(), c], g, self)
        for _ in range(self.m):
            n = max(len(acc), len(term))
            acc = _ff_trim([(acc[i] if i < len(acc) else self.zero())
                            + (term[i] if i < len(term) else self.zero())
                            for i in range(n)])
            term = _ff_polymod(_ff_mul(term, term, self), g, self)
        return acc


# dense polynomial helpers over FFElem (only used for small degrees)

def _ff_trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _ff_mul(a, b, F):
    if not a or not b:
        return []
    out = [F.zero() for _ in range(len(a) + len(b) - 1)]
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
    return out


def _ff_polymod(a, mod, F):
    a = list(a)
    mod = _ff_trim(mod)
    dm = len(mod) - 1
    inv = mod[-1].inverse()
    while len(_ff_trim(a)) > dm:
        a = _ff_trim(a)
        shift = len(a) - 1 - dm
        c = a[-1] * inv
        for i, cm in enumerate(mod):
            a[shift + i] = a[shift + i] - c * cm
        a = a[:-1]
    return _ff_trim(a)


def _ff_powmod(a, e, mod, F):
    result = [F.one()]
    base = _ff_polymod(a, mod, F)
    while e:
        if e & 1:
            result = _ff_polymod(_ff_mul(result, base, F), mod, F)
        base = _ff_polymod(_ff_mul(base, base, F), mod, F)
        e >>= 1
    return result


def _ff_gcd(a, b, F):
    a, b = _ff_trim(a), _ff_trim(b)
    while b:
        a, b = b, _ff_polymod(a, b, F)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _ff_divexact(a, b, F):
    q = []
    r = _ff_trim(list(a))
    b = _ff_trim(b)
    inv = b[-1].inverse()
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv
        q.append((shift, c))
        for i, cb in enumerate(b):
            r[shift + i] = r[shift + i] - c * cb
        r = _ff_trim(r)
    out = [F.zero()] * (max(s for s, _ in q) + 1) if q else []
    for s, c in q:
        out[s] = out[s] + c
    return out


# ---------------------------------------------------------------------------
# Galois rings GR(p^n, m) = (Z/p^n)[y]/(h_n), h_n the Hensel lift of the
# canonical F_{p^m} modulus. Used by the p-adic theta operator.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def lifted_modulus(p, n, m):
    """Monic lift of canonical_irreducible(p, m) to Z/p^n.

    Any monic lift of an irreducible presents the (unique) unramified
    extension GR(p^n, m), so the plain coefficient lift suffices.
    """
    return tuple(c % (p ** n) for c in canonical_irreducible(p, m))


def _zq_mul(a, b, q):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % q
    return out


def _zq_polymod(a, mod, q):
    a = list(a)
    dm = len(mod) - 1
    while len(a) > dm and a:
        while a and a[-1] % q == 0:
            a.pop()
        if len(a) <= dm:
            break
        shift = len(a) - 1 - dm
        c = a[-1] % q  # modulus is monic
        for i, cm in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * cm) % q
        a = a[:-1]
    a = [c % q for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


class GaloisRing:
    """GR(p^n, m): unramified extension of Z/p^n of degree m."""

    _cache = {}

    def __new__(cls, p, n, m):
        key = (p, n, m)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj.p, obj.n, obj.m = p, n, m
            obj.q = p ** n
            obj.modulus = lifted_modulus(p, n, m)
            cls._cache[key] = obj
        return cls._cache[key]

    def __call__(self, coeffs):
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        c = list(coeffs)[: self.m]
        c += [0] * (self.m - len(c))
        return tuple(x % self.q for x in c)

    def add(self, a, b):
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.q for x, y in zip(a, b))

    def mul(self, a, b):
        out = _zq_polymod(_zq_mul(list(a), list(b), self.q), list(self.modulus), self.q)
        return self(out)

    def pow(self, a, e):
        result = self(1)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_unit(self, a):
        return any(c % self.p for c in a)

    def inverse(self, a):
        """Inverse of a unit: lift the F_{p^m} inverse by Newton iteration."""
        if not self.is_unit(a):
            raise ZeroDivisionError("not a unit in Galois ring")
        F = FiniteField(self.p, self.m)
        x0 = F([c % self.p for c in a]).inverse()
        x = self(list(x0.coeffs))
        # x <- x(2 - a x), doubling precision each step
        steps = max(1, self.n.bit_length())
        for _ in range(steps + 1):
            ax = self.mul(a, x)
            x = self.mul(x, self.sub(self(2), ax))
        assert self.mul(a, x) == self(1)
        return x

    def reduce_mod_p(self, a):
        F = FiniteField(self.p, self.m)
        return F([c % self.p for c in a])

    def hensel_root(self, poly_mod_p_root, poly_int_coeffs):
        """Lift a simple F_{p^m} root of an integer polynomial into the ring."""
        x = self(list(poly_mod_p_root.coeffs))
        dpoly = [i * c for i, c in enumerate(poly_int_coeffs)][1:]
        for _ in range(self.n.bit_length() + 2):
            fx = self._eval_int_poly(poly_int_coeffs, x)
            dfx = self._eval_int_poly(dpoly, x)
            x = self.sub(x, self.mul(fx, self.inverse(dfx)))
        assert not any(self._eval_int_poly(poly_int_coeffs, x))
        return x

    def _eval_int_poly(self, coeffs, x):
        acc = self(0)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self(int(c)))
        return acc
