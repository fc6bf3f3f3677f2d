"""Exact arithmetic in a totally real number field.

Elements carry coordinate rows over the integral basis; fractional ideals are
Hermite-reduced integer lattices with a cleared denominator, so ideal equality
is tuple equality. All decisions (positivity, membership, valuations) are
exact; floating point only prefilters the lattice-point enumeration.
"""

import threading
from fractions import Fraction
from functools import lru_cache

from . import _kernels
from .errors import (BasisNotARing, IndexDivisible, NormTooLarge,
                     NotIrreducible, NotTotallyReal, ZeroElement, ZeroIdeal)
from .ffield import FiniteField
from .polyarith import (count_real_roots, isolate_real_roots, poly_eval,
                        poly_eval_interval, poly_gcd, poly_mod, poly_trim,
                        refine_root, sturm_chain, sturm_count)

DEFAULT_TRIAL_DIVISION_BOUND = 10 ** 9


# ---------------------------------------------------------------------------
# small exact linear algebra (Fraction matrices as lists of row lists)
# ---------------------------------------------------------------------------

def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def vec_mat(v, m):
    return [sum(v[t] * m[t][j] for t in range(len(v))) for j in range(len(m[0]))]


def mat_inv(a):
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_det(a):
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def hnf_transform(rows_in, g):
    """HNF with the row-operation record: returns (H, U) with U * rows = [H; 0].

    U is m x m unimodular (row operations over Z), rows the input matrix.
    """
    work = [list(map(int, r)) for r in rows_in]
    m = len(work)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for col in range(g):
        while True:
            nz = [i for i in range(r, m) if work[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(work[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = work[i][col] // work[i0][col]
                work[i] = [a - q * b for a, b in zip(work[i], work[i0])]
                U[i] = [a - q * b for a, b in zip(U[i], U[i0])]
        nz = [i for i in range(r, m) if work[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        work[r], work[i0] = work[i0], work[r]
        U[r], U[i0] = U[i0], U[r]
        if work[r][col] < 0:
            work[r] = [-a for a in work[r]]
            U[r] = [-a for a in U[r]]
        piv = work[r][col]
        for i in range(r):
            q = work[i][col] // piv
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return work[:r], U


def hnf(rows, g):
    """Row-style Hermite normal form of an integer lattice basis.

    rows: iterable of integer row vectors spanning a rank-g lattice in Z^g.
    Returns a g x g upper-triangular matrix with positive pivots and entries
    above each pivot reduced into [0, pivot).
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    r = 0
    for col in range(g):
        # euclid the column below r to a single nonzero entry
        while True:
            nz = [i for i in range(r, len(work)) if work[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(work[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = work[i][col] // work[i0][col]
                work[i] = [a - q * b for a, b in zip(work[i], work[i0])]
        nz = [i for i in range(r, len(work)) if work[i][col] != 0]
        if not nz:
            continue
        work[r], work[nz[0]] = work[nz[0]], work[r]
        if work[r][col] < 0:
            work[r] = [-a for a in work[r]]
        piv = work[r][col]
        for i in range(r):
            q = work[i][col] // piv
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[r])]
        r += 1
    if r != g:
        raise ValueError("lattice not of full rank %d" % g)
    return [w for w in work[:g]]


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------

class FieldElement:
    """Element of L as a coordinate row over the integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field.key, self.coords))

    def __bool__(self):
        return any(self.coords)

    def __add__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        other = self.field.coerce(other)
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [Fraction(other) * a for a in self.coords])
        other = self.field.coerce(other)
        return FieldElement(self.field, vec_mat(list(self.coords),
                                                self.field.mul_matrix(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __truediv__(self, other):
        other = self.field.coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero field element")
        inv = mat_inv(self.field.mul_matrix(other))
        return FieldElement(self.field, vec_mat(list(self.coords), inv))

    def __pow__(self, e):
        if e < 0:
            return (self.field.one() / self) ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def norm(self):
        if all(c.denominator == 1 for c in self.coords):
            return Fraction(_int_det(self.field.int_mul_matrix(
                [int(c) for c in self.coords])))
        return mat_det(self.field.mul_matrix(self))

    def trace(self):
        m = self.field.mul_matrix(self)
        return sum(m[i][i] for i in range(self.field.g))

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def power_coords(self):
        """Coordinates over the power basis 1, theta, ..., theta^(g-1)."""
        return vec_mat(list(self.coords), self.field.basis)

    def __repr__(self):
        return "FieldElement(%s)" % (list(self.coords),)


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

class TotallyRealField:
    def __init__(self, poly, integral_basis):
        self.poly = tuple(int(c) for c in poly)
        self.g = len(self.poly) - 1
        self.basis = [[Fraction(c) for c in row] for row in integral_basis]
        self.key = (self.poly, tuple(tuple(c for c in row) for row in self.basis))
        self._validate_poly()
        self.basis_inv = mat_inv(self.basis)
        self._build_structure()
        self._embedding_cache = {}
        self._embedding_lock = threading.Lock()
        self._prime_cache = {}
        self._prime_lock = threading.Lock()
        self._lattice_cache = {}
        self.disc = self._discriminant()
        self._check_basis_is_ring()

    # -- construction internals --

    def _validate_poly(self):
        if self.poly[-1] != 1:
            raise NotIrreducible("defining polynomial must be monic")
        if self.g < 1:
            raise NotIrreducible("degree must be positive")
        import sympy
        x = sympy.Symbol("x")
        expr = sum(int(c) * x ** i for i, c in enumerate(self.poly))
        if self.g > 1 and not sympy.Poly(expr, x).is_irreducible:
            raise NotIrreducible("defining polynomial is reducible over Q")
        froots = count_real_roots([Fraction(c) for c in self.poly])
        if froots != self.g:
            raise NotTotallyReal("defining polynomial has %d real roots, need %d"
                                 % (froots, self.g))

    def _build_structure(self):
        g = self.g
        f = [Fraction(c) for c in self.poly]
        # power basis products x^i * x^j mod f, as power-coordinate rows
        pow_mul = {}
        for i in range(g):
            for j in range(g):
                prod = [Fraction(0)] * (i + j) + [Fraction(1)]
                rem = poly_mod(prod, f)
                rem += [Fraction(0)] * (g - len(rem))
                pow_mul[(i, j)] = rem[:g]
        # w_i * w_j in integral-basis coordinates
        self.structure = []
        for i in range(g):
            row_i = []
            for j in range(g):
                acc = [Fraction(0)] * g
                for a in range(g):
                    ca = self.basis[i][a]
                    if ca == 0:
                        continue
                    for b in range(g):
                        cb = self.basis[j][b]
                        if cb == 0:
                            continue
                        for t in range(g):
                            acc[t] += ca * cb * pow_mul[(a, b)][t]
                row_i.append(vec_mat(acc, self.basis_inv))
            self.structure.append(row_i)
        self.one_coords = vec_mat([Fraction(1)] + [Fraction(0)] * (g - 1),
                                  self.basis_inv)

    def _check_basis_is_ring(self):
        for i in range(self.g):
            for j in range(self.g):
                if any(c.denominator != 1 for c in self.structure[i][j]):
                    raise BasisNotARing("integral basis is not multiplicatively closed")
        if any(c.denominator != 1 for c in self.one_coords):
            raise BasisNotARing("1 is not in the span of the integral basis")
        for row in self.basis_inv:
            if any(c.denominator != 1 for c in row):
                raise BasisNotARing("integral basis does not contain the power basis")

    def _discriminant(self):
        gram = [[(self.element_by_index(i) * self.element_by_index(j)).trace()
                 for j in range(self.g)] for i in range(self.g)]
        self.gram = gram
        d = mat_det(gram)
        if d.denominator != 1:
            raise BasisNotARing("trace form not integral on the basis")
        return int(d)

    # -- basic API --

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field != self:
                raise ValueError("element of a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return self.from_rational(x)
        raise TypeError("cannot coerce %r" % (x,))

    def element(self, coords):
        return FieldElement(self, coords)

    def element_by_index(self, i):
        return FieldElement(self, [Fraction(int(i == j)) for j in range(self.g)])

    def from_rational(self, r):
        return FieldElement(self, [Fraction(r) * c for c in self.one_coords])

    def from_power(self, power_coords):
        coords = vec_mat([Fraction(c) for c in power_coords], self.basis_inv)
        return FieldElement(self, coords)

    def zero(self):
        return FieldElement(self, [0] * self.g)

    def one(self):
        return FieldElement(self, self.one_coords)

    def gen(self):
        """theta, the root of the defining polynomial."""
        pw = [Fraction(0)] * self.g
        if self.g == 1:
            # theta is rational: x - c root c
            pw[0] = Fraction(-self.poly[0])
        else:
            pw[1] = Fraction(1)
        return self.from_power(pw)

    def mul_matrix(self, x):
        """Matrix M with rows M[j] = coords(w_j * x); coords(y*x) = y . M."""
        g = self.g
        m = [[Fraction(0)] * g for _ in range(g)]
        for i in range(g):
            ci = x.coords[i]
            if ci == 0:
                continue
            for j in range(g):
                srow = self.structure[j][i]
                mj = m[j]
                for t in range(g):
                    if srow[t]:
                        mj[t] += ci * srow[t]
        return m

    def int_mul_matrix(self, coords):
        """mul_matrix for integer coordinates, in pure ints (structure
        constants are integral on the integral basis)."""
        g = self.g
        if not hasattr(self, "_int_structure"):
            self._int_structure = [[[int(c) for c in self.structure[i][j]]
                                    for j in range(g)] for i in range(g)]
        s = self._int_structure
        m = [[0] * g for _ in range(g)]
        for i in range(g):
            ci = coords[i]
            if ci:
                for j in range(g):
                    srow = s[j][i]
                    mj = m[j]
                    for t in range(g):
                        if srow[t]:
                            mj[t] += ci * srow[t]
        return m

    # -- embeddings --

    def embeddings(self, max_width=Fraction(1, 2 ** 40)):
        """Isolating intervals for the real roots, refined to max_width."""
        with self._embedding_lock:
            cached = self._embedding_cache.get("roots")
            f = [Fraction(c) for c in self.poly]
            if cached is None:
                cached = isolate_real_roots(f)
            cached = [refine_root(f, lo, hi, max_width) for lo, hi in cached]
            self._embedding_cache["roots"] = cached
            return list(cached)

    def embed_interval(self, x, index, max_width=Fraction(1, 2 ** 40)):
        """Interval containing sigma_index(x)."""
        roots = self.embeddings(max_width)
        lo, hi = roots[index]
        p = x.power_coords()
        return poly_eval_interval(list(p), lo, hi)

    def signs_at_embeddings(self, x):
        """Exact signs (+1, -1, 0) of x at every real embedding.

        Interval refinement with a Sturm-based exact-zero fallback: if the
        value polynomial shares a root of f inside the interval, the sign is
        exactly 0 and no amount of refinement would certify it numerically.
        """
        if not x:
            return [0] * self.g
        p = poly_trim(list(x.power_coords()))
        f = [Fraction(c) for c in self.poly]
        common = cchain = None
        out = []
        width = Fraction(1, 2 ** 40)
        roots = self.embeddings(width)
        for idx in range(self.g):
            lo, hi = roots[idx]
            sign = None
            w = width
            for attempt in range(80):
                lo, hi = refine_root(f, lo, hi, w)
                mn, mx = poly_eval_interval(p, lo, hi)
                if mn > 0:
                    sign = 1
                    break
                if mx < 0:
                    sign = -1
                    break
                if attempt >= 1:
                    # refinement is not separating: check for an exact zero
                    if common is None:
                        common = poly_gcd(f, p)
                        cchain = sturm_chain(common) if len(common) > 1 else False
                    if cchain is not False:
                        if lo == hi:
                            if poly_eval(common, lo) == 0:
                                sign = 0
                                break
                        elif sturm_count(cchain, lo, hi) > 0:
                            sign = 0
                            break
                w /= 256
            if sign is None:
                raise ArithmeticError("sign determination did not converge")
            out.append(sign)
        return out

    # -- ideals --

    def ideal_from_rows(self, rows, denominator=1):
        return FracIdeal.from_rows(self, rows, denominator)

    def unit_ideal(self):
        g = self.g
        return FracIdeal(self, 1, tuple(tuple(int(i == j) for j in range(g))
                                        for i in range(g)))

    def principal_ideal(self, x):
        x = self.coerce(x)
        if not x:
            raise ZeroIdeal("principal ideal of zero")
        return FracIdeal.from_rows(self, self.mul_matrix(x))

    def different_inverse(self):
        """Trace-dual of O_L, i.e. the inverse different."""
        return FracIdeal.from_rows(self, mat_inv(self.gram))

    def different(self):
        return self.different_inverse().inverse()

    def __eq__(self, other):
        return isinstance(other, TotallyRealField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "TotallyRealField(poly=%s)" % (list(self.poly),)


_FIELD_CACHE = {}
_FIELD_CACHE_LOCK = threading.Lock()


def construct_field(poly, integral_basis=None):
    """Build (and cache) a totally real field from a monic integer polynomial."""
    poly = tuple(int(c) for c in poly)
    g = len(poly) - 1
    if integral_basis is None:
        integral_basis = [[Fraction(int(i == j)) for j in range(g)] for i in range(g)]
    key = (poly, tuple(tuple(Fraction(c) for c in row) for row in integral_basis))
    with _FIELD_CACHE_LOCK:
        if key not in _FIELD_CACHE:
            _FIELD_CACHE[key] = TotallyRealField(poly, integral_basis)
        return _FIELD_CACHE[key]


# ---------------------------------------------------------------------------
# fractional ideals
# ---------------------------------------------------------------------------

class FracIdeal:
    """Fractional O_L-ideal: rows of mat / den span the lattice, mat in HNF."""

    __slots__ = ("field", "den", "mat", "_norm", "_inv", "_val_cache")

    def __init__(self, field, den, mat):
        self.field = field
        self.den = den
        self.mat = mat
        self._norm = None
        self._inv = None
        self._val_cache = {}

    def valuation_at(self, P):
        """v_P of this ideal, cached."""
        key = (P.p, P.label)
        if key not in self._val_cache:
            self._val_cache[key] = ideal_valuation(self, P)
        return self._val_cache[key]

    @classmethod
    def from_rows(cls, field, rows, denominator=1):
        g = field.g
        from math import gcd, lcm
        den_all = int(denominator)
        for row in rows:
            for c in row:
                den_all = lcm(den_all, Fraction(c).denominator)
        int_rows = [[int(Fraction(c) * den_all) for c in row] for row in rows]
        h = hnf(int_rows, g)
        content = 0
        for row in h:
            for c in row:
                content = gcd(content, c)
        content = gcd(content, den_all)
        if content > 1:
            h = [[c // content for c in row] for row in h]
            den_all //= content
        return cls(field, den_all, tuple(tuple(r) for r in h))

    @property
    def key(self):
        return (self.den, self.mat)

    def __eq__(self, other):
        return (isinstance(other, FracIdeal) and self.field == other.field
                and self.key == other.key)

    def __hash__(self):
        return hash((self.field.key, self.key))

    def basis_elements(self):
        d = Fraction(1, self.den)
        return [FieldElement(self.field, [c * d for c in row]) for row in self.mat]

    def norm(self):
        if self._norm is None:
            det = 1
            for i in range(self.field.g):
                det *= self.mat[i][i]
            self._norm = Fraction(det, self.den ** self.field.g)
        return self._norm

    def is_integral(self):
        return self.den == 1

    def contains(self, x):
        """Exact lattice membership of a field element."""
        x = self.field.coerce(x)
        target = []
        for c in x.coords:
            t = c * self.den
            if t.denominator != 1:
                return False
            target.append(int(t))
        return _int_solve_upper(self.mat, target)

    def contains_lattice(self, other):
        """other is a sub-lattice of self."""
        g = self.field.g
        # den_self * other = (den_self/den_other-scaled) integer rows
        for row in other.mat:
            target = [Fraction(c * self.den, other.den) for c in row]
            if any(t.denominator != 1 for t in target):
                return False
            if not _int_solve_upper(self.mat, [int(t) for t in target]):
                return False
        return True

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            other = self.field.principal_ideal(other)
        rows = []
        for b in self.basis_elements():
            mb = self.field.mul_matrix(b)
            for c in other.basis_elements():
                rows.append(vec_mat(list(c.coords), mb))
        return FracIdeal.from_rows(self.field, rows)

    def inverse(self):
        if self._inv is not None:
            return self._inv
        g = self.field.g
        # dual-of-sum trick: I^-1 = dual( sum_k Z^g . Mul(b_k)^T )
        rows = []
        for b in self.basis_elements():
            m = self.field.mul_matrix(b)
            for j in range(g):
                rows.append([m[i][j] for i in range(g)])  # transpose rows
        from math import lcm
        den = 1
        for row in rows:
            for c in row:
                den = lcm(den, Fraction(c).denominator)
        int_rows = [[int(Fraction(c) * den) for c in row] for row in rows]
        h = hnf(int_rows, g)
        hinv_t = mat_inv([[Fraction(c) for c in row] for row in h])
        dual_rows = [[den * hinv_t[j][i] for j in range(g)] for i in range(g)]
        inv = FracIdeal.from_rows(self.field, dual_rows)
        self._inv = inv
        return inv

    def __pow__(self, e):
        if e == 0:
            return self.field.unit_ideal()
        if e < 0:
            return self.inverse() ** (-e)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, r):
        """Ideal r * I for a rational r."""
        r = Fraction(r)
        rows = [[c * r / self.den for c in row] for row in self.mat]
        return FracIdeal.from_rows(self.field, rows)

    def __repr__(self):
        return "FracIdeal(den=%d, mat=%s)" % (self.den, [list(r) for r in self.mat])


def _int_det(m):
    g = len(m)
    if g == 1:
        return m[0][0]
    if g == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if g == 3:
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    return int(mat_det([[Fraction(c) for c in row] for row in m]))


def _int_solve_upper(mat, target):
    """Is the integer vector target an integer row-combination of the upper
    triangular integer matrix mat? Pure-int back-substitution."""
    g = len(target)
    y = [0] * g
    for col in range(g):
        acc = 0
        for i in range(col):
            yi = y[i]
            if yi:
                acc += yi * mat[i][col]
        rem = target[col] - acc
        piv = mat[col][col]
        q, r = divmod(rem, piv)
        if r:
            return False
        y[col] = q
    return True


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


def ideal_product(i, j):
    return i * j


def ideal_inverse(i):
    return i.inverse()


def ideal_norm(i):
    return i.norm()


def contains(i, x):
    return i.contains(x)


# ---------------------------------------------------------------------------
# primes over p
# ---------------------------------------------------------------------------

class PrimeData:
    """A prime P over p with uniformizer and residue-embedding data."""

    def __init__(self, field, p, ideal, e, f, label, factor_poly, gen_elem,
                 gen_pow_inv, working_m):
        self.field = field
        self.p = p
        self.ideal = ideal
        self.e = e
        self.f = f
        self.label = label
        self.factor_poly = factor_poly          # monic factor of gen minpoly mod p
        self._gen_elem = gen_elem               # the alpha used for Dedekind
        self._gen_pow_inv = gen_pow_inv         # w-coords -> alpha-power coords
        self.working_m = working_m
        self.working_field = FiniteField(p, working_m)
        self._base_root = None
        self.siblings = None                    # set by factor_rational_prime
        self._uniformizer = None                # computed lazily
        self._pk_cache = {1: ideal}
        self._lock = threading.RLock()

    @property
    def uniformizer(self):
        """Canonical pi_P: v_P = 1 and v_P' = 0 at the other primes over p."""
        with self._lock:
            if self._uniformizer is None:
                self._uniformizer = _canonical_uniformizer(self, self.siblings)
            return self._uniformizer

    # residue arithmetic -----------------------------------------------------

    def reduce(self, x):
        """x mod P as a coefficient tuple over F_p[t]/(factor_poly).

        Requires v_P(x) >= 0; x need not be integral away from P.
        """
        x = self.field.coerce(x)
        num, den_unit = self._local_integral_pair(x)
        ncoef = self._alpha_coords_mod_p(num)
        dcoef = self._alpha_coords_mod_p(den_unit)
        nres = self._mod_factor(ncoef)
        dres = self._mod_factor(dcoef)
        dinv = self._residue_inverse(dres)
        return self._residue_mul(nres, dinv)

    def _local_integral_pair(self, x):
        """Represent x = a/b with a, b in O_L and v_P(b) = 0."""
        from math import lcm
        d = 1
        for c in x.coords:
            d = lcm(d, c.denominator)
        num = x * d
        if d % self.p != 0:
            return num, self.field.from_rational(d)
        # clear the P-part of (d) with an element of (d) P^{-v_P((d))}
        J = self.field.principal_ideal(self.field.from_rational(d))
        vP = ideal_valuation(J, self)
        J_off = J * (self.ideal ** (-vP)) if vP else J
        b = _smallest_off_prime(J_off, self)
        a = x * b
        assert a.is_integral()
        return a, b

    def _alpha_coords_mod_p(self, x):
        z = vec_mat(list(x.coords), self._gen_pow_inv)
        out = []
        for c in z:
            if c.denominator % self.p == 0:
                raise ArithmeticError("denominator not prime to p in reduction")
            out.append(int(c.numerator * pow(c.denominator, -1, self.p)) % self.p)
        return out

    def _mod_factor(self, coeffs):
        from .ffield import _gf_polymod
        res = _gf_polymod(list(coeffs), list(self.factor_poly), self.p)
        res += [0] * (self.f - len(res))
        return tuple(res[: self.f])

    def _residue_mul(self, a, b):
        from .ffield import _gf_mulmod
        res = _gf_mulmod(list(a), list(b), list(self.factor_poly), self.p)
        res += [0] * (self.f - len(res))
        return tuple(res[: self.f])

    def _residue_inverse(self, a):
        # a^(p^f - 2)
        from .ffield import _gf_powmod
        res = _gf_powmod(list(a), self.p ** self.f - 2, list(self.factor_poly), self.p)
        res += [0] * (self.f - len(res))
        return tuple(res[: self.f])

    def base_root(self):
        """Smallest root of factor_poly in the working field F_{p^m}."""
        if self._base_root is None:
            F = self.working_field
            roots = F.poly_roots([F(int(c)) for c in self.factor_poly])
            self._base_root = roots[0]
        return self._base_root

    def embed(self, residue_tuple, i):
        """sigma-bar_{P,i} applied to an element of k_P (1-indexed, cyclic)."""
        F = self.working_field
        root = self.base_root() ** (self.p ** ((i - 1) % self.f))
        acc = F.zero()
        for c in reversed(residue_tuple):
            acc = acc * root + F(int(c))
        return acc

    def embed_element(self, x, i):
        return self.embed(self.reduce(x), i)

    # valuations -------------------------------------------------------------

    def power(self, k):
        with self._lock:
            if k not in self._pk_cache:
                if k == 0:
                    self._pk_cache[0] = self.field.unit_ideal()
                else:
                    self._pk_cache[k] = self.ideal ** k
            return self._pk_cache[k]

    def int_valuation(self, int_coords):
        """v_P of a nonzero integral element given by integer coordinates."""
        k = 0
        while True:
            Pk = self.power(k + 1)
            if _int_solve_upper(Pk.mat, int_coords):
                k += 1
            else:
                return k

    def elem_valuation(self, x):
        x = self.field.coerce(x)
        if not x:
            raise ZeroElement("valuation of zero")
        from math import lcm
        d = 1
        for c in x.coords:
            d = lcm(d, c.denominator)
        shift = 0
        if d > 1:
            v = 0
            dd = d
            while dd % self.p == 0:
                dd //= self.p
                v += 1
            shift = v * self.e
        y = [int(c * d) for c in x.coords]
        return self.int_valuation(y) - shift

    def __repr__(self):
        return "PrimeData(%s over %d, e=%d, f=%d)" % (self.label, self.p, self.e, self.f)


def ideal_valuation(I, P):
    """v_P of a fractional ideal."""
    den = I.den
    v_den = 0
    dd = den
    while dd % P.p == 0:
        dd //= P.p
        v_den += 1
    J = I if den == 1 else I.scale(den)
    k = 0
    while P.power(k + 1).contains_lattice(J):
        k += 1
    return k - v_den * P.e


def _smallest_off_prime(J, P):
    """Deterministic element of J with v_P = 0 (J integral, v_P(J) = 0)."""
    for radius in range(1, 64):
        best = None
        for coords in _box_iter(P.field.g, radius):
            x = FieldElement(P.field, coords)
            if not x:
                continue
            if J.contains(x) and not P.ideal.contains(x):
                key = (max(abs(c) for c in coords),
                       sum(1 for c in coords if c < 0), coords)
                if best is None or key < best[0]:
                    best = (key, x)
        if best is not None:
            return best[1]
    raise ArithmeticError("no small element prime to P found")


def _box_iter(g, radius):
    import itertools
    return itertools.product(range(-radius, radius + 1), repeat=g)


# ---------------------------------------------------------------------------
# factorization of rational primes (Dedekind)
# ---------------------------------------------------------------------------

def _minpoly_int(x):
    """Monic integer minimal polynomial of an integral element, or None if not
    of full degree g."""
    field = x.field
    g = field.g
    rows = []
    acc = field.one()
    for i in range(g + 1):
        rows.append([Fraction(c) for c in acc.coords])
        acc = acc * x
    # x is a generator iff rows[0..g-1] are independent; then solve
    # x^g = sum c_i x^i for the monic minimal polynomial
    try:
        inv = mat_inv(rows[:g])
    except ZeroDivisionError:
        return None
    coeffs = vec_mat(rows[g], inv)
    poly = [-c for c in coeffs] + [Fraction(1)]
    if any(c.denominator != 1 for c in poly):
        return None
    return [int(c) for c in poly]


def _poly_disc(poly):
    import sympy
    x = sympy.Symbol("x")
    expr = sum(int(c) * x ** i for i, c in enumerate(poly))
    return int(sympy.discriminant(sympy.Poly(expr, x)))


def _factor_mod_p(poly, p):
    """Monic factorization mod p: list of (coeffs ascending, exponent)."""
    from sympy.polys.galoistools import gf_factor
    from sympy.polys.domains import ZZ
    dense = [ZZ(int(c)) for c in reversed(poly)]
    _, factors = gf_factor(dense, p, ZZ)
    out = []
    for fac, e in factors:
        asc = [int(c) % p for c in reversed(fac)]
        out.append((asc, e))
    return out


def factor_rational_prime(field, p, _cache=True):
    """Complete factorization p O_L = prod P^e with canonical uniformizers.

    Uses Dedekind's theorem for a generator alpha with p not dividing
    [O_L : Z[alpha]]; integral-basis elements are tried as alternative
    generators before refusing.
    """
    with field._prime_lock:
        if _cache and p in field._prime_cache:
            return field._prime_cache[p]

    gen = _find_generator(field, p)
    if gen is None:
        raise IndexDivisible("p=%d divides the index of every tried power order" % p)
    alpha, minpoly = gen
    g = field.g
    # alpha-power coordinate conversion
    pow_rows = []
    acc = field.one()
    for i in range(g):
        pow_rows.append(list(acc.coords))
        acc = acc * alpha
    gen_pow_inv = mat_inv(pow_rows)

    factors = _factor_mod_p(minpoly, p)
    prelim = []
    for fac, e in factors:
        gi = _lift_poly_element(field, alpha, fac)
        P_lat = _ideal_from_two(field, p, gi)
        prelim.append((P_lat, e, len(fac) - 1, tuple(fac)))
    assert sum(e * f for _, e, f, _ in prelim) == g
    prelim.sort(key=lambda t: (t[2], t[1], t[0].key))
    from math import lcm
    m = 1
    for _, _, f, _ in prelim:
        m = lcm(m, f)
    primes = []
    for idx, (P_lat, e, f, fac) in enumerate(prelim):
        P = PrimeData(field, p, P_lat, e, f, "P%d" % (idx + 1), fac, alpha,
                      gen_pow_inv, m)
        primes.append(P)
    for P in primes:
        P.siblings = primes
    with field._prime_lock:
        field._prime_cache[p] = primes
    return primes


def _find_generator(field, p):
    g = field.g
    cands = [field.gen()]
    for j in range(g):
        cands.append(field.element_by_index(j))
    for j in range(g):
        cands.append(field.gen() + field.element_by_index(j))
    for x in cands:
        if not x.is_integral():
            continue
        mp = _minpoly_int(x)
        if mp is None:
            continue
        dd = _poly_disc(mp)
        if dd == 0:
            continue
        index_sq = Fraction(dd, field.disc)
        if index_sq.denominator != 1:
            continue
        # index^2 = disc(minpoly)/disc(field); need p not dividing the index
        idx = _isqrt_exact(int(index_sq))
        if idx is None:
            continue
        if idx % p != 0:
            return x, mp
    return None


def _isqrt_exact(n):
    from math import isqrt
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def _lift_poly_element(field, alpha, coeffs):
    acc = field.zero()
    for c in reversed(coeffs):
        acc = acc * alpha + field.from_rational(int(c))
    return acc


def _ideal_from_two(field, p, x):
    rows = [[Fraction(p * int(i == j)) for j in range(field.g)] for i in range(field.g)]
    rows += field.mul_matrix(x)
    return FracIdeal.from_rows(field, rows)


def _canonical_uniformizer(P, all_primes):
    """Smallest element with v_P = 1 and v_P' = 0 for the other primes over p.

    Small p: expanding coordinate boxes, minimizing (max|coord|, number of
    negative coords, coords lexicographically). Large p (only unramified
    primes from norm factorizations, where only j = 0 theta operators exist
    and the uniformizer never enters a q-expansion): a CRT element reduced by
    a deterministic Babai sweep.
    """
    others = [Q for Q in all_primes if Q is not P]
    max_radius = P.p + 1 if P.p <= 19 else 3
    P2 = P.power(2)
    for radius in range(1, max_radius + 1):
        best = None
        for coords in _box_iter(P.field.g, radius):
            if not any(coords):
                continue
            if max(abs(c) for c in coords) < radius:
                continue  # inner shells already scanned
            x = FieldElement(P.field, coords)
            if not P.ideal.contains(x) or P2.contains(x):
                continue
            if any(Q.ideal.contains(x) for Q in others):
                continue
            key = (max(abs(c) for c in coords),
                   sum(1 for c in coords if c < 0), coords)
            if best is None or key < best[0]:
                best = (key, x)
        if best is not None:
            return best[1]
    return _crt_uniformizer(P, others)


def _crt_uniformizer(P, others):
    field = P.field
    pi0 = _element_with_valuation_one(P)
    if not others:
        x = pi0
        J = P.power(2)
    else:
        B = None
        for Q in others:
            B = Q.ideal if B is None else B * Q.ideal
        A = P.power(2)
        a, b = _coprime_split(A, B)  # a in A, b in B, a + b = 1
        x = b * pi0 + a
        J = A * B
    coords = [int(c) for c in x.coords]
    H = J.mat
    assert J.den == 1
    g = field.g
    for j in range(g - 1, -1, -1):
        piv = H[j][j]
        q = (2 * coords[j] + piv) // (2 * piv)
        if q:
            coords = [c - q * h for c, h in zip(coords, H[j])]
    out = FieldElement(field, coords)
    assert P.elem_valuation(out) == 1
    assert all(Q.elem_valuation(out) == 0 for Q in others)
    return out


def _element_with_valuation_one(P):
    """Some x with v_P(x) = 1: a generator of P/(p) or its p-shift."""
    for x in P.ideal.basis_elements():
        if P.elem_valuation(x) == 1:
            return x
    for x in P.ideal.basis_elements():
        y = x + P.field.from_rational(P.p)
        if P.elem_valuation(y) == 1:
            return y
    raise ArithmeticError("no valuation-1 element found (bug)")


def _coprime_split(A, B):
    """a in A, b in B with a + b = 1, for coprime integral ideals."""
    field = A.field
    g = field.g
    rows = [list(r) for r in A.mat] + [list(r) for r in B.mat]
    H, U = hnf_transform(rows, g)
    if len(H) < g:
        raise ArithmeticError("ideals not of full rank")
    one = [int(c) for c in field.one_coords]
    z = [0] * g
    for col in range(g):
        acc = sum(z[i] * H[i][col] for i in range(col))
        rem = one[col] - acc
        if rem % H[col][col]:
            raise ArithmeticError("ideals are not coprime")
        z[col] = rem // H[col][col]
    y = [sum(z[i] * U[i][j] for i in range(g)) for j in range(len(rows))]
    a = field.zero()
    for j, b_el in enumerate(A.basis_elements()):
        if y[j]:
            a = a + y[j] * b_el
    b = field.one() - a
    assert A.contains(a) and B.contains(b)
    return a, b


# ---------------------------------------------------------------------------
# integral ideal factorization
# ---------------------------------------------------------------------------

def factor_int(n, bound=DEFAULT_TRIAL_DIVISION_BOUND):
    """Trial-division factorization; refuses if a cofactor survives past bound."""
    n = abs(int(n))
    out = {}
    d = 2
    while d * d <= n:
        if d > bound:
            raise NormTooLarge("trial division bound %d exceeded" % bound)
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n > bound:
            raise NormTooLarge("prime cofactor %d exceeds bound %d" % (n, bound))
        out[n] = out.get(n, 0) + 1
    return out


def factor_integral_ideal(I, bound=DEFAULT_TRIAL_DIVISION_BOUND):
    """I = prod P^a as a list of (PrimeData, exponent), deterministic order."""
    if not I.is_integral():
        raise ValueError("ideal is not integral")
    n = I.norm()
    assert n.denominator == 1
    n = int(n)
    if n == 0:
        raise ZeroIdeal("factoring the zero ideal")
    out = []
    for p in sorted(factor_int(n, bound)):
        for P in factor_rational_prime(I.field, p):
            v = ideal_valuation(I, P)
            if v:
                out.append((P, v))
    return out


# ---------------------------------------------------------------------------
# positivity and enumeration
# ---------------------------------------------------------------------------

def is_totally_positive(x):
    x = x.field.coerce(x) if isinstance(x, FieldElement) else x
    if not x:
        raise ZeroElement("positivity of zero is undefined")
    return all(s > 0 for s in x.field.signs_at_embeddings(x))


def enumerate_totally_positive(I, trace_bound):
    """All totally positive nu in I with Tr(nu) <= trace_bound.

    Sorted by (trace, coordinates). A float box scan (numba or numpy,
    see _kernels) prefilters with a rigorous margin; every survivor is
    verified exactly, so the output is exact and deterministic.
    """
    field = I.field
    T = Fraction(trace_bound)
    if T <= 0:
        return []
    g = field.g
    basis = I.basis_elements()
    width = Fraction(1, 2 ** 40)
    emb = []
    wid = []
    for b in basis:
        row, wrow = [], []
        for j in range(g):
            lo, hi = field.embed_interval(b, j, width)
            row.append(float((lo + hi) / 2))
            wrow.append(float(hi - lo) + 1e-15 * (abs(float(lo)) + abs(float(hi))))
        emb.append(row)
        wid.append(wrow)
    import numpy as np
    emb_np = np.array(emb, dtype=float)
    inv = np.linalg.inv(emb_np)
    radii = []
    for i in range(g):
        r = float(T) * float(np.abs(inv[:, i]).sum()) * (1 + 1e-9) + 1e-9
        radii.append(int(r) + 1)
    total = 1
    for r in radii:
        total *= 2 * r + 1
    if total > 8 * 10 ** 7:
        raise NormTooLarge("enumeration box of %d points is too large" % total)
    margin = 0.0
    for j in range(g):
        s = sum(radii[i] * (wid[i][j] + 1e-12 * abs(emb[i][j])) for i in range(g))
        margin = max(margin, s)
    margin = 4.0 * margin + 1e-9

    cand = _kernels.box_scan(emb_np, radii, float(T), margin)
    out = []
    for row in cand:
        x = field.zero()
        for i in range(g):
            if row[i]:
                x = x + int(row[i]) * basis[i]
        if not x:
            continue
        tr = x.trace()
        if tr <= 0 or tr > T:
            continue
        if all(s > 0 for s in field.signs_at_embeddings(x)):
            out.append((tr, x))
    out.sort(key=lambda t: (t[0], t[1].coords))
    return [x for _, x in out]
