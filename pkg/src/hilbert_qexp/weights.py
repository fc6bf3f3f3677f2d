"""Weight lattices attached to a prime p: fundamental characters chi_{P,i},
partial-Hasse weights psi_{P,i}, the <=_k cone order, Frobenius twist, the
operator weight bookkeeping, filtration bound propagation, and congruence
levels of characters on (O_L/p^n)^*.
"""

from fractions import Fraction

from .errors import BadAssignment, TooLarge
from .fields import factor_rational_prime, mat_inv, vec_mat


class UniversalWeight:
    """Integer exponent per real embedding (a universal character)."""

    def __init__(self, exps):
        self.exps = tuple(int(e) for e in exps)

    @property
    def g(self):
        return len(self.exps)

    def __mul__(self, other):
        return UniversalWeight([a + b for a, b in zip(self.exps, other.exps)])

    def __truediv__(self, other):
        return UniversalWeight([a - b for a, b in zip(self.exps, other.exps)])

    def __pow__(self, n):
        return UniversalWeight([a * n for a in self.exps])

    def __eq__(self, other):
        return isinstance(other, UniversalWeight) and self.exps == other.exps

    def __hash__(self):
        return hash(("U",) + self.exps)

    def is_parallel(self):
        return self.exps.count(self.exps[0]) == len(self.exps)

    def describe(self):
        return {"kind": "universal", "exps": list(self.exps)}

    def __repr__(self):
        return "UniversalWeight(%s)" % (list(self.exps),)


def parallel_weight(g, k):
    return UniversalWeight([k] * g)


class WeightSpace:
    """The residue weight lattice X_k for a fixed (field, p)."""

    _cache = {}

    def __new__(cls, field, p):
        key = (field.key, p)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj.field = field
            obj.p = p
            obj.primes = factor_rational_prime(field, p)
            obj.pairs = [(P.label, i) for P in obj.primes
                         for i in range(1, P.f + 1)]
            obj._by_label = {P.label: P for P in obj.primes}
            cls._cache[key] = obj
        return cls._cache[key]

    def prime(self, label):
        return self._by_label[label]

    def zero(self):
        return ResidueWeight(self, {})

    def weight(self, exps):
        return ResidueWeight(self, exps)

    def chi(self, label, i):
        P = self.prime(label)
        return ResidueWeight(self, {(label, 1 + (i - 1) % P.f): 1})

    def psi(self, label, i):
        """Weight of the partial Hasse invariant h_{P,i}: chi_{P,i-1}^p chi_{P,i}^-1."""
        P = self.prime(label)
        i = 1 + (i - 1) % P.f
        prev = 1 + (i - 2) % P.f
        exps = {(label, i): -1}
        exps[(label, prev)] = exps.get((label, prev), 0) + self.p
        return ResidueWeight(self, exps)

    def norm_weight(self, k=1):
        return ResidueWeight(self, {pair: k for pair in self.pairs})

    def hasse_lattice_index(self):
        """Index of the psi-span, |det| of the exponent matrix = prod (p^f - 1)."""
        rows = []
        for label, i in self.pairs:
            w = self.psi(label, i)
            rows.append([Fraction(w.exponent(*pair)) for pair in self.pairs])
        from .fields import mat_det
        return abs(int(mat_det(rows)))

    def psi_coordinates(self, w):
        """Rational coordinates of w in the psi basis (per-prime blocks)."""
        out = {}
        for P in self.primes:
            f = P.f
            rows = []
            for i in range(1, f + 1):
                psi = self.psi(P.label, i)
                rows.append([Fraction(psi.exponent(P.label, j))
                             for j in range(1, f + 1)])
            target = [Fraction(w.exponent(P.label, j)) for j in range(1, f + 1)]
            inv = mat_inv(rows)
            coords = vec_mat(target, inv)
            for i, c in enumerate(coords, start=1):
                out[(P.label, i)] = c
        return out

    def ordinary_box(self):
        """Weight box of Cor. on ordinary eigenforms: [t, p+1] per (P, i).

        The introduction sharpens the lower end to 2 in the totally ramified
        case; both values are reported, neither silently preferred.
        """
        t = 0 if self.p == 2 else 1
        box = {pair: (t, self.p + 1) for pair in self.pairs}
        note = None
        if len(self.primes) == 1 and self.primes[0].e == self.field.g \
                and self.primes[0].f == 1 and self.p != 2:
            note = {pair: (2, self.p + 1) for pair in self.pairs}
        return {"box": box, "totally_ramified_intro_refinement": note}


class ResidueWeight:
    """Element of X_k: integer exponent per residue pair (P, i)."""

    def __init__(self, space, exps):
        self.space = space
        cleaned = {}
        for (label, i), a in exps.items():
            if a:
                P = space.prime(label)
                cleaned[(label, 1 + (i - 1) % P.f)] = int(a)
        self.exps = cleaned

    @property
    def p(self):
        return self.space.p

    def exponent(self, label, i):
        P = self.space.prime(label)
        return self.exps.get((label, 1 + (i - 1) % P.f), 0)

    def __mul__(self, other):
        exps = dict(self.exps)
        for pair, a in other.exps.items():
            exps[pair] = exps.get(pair, 0) + a
        return ResidueWeight(self.space, exps)

    def __truediv__(self, other):
        exps = dict(self.exps)
        for pair, a in other.exps.items():
            exps[pair] = exps.get(pair, 0) - a
        return ResidueWeight(self.space, exps)

    def __pow__(self, n):
        return ResidueWeight(self.space, {pair: a * n for pair, a in self.exps.items()})

    def __eq__(self, other):
        return (isinstance(other, ResidueWeight) and self.space is other.space
                and self.exps == other.exps)

    def __hash__(self):
        return hash((id(self.space), tuple(sorted(self.exps.items()))))

    def is_trivial(self):
        return not self.exps

    def parallel_value(self):
        """k with self = Nm^k reduced (a_{P,i} = e_P k), or None."""
        vals = set()
        for P in self.space.primes:
            for i in range(1, P.f + 1):
                a = self.exponent(P.label, i)
                if a % P.e:
                    return None
                vals.add(Fraction(a, P.e))
        if len(vals) != 1:
            return None
        k = vals.pop()
        return int(k) if k.denominator == 1 else None

    def describe(self):
        return {"kind": "residue", "p": self.p,
                "exps": {"%s,%d" % pair: a for pair, a in sorted(self.exps.items())}}

    def __repr__(self):
        return "ResidueWeight(p=%d, %s)" % (self.p, dict(sorted(self.exps.items())))


def weight_from_description(d):
    if d.get("kind") == "universal":
        return UniversalWeight(d["exps"])
    return d  # residue weights need their space; callers rebuild from context


# ---------------------------------------------------------------------------
# reduction of universal weights
# ---------------------------------------------------------------------------

def default_assignment(space):
    """Deterministic embedding -> (P, i) assignment, e_P embeddings per pair.

    Embeddings are taken in ascending root order and consumed in canonical
    prime order; all implemented identities are invariant under the cyclic
    relabeling this fixes.
    """
    out = []
    for P in space.primes:
        for i in range(1, P.f + 1):
            out += [(P.label, i)] * P.e
    if len(out) != space.field.g:
        raise BadAssignment("assignment size mismatch")
    return out


def reduce_weight(w, field, p, assignment=None):
    """Reduction X_{O_K} -> X_k: sum universal exponents over each (P, i)."""
    space = WeightSpace(field, p)
    if assignment is None:
        assignment = default_assignment(space)
    if len(assignment) != field.g:
        raise BadAssignment("need one (P, i) pair per embedding")
    counts = {}
    for pair in assignment:
        counts[pair] = counts.get(pair, 0) + 1
    for P in space.primes:
        for i in range(1, P.f + 1):
            if counts.get((P.label, i), 0) != P.e:
                raise BadAssignment("pair (%s, %d) must receive exactly e_P = %d "
                                    "embeddings" % (P.label, i, P.e))
    exps = {}
    for a, pair in zip(w.exps, assignment):
        exps[pair] = exps.get(pair, 0) + a
    return ResidueWeight(space, exps)


# ---------------------------------------------------------------------------
# cone order and twists
# ---------------------------------------------------------------------------

def leq_k(w1, w2):
    """w1 <=_k w2: w2/w1 has nonnegative rational psi-coordinates."""
    diff = w2 / w1
    coords = w1.space.psi_coordinates(diff)
    return all(c >= 0 for c in coords.values())


def in_Xk1(w):
    """Membership in the integer span of the psi_{P,i} (no sign condition)."""
    coords = w.space.psi_coordinates(w)
    return all(c.denominator == 1 for c in coords.values())


def frobenius_twist(w):
    """chi^(p) = chi o Frobenius: exponentwise a'_{P,i} = p * a_{P,i+1}."""
    space = w.space
    exps = {}
    for P in space.primes:
        for i in range(1, P.f + 1):
            nxt = 1 + i % P.f
            a = w.exponent(P.label, nxt)
            if a:
                exps[(P.label, i)] = space.p * a
    return ResidueWeight(space, exps)


def frobenius_untwist_coords(w):
    """Rational exponents of the inverse twist (used for U filtration bounds)."""
    space = w.space
    out = {}
    for P in space.primes:
        for i in range(1, P.f + 1):
            prev = 1 + (i - 2) % P.f
            out[(P.label, i)] = Fraction(w.exponent(P.label, prev), space.p)
    return out


# ---------------------------------------------------------------------------
# operator weight transforms and filtration bounds
# ---------------------------------------------------------------------------

def transform_weight(w, op):
    """Weight of op(f) for f of weight w.

    op: ("theta", label, i) | ("V",) | ("U",) | ("mul_hasse", label, i)
        | ("padic_theta", label, i)
    """
    kind = op[0]
    if kind == "theta":
        _, label, i = op
        space = w.space
        P = space.prime(label)
        prev = 1 + (i - 2) % P.f
        add = ResidueWeight(space, {(label, prev): space.p, (label, i): 1})
        return w * add
    if kind == "V":
        return frobenius_twist(w)
    if kind == "U":
        return w
    if kind == "mul_hasse":
        _, label, i = op
        return w * w.space.psi(label, i)
    if kind == "padic_theta":
        _, label, i = op
        return w * ResidueWeight(w.space, {(label, i): 2})
    raise ValueError("unknown operator %r" % (op,))


class FiltrationBound:
    """Upper bound for a filtration, with possibly fractional exponents."""

    def __init__(self, space, exps, strict=False, exact=False):
        self.space = space
        self.exps = {pair: Fraction(a) for pair, a in exps.items() if a}
        self.strict = strict
        self.exact = exact

    def exponent(self, label, i):
        P = self.space.prime(label)
        return self.exps.get((label, 1 + (i - 1) % P.f), Fraction(0))

    def parallel_value(self):
        """Common per-pair exponent (the X_k norm normalization), or None."""
        vals = {self.exponent(*pair) for pair in self.space.pairs}
        return vals.pop() if len(vals) == 1 else None

    def __repr__(self):
        flag = "exact" if self.exact else ("strict" if self.strict else "<=")
        return "FiltrationBound(%s, %s)" % (dict(sorted(self.exps.items())), flag)


def filtration_bound(op, current, divisibility_hints=None):
    """Propagate a filtration upper bound through theta / V / U.

    current may be a ResidueWeight or a FiltrationBound. The strictness flag
    follows the paper's proofs: theta_{P,i} drops strictly in the
    chi_{P,i-1}^p chi_{P,i} direction iff p | a_{P,i}; the U bound is strict
    if p ramifies or some exponent is not 1 mod p.
    """
    space = current.space
    exps = {pair: Fraction(current.exponent(*pair)) for pair in space.pairs}
    kind = op[0]
    if kind == "V":
        out = {}
        for P in space.primes:
            for i in range(1, P.f + 1):
                nxt = 1 + i % P.f
                out[(P.label, i)] = space.p * exps[(P.label, nxt)]
        return FiltrationBound(space, out, exact=getattr(current, "exact", True))
    if kind == "theta":
        _, label, i = op
        P = space.prime(label)
        prev = 1 + (i - 2) % P.f
        out = dict(exps)
        out[(label, prev)] = out.get((label, prev), 0) + space.p
        out[(label, i)] = out.get((label, i), 0) + 1
        a = exps[(label, i)]
        p_divides = (a.denominator == 1 and a.numerator % space.p == 0)
        if divisibility_hints and (label, i) in divisibility_hints:
            p_divides = divisibility_hints[(label, i)]
        return FiltrationBound(space, out, strict=p_divides)
    if kind == "U":
        # Phi(U f)^(p) <=_k Phi(f) Nm^(p^2-1); Nm here is the X_k norm
        # (exponent 1 per residue pair). Untwist the right side.
        target = {pair: exps[pair] for pair in space.pairs}
        for P in space.primes:
            for i in range(1, P.f + 1):
                target[(P.label, i)] += space.p ** 2 - 1
        out = {}
        for P in space.primes:
            for i in range(1, P.f + 1):
                prev = 1 + (i - 2) % P.f
                out[(P.label, i)] = Fraction(target[(P.label, prev)], space.p)
        ramified = any(P.e > 1 for P in space.primes)
        not_one = any(exps[pair].denominator != 1
                      or exps[pair].numerator % space.p != 1 % space.p
                      for pair in space.pairs)
        return FiltrationBound(space, out, strict=ramified or not_one)
    raise ValueError("no filtration rule for %r" % (op,))


def ordinary_box(field, p):
    return WeightSpace(field, p).ordinary_box()


def psi(field, p, label, i):
    return WeightSpace(field, p).psi(label, i)


def hasse_lattice_index(field, p):
    return WeightSpace(field, p).hasse_lattice_index()


# ---------------------------------------------------------------------------
# congruence levels of characters on (O_L/p^n)^*
# ---------------------------------------------------------------------------

class PAdicWeightClass:
    """A weight known modulo the level-n congruence subgroup, or a p-adic
    parallel family Nm^z."""

    def __init__(self, kind, payload, level=None):
        if kind not in ("residue_class", "norm_power"):
            raise ValueError("unknown p-adic weight kind")
        if kind == "residue_class" and (level is None or level < 1):
            raise ValueError("residue classes need a level >= 1")
        self.kind = kind
        self.payload = payload
        self.level = level


_UNIT_ENUM_BUDGET = 2 * 10 ** 6


class _ModRing:
    """O_L / p^n with multiplication from the integral structure constants."""

    def __init__(self, field, p, n):
        self.field = field
        self.q = p ** n
        self.p = p
        g = field.g
        self.g = g
        self.structure = [[[int(c) % self.q for c in field.structure[i][j]]
                           for j in range(g)] for i in range(g)]
        self.one = tuple(int(c) % self.q for c in field.one_coords)

    def mul(self, x, y):
        g, q = self.g, self.q
        out = [0] * g
        for i in range(g):
            if x[i]:
                row = self.structure[i]
                for j in range(g):
                    if y[j]:
                        c = x[i] * y[j]
                        srow = row[j]
                        for t in range(g):
                            if srow[t]:
                                out[t] = (out[t] + c * srow[t]) % q
        return tuple(out)

    def pow(self, x, e):
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_unit(self, x):
        # unit iff multiplication matrix is invertible mod p, i.e. norm mod p != 0
        from .fields import mat_det
        m = [[Fraction(0)] * self.g for _ in range(self.g)]
        for i in range(self.g):
            if x[i]:
                for j in range(self.g):
                    srow = self.structure[i][j]
                    for t in range(self.g):
                        m[j][t] += x[i] * srow[t]
        d = int(mat_det(m))
        return d % self.p != 0

    def units(self):
        import itertools
        for coords in itertools.product(range(self.q), repeat=self.g):
            if self.is_unit(coords):
                yield coords


def field_automorphisms(field):
    """All automorphisms as coordinate matrices (rows: images of basis).

    Finds the roots of the defining polynomial inside the field numerically,
    then verifies exactly; returns [] if the field is not Galois over Q.
    """
    import numpy as np
    g = field.g
    roots = field.embeddings(Fraction(1, 2 ** 60))
    vals = [float((lo + hi) / 2) for lo, hi in roots]
    emb = np.array([[_embed_float(field, field.element_by_index(i), j, roots)
                     for j in range(g)] for i in range(g)])
    autos = []
    import itertools
    for perm in itertools.permutations(range(g)):
        # candidate automorphism: sigma_j(w_i) = emb[i][perm[j]]
        target = emb[:, list(perm)]
        try:
            coeff = np.linalg.solve(emb.T, target.T).T
        except np.linalg.LinAlgError:
            continue
        cand_rows = []
        ok = True
        for i in range(g):
            row = [Fraction(round(c * 720), 720) for c in coeff[i]]
            if any(abs(float(r) - coeff[i][t]) > 1e-6 for t, r in enumerate(row)):
                ok = False
                break
            cand_rows.append(row)
        if not ok:
            continue
        if _verify_automorphism(field, cand_rows):
            autos.append(cand_rows)
    return autos


def _embed_float(field, x, j, roots):
    lo, hi = field.embed_interval(x, j, Fraction(1, 2 ** 60))
    return float((lo + hi) / 2)


def _verify_automorphism(field, rows):
    g = field.g
    imgs = [field.element(row) for row in rows]
    for i in range(g):
        for j in range(g):
            prod_img = imgs[i] * imgs[j]
            expected = field.zero()
            for t, c in enumerate(field.structure[i][j]):
                expected = expected + c * imgs[t]
            if prod_img != expected:
                return False
    one_img = field.zero()
    for t, c in enumerate(field.one_coords):
        one_img = one_img + c * imgs[t]
    return one_img == field.one()


def weight_congruence_level(w1, w2, field, p, max_n):
    """Largest n <= max_n with w1/w2 trivial on (O_L/p^n)^*; 0 if not even at 1.

    Parallel norm powers use the class-field-theoretic exponent formulas
    (cross-checked against brute force in the test suite); general universal
    weights fall back to exact evaluation, which needs the automorphisms and
    an enumeration budget.
    """
    if isinstance(w1, UniversalWeight) and isinstance(w2, UniversalWeight):
        diff = w1 / w2
        if diff.is_parallel():
            dk = diff.exps[0]
            if dk == 0:
                return max_n
            from .congruences import hbar_exponent
            level = 0
            for n in range(1, max_n + 1):
                if dk % hbar_exponent(field, p, n) == 0:
                    level = n
                else:
                    break
            return level
        return _brute_force_level(diff, field, p, max_n)
    raise TooLarge("congruence levels are defined for universal weights")


def _brute_force_level(diff, field, p, max_n):
    autos = field_automorphisms(field)
    if len(autos) != field.g:
        raise TooLarge("non-parallel congruence level needs a Galois field "
                       "(evaluating embeddings requires the Galois closure)")
    # match automorphisms to embeddings: automorphism t corresponds to the
    # embedding ordering used for the exponent vector; any bijection gives
    # the same triviality answer, so order both canonically.
    level = 0
    for n in range(1, max_n + 1):
        if p ** (n * field.g) > _UNIT_ENUM_BUDGET:
            raise TooLarge("unit enumeration budget exceeded at level %d" % n)
        ring = _ModRing(field, p, n)
        mats = [[[int(c) % ring.q for c in row] for row in rows] for rows in autos]
        e_bound = _unit_group_exponent_bound(p, n, field.g)
        trivial = True
        for u in ring.units():
            val = ring.one
            for a, mat in zip(diff.exps, mats):
                if a == 0:
                    continue
                img = tuple(sum(u[i] * mat[i][t] for i in range(field.g)) % ring.q
                            for t in range(field.g))
                # unit orders divide e_bound, so a mod e_bound covers a < 0 too
                val = ring.mul(val, ring.pow(img, a % e_bound))
            if val != ring.one:
                trivial = False
                break
        if trivial:
            level = n
        else:
            break
    return level


def _unit_group_exponent_bound(p, n, g):
    """A multiple of the exponent of (O_L/p^n)^*."""
    from math import lcm
    tame = 1
    for f in range(1, g + 1):
        tame = lcm(tame, p ** f - 1)
    return tame * p ** (n * g)


def n_chi(w, field, p, max_n=6):
    """min{n : chi not in X(n)} = congruence level against the trivial
    weight, plus one. Returns max_n + 1 when trivial through max_n."""
    level = weight_congruence_level(w, UniversalWeight([0] * field.g),
                                    field, p, max_n)
    return level + 1
