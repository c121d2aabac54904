"""Integer-polynomial analysis and the derived spectral classification of
toral automorphisms.

Root counting stays exact throughout: real roots via Sturm sequences over
rationals, roots of unity via cyclotomic divisibility, and remaining
unit-circle roots via the substitution y = x + 1/x which maps conjugate
unimodular pairs of a self-reciprocal factor to real roots in (-2, 2).
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt, lcm

from .config import caps
from .errors import ArgumentError, CapacityError, NonAutomorphismError
from .intlinalg import (
    IntMatrix,
    IntPoly,
    char_poly,
    det_exact,
    mat_pow,
    poly_gcd,
)

CERT_EXACT = "exact"
CERT_NUMERIC = "numeric-certified"
CERT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FactorList:
    """Complete factorization over Q with primitive integer factors.

    unit * content * prod(factor^multiplicity) reproduces the input exactly.
    """

    factors: tuple[tuple[IntPoly, int], ...]
    unit: int
    content: int = 1

    def expand(self) -> IntPoly:
        out = IntPoly([self.unit * self.content])
        for f, mult in self.factors:
            out = out * (f ** mult)
        return out

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1


@dataclass(frozen=True)
class UnimodularRootReport:
    roots_of_unity: tuple[int, ...]
    other_unimodular_roots: int
    certification: str

    @property
    def has_unimodular_root(self) -> bool:
        return bool(self.roots_of_unity) or self.other_unimodular_roots > 0


@dataclass(frozen=True)
class SpectralClass:
    is_finite_order: bool
    has_root_of_unity_eigenvalue: bool
    is_ergodic: bool
    is_hyperbolic: bool
    is_quasihyperbolic: bool
    is_rationally_irreducible: bool
    certification: str
    char_polynomial: IntPoly
    finite_order: int | None = None

    def flags(self) -> dict:
        return {
            "is_finite_order": self.is_finite_order,
            "has_root_of_unity_eigenvalue": self.has_root_of_unity_eigenvalue,
            "is_ergodic": self.is_ergodic,
            "is_hyperbolic": self.is_hyperbolic,
            "is_quasihyperbolic": self.is_quasihyperbolic,
            "is_rationally_irreducible": self.is_rationally_irreducible,
            "certification": self.certification,
        }


def euler_phi(n: int) -> int:
    if n < 1:
        raise ArgumentError("euler_phi needs n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


_cyclotomic_cache: dict[int, IntPoly] = {}


def cyclotomic_polynomial(n: int) -> IntPoly:
    """Phi_n via recursive exact division of x^n - 1."""
    if n < 1:
        raise ArgumentError("cyclotomic index must be >= 1")
    cached = _cyclotomic_cache.get(n)
    if cached is not None:
        return cached
    poly = IntPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            poly, rem = poly.divmod_exact(cyclotomic_polynomial(d))
            assert rem.is_zero
    _cyclotomic_cache[n] = poly
    return poly


def sturm_real_roots(p: IntPoly, lo, hi) -> int:
    """Exact count of distinct real roots of a square-free p in (lo, hi].

    Sign variations are counted with zeros dropped, which makes the count
    correct on half-open intervals even when an endpoint is a root.
    """
    if p.is_zero:
        raise ArgumentError("sturm_real_roots: zero polynomial")
    lo = Fraction(lo)
    hi = Fraction(hi)
    if lo >= hi:
        raise ArgumentError("sturm_real_roots needs lo < hi")
    if p.degree == 0:
        return 0
    assert poly_gcd(p, p.derivative()).degree == 0, "sturm_real_roots requires a square-free polynomial"
    chain = [[Fraction(c) for c in p.coeffs], [Fraction(c) for c in p.derivative().coeffs]]
    while True:
        rem = _frac_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])

    def variations(x: Fraction) -> int:
        signs = []
        for coeffs in chain:
            val = Fraction(0)
            for c in reversed(coeffs):
                val = val * x + c
            if val:
                signs.append(1 if val > 0 else -1)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(lo) - variations(hi)


def _frac_rem(num, den):
    r = list(num)
    d = list(den)
    while r and r[-1] == 0:
        r.pop()
    while len(r) >= len(d):
        coef = r[-1] / d[-1]
        k = len(r) - len(d)
        for i, c in enumerate(d):
            r[k + i] -= coef * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return r


def cyclotomic_part(p: IntPoly) -> list[int]:
    """All n with Phi_n | p; complete because phi(n) >= sqrt(n/2)."""
    if p.is_zero:
        raise ArgumentError("cyclotomic_part: zero polynomial")
    deg = p.degree
    if deg == 0:
        return []
    found = []
    for n in range(1, 2 * deg * deg + 2):
        if euler_phi(n) > deg:
            continue
        if cyclotomic_polynomial(n).divides(p):
            found.append(n)
    return found


# ---------------------------------------------------------------------------
# GF(p)[x] arithmetic on ascending coefficient lists (values in [0, p)).
# ---------------------------------------------------------------------------

def _gf_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_from_int(poly_coeffs, p):
    return _gf_trim([c % p for c in poly_coeffs])


def _gf_sub(a, b, p):
    n = max(len(a), len(b))
    return _gf_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _gf_trim(out)


def _gf_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("gf division by zero polynomial")
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b):
        coef = (a[-1] * inv_lead) % p
        k = len(a) - len(b)
        q[k] = coef
        for i, c in enumerate(b):
            a[k + i] = (a[k + i] - coef * c) % p
        _gf_trim(a)
    return _gf_trim(q), _gf_trim(a)


def _gf_monic(a, p):
    if not a:
        return []
    inv = pow(a[-1], p - 2, p)
    return [(c * inv) % p for c in a]


def _gf_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        _, r = _gf_divmod(a, b, p)
        a, b = b, r
    return _gf_monic(a, p)


def _gf_gcdex(a, b, p):
    """s, t, g monic with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _gf_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _gf_sub(s0, _gf_mul(q, s1, p), p)
        t0, t1 = t1, _gf_sub(t0, _gf_mul(q, t1, p), p)
    if not r0:
        return s0, t0, []
    inv = pow(r0[-1], p - 2, p)
    scale = lambda u: [(c * inv) % p for c in u]
    return scale(s0), scale(t0), scale(r0)


def _gf_pow_mod(base, e, mod, p):
    result = [1]
    base = _gf_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _gf_divmod(_gf_mul(result, base, p), mod, p)[1]
        base = _gf_divmod(_gf_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _gf_deriv(a, p):
    return _gf_trim([(k * c) % p for k, c in enumerate(a)][1:])


def _gf_is_squarefree(a, p):
    return len(_gf_gcd(a, _gf_deriv(a, p), p)) == 1


def _gf_factor_squarefree_monic(f, p, rng):
    """Irreducible monic factors of a square-free monic f over GF(p)."""
    factors = []
    v = list(f)
    h = [0, 1]
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        h = _gf_pow_mod(h, p, v, p)
        g = _gf_gcd(_gf_sub(h, [0, 1], p), v, p)
        if len(g) > 1:
            factors.extend(_gf_equal_degree(g, d, p, rng))
            v = _gf_divmod(v, g, p)[0]
            h = _gf_divmod(h, v, p)[1] if len(v) > 1 else []
    if len(v) > 1:
        factors.append(_gf_monic(v, p))
    factors.sort(key=lambda u: (len(u), tuple(u)))
    return factors


def _gf_equal_degree(f, d, p, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles (p odd)."""
    n = len(f) - 1
    if n == d:
        return [_gf_monic(f, p)]
    exponent = (p ** d - 1) // 2
    while True:
        a = _gf_trim([rng.randrange(p) for _ in range(n)])
        if len(a) <= 0:
            continue
        g = _gf_gcd(a, f, p)
        if len(g) > 1:
            split = g
        else:
            b = _gf_pow_mod(a, exponent, f, p)
            split = _gf_gcd(_gf_sub(b, [1], p), f, p)
            if len(split) <= 1 or len(split) == len(f):
                continue
        left = split
        right = _gf_divmod(f, split, p)[0]
        return _gf_equal_degree(left, d, p, rng) + _gf_equal_degree(right, d, p, rng)


# ---------------------------------------------------------------------------
# Hensel lifting and Zassenhaus recombination over Z.
# ---------------------------------------------------------------------------

def _z_trunc(a, m):
    """Centered residues in (-m/2, m/2]."""
    out = []
    half = m // 2
    for c in a:
        r = c % m
        if r > half:
            r -= m
        out.append(r)
    while out and out[-1] == 0:
        out.pop()
    return out


def _z_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _z_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _z_sub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _z_div_monic(a, b):
    """Exact division by a monic b over Z: quotient, remainder."""
    assert b and b[-1] == 1, "divisor must be monic"
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b):
        coef = a[-1]
        k = len(a) - len(b)
        q[k] = coef
        for i, c in enumerate(b):
            a[k + i] -= coef * c
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _hensel_step(m, f, g, h, s, t):
    """Quadratic lift of f = g*h (mod m), s*g + t*h = 1 (mod m) to mod m^2.

    h and the returned H are monic; divisions by them are exact over Z.
    """
    big = m * m
    e = _z_trunc(_z_sub(f, _z_mul(g, h)), big)
    q, r = _z_div_monic(_z_mul(s, e), h)
    q = _z_trunc(q, big)
    r = _z_trunc(r, big)
    u = _z_add(_z_mul(t, e), _z_mul(q, g))
    G = _z_trunc(_z_add(g, u), big)
    H = _z_trunc(_z_add(h, r), big)
    u = _z_add(_z_mul(s, G), _z_mul(t, H))
    b = _z_trunc(_z_sub(u, [1]), big)
    c, d = _z_div_monic(_z_mul(s, b), H)
    c = _z_trunc(c, big)
    d = _z_trunc(d, big)
    u = _z_add(_z_mul(t, b), _z_mul(c, G))
    S = _z_trunc(_z_sub(s, d), big)
    T = _z_trunc(_z_sub(t, u), big)
    return G, H, S, T


def _hensel_lift(p, f, f_list, l):
    """Lift monic factors of f mod p to factors mod p^l (tree lifting)."""
    r = len(f_list)
    lc = f[-1]
    if r == 1:
        inv = pow(lc % p ** l, -1, p ** l)
        return [_z_trunc([c * inv for c in f], p ** l)]
    m = p
    k = r // 2
    d = max(1, (l - 1).bit_length())
    g = [lc % p]
    for fi in f_list[:k]:
        g = _gf_mul(g, fi, p)
    h = list(f_list[k])
    for fi in f_list[k + 1:]:
        h = _gf_mul(h, fi, p)
    s, t, one = _gf_gcdex(g, h, p)
    assert one == [1], "lifted halves are not coprime mod p"
    g = _z_trunc(g, p)
    h = _z_trunc(h, p)
    s = _z_trunc(s, p)
    t = _z_trunc(t, p)
    for _ in range(d):
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    return _hensel_lift(p, g, f_list[:k], l) + _hensel_lift(p, h, f_list[k:], l)


def _small_primes():
    sieve_limit = 10000
    flags = [True] * sieve_limit
    flags[0] = flags[1] = False
    for i in range(2, isqrt(sieve_limit) + 1):
        if flags[i]:
            for j in range(i * i, sieve_limit, i):
                flags[j] = False
    return [i for i in range(3, sieve_limit) if flags[i]]


_PRIMES = _small_primes()


def _factor_squarefree_primitive(f: IntPoly) -> list[IntPoly]:
    """Zassenhaus factorization of a primitive square-free f, deg >= 1."""
    n = f.degree
    if n == 1:
        return [f]
    lead = f.leading
    max_norm = max(abs(c) for c in f.coeffs)
    bound = (isqrt(n + 1) + 1) * (2 ** n) * max_norm * abs(lead)

    candidates = []
    for p in _PRIMES:
        if lead % p == 0:
            continue
        fp = _gf_from_int(f.coeffs, p)
        if len(fp) - 1 != n or not _gf_is_squarefree(fp, p):
            continue
        seed = p
        for c in f.coeffs:
            seed = (seed * 1000003 + c) % (1 << 61)
        rng = random.Random(seed)
        mod_factors = _gf_factor_squarefree_monic(_gf_monic(fp, p), p, rng)
        candidates.append((len(mod_factors), p, mod_factors))
        if len(mod_factors) < 8 or len(candidates) >= 5:
            break
    if not candidates:
        raise AssertionError("no usable prime below 10000; input not square-free?")
    count, p, mod_factors = min(candidates, key=lambda item: (item[0], item[1]))
    if count == 1:
        return [f]

    l = 1
    while p ** l < 2 * bound + 1:
        l += 1
    lifted = _hensel_lift(p, list(f.coeffs), mod_factors, l)
    pl = p ** l

    remaining = list(range(len(lifted)))
    current = f
    found: list[IntPoly] = []
    size = 1
    while 2 * size <= len(remaining):
        restart = False
        for subset in combinations(remaining, size):
            b = current.leading
            prod = [b]
            for i in subset:
                prod = _z_trunc(_z_mul(prod, lifted[i]), pl)
            candidate = IntPoly(prod).primitive()
            if candidate.degree < 1:
                continue
            if candidate.divides(current):
                quotient, _ = current.divmod_exact(candidate)
                found.append(candidate)
                current = quotient.primitive()
                remaining = [i for i in remaining if i not in subset]
                restart = True
                break
        if restart:
            continue
        size += 1
    found.append(current)
    return found


def _squarefree_decomposition(f: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm over Z on a primitive positive-lead polynomial."""
    if f.degree < 1:
        return []
    d0 = poly_gcd(f, f.derivative())
    if d0.degree == 0:
        return [(f, 1)]
    b, _ = f.divmod_exact(d0)
    c, _ = f.derivative().divmod_exact(d0)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a.primitive(), i))
        b, _ = b.divmod_exact(a)
        c, _ = d.divmod_exact(a)
        d = c - b.derivative()
        i += 1
    return out


def factor_over_integers(p: IntPoly, degree_cap: int | None = None) -> FactorList:
    """Complete factorization into irreducibles over Q (primitive factors)."""
    if p.is_zero:
        raise ArgumentError("factor_over_integers: zero polynomial")
    limit = degree_cap if degree_cap is not None else caps().poly_degree
    if p.degree > limit:
        raise CapacityError(
            f"factor_over_integers: degree {p.degree} exceeds the configured cap {limit}"
        )
    unit = 1 if p.leading > 0 else -1
    content = p.content()
    prim = p.primitive()
    pieces: dict[IntPoly, int] = {}
    # pull out powers of x first so square-free machinery sees f(0) != 0
    shift = 0
    coeffs = list(prim.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    if shift:
        pieces[IntPoly([0, 1])] = shift
        prim = IntPoly(coeffs)
    for square_free, mult in _squarefree_decomposition(prim):
        for factor in _factor_squarefree_primitive(square_free):
            pieces[factor] = pieces.get(factor, 0) + mult
    ordered = tuple(
        sorted(pieces.items(), key=lambda item: (item[0].degree, item[0].coeffs))
    )
    result = FactorList(factors=ordered, unit=unit, content=content)
    assert result.expand() == p, "factorization failed to re-expand"
    return result


def _self_reciprocal_to_real_form(g: IntPoly) -> IntPoly:
    """H with g(x) = x^(deg g / 2) * H(x + 1/x) for palindromic g of even degree.

    Uses v_k(y) = x^k + x^(-k) with v_0 = 2, v_1 = y, v_k = y*v_(k-1) - v_(k-2).
    """
    d = g.degree // 2
    h = IntPoly([g[d]])
    v_prev = IntPoly([2])
    v_cur = IntPoly([0, 1])
    for k in range(1, d + 1):
        h = h + g[d + k] * v_cur
        v_prev, v_cur = v_cur, IntPoly([0, 1]) * v_cur - v_prev
    return h


def unimodular_root_report(p: IntPoly) -> UnimodularRootReport:
    """Root-of-unity orders plus the count of distinct non-root-of-unity
    roots on the unit circle; everything is decided in exact arithmetic."""
    if p.is_zero:
        raise ArgumentError("unimodular_root_report: zero polynomial")
    orders = cyclotomic_part(p)
    q = p.primitive()
    coeffs = list(q.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    q = IntPoly(coeffs) if coeffs else IntPoly([1])
    for n in orders:
        phi_n = cyclotomic_polynomial(n)
        while phi_n.divides(q):
            q, _ = q.divmod_exact(phi_n)
    if q.degree < 1:
        return UnimodularRootReport(tuple(orders), 0, CERT_EXACT)
    sf = poly_gcd(q, q.derivative())
    if sf.degree > 0:
        q, _ = q.divmod_exact(sf)
    q = q.primitive()
    g = poly_gcd(q, q.reverse())
    if g.degree < 1:
        return UnimodularRootReport(tuple(orders), 0, CERT_EXACT)
    assert g == g.reverse() and g.degree % 2 == 0, "reciprocal gcd is not palindromic"
    h = _self_reciprocal_to_real_form(g)
    h_sf = h
    common = poly_gcd(h, h.derivative())
    if common.degree > 0:
        h_sf, _ = h.divmod_exact(common)
    pairs = sturm_real_roots(h_sf, Fraction(-2), Fraction(2))
    return UnimodularRootReport(tuple(orders), 2 * pairs, CERT_EXACT)


def classify_automorphism(a: IntMatrix) -> SpectralClass:
    """Spectral classification of an integer matrix with det = +-1."""
    if not a.is_square:
        raise NonAutomorphismError("classify_automorphism needs a square matrix")
    if abs(det_exact(a)) != 1:
        raise NonAutomorphismError("matrix is not a toral automorphism: |det| != 1")
    cp = char_poly(a)
    factorization = factor_over_integers(cp)
    orders = cyclotomic_part(cp)
    report = unimodular_root_report(cp)
    ergodic = not orders
    hyperbolic = ergodic and report.other_unimodular_roots == 0 and report.certification != CERT_INCONCLUSIVE
    quasihyperbolic = ergodic and not hyperbolic
    irreducible = factorization.is_irreducible

    finite_order = None
    cyclotomic_degree = 0
    for factor, mult in factorization.factors:
        factor_orders = cyclotomic_part(factor)
        if len(factor_orders) == 1 and cyclotomic_polynomial(factor_orders[0]) == factor:
            cyclotomic_degree += factor.degree * mult
    if cyclotomic_degree == cp.degree and orders:
        m = 1
        for n in orders:
            m = lcm(m, n)
        if mat_pow(a, m) == IntMatrix.identity(a.rows):
            finite_order = m
    return SpectralClass(
        is_finite_order=finite_order is not None,
        has_root_of_unity_eigenvalue=bool(orders),
        is_ergodic=ergodic,
        is_hyperbolic=hyperbolic,
        is_quasihyperbolic=quasihyperbolic,
        is_rationally_irreducible=irreducible,
        certification=CERT_EXACT,
        char_polynomial=cp,
        finite_order=finite_order,
    )


def is_unipotent(a: IntMatrix) -> bool:
    """All eigenvalues equal to 1, checked exactly via the char polynomial."""
    cp = char_poly(a)
    return cp == IntPoly([-1, 1]) ** a.rows
