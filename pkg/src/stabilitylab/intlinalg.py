"""Exact integer linear algebra: determinants, characteristic polynomials,
Smith normal form with transformation matrices, and matrix powers.

Everything runs on arbitrary-precision Python integers; no floating point.
"""

from fractions import Fraction
from math import gcd, lcm

from .config import caps
from .errors import ArgumentError, CapacityError, DimensionError, NonAutomorphismError


class IntMatrix:
    """Immutable integer matrix, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, entries):
        rows = [tuple(int(x) for x in row) for row in entries]
        if not rows or not rows[0]:
            raise DimensionError("matrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "data", tuple(rows))

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, k: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(k)] for i in range(k)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def automorphism(cls, entries) -> "IntMatrix":
        """Constructor for GL_k(Z) elements; rejects |det| != 1."""
        m = cls(entries)
        if m.rows != m.cols:
            raise NonAutomorphismError("automorphism matrix must be square")
        if abs(det_exact(m)) != 1:
            raise NonAutomorphismError("matrix determinant is not +-1")
        return m

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]})"

    def __add__(self, other):
        self._same_shape(other)
        return IntMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other):
        self._same_shape(other)
        return IntMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __neg__(self):
        return IntMatrix([[-a for a in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix([[a * other for a in row] for row in self.data])
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = list(zip(*other.data))
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.data])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return mat_pow(self, n)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.data)))

    def apply(self, vector):
        """Matrix-vector product; vector entries may be ints or Fractions."""
        if len(vector) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vector)) for row in self.data)

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("shape mismatch")

    def to_inline(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.data)

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.data) + "\n"


def parse_matrix(text: str) -> IntMatrix:
    """Parse either the inline form "a,b;c,d" or the one-row-per-line form."""
    text = text.strip()
    if not text:
        raise ArgumentError("empty matrix text")
    if ";" in text:
        rows = [chunk.split(",") for chunk in text.split(";")]
    elif "\n" in text or "," not in text:
        rows = [line.replace(",", " ").split() for line in text.splitlines() if line.strip()]
    else:
        rows = [text.split(",")]
    try:
        return IntMatrix([[int(x) for x in row] for row in rows])
    except ValueError as exc:
        raise ArgumentError(f"bad matrix entry: {exc}") from None


class IntPoly:
    """Integer polynomial, coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def x_power(cls, n: int, c: int = 1) -> "IntPoly":
        return cls([0] * n + [c])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise ArgumentError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly([self[k] + other[k] for k in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly([self[k] - other[k] for k in range(n)])

    def __neg__(self):
        return IntPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return IntPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ArgumentError("negative polynomial power")
        result = IntPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def primitive(self) -> "IntPoly":
        """Primitive part with positive leading coefficient."""
        if self.is_zero:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPoly([c // g for c in self.coeffs])

    def reverse(self) -> "IntPoly":
        """x^deg * p(1/x)."""
        if self.is_zero:
            return self
        return IntPoly(list(reversed(self.coeffs)))

    def shift_multiply(self, k: int) -> "IntPoly":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return IntPoly([0] * k + list(self.coeffs))

    def divmod_exact(self, divisor: "IntPoly"):
        """Quotient and remainder over Q, returned exactly when both are
        integral; raises ArgumentError otherwise.  Use divides() to test."""
        q, r = poly_divmod_rational(self, divisor)
        qi = _rational_to_int_poly(q)
        ri = _rational_to_int_poly(r)
        if qi is None or ri is None:
            raise ArgumentError("division is not exact over the integers")
        return qi, ri

    def divides(self, other: "IntPoly") -> bool:
        """True when self divides other exactly over the integers."""
        if self.is_zero:
            return other.is_zero
        q, r = poly_divmod_rational(other, self)
        if any(c != 0 for c in r):
            return False
        return _rational_to_int_poly(q) is not None


def poly_divmod_rational(num: IntPoly, den: IntPoly):
    """Polynomial division over Q; returns coefficient lists of Fractions."""
    if den.is_zero:
        raise ArgumentError("division by the zero polynomial")
    r = [Fraction(c) for c in num.coeffs]
    d = list(den.coeffs)
    q = [Fraction(0)] * max(len(r) - len(d) + 1, 1)
    lead = Fraction(d[-1])
    while len(r) >= len(d) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(d):
            break
        k = len(r) - len(d)
        coef = r[-1] / lead
        q[k] = coef
        for i, c in enumerate(d):
            r[k + i] -= coef * c
        r.pop()
    return q, r


def _rational_to_int_poly(coeffs):
    out = []
    for c in coeffs:
        f = Fraction(c)
        if f.denominator != 1:
            return None
        out.append(f.numerator)
    return IntPoly(out)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd over Z (positive leading coefficient)."""
    fa = [Fraction(c) for c in a.coeffs]
    fb = [Fraction(c) for c in b.coeffs]
    while any(fb):
        _, r = _frac_divmod(fa, fb)
        fa, fb = fb, r
    if not any(fa):
        return IntPoly([])
    den = 1
    for c in fa:
        den = lcm(den, Fraction(c).denominator)
    return IntPoly([int(c * den) for c in fa]).primitive()


def _frac_divmod(num, den):
    r = [Fraction(c) for c in num]
    while r and r[-1] == 0:
        r.pop()
    d = [Fraction(c) for c in den]
    while d and d[-1] == 0:
        d.pop()
    q = [Fraction(0)] * max(len(r) - len(d) + 1, 1)
    while len(r) >= len(d):
        k = len(r) - len(d)
        coef = r[-1] / d[-1]
        q[k] = coef
        for i, c in enumerate(d):
            r[k + i] -= coef * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return q, r


def parse_poly(text: str) -> IntPoly:
    """Parse "1,-3,1" (ascending coefficients) or the human form "x^2-3x+1"."""
    text = text.strip()
    if not text:
        raise ArgumentError("empty polynomial text")
    if "x" not in text and "X" not in text:
        try:
            return IntPoly([int(tok) for tok in text.split(",")])
        except ValueError as exc:
            raise ArgumentError(f"bad coefficient: {exc}") from None
    return _parse_human_poly(text)


def _parse_human_poly(text: str) -> IntPoly:
    import re

    s = text.replace(" ", "").replace("**", "^").replace("X", "x")
    if not s:
        raise ArgumentError("empty polynomial text")
    coeffs: dict[int, int] = {}
    pos = 0
    term_re = re.compile(r"([+-]?)(\d*)(x(?:\^(\d+))?)?")
    while pos < len(s):
        m = term_re.match(s, pos)
        if not m or m.end() == pos:
            raise ArgumentError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, num, xpart, exp = m.groups()
        if not num and not xpart:
            raise ArgumentError(f"cannot parse polynomial near {s[pos:]!r}")
        coef = int(num) if num else 1
        if sign == "-":
            coef = -coef
        if xpart:
            k = int(exp) if exp else 1
        else:
            k = 0
        coeffs[k] = coeffs.get(k, 0) + coef
        pos = m.end()
    deg = max(coeffs)
    return IntPoly([coeffs.get(k, 0) for k in range(deg + 1)])


def poly_to_human(p: IntPoly) -> str:
    """Canonical human form, highest degree first, e.g. "x^2-3x+1"."""
    if p.is_zero:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            xs = "x" if k == 1 else f"x^{k}"
            body = xs if mag == 1 else f"{mag}{xs}"
        parts.append(sign + body)
    return "".join(parts)


def _check_square(a: IntMatrix, op: str):
    if not a.is_square:
        raise DimensionError(f"{op} requires a square matrix, got {a.rows}x{a.cols}")


def _check_size_cap(a: IntMatrix, op: str, cap: int | None):
    limit = cap if cap is not None else caps().matrix_size
    if max(a.rows, a.cols) > limit:
        raise CapacityError(f"{op} supports matrices up to {limit}x{limit}; got {a.rows}x{a.cols}")


def det_exact(a: IntMatrix) -> int:
    """Exact determinant via Bareiss fraction-free elimination."""
    _check_square(a, "det_exact")
    n = a.rows
    m = [list(row) for row in a.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def char_poly(a: IntMatrix, size_cap: int | None = None) -> IntPoly:
    """Monic characteristic polynomial det(xI - A).

    Faddeev-LeVerrier over exact rationals; the trace divisions are exact by
    construction and integrality of every coefficient is asserted at the end.
    """
    _check_square(a, "char_poly")
    _check_size_cap(a, "char_poly", size_cap)
    n = a.rows
    frac_a = [[Fraction(x) for x in row] for row in a.data]
    m = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A * (M_{k-1} + c_{n-k+1} I)
        if k > 1:
            for i in range(n):
                m[i][i] += coeffs[n - k + 1]
        m = [[sum(frac_a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        trace = sum(m[i][i] for i in range(n))
        coeffs[n - k] = -trace / k
    for c in coeffs:
        if c.denominator != 1:
            raise AssertionError("characteristic polynomial is not integral")
    return IntPoly([int(c) for c in coeffs])


def companion_matrix(p: IntPoly) -> IntMatrix:
    """Companion matrix of a monic polynomial of degree >= 1."""
    if p.is_zero or p.degree < 1:
        raise ArgumentError("companion matrix needs degree >= 1")
    if p.leading != 1:
        raise ArgumentError("companion matrix needs a monic polynomial")
    n = p.degree
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -p[i]
    return IntMatrix(rows)


class SnfDecomposition:
    """U * A * V = D with U, V unimodular and D = diag(d_1 | d_2 | ...)."""

    __slots__ = ("U", "D", "V")

    def __init__(self, U: IntMatrix, D: IntMatrix, V: IntMatrix):
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "V", V)

    def __setattr__(self, name, value):
        raise AttributeError("SnfDecomposition is immutable")

    @property
    def diagonal(self):
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def invariant_factors(self):
        return tuple(d for d in self.diagonal if d != 0)

    def __repr__(self):
        return f"SnfDecomposition(diagonal={list(self.diagonal)})"


def smith_normal_form(a: IntMatrix, size_cap: int | None = None) -> SnfDecomposition:
    """Smith normal form with transformation matrices.

    Pivoting picks the smallest nonzero absolute value and keeps reducing
    off-pivot entries, which bounds coefficient growth on the desk-scale
    inputs this library targets.  Deterministic for a fixed input.
    """
    _check_size_cap(a, "smith_normal_form", size_cap)
    nrows, ncols = a.rows, a.cols
    d = [list(row) for row in a.data]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, mult):
        if mult:
            d[dst] = [x + mult * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x + mult * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, mult):
        if mult:
            for row in d:
                row[dst] += mult * row[src]
            for row in v:
                row[dst] += mult * row[src]

    rank_bound = min(nrows, ncols)
    for t in range(rank_bound):
        while True:
            pivot = None
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    val = abs(d[i][j])
                    if val and (best is None or val < best):
                        best = val
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            reduced = True
            for i in range(t + 1, nrows):
                q = d[i][t] // d[t][t]
                add_row(t, i, -q)
                if d[i][t]:
                    reduced = False
            for j in range(t + 1, ncols):
                q = d[t][j] // d[t][t]
                add_col(t, j, -q)
                if d[t][j]:
                    reduced = False
            if not reduced:
                continue
            # pivot must divide the remaining submatrix for the chain to work
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if d[i][j] % d[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if d[t][t] == 0:
            break

    # normalize signs, then enforce the divisibility chain
    for t in range(rank_bound):
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    changed = True
    while changed:
        changed = False
        for t in range(rank_bound - 1):
            x, y = d[t][t], d[t + 1][t + 1]
            if y == 0 or x == 0:
                if x == 0 and y != 0:
                    swap_rows(t, t + 1)
                    swap_cols(t, t + 1)
                    changed = True
                continue
            if y % x == 0:
                continue
            _pair_reduce(d, u, v, t, t + 1)
            changed = True
    return SnfDecomposition(IntMatrix(u), IntMatrix(d), IntMatrix(v))


def _pair_reduce(d, u, v, i, j):
    """Replace diag entries (a, b) at i < j with (gcd, lcm) via unimodular ops."""
    a, b = d[i][i], d[j][j]
    g = gcd(a, b)
    x, y = _bezout(a, b)
    # rows [i, j] <- U2 @ rows, cols [i, j] <- cols @ V2 with
    # U2 = [[x, y], [-b/g, a/g]], V2 = [[1, -y*b/g], [1, x*a/g]]
    bi, aj = b // g, a // g
    row_i = d[i][:]
    row_j = d[j][:]
    d[i] = [x * p + y * q for p, q in zip(row_i, row_j)]
    d[j] = [-bi * p + aj * q for p, q in zip(row_i, row_j)]
    urow_i = u[i][:]
    urow_j = u[j][:]
    u[i] = [x * p + y * q for p, q in zip(urow_i, urow_j)]
    u[j] = [-bi * p + aj * q for p, q in zip(urow_i, urow_j)]
    yb, xa = y * bi, x * aj
    for row in d:
        ci, cj = row[i], row[j]
        row[i] = ci + cj
        row[j] = -yb * ci + xa * cj
    for row in v:
        ci, cj = row[i], row[j]
        row[i] = ci + cj
        row[j] = -yb * ci + xa * cj


def _bezout(a: int, b: int):
    """x, y with x*a + y*b = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def mat_pow(a: IntMatrix, n: int) -> IntMatrix:
    """Exact A^n by binary exponentiation; A^0 is the identity."""
    _check_square(a, "mat_pow")
    if n < 0:
        raise ArgumentError("mat_pow exponent must be nonnegative")
    result = IntMatrix.identity(a.rows)
    base = a
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result
