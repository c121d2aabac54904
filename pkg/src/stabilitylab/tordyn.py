"""Periodic points of toral automorphisms and weak-* convergence
diagnostics for their uniform measures.

Fixed points of A^n on the torus solve (A^n - I) x = 0 mod Z^k; the Smith
normal form of A^n - I delivers both the group structure and, through the
transpose, an exact membership test for Fourier frequencies.  Diagnostics
against the Haar target therefore never need to enumerate points.
"""

import cmath
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .config import caps
from .errors import (
    ArgumentError,
    CapacityError,
    DimensionError,
    NonAutomorphismError,
    SingularFixedSetError,
)
from .intlinalg import IntMatrix, SnfDecomposition, det_exact, mat_pow, smith_normal_form
from .polyclass import classify_automorphism

HAAR = "haar"


@dataclass(frozen=True, order=True)
class TorusPoint:
    """Point of Q^k/Z^k with canonical coordinates in [0, 1)."""

    coordinates: tuple[Fraction, ...]

    @classmethod
    def of(cls, values) -> "TorusPoint":
        return cls(tuple(Fraction(v) % 1 for v in values))

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def apply(self, a: IntMatrix) -> "TorusPoint":
        if a.cols != self.dimension:
            raise DimensionError("matrix/point dimension mismatch")
        return TorusPoint.of(a.apply(self.coordinates))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coordinates) + ")"


@dataclass(frozen=True)
class FixedSubgroup:
    """Fix(A^n) on T^k: structure report plus optional explicit points."""

    matrix: IntMatrix
    n: int
    invariant_factors: tuple[int, ...]
    order: int
    snf: SnfDecomposition
    points: tuple[TorusPoint, ...] | None = None

    @property
    def dimension(self) -> int:
        return self.matrix.rows


@dataclass(frozen=True)
class TorusMeasure:
    """Finitely supported probability measure with exact rational atoms.

    subgroup_matrix, when set, states that the measure is uniform on
    {x : M x = 0 mod Z^k}; Fourier coefficients are then exactly 0 or 1.
    """

    atoms: tuple[tuple[TorusPoint, Fraction], ...]
    subgroup_matrix: IntMatrix | None = None

    def __post_init__(self):
        if not self.atoms:
            raise ArgumentError("measure needs at least one atom")
        total = sum((w for _, w in self.atoms), Fraction(0))
        if total != 1:
            raise ArgumentError(f"weights sum to {total}, expected 1")
        if any(w <= 0 for _, w in self.atoms):
            raise ArgumentError("weights must be positive")

    @property
    def dimension(self) -> int:
        return self.atoms[0][0].dimension

    @classmethod
    def merge(cls, weighted_points, subgroup_matrix=None) -> "TorusMeasure":
        acc: dict[TorusPoint, Fraction] = {}
        for point, weight in weighted_points:
            acc[point] = acc.get(point, Fraction(0)) + Fraction(weight)
        atoms = tuple(sorted(acc.items(), key=lambda kv: kv[0].coordinates))
        return cls(atoms=atoms, subgroup_matrix=subgroup_matrix)

    @classmethod
    def delta(cls, point: TorusPoint) -> "TorusMeasure":
        return cls(atoms=((point, Fraction(1)),))


@dataclass(frozen=True)
class FourierValue:
    exact: int | None
    numeric: complex
    error_bound: float

    def __post_init__(self):
        if self.exact is not None and abs(self.numeric - self.exact) > max(self.error_bound, 1e-12):
            raise AssertionError("exact and numeric Fourier values disagree")


def fixed_subgroup(a: IntMatrix, n: int, enumerate_points: bool = False,
                   cap: int | None = None) -> FixedSubgroup:
    """Solve (A^n - I) x = 0 mod Z^k via Smith normal form.

    Points are V (c_1/d_1, ..., c_k/d_k) mod Z^k over 0 <= c_i < d_i; the
    order is prod d_i = |det(A^n - I)|.
    """
    if not a.is_square:
        raise NonAutomorphismError("fixed_subgroup needs a square matrix")
    if abs(det_exact(a)) != 1:
        raise NonAutomorphismError("matrix is not a toral automorphism: |det| != 1")
    if n < 1:
        raise ArgumentError("n must be a positive integer")
    k = a.rows
    m = mat_pow(a, n) - IntMatrix.identity(k)
    if det_exact(m) == 0:
        raise SingularFixedSetError(
            f"A^{n} - I is singular (root-of-unity eigenvalue): non-isolated fixed set"
        )
    snf = smith_normal_form(m)
    diagonal = snf.diagonal
    order = 1
    for d in diagonal:
        order *= d
    assert order == abs(det_exact(m))
    points = None
    if enumerate_points:
        limit = cap if cap is not None else caps().enumeration
        if order > limit:
            raise CapacityError(f"fixed subgroup order {order} exceeds enumeration cap {limit}")
        points = tuple(_enumerate_points(a, n, snf, diagonal))
    return FixedSubgroup(matrix=a, n=n, invariant_factors=diagonal, order=order,
                         snf=snf, points=points)


def _enumerate_points(a, n, snf, diagonal):
    k = len(diagonal)
    v = snf.V
    an = mat_pow(a, n)
    out = []
    for cs in product(*[range(d) for d in diagonal]):
        y = [Fraction(c, d) for c, d in zip(cs, diagonal)]
        point = TorusPoint.of(v.apply(y))
        assert point.apply(an) == point, "enumerated point not fixed by A^n"
        out.append(point)
    out.sort(key=lambda p: p.coordinates)
    return out


def joint_fixed_subgroup(mats: list[IntMatrix], enumerate_points: bool = False,
                         cap: int | None = None):
    """Common fixed points of several automorphisms, via the stacked system.

    Diagnostic utility only: no convergence claim and no verdict is attached
    to multi-automorphism inputs.
    """
    if not mats:
        raise ArgumentError("need at least one matrix")
    k = mats[0].rows
    rows = []
    for a in mats:
        if not a.is_square or a.rows != k:
            raise DimensionError("all matrices must be square of equal size")
        if abs(det_exact(a)) != 1:
            raise NonAutomorphismError("matrix is not a toral automorphism: |det| != 1")
        m = a - IntMatrix.identity(k)
        rows.extend(list(m.data))
    stacked = IntMatrix(rows)
    snf = smith_normal_form(stacked, size_cap=max(len(rows), k))
    diagonal = snf.diagonal
    if any(d == 0 for d in diagonal) or len(diagonal) < k:
        raise SingularFixedSetError("joint fixed set is not finite")
    order = 1
    for d in diagonal:
        order *= d
    points = None
    if enumerate_points:
        limit = cap if cap is not None else caps().enumeration
        if order > limit:
            raise CapacityError(f"joint fixed group order {order} exceeds enumeration cap {limit}")
        # x = V y with y_i = c_i/d_i solves stacked x = 0 mod Z^(mk)
        out = []
        for cs in product(*[range(d) for d in diagonal]):
            y = [Fraction(c, d) for c, d in zip(cs, diagonal)]
            point = TorusPoint.of(snf.V.apply(y))
            assert all(point.apply(a) == point for a in mats)
            out.append(point)
        points = tuple(sorted(out, key=lambda p: p.coordinates))
    return order, diagonal, points


def orbit_decomposition(a: IntMatrix, sub: FixedSubgroup) -> list[list[TorusPoint]]:
    """Partition the enumerated fixed points into A-orbits."""
    if sub.points is None:
        raise ArgumentError("orbit_decomposition needs an enumerated FixedSubgroup")
    remaining = dict.fromkeys(sub.points)
    orbits = []
    for start in sub.points:
        if start not in remaining:
            continue
        orbit = [start]
        del remaining[start]
        current = start.apply(a)
        while current != start:
            assert current in remaining, "orbit leaves the fixed subgroup"
            orbit.append(current)
            del remaining[current]
            current = current.apply(a)
        orbits.append(orbit)
    orbits.sort(key=lambda orbit: min(p.coordinates for p in orbit))
    return orbits


def uniform_measure(points) -> TorusMeasure:
    """Equal weights 1/len(points); duplicate points get their mass merged."""
    points = list(points)
    if not points:
        raise ArgumentError("uniform_measure needs a nonempty point list")
    w = Fraction(1, len(points))
    return TorusMeasure.merge((p, w) for p in points)


def subgroup_uniform_measure(sub: FixedSubgroup, cap: int | None = None) -> TorusMeasure:
    """Uniform measure on Fix(A^n), tagged for exact Fourier evaluation."""
    limit = cap if cap is not None else caps().enumeration
    if sub.order > limit:
        raise CapacityError(f"order {sub.order} exceeds enumeration cap {limit}")
    if sub.points is not None:
        points = sub.points
    else:
        points = tuple(_enumerate_points(sub.matrix, sub.n, sub.snf, sub.invariant_factors))
    m = mat_pow(sub.matrix, sub.n) - IntMatrix.identity(sub.dimension)
    measure = uniform_measure(points)
    return TorusMeasure(atoms=measure.atoms, subgroup_matrix=m)


def coset_average(nu: TorusMeasure, mats: list[IntMatrix]) -> TorusMeasure:
    """(1/|mats|) sum of pushforwards g_* nu, exact."""
    if not mats:
        raise ArgumentError("coset_average needs at least one matrix")
    for g in mats:
        if not g.is_square or g.rows != nu.dimension:
            raise DimensionError("matrix/measure dimension mismatch")
        if abs(det_exact(g)) != 1:
            raise NonAutomorphismError("coset_average requires unimodular matrices")
    share = Fraction(1, len(mats))
    weighted = []
    for g in mats:
        for point, weight in nu.atoms:
            weighted.append((point.apply(g), weight * share))
    return TorusMeasure.merge(weighted)


def dual_lattice_member(snf: SnfDecomposition, m) -> bool:
    """Is the frequency vector m in the image lattice of M^T, where
    U M V = D?  Equivalent to d_i | (V^T m)_i componentwise."""
    vt = snf.V.transpose()
    w = vt.apply([int(x) for x in m])
    for d, comp in zip(snf.diagonal, w):
        if d == 0:
            if comp != 0:
                return False
        elif comp % d:
            return False
    return True


def fourier_coefficient(mu: TorusMeasure, m) -> FourierValue:
    """mu-hat(m) = sum w_x exp(2 pi i m.x).

    For subgroup-uniform measures the value is exactly 1 when m annihilates
    every atom (an integer lattice solve) and exactly 0 otherwise.
    """
    m = [int(x) for x in m]
    if len(m) != mu.dimension:
        raise DimensionError("frequency vector has wrong dimension")
    exact = None
    if mu.subgroup_matrix is not None:
        snf = smith_normal_form(mu.subgroup_matrix)
        exact = 1 if dual_lattice_member(snf, m) else 0
    else:
        if all(_dot_frac(m, p) % 1 == 0 for p, _ in mu.atoms):
            exact = 1
    numeric, bound = _numeric_fourier(mu, m)
    return FourierValue(exact=exact, numeric=numeric, error_bound=bound)


def _dot_frac(m, point: TorusPoint) -> Fraction:
    return sum((c * x for c, x in zip(m, point.coordinates)), Fraction(0))


def _numeric_fourier(mu: TorusMeasure, m):
    n_atoms = len(mu.atoms)
    double_bound = 4e-16 * (n_atoms + 4)
    if double_bound <= 1e-12:
        total = 0j
        for point, weight in mu.atoms:
            theta = _dot_frac(m, point) % 1
            total += float(weight) * cmath.exp(2j * cmath.pi * float(theta))
        return total, double_bound
    import mpmath as mp

    dps = 30 + len(str(n_atoms))
    with mp.workdps(dps):
        total = mp.mpc(0)
        for point, weight in mu.atoms:
            theta = _dot_frac(m, point) % 1
            total += mp.mpf(weight.numerator) / weight.denominator * mp.e ** (
                2j * mp.pi * mp.mpf(theta.numerator) / theta.denominator
            )
        value = complex(total)
    return value, float(n_atoms) * 10.0 ** (-dps + 2)


@dataclass(frozen=True)
class WeakstarRow:
    n: int
    order: int | None
    invariant_factors: tuple[int, ...] | None
    distance: Fraction | float | None
    exact: bool
    note: str = ""


@dataclass(frozen=True)
class WeakstarReport:
    matrix: IntMatrix
    target: str
    freq_box: int
    rows: tuple[WeakstarRow, ...]
    ergodic_warning: bool = False

    def converged_from(self) -> int | None:
        """Smallest n0 such that every non-singular row with n >= n0 has
        distance exactly 0; None when the tail does not vanish."""
        best = None
        for row in self.rows:
            if row.note:
                continue
            if row.distance == 0:
                if best is None:
                    best = row.n
            else:
                best = None
        return best


def weakstar_report(a: IntMatrix, target, n_range: tuple[int, int], freq_box: int,
                    cap: int | None = None) -> WeakstarReport:
    """Distance table D_n = max |mu_n-hat(m) - target-hat(m)| over the
    frequency box 0 < ||m||_inf <= freq_box, with mu_n uniform on Fix(A^n).

    mu_n-hat(m) is computed by the exact dual-lattice membership test, so
    no fixed subgroup is ever enumerated here.
    """
    n_min, n_max = n_range
    if n_min < 1 or n_max < n_min:
        raise ArgumentError("need 1 <= n_min <= n_max")
    if freq_box < 1:
        raise ArgumentError("freq_box must be >= 1")
    if not a.is_square:
        raise NonAutomorphismError("weakstar_report needs a square matrix")
    if abs(det_exact(a)) != 1:
        raise NonAutomorphismError("matrix is not a toral automorphism: |det| != 1")
    k = a.rows
    haar = isinstance(target, str)
    if haar and target != HAAR:
        raise ArgumentError(f"unknown target {target!r}")
    if not haar and target.dimension != k:
        raise DimensionError("target measure dimension mismatch")
    warning = False
    if haar:
        warning = not classify_automorphism(a).is_ergodic

    freqs = [m for m in product(range(-freq_box, freq_box + 1), repeat=k) if any(m)]
    target_hat: dict[tuple, FourierValue] = {}
    if not haar:
        for m in freqs:
            target_hat[m] = fourier_coefficient(target, m)

    rows = []
    identity = IntMatrix.identity(k)
    power = identity
    for n in range(n_min, n_max + 1):
        power = mat_pow(a, n) if n == n_min else power * a
        m_matrix = power - identity
        if det_exact(m_matrix) == 0:
            rows.append(WeakstarRow(n=n, order=None, invariant_factors=None,
                                    distance=None, exact=True,
                                    note="singular A^n - I (skipped)"))
            continue
        snf = smith_normal_form(m_matrix)
        order = 1
        for d in snf.diagonal:
            order *= d
        best: Fraction | float = Fraction(0)
        exact_row = True
        for m in freqs:
            mu_hat = 1 if dual_lattice_member(snf, m) else 0
            if haar:
                diff = Fraction(mu_hat)
            else:
                tv = target_hat[m]
                if tv.exact is not None:
                    diff = Fraction(abs(mu_hat - tv.exact))
                else:
                    diff = abs(mu_hat - tv.numeric)
                    exact_row = False
            if diff > best:
                best = diff
        rows.append(WeakstarRow(n=n, order=order, invariant_factors=snf.diagonal,
                                distance=best, exact=exact_row))
    return WeakstarReport(matrix=a, target=HAAR if haar else "measure", freq_box=freq_box,
                          rows=tuple(rows), ergodic_warning=warning)
