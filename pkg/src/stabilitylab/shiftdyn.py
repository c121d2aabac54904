"""Bernoulli shifts over Z^d: box transversals, the periodicization of a
point along N Z^d, empirical cylinder measures, and total-variation
distances between them.

Points are evaluable functions on the lattice rather than stored arrays;
a pattern carries a default symbol outside its finite window.  The metric
on cylinder distributions is fixed to total variation on finite windows.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import _kernels
from .config import caps
from .errors import ArgumentError, CapacityError


def _as_sides(d: int, n) -> tuple[int, ...]:
    sides = tuple(int(x) for x in n) if not isinstance(n, int) else (int(n),) * d
    if len(sides) != d or any(s < 1 for s in sides):
        raise ArgumentError("period/box sides must be positive, one per axis")
    return sides


@dataclass(frozen=True)
class Box:
    """The transversal {0..N_1-1} x ... x {0..N_d-1} for the sublattice N Z^d."""

    dimension: int
    sides: tuple[int, ...]

    @property
    def volume(self) -> int:
        out = 1
        for s in self.sides:
            out *= s
        return out

    def __iter__(self):
        return product(*[range(s) for s in self.sides])


def folner_box(d: int, side) -> Box:
    if d < 1:
        raise ArgumentError("dimension must be >= 1")
    return Box(dimension=d, sides=_as_sides(d, side))


@dataclass(frozen=True)
class Pattern:
    """Finite window of symbols with a default symbol elsewhere."""

    dimension: int
    alphabet: int
    extents: tuple[tuple[int, int], ...]  # inclusive (lo, hi) per axis
    cells: tuple[int, ...]                # lexicographic over the window box
    default: int = 0

    def __post_init__(self):
        if self.alphabet < 1:
            raise ArgumentError("alphabet size must be >= 1")
        if len(self.extents) != self.dimension:
            raise ArgumentError("extents must list one (lo, hi) per axis")
        size = 1
        for lo, hi in self.extents:
            if hi < lo:
                raise ArgumentError("window extent with hi < lo")
            size *= hi - lo + 1
        if len(self.cells) != size:
            raise ArgumentError(f"expected {size} window symbols, got {len(self.cells)}")
        if any(not 0 <= s < self.alphabet for s in self.cells) or not 0 <= self.default < self.alphabet:
            raise ArgumentError("symbols must lie in [0, alphabet)")

    @classmethod
    def line(cls, symbols, alphabet: int, default: int = 0) -> "Pattern":
        symbols = tuple(int(s) for s in symbols)
        return cls(dimension=1, alphabet=alphabet, extents=((0, len(symbols) - 1),),
                   cells=symbols, default=default)

    @classmethod
    def random(cls, d: int, alphabet: int, extents, seed: int, default: int = 0) -> "Pattern":
        """Random window symbols; all randomness is caller-seeded."""
        import random

        rng = random.Random(seed)
        extents = tuple((int(lo), int(hi)) for lo, hi in extents)
        size = 1
        for lo, hi in extents:
            size *= hi - lo + 1
        cells = tuple(rng.randrange(alphabet) for _ in range(size))
        return cls(dimension=d, alphabet=alphabet, extents=extents, cells=cells, default=default)

    def evaluate(self, g) -> int:
        idx = 0
        for (lo, hi), coord in zip(self.extents, g):
            if coord < lo or coord > hi:
                return self.default
            idx = idx * (hi - lo + 1) + (coord - lo)
        return self.cells[idx]


@dataclass(frozen=True)
class PeriodicPoint:
    """Point invariant under N Z^d, stored on the fundamental box."""

    dimension: int
    alphabet: int
    periods: tuple[int, ...]
    cells: tuple[int, ...]  # lexicographic over the fundamental box

    def evaluate(self, g) -> int:
        idx = 0
        for period, coord in zip(self.periods, g):
            idx = idx * period + (coord % period)
        return self.cells[idx]


def periodicize(x, n) -> PeriodicPoint:
    """x_N(g) = x(g mod N coordinate-wise): the box pattern tiled over Z^d."""
    d = x.dimension
    periods = _as_sides(d, n)
    cells = tuple(x.evaluate(g) for g in product(*[range(p) for p in periods]))
    return PeriodicPoint(dimension=d, alphabet=x.alphabet, periods=periods, cells=cells)


def window_line(length: int) -> tuple[tuple[int, ...], ...]:
    if length < 1:
        raise ArgumentError("window length must be >= 1")
    return tuple((i,) for i in range(length))


def window_box(extents) -> tuple[tuple[int, ...], ...]:
    extents = tuple((int(lo), int(hi)) for lo, hi in extents)
    for lo, hi in extents:
        if hi < lo:
            raise ArgumentError("window extent with hi < lo")
    return tuple(product(*[range(lo, hi + 1) for lo, hi in extents]))


@dataclass(frozen=True)
class CylinderDistribution:
    """Exact word frequencies over a finite window shape."""

    window: tuple[tuple[int, ...], ...]
    frequencies: dict

    def __post_init__(self):
        total = sum(self.frequencies.values(), Fraction(0))
        if total != 1:
            raise ArgumentError(f"frequencies sum to {total}, expected 1")
        if any(f < 0 for f in self.frequencies.values()):
            raise ArgumentError("negative frequency")


def empirical_measure(x, box: Box, window, state_cap: int | None = None) -> CylinderDistribution:
    """Frequency of each window word over all shifts g in the box:
    |{g in F : (gx)|_W = w}| / |F|, exact rationals."""
    window = tuple(tuple(int(c) for c in t) for t in window)
    if not window:
        raise ArgumentError("window must be nonempty")
    d = x.dimension
    if box.dimension != d or any(len(t) != d for t in window):
        raise ArgumentError("box/window dimension mismatch")
    if box.volume < 1:
        raise ArgumentError("box must be nonempty")
    limit = state_cap if state_cap is not None else caps().window_states
    words = x.alphabet ** len(window)
    if words > limit:
        raise CapacityError(f"alphabet^|window| = {words} exceeds cap {limit}")
    window = tuple(sorted(window))
    lows = [min(t[i] for t in window) for i in range(d)]
    highs = [max(t[i] for t in window) for i in range(d)]
    region_shape = [box.sides[i] + highs[i] - lows[i] for i in range(d)]
    values = [
        x.evaluate(tuple(g[i] + lows[i] for i in range(d)))
        for g in product(*[range(s) for s in region_shape])
    ]
    offsets = [tuple(t[i] - lows[i] for i in range(d)) for t in window]
    counts = _kernels.count_words(values, region_shape, box.sides, offsets, x.alphabet)
    volume = box.volume
    freqs = {}
    for code, count in sorted(counts.items()):
        word = []
        rest = code
        for _ in window:
            word.append(rest % x.alphabet)
            rest //= x.alphabet
        freqs[tuple(word)] = Fraction(count, volume)
    return CylinderDistribution(window=window, frequencies=freqs)


def cylinder_distance(mu: CylinderDistribution, nu: CylinderDistribution,
                      window=None) -> Fraction:
    """Total-variation distance (1/2) sum |mu(w) - nu(w)|, exact."""
    if window is not None:
        window = tuple(sorted(tuple(int(c) for c in t) for t in window))
        if mu.window != window or nu.window != window:
            raise ArgumentError("distributions do not live on the given window")
    elif mu.window != nu.window:
        raise ArgumentError("window shapes differ")
    words = set(mu.frequencies) | set(nu.frequencies)
    total = sum(
        (abs(mu.frequencies.get(w, Fraction(0)) - nu.frequencies.get(w, Fraction(0)))
         for w in words),
        Fraction(0),
    )
    return total / 2


def periodicization_distances(x, periods, window, state_cap=None):
    """For each N in periods: TV distance between the empirical measures of
    x and of its N-periodicization over the box {0..N-1}^d."""
    out = []
    for n in periods:
        box = folner_box(x.dimension, n)
        mu = empirical_measure(x, box, window, state_cap)
        nu = empirical_measure(periodicize(x, n), box, window, state_cap)
        out.append((n, cylinder_distance(mu, nu)))
    return out
