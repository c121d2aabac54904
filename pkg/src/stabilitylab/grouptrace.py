"""Traces on finite groups: certification, trivial extension, stabilizers,
induced traces, the Hilbert-Schmidt metric and defect, rational character
decompositions, and the finite-dimensional approximation of traces on a
lattice-times-finite-abelian product.

Gram positive-semidefiniteness is certified by an in-repo Jacobi
eigensolver (compiled kernel when available, pure-Python twin otherwise)
with a deterministic sweep order.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .config import caps
from .errors import ArgumentError, CapacityError, DimensionError, TableError

EQ_TOL = 1e-10
PSD_TOL_PER_DIM = 1e-9
NEAR_UNITARY_TOL = 1e-8


class FiniteGroup:
    """Finite group given by its multiplication table.

    Tables supplied explicitly are validated (identity, inverses, and
    associativity via Light's test over a greedy generating set); groups
    built by closure of permutation generators are correct by construction.
    """

    def __init__(self, table, name: str = "G", validate: bool = True,
                 order_cap: int | None = None, _trusted: bool = False):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        limit = order_cap if order_cap is not None else caps().group_order
        if n > limit:
            raise CapacityError(f"group order {n} exceeds cap {limit}")
        if table.shape != (n, n) or n == 0:
            raise TableError("multiplication table must be square and nonempty")
        if table.min() < 0 or table.max() >= n:
            raise TableError("table entries out of range")
        self.table = table
        self.order = n
        self.name = name
        self.identity = self._find_identity()
        if validate and not _trusted:
            self._validate()
        self.inverse = self._find_inverses()
        self.classes = self._conjugacy_classes()
        self.class_of = np.empty(n, dtype=np.int64)
        for idx, cls in enumerate(self.classes):
            for a in cls:
                self.class_of[a] = idx

    def _find_identity(self) -> int:
        n = self.order
        for e in range(n):
            if np.array_equal(self.table[e], np.arange(n)) and np.array_equal(self.table[:, e], np.arange(n)):
                return e
        raise TableError("table has no identity element")

    def _validate(self):
        t = self.table
        n = self.order
        gens = self.generating_set()
        for s in gens:
            left = t[t[:, s], :]
            right = t[:, t[s, :]]
            if not np.array_equal(left, right):
                raise TableError(f"table is not associative (witness generator {s})")

    def _find_inverses(self):
        n = self.order
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(self.table[a] == self.identity)[0]
            if len(hits) != 1 or self.table[hits[0], a] != self.identity:
                raise TableError(f"element {a} has no two-sided inverse")
            inv[a] = hits[0]
        return inv

    def _conjugacy_classes(self):
        n = self.order
        t = self.table
        # conj[a, g] = a^g = g^-1 a g, one column per conjugator
        conj = np.empty((n, n), dtype=np.int64)
        for g in range(n):
            conj[:, g] = t[t[self.inverse[g], :], g]
        seen = np.zeros(n, dtype=bool)
        classes = []
        for a in range(n):
            if seen[a]:
                continue
            members = np.unique(conj[a])
            seen[members] = True
            classes.append(tuple(int(x) for x in members))
        return tuple(classes)

    # -- elementary operations -------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, a: int, g: int) -> int:
        """a^g = g^-1 a g."""
        return int(self.table[self.table[self.inverse[g], a], g])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        k = 1
        x = a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def generating_set(self):
        """Greedy small generating sequence (deterministic)."""
        gens = []
        generated = {self.identity}
        for x in range(self.order):
            if x in generated:
                continue
            gens.append(x)
            generated = self._closure(generated | {x})
            if len(generated) == self.order:
                break
        return gens

    def _closure(self, seed):
        frontier = list(seed)
        out = set(seed)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(out):
                    for c in (self.mul(a, b), self.mul(b, a)):
                        if c not in out:
                            out.add(c)
                            nxt.append(c)
            frontier = nxt
        return out

    # -- subgroups --------------------------------------------------------
    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, tuple(sorted(set(int(x) for x in elements))))

    def subgroup_generated(self, seeds) -> "Subgroup":
        closure = self._closure(set(int(x) for x in seeds) | {self.identity})
        return Subgroup(self, tuple(sorted(closure)), _verified=True)

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), _verified=True)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity,), _verified=True)

    def normalizer(self, sub: "Subgroup") -> "Subgroup":
        members = set(sub.elements)
        out = [g for g in range(self.order)
               if all(self.conj(h, g) in members for h in sub.elements)]
        return Subgroup(self, tuple(out), _verified=True)

    def direct_product(self, other: "FiniteGroup") -> "FiniteGroup":
        n, m = self.order, other.order
        table = np.empty((n * m, n * m), dtype=np.int64)
        for a in range(n):
            for i in range(m):
                row = self.table[a][:, None] * m + other.table[i][None, :]
                table[a * m + i] = row.reshape(-1)
        return FiniteGroup(table, name=f"{self.name}x{other.name}", _trusted=True)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """Sorted element set of a parent group, closure-verified."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    _verified: bool = False

    def __post_init__(self):
        if not self._verified:
            members = set(self.elements)
            if self.parent.identity not in members:
                raise ArgumentError("subgroup must contain the identity")
            for a in self.elements:
                if self.parent.inv(a) not in members:
                    raise ArgumentError(f"subgroup not closed under inverse: {a}")
                for b in self.elements:
                    if self.parent.mul(a, b) not in members:
                        raise ArgumentError(f"subgroup not closed under product: ({a}, {b})")
        object.__setattr__(self, "_local", {g: i for i, g in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._local

    def local_index(self, g: int) -> int:
        return self._local[g]

    def to_group(self, name: str | None = None) -> FiniteGroup:
        idx = self._local
        table = [[idx[self.parent.mul(a, b)] for b in self.elements] for a in self.elements]
        return FiniteGroup(table, name=name or f"{self.parent.name}|H", _trusted=True)

    def is_normal(self) -> bool:
        members = set(self.elements)
        return all(self.parent.conj(h, g) in members
                   for g in range(self.parent.order) for h in self.elements)


# -- permutation groups and presets ----------------------------------------

def _parse_cycles(text: str, degree: int | None):
    """Cycle notation like "(1 2 3)(4 5)"; points are 1-based."""
    chunks = re.findall(r"\(([^()]*)\)", text)
    if not chunks and text.strip():
        raise ArgumentError(f"cannot parse permutation {text!r}")
    cycles = []
    maxpoint = 0
    for chunk in chunks:
        points = [int(tok) for tok in re.split(r"[,\s]+", chunk.strip()) if tok]
        if not points:
            continue
        if any(p < 1 for p in points):
            raise ArgumentError("cycle points are 1-based")
        maxpoint = max(maxpoint, max(points))
        cycles.append(points)
    deg = degree if degree is not None else maxpoint
    perm = list(range(deg))
    for points in cycles:
        for i, p in enumerate(points):
            perm[p - 1] = points[(i + 1) % len(points)] - 1
    return tuple(perm)


def group_from_permutations(generator_texts, name: str = "perm",
                            order_cap: int | None = None) -> FiniteGroup:
    """Closure of permutation generators (degree <= 12)."""
    degree = 0
    raw = []
    for text in generator_texts:
        perm = _parse_cycles(text, None)
        raw.append(perm)
        degree = max(degree, len(perm))
    if degree > 12:
        raise ArgumentError(f"permutation degree {degree} exceeds 12")
    if degree == 0:
        degree = 1
    gens = [tuple(list(p) + list(range(len(p), degree))) for p in raw]
    identity = tuple(range(degree))
    elements = {identity}
    frontier = [identity]
    limit = order_cap if order_cap is not None else caps().group_order
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                # compose: (a then g) and (g then a)
                for c in (tuple(g[a[i]] for i in range(degree)),
                          tuple(a[g[i]] for i in range(degree))):
                    if c not in elements:
                        elements.add(c)
                        nxt.append(c)
                        if len(elements) > limit:
                            raise CapacityError(f"closure exceeds order cap {limit}")
        frontier = nxt
    ordered = [identity] + sorted(p for p in elements if p != identity)
    index = {p: i for i, p in enumerate(ordered)}
    n = len(ordered)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(ordered):
        for j, b in enumerate(ordered):
            # product a*b acts as "apply b, then a"
            table[i, j] = index[tuple(a[b[k]] for k in range(degree))]
    return FiniteGroup(table, name=name, _trusted=True)


def build_group(spec, name: str | None = None, order_cap: int | None = None) -> FiniteGroup:
    """Group from a preset name ("C6", "D4", "S4"), permutation generators
    (list of cycle strings), or an explicit multiplication table."""
    if isinstance(spec, str):
        return _preset_group(spec.strip(), order_cap)
    if isinstance(spec, (list, tuple)) and spec and isinstance(spec[0], str):
        return group_from_permutations(spec, name=name or "perm", order_cap=order_cap)
    return FiniteGroup(spec, name=name or "table", order_cap=order_cap)


def _preset_group(label: str, order_cap=None) -> FiniteGroup:
    m = re.fullmatch(r"([CDS])\s*(\d+)", label.upper())
    if not m:
        raise ArgumentError(f"unknown group preset {label!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ArgumentError("preset parameter must be >= 1")
    if kind == "C":
        cycle = "(" + " ".join(str(i) for i in range(1, n + 1)) + ")"
        return group_from_permutations([cycle] if n > 1 else ["()"], name=f"C{n}",
                                       order_cap=order_cap)
    if kind == "D":
        if n < 2:
            raise ArgumentError("dihedral preset needs n >= 2")
        if n == 2:
            # Klein four group; not faithful on 2 points, use degree 4
            return group_from_permutations(["(1 2)", "(3 4)"], name="D2",
                                           order_cap=order_cap)
        rotation = "(" + " ".join(str(i) for i in range(1, n + 1)) + ")"
        reflection = "".join(
            f"({i + 1} {n - i + 1})" for i in range(1, (n + 1) // 2) if i + 1 != n - i + 1
        )
        return group_from_permutations([rotation, reflection], name=f"D{n}",
                                       order_cap=order_cap)
    if n > 5:
        raise ArgumentError("symmetric preset supports n <= 5")
    if n == 1:
        return group_from_permutations(["()"], name="S1", order_cap=order_cap)
    cycle = "(" + " ".join(str(i) for i in range(1, n + 1)) + ")"
    return group_from_permutations(["(1 2)", cycle], name=f"S{n}", order_cap=order_cap)


# -- traces -----------------------------------------------------------------

class TraceFn:
    """Complex-valued function on a finite group, candidate or certified trace."""

    def __init__(self, group: FiniteGroup, values):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (group.order,):
            raise DimensionError("trace needs one value per group element")
        self.group = group
        self.values = values

    def __getitem__(self, g: int) -> complex:
        return complex(self.values[g])

    def conjugated(self, g: int) -> "TraceFn":
        """The function x -> phi(x^g)."""
        table = self.group
        permuted = np.array([self.values[table.conj(x, g)] for x in range(table.order)])
        return TraceFn(table, permuted)

    def __repr__(self):
        return f"TraceFn({self.group.name}, {np.round(self.values, 6)})"


def trivial_trace(group: FiniteGroup) -> TraceFn:
    return TraceFn(group, np.ones(group.order))


def regular_trace(group: FiniteGroup) -> TraceFn:
    values = np.zeros(group.order, dtype=np.complex128)
    values[group.identity] = 1.0
    return TraceFn(group, values)


def coset_action_trace(group: FiniteGroup, sub: Subgroup) -> TraceFn:
    """Normalized permutation character of the action on left cosets g(xK)=(gx)K."""
    cosets = []
    seen = set()
    for x in range(group.order):
        if x in seen:
            continue
        coset = frozenset(group.mul(x, k) for k in sub.elements)
        seen |= coset
        cosets.append(coset)
    index = {c: i for i, c in enumerate(cosets)}
    rep = [min(c) for c in cosets]
    values = np.zeros(group.order, dtype=np.complex128)
    for g in range(group.order):
        fixed = 0
        for i, c in enumerate(cosets):
            if index[frozenset(group.mul(g, x) for x in c)] == i:
                fixed += 1
        values[g] = fixed / len(cosets)
    return TraceFn(group, values)


@dataclass(frozen=True)
class TraceCertificate:
    ok: bool
    violations: tuple[str, ...]
    min_gram_eigenvalue: float


def _trace_values(phi, group: FiniteGroup):
    if isinstance(phi, TraceFn):
        if phi.group.order != group.order:
            raise DimensionError("trace defined on a different group")
        return phi.values
    values = np.asarray(phi, dtype=np.complex128)
    if values.shape != (group.order,):
        raise DimensionError("trace needs one value per group element")
    return values


def is_trace(phi, group: FiniteGroup | None = None) -> TraceCertificate:
    """Certify phi(e) = 1, conjugation invariance, and positive
    semidefiniteness of the Gram matrix [phi(g_i^-1 g_j)]."""
    if group is None:
        group = phi.group
    values = _trace_values(phi, group)
    violations = []
    if abs(values[group.identity] - 1.0) > EQ_TOL:
        violations.append(f"phi(e) = {values[group.identity]:.3g} != 1")
    for cls in group.classes:
        block = values[list(cls)]
        spread = np.abs(block - block[0]).max()
        if spread > EQ_TOL:
            violations.append(f"not constant on class of {cls[0]} (spread {spread:.3g})")
    n = group.order
    gram = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        gi = group.inv(i)
        gram[i] = values[group.table[gi]]
    hermitian_defect = np.abs(gram - gram.conj().T).max()
    if hermitian_defect > EQ_TOL:
        violations.append(f"Gram matrix not Hermitian (defect {hermitian_defect:.3g})")
    eigvals = _kernels.jacobi_eigvals_hermitian((gram + gram.conj().T) / 2.0)
    min_eig = float(eigvals[0])
    if min_eig < -PSD_TOL_PER_DIM * n:
        violations.append(f"Gram matrix not PSD (min eigenvalue {min_eig:.3g})")
    return TraceCertificate(ok=not violations, violations=tuple(violations),
                            min_gram_eigenvalue=min_eig)


def trivial_extension(phi, sub: Subgroup, group: FiniteGroup | None = None) -> TraceFn:
    """phi on H, zero off H."""
    group = group or sub.parent
    values = _subgroup_values(phi, sub)
    out = np.zeros(group.order, dtype=np.complex128)
    for g, v in zip(sub.elements, values):
        out[g] = v
    return TraceFn(group, out)


def _subgroup_values(phi, sub: Subgroup):
    if isinstance(phi, TraceFn):
        if phi.group.order != sub.order:
            raise DimensionError("trace is not defined on the subgroup")
        return phi.values
    values = np.asarray(phi, dtype=np.complex128)
    if values.shape != (sub.order,):
        raise DimensionError("trace needs one value per subgroup element")
    return values


def trace_stabilizer(phi, sub: Subgroup, group: FiniteGroup | None = None) -> Subgroup:
    """G_phi = {g in N_G(H) : phi(h^g) = phi(h) for all h in H}."""
    group = group or sub.parent
    values = _subgroup_values(phi, sub)
    normalizer = group.normalizer(sub)
    fixed = []
    for g in normalizer.elements:
        if all(
            abs(values[sub.local_index(group.conj(h, g))] - values[i]) <= EQ_TOL
            for i, h in enumerate(sub.elements)
        ):
            fixed.append(g)
    return Subgroup(group, tuple(fixed), _verified=True)


def left_cosets(group: FiniteGroup, sub: Subgroup):
    """Left cosets gH as sorted tuples, ordered by minimal element."""
    seen = set()
    cosets = []
    for x in range(group.order):
        if x in seen:
            continue
        coset = tuple(sorted(group.mul(x, k) for k in sub.elements))
        seen |= set(coset)
        cosets.append(coset)
    return cosets


def induce_trace(phi, sub: Subgroup, group: FiniteGroup | None = None,
                 transversal_rng=None) -> TraceFn:
    """(1/[G:G_phi]) sum over coset representatives g of the conjugated
    trivial extensions x -> phi-tilde(x^g).

    The canonical transversal takes the minimal element of each left coset
    of the stabilizer; pass an rng to pick random representatives instead
    (the result is provably independent of the choice).
    """
    group = group or sub.parent
    cert = is_trace(_subgroup_values(phi, sub), sub.to_group())
    if not cert.ok:
        raise ArgumentError("induce_trace input is not a trace: " + "; ".join(cert.violations))
    stabilizer = trace_stabilizer(phi, sub, group)
    tilde = trivial_extension(phi, sub, group)
    cosets = left_cosets(group, stabilizer)
    reps = [coset[0] if transversal_rng is None else coset[transversal_rng.randrange(len(coset))]
            for coset in cosets]
    acc = np.zeros(group.order, dtype=np.complex128)
    for g in reps:
        acc += tilde.conjugated(g).values
    return TraceFn(group, acc / len(reps))


def induction_in_stages_check(phi, inner: Subgroup, middle: Subgroup,
                              group: FiniteGroup | None = None,
                              transversal_rng=None) -> float:
    """Max pointwise |Ind_L^G Ind_H^L phi - Ind_H^G phi| over a chain H <= L <= G."""
    group = group or middle.parent
    if not set(inner.elements) <= set(middle.elements):
        raise ArgumentError("chain invalid: H is not contained in L")
    middle_group = middle.to_group()
    inner_in_middle = Subgroup(
        middle_group,
        tuple(middle.local_index(h) for h in inner.elements),
        _verified=True,
    )
    staged = induce_trace(phi, inner_in_middle, middle_group, transversal_rng=transversal_rng)
    lhs = induce_trace(staged, middle, group, transversal_rng=transversal_rng)
    rhs = induce_trace(phi, inner, group, transversal_rng=transversal_rng)
    return float(np.abs(lhs.values - rhs.values).max())


# -- abelian dual groups ------------------------------------------------------

def dual_characters(group: FiniteGroup):
    """All characters of a finite abelian group, exactly.

    Characters are built by extending along a cyclic tower; values are kept
    as exact exponents theta(g) in Q/Z with chi(g) = exp(2 pi i theta(g)).
    Returns a list of (theta_vector, value_vector) pairs, deterministically
    ordered.
    """
    if not group.is_abelian:
        raise ArgumentError("dual_characters needs an abelian group")
    n = group.order
    chars = [{group.identity: Fraction(0)}]
    covered = [group.identity]
    covered_set = {group.identity}
    while len(covered) < n:
        x = next(g for g in range(n) if g not in covered_set)
        m = 1
        power = x
        while power not in covered_set:
            power = group.mul(power, x)
            m += 1
        new_chars = []
        for theta in chars:
            base = theta[power]  # power = x^m lies in the span built so far
            for j in range(m):
                ext = dict(theta)
                theta_x = (base + j) / m
                for t in range(1, m):
                    xt = group.power(x, t)
                    for s in covered:
                        ext[group.mul(s, xt)] = (theta[s] + t * theta_x) % 1
                assert len(ext) == m * len(covered), "coset decomposition collided"
                new_chars.append(ext)
        new_covered = list(covered)
        for t in range(1, m):
            xt = group.power(x, t)
            new_covered.extend(group.mul(s, xt) for s in covered)
        covered = new_covered
        covered_set = set(covered)
        chars = new_chars
    out = []
    for theta in chars:
        vec = tuple(theta[g] for g in range(n))
        values = np.array([np.exp(2j * np.pi * float(v)) for v in vec])
        out.append((vec, values))
    out.sort(key=lambda pair: pair[0])
    return out


# -- Hilbert-Schmidt metric ---------------------------------------------------

def hs_norm(a) -> float:
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError("hs_norm expects a square matrix")
    return float(np.sqrt((np.abs(a) ** 2).sum() / n))


def hs_distance(u, v) -> float:
    """Normalized Hilbert-Schmidt distance sqrt(tr((U-V)*(U-V))/n)."""
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    if u.shape != v.shape:
        raise DimensionError("hs_distance needs matrices of equal shape")
    return hs_norm(u - v)


class AlmostHom:
    """One unitary matrix per group element, each within 1e-8 of unitary."""

    def __init__(self, group: FiniteGroup, matrices):
        self.group = group
        mats = {}
        dim = None
        for g in range(group.order):
            try:
                u = np.asarray(matrices[g], dtype=np.complex128)
            except (KeyError, IndexError):
                raise ArgumentError(f"missing matrix for element {g}") from None
            if dim is None:
                dim = u.shape[0]
            if u.shape != (dim, dim):
                raise DimensionError("all matrices must share one square shape")
            sigma = np.linalg.svd(u, compute_uv=False)
            defect = float(np.sqrt(((sigma - 1.0) ** 2).mean()))
            if defect > NEAR_UNITARY_TOL:
                raise ArgumentError(
                    f"matrix for element {g} is {defect:.3g} from unitary (> {NEAR_UNITARY_TOL})"
                )
            mats[g] = u
        self.dimension = dim
        self.matrices = mats

    def __getitem__(self, g: int):
        return self.matrices[g]


def hom_defect(f: AlmostHom) -> float:
    """max over pairs (g, h) of d_HS(f(g) f(h), f(gh))."""
    worst = 0.0
    for g in range(f.group.order):
        fg = f[g]
        for h in range(f.group.order):
            d = hs_distance(fg @ f[h], f[f.group.mul(g, h)])
            if d > worst:
                worst = d
    return worst


def nearest_hom_distance(f: AlmostHom, pi: AlmostHom) -> float:
    """max_g d_HS(f(g), pi(g)) for one candidate homomorphism pi."""
    if f.dimension != pi.dimension or f.group.order != pi.group.order:
        raise DimensionError("dimension mismatch between f and the candidate")
    return max(hs_distance(f[g], pi[g]) for g in range(f.group.order))


def regular_representation(group: FiniteGroup) -> AlmostHom:
    """Left regular representation by permutation matrices."""
    n = group.order
    mats = {}
    for g in range(n):
        u = np.zeros((n, n), dtype=np.complex128)
        for h in range(n):
            u[group.mul(g, h), h] = 1.0
        mats[g] = u
    return AlmostHom(group, mats)


# -- rational combinations of characters -------------------------------------

@dataclass(frozen=True)
class CharacterTable:
    """Irreducible character values, one row per character, one column per
    conjugacy class (ordered like group.classes)."""

    group: FiniteGroup
    rows: tuple[tuple[complex, ...], ...]

    def value(self, row: int, g: int) -> complex:
        return self.rows[row][self.group.class_of[g]]

    def dimension(self, row: int) -> int:
        d = self.rows[row][self.group.class_of[self.group.identity]]
        rounded = round(d.real)
        if abs(d - rounded) > 1e-8 or rounded < 1:
            raise TableError(f"character row {row} has non-integral dimension {d}")
        return rounded

    def validate(self):
        g = self.group
        sizes = np.array([len(c) for c in g.classes], dtype=float)
        if any(len(r) != len(g.classes) for r in self.rows):
            raise TableError("character rows must have one value per class")
        mat = np.array(self.rows, dtype=np.complex128)
        gram = (mat * sizes) @ mat.conj().T / g.order
        if np.abs(gram - np.eye(len(self.rows))).max() > 1e-8:
            raise TableError("character table is not orthonormal under the class inner product")
        return self


def abelian_character_table(group: FiniteGroup) -> CharacterTable:
    rows = []
    for _, values in dual_characters(group):
        rows.append(tuple(complex(values[cls[0]]) for cls in group.classes))
    return CharacterTable(group, tuple(rows)).validate()


@dataclass(frozen=True)
class RationalCombination:
    ok: bool
    coefficients: tuple[tuple[Fraction, int], ...]  # (weight, character row)
    residual: float


def rational_combination_check(pi: AlmostHom, table: CharacterTable | None = None) -> RationalCombination:
    """Express (1/dim) tr(pi) as a rational convex combination of
    irreducible characters; abelian groups get their dual computed here,
    other groups need a caller-supplied character table."""
    group = pi.group
    if table is None:
        if not group.is_abelian:
            raise ArgumentError("nonabelian groups need a supplied character table")
        table = abelian_character_table(group)
    else:
        table.validate()
    dim = pi.dimension
    traces = np.array([np.trace(pi[g]) for g in range(group.order)])
    coefficients = []
    recon = np.zeros(group.order, dtype=np.complex128)
    total = Fraction(0)
    for row in range(len(table.rows)):
        chi = np.array([table.value(row, g) for g in range(group.order)])
        mult = (traces * chi.conj()).sum() / group.order
        m = round(mult.real)
        if abs(mult - m) > 1e-8:
            return RationalCombination(ok=False, coefficients=(), residual=float(abs(mult - m)))
        if m < 0:
            return RationalCombination(ok=False, coefficients=(), residual=float(m))
        if m:
            d = table.dimension(row)
            weight = Fraction(m * d, dim)
            coefficients.append((weight, row))
            total += weight
            recon += float(weight) * chi / d
    residual = float(np.abs(traces / dim - recon).max())
    ok = total == 1 and residual <= EQ_TOL
    return RationalCombination(ok=ok, coefficients=tuple(coefficients), residual=residual)


# -- finite-dimensional approximation on Z^d x H ------------------------------

@dataclass(frozen=True)
class LatticeProductElement:
    """Element (v, h) of Z^d x H with H a finite abelian group."""

    vector: tuple[int, ...]
    element: int


def finite_dim_approximation(psi, group: FiniteGroup, d: int, n: int, eval_at):
    """Stage-n induced values on Z^d x H: psi(h) when n! divides every
    coordinate of v, else 0."""
    if not group.is_abelian:
        raise ArgumentError("finite_dim_approximation supports finite abelian H only")
    if n < 1:
        raise ArgumentError("stage must be >= 1")
    if d < 1:
        raise ArgumentError("lattice rank must be >= 1")
    values = _trace_values(psi, group)
    modulus = math.factorial(n)
    out = []
    for item in eval_at:
        vector = tuple(int(x) for x in item.vector)
        if len(vector) != d:
            raise DimensionError("lattice vector has wrong rank")
        if all(v % modulus == 0 for v in vector):
            out.append(complex(values[item.element]))
        else:
            out.append(0j)
    return out


# -- file formats -------------------------------------------------------------

def parse_group_file(text: str, name: str = "file") -> FiniteGroup:
    """Either "perm:" followed by cycle-notation generators (one per line or
    space separated), or an order line followed by table rows."""
    text = text.strip()
    if text.lower().startswith("perm:"):
        body = text[5:].strip()
        gens = [tok for tok in re.split(r"[\n;]+", body) if tok.strip()]
        return group_from_permutations(gens, name=name)
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ArgumentError("empty group file")
    order = int(lines[0].split()[0])
    rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
    if len(rows) != order:
        raise TableError(f"expected {order} table rows, found {len(rows)}")
    return FiniteGroup(rows, name=name)


def parse_trace_file(text: str, group: FiniteGroup) -> TraceFn:
    """Lines "index re im" (or "index re"), one per element."""
    values = np.zeros(group.order, dtype=np.complex128)
    seen = set()
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        idx = int(parts[0])
        re_part = float(parts[1])
        im_part = float(parts[2]) if len(parts) > 2 else 0.0
        if idx in seen or not 0 <= idx < group.order:
            raise ArgumentError(f"bad or duplicate element index {idx}")
        seen.add(idx)
        values[idx] = complex(re_part, im_part)
    if len(seen) != group.order:
        raise ArgumentError("trace file must cover every element")
    return TraceFn(group, values)


def parse_character_table_file(text: str, group: FiniteGroup) -> CharacterTable:
    """First data line: class representative indices; following lines:
    "re im" pairs, one pair per class."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ArgumentError("empty character table file")
    reps = [int(tok) for tok in lines[0].split()]
    if len(reps) != len(group.classes):
        raise TableError(f"expected {len(group.classes)} class representatives")
    order = [group.class_of[r] for r in reps]
    if sorted(order) != list(range(len(group.classes))):
        raise TableError("class representatives do not hit every class exactly once")
    rows = []
    for ln in lines[1:]:
        nums = [float(tok) for tok in ln.split()]
        if len(nums) != 2 * len(reps):
            raise TableError("character row needs one (re, im) pair per class")
        paired = [complex(nums[2 * i], nums[2 * i + 1]) for i in range(len(reps))]
        row = [0j] * len(group.classes)
        for value, cls in zip(paired, order):
            row[cls] = value
        rows.append(tuple(row))
    return CharacterTable(group, tuple(rows)).validate()
