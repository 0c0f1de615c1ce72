"""Exceptional systems, their Weyl actions, and cubic-surface combinatorics.

Point constraints are checked symbolically: the blow-up points are taken
in a free abelian group subject only to the case's defining relations,
so a tuple qualifies exactly when its constraints hold for every group.
Blow-down validity is decided lattice-theoretically: a tuple is valid
when some automorphism preserving the intersection form, K (and f on
the Hirzebruch model) carries it to the standard exceptional classes.
On the Hirzebruch model this amounts to a sign-pattern with an even
number of l -> f - l flips; the odd patterns are exactly the ones the
ambient Weyl group cannot reach.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

import numpy as np

from .lattice import (
    F1,
    P2,
    DivisorClass,
    IntersectionLattice,
    exceptional_classes,
)
from .moduli import PointAssignment, case_lattice, case_rank
from .rootsys import (
    SimpleSystem,
    WeylSet,
    decompose_in_basis,
    standard_simple_system,
)


class NoRootFoundError(LookupError):
    """No reflection exchanges the two halves (malformed double-six)."""


def symbolic_point_rows(case: str) -> np.ndarray:
    """Integer rows expressing each blow-up point in free parameters.

    Row i is the coefficient vector of x_{i+1} after substituting the
    case's defining relations (B: x1 = 0; C: x_{2n+1-i} = -x_i;
    G2: x1 = 0, x4 = x2 + x3; F4: x4 = p - x3, x5 = p - x2, x6 = p - x1).
    """
    if case.startswith("B"):
        n = case_rank(case)
        rows = np.zeros((n + 1, n), dtype=np.int64)
        for i in range(1, n + 1):
            rows[i, i - 1] = 1
        return rows
    if case.startswith("C"):
        n = case_rank(case)
        rows = np.zeros((2 * n, n), dtype=np.int64)
        for i in range(n):
            rows[i, i] = 1
            rows[2 * n - 1 - i, i] = -1
        return rows
    if case == "G2":
        return np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=np.int64)
    if case == "F4":
        return np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0],
             [0, 0, -1, 1], [0, -1, 0, 1], [-1, 0, 0, 1]],
            dtype=np.int64,
        )
    raise ValueError(f"unknown case {case!r}")


def symbolic_point(lat: IntersectionLattice, rows: np.ndarray, d: DivisorClass):
    coeffs = np.array(lat.l_coeffs(d), dtype=np.int64)
    return tuple(int(v) for v in coeffs @ rows)


@dataclass(frozen=True)
class GConfiguration:
    case: str
    classes: tuple
    pa: PointAssignment | None = None

    def flat_classes(self) -> tuple[DivisorClass, ...]:
        if self.case.startswith("C"):
            return tuple(c for pair_ in self.classes for c in pair_)
        return self.classes

    def check_invariants(self, lat: IntersectionLattice):
        flat = self.flat_classes()
        for e in flat:
            assert lat.pair(e, e) == -1 and lat.pair(e, lat.K) == -1
        for a, b in combinations(flat, 2):
            assert lat.pair(a, b) == 0
        if lat.model == F1:
            for e in flat:
                assert lat.pair(e, lat.f) == 0
        if self.pa is not None:
            rows = symbolic_point_rows(self.case)
            _check_case_points(self.case, [
                symbolic_point(lat, rows, e) for e in flat
            ])
        return True


def _check_case_points(case: str, pts) -> bool:
    add = lambda u, v: tuple(a + b for a, b in zip(u, v))
    zero = tuple(0 for _ in pts[0])
    if case.startswith("B"):
        return pts[0] == zero
    if case.startswith("C"):
        n = len(pts) // 2
        return all(add(pts[2 * i], pts[2 * i + 1]) == zero for i in range(n))
    if case == "G2":
        return pts[0] == zero and add(pts[0], pts[3]) == add(pts[1], pts[2])
    if case == "F4":
        a = add(pts[0], pts[5])
        return a == add(pts[1], pts[4]) and a == add(pts[2], pts[3])
    raise ValueError(case)


def _hirzebruch_pattern(lat: IntersectionLattice, e: DivisorClass):
    """(index, flipped) if e is l_i or f - l_i, else None."""
    for i in range(1, lat.npoints + 1):
        if e == lat.l(i):
            return i, 0
        if e == lat.f - lat.l(i):
            return i, 1
    return None


def enumerate_exceptional_systems(case: str, lat: IntersectionLattice | None = None):
    """The complete list of class tuples forming exceptional systems.

    B/G2: tuples (e_1, ..., e_m) of pairwise-disjoint fiber-degree-zero
    exceptional classes meeting the symbolic point constraints, with an
    even number of flips (blow-down validity).  C: the definitional
    pairs (l_i, l_i^-) up to permutation and per-pair swaps.  F4:
    ordered 6-tuples of pairwise-disjoint lines whose points satisfy the
    three-way sum condition.
    """
    lat = lat or case_lattice(case)
    if case.startswith("C"):
        n = case_rank(case)
        out = []
        for sigma in permutations(range(1, n + 1)):
            for flips in product((0, 1), repeat=n):
                pairs = []
                for idx, fl in zip(sigma, flips):
                    a, b = lat.l(idx), lat.l(2 * n + 1 - idx)
                    pairs.append((b, a) if fl else (a, b))
                out.append(tuple(pairs))
        return tuple(out)
    if case == "F4":
        return _f4_systems(lat)
    # B and G2: sign patterns on the Hirzebruch model
    rows = symbolic_point_rows(case)
    m = lat.npoints
    out = []
    for sigma in permutations(range(1, m + 1)):
        for flips in product((0, 1), repeat=m):
            if sum(flips) % 2 != 0:
                continue
            classes = tuple(
                (lat.f - lat.l(i)) if fl else lat.l(i) for i, fl in zip(sigma, flips)
            )
            pts = [symbolic_point(lat, rows, e) for e in classes]
            if _check_case_points(case, pts):
                out.append(classes)
    return tuple(out)


def _f4_systems(lat: IntersectionLattice):
    lines = exceptional_classes(lat)
    rows = symbolic_point_rows("F4")
    pts = {e: symbolic_point(lat, rows, e) for e in lines}
    disjoint = {e: {o for o in lines if o != e and lat.pair(e, o) == 0} for e in lines}
    add = lambda u, v: tuple(a + b for a, b in zip(u, v))
    slot_order = (0, 5, 1, 4, 2, 3)
    out = []
    chosen: dict[int, DivisorClass] = {}

    def rec(depth, allowed):
        if depth == 6:
            out.append(tuple(chosen[i] for i in range(6)))
            return
        slot = slot_order[depth]
        partner = 5 - slot
        for cand in sorted(allowed):
            if partner in chosen and 0 in chosen and 5 in chosen:
                # the first completed pair defines the common sum
                target = add(pts[chosen[0]], pts[chosen[5]])
                if add(pts[cand], pts[chosen[partner]]) != target:
                    continue
            chosen[slot] = cand
            rec(depth + 1, allowed & disjoint[cand])
            del chosen[slot]

    rec(0, set(lines))
    return tuple(sorted(out))


def is_blowdown_sequence(lat: IntersectionLattice, classes) -> bool:
    """Whether the tuple is simultaneously contractible to the base surface.

    True iff the classes are pairwise-orthogonal (-1)-classes and some
    lattice automorphism preserving the form, K (and f on the Hirzebruch
    model) carries them, in order, to (l_1, ..., l_k).
    """
    classes = list(classes)
    for e in classes:
        if lat.pair(e, e) != -1 or lat.pair(e, lat.K) != -1:
            return False
    for a, b in combinations(classes, 2):
        if lat.pair(a, b) != 0:
            return False
    if lat.model == F1:
        pat = [_hirzebruch_pattern(lat, e) for e in classes]
        if any(p is None for p in pat):
            return False
        idx = [i for i, _ in pat]
        if len(set(idx)) != len(idx):
            return False
        if len(classes) == lat.npoints and sum(fl for _, fl in pat) % 2 != 0:
            return False  # an odd flip pattern is not in the Weyl orbit
        return True
    # plane model: pairwise-disjoint lines always extend to a full
    # six-point blow-down; confirm by explicit extension
    if len(classes) > lat.npoints:
        return False
    pool = [e for e in exceptional_classes(lat) if e not in classes]

    def extend(current, depth):
        if depth == lat.npoints:
            return True
        for cand in pool:
            if cand in current:
                continue
            if all(lat.pair(cand, e) == 0 for e in current):
                if extend(current + [cand], depth + 1):
                    return True
        return False

    return extend(classes, len(classes))


@dataclass(frozen=True)
class TransitivityReport:
    simply_transitive: bool
    group_order: int
    system_count: int
    orbit_size: int
    offending: tuple | None


def _system_vector(system) -> np.ndarray:
    if system and isinstance(system[0], tuple):
        flat = [c for pair_ in system for c in pair_]
    else:
        flat = list(system)
    return np.concatenate([np.array(c.coords, dtype=np.int64) for c in flat])


def _vector_system(vec, template):
    rank = len(template[0][0].coords) if isinstance(template[0], tuple) else len(template[0].coords)
    blocks = vec.reshape(-1, rank)
    classes = [DivisorClass(tuple(int(x) for x in b)) for b in blocks]
    if isinstance(template[0], tuple):
        it = iter(classes)
        return tuple(tuple(next(it) for _ in pair_) for pair_ in template)
    return tuple(classes)


def simple_transitivity_check(case: str, systems, weyl: WeylSet,
                              lat: IntersectionLattice | None = None) -> TransitivityReport:
    """Verify the Weyl group permutes the systems simply transitively."""
    systems = list(systems)
    lat = lat or case_lattice(case)
    rank = lat.rank
    base = _system_vector(systems[0])
    blocks = base.reshape(-1, rank)
    imgs = np.einsum("nij,bj->nbi", weyl.stack, blocks).reshape(len(weyl), -1)
    keys = {imgs[i].tobytes(): i for i in range(len(weyl))}
    orbit_size = len({imgs[i].tobytes() for i in range(len(weyl))})
    target = {(_system_vector(s)).tobytes() for s in systems}
    reached = set(keys)
    ok = (
        orbit_size == len(weyl) == len(systems)
        and reached == target
    )
    offending = None
    if not ok:
        missing = target - reached
        extra = reached - target
        if missing:
            offending = ("unreached", _vector_system(
                np.frombuffer(next(iter(missing)), dtype=np.int64), systems[0]))
        elif extra:
            offending = ("outside", _vector_system(
                np.frombuffer(next(iter(extra)), dtype=np.int64), systems[0]))
        else:
            offending = ("stabilizer", len(weyl) // max(orbit_size, 1))
    return TransitivityReport(ok, len(weyl), len(systems), orbit_size, offending)


@dataclass(frozen=True)
class DoubleSix:
    first: frozenset
    second: frozenset

    def validate(self, lat: IntersectionLattice):
        for half in (self.first, self.second):
            assert len(half) == 6
            for a, b in combinations(half, 2):
                assert lat.pair(a, b) == 0
        for a in self.first:
            assert sum(1 for b in self.second if lat.pair(a, b) == 1) == 5
        return True


@dataclass(frozen=True)
class CubicData:
    lines: tuple[DivisorClass, ...]
    triangles: tuple[frozenset, ...]
    double_sixes: tuple[DoubleSix, ...]


def cubic_combinatorics(lat: IntersectionLattice) -> CubicData:
    """Lines, triangles and double-sixes of the six-point plane blow-up."""
    lines = exceptional_classes(lat)
    meets = {
        a: {b for b in lines if b != a and lat.pair(a, b) == 1} for a in lines
    }
    triangles = []
    for a, b, c in combinations(lines, 3):
        if b in meets[a] and c in meets[a] and c in meets[b]:
            assert a + b + c == -lat.K  # triangles sum to the anticanonical class
            triangles.append(frozenset((a, b, c)))

    sixes = []

    def grow(current, start):
        if len(current) == 6:
            sixes.append(frozenset(current))
            return
        for i in range(start, len(lines)):
            cand = lines[i]
            if all(lat.pair(cand, e) == 0 for e in current):
                grow(current + [cand], i + 1)

    grow([], 0)
    paired = set()
    double_sixes = []
    for six in sixes:
        if six in paired:
            continue
        partner = frozenset(
            m for m in lines
            if m not in six and sum(1 for a in six if lat.pair(m, a) == 1) == 5
        )
        if len(partner) != 6 or partner not in set(sixes):
            continue
        paired.add(six)
        paired.add(partner)
        ds = DoubleSix(*sorted((six, partner), key=lambda s: sorted(s)))
        ds.validate(lat)
        double_sixes.append(ds)
    return CubicData(lines, tuple(triangles), tuple(double_sixes))


def double_six_to_root(ds: DoubleSix, lat: IntersectionLattice,
                       simple: SimpleSystem | None = None) -> DivisorClass:
    """The unique positive root whose reflection exchanges the two sixes."""
    simple = simple or standard_simple_system("E6", lat)
    a0 = next(iter(ds.first))
    partners = [b for b in ds.second if lat.pair(a0, b) == 0]
    if len(partners) != 1:
        raise NoRootFoundError("no unique disjoint partner")
    alpha = partners[0] - a0
    if lat.pair(alpha, alpha) != -2:
        raise NoRootFoundError("partner difference is not a root")
    from .rootsys import reflect

    image = {reflect(lat, alpha, e) for e in ds.first}
    if image != set(ds.second):
        raise NoRootFoundError("reflection does not exchange the sixes")
    coords = decompose_in_basis(alpha, list(simple.roots))
    if all(c >= 0 for c in coords):
        return alpha
    coords_neg = [-c for c in coords]
    if all(c >= 0 for c in coords_neg):
        return -alpha
    raise NoRootFoundError("exchanged root is neither positive nor negative")


@dataclass(frozen=True)
class StabilizerResult:
    elements: WeylSet
    order: int
    orbit_size: int


def triangle_stabilizer(triangle, ordered: bool, weyl: WeylSet,
                        lat: IntersectionLattice) -> StabilizerResult:
    """Stabilizer of a (possibly ordered) triangle inside the given group."""
    tri = list(triangle)
    targets = [np.array(t.coords, dtype=np.int64) for t in tri]
    imgs = [np.einsum("nij,j->ni", weyl.stack, v) for v in targets]
    n = len(weyl)
    if ordered:
        mask = np.ones(n, dtype=bool)
        for img, tgt in zip(imgs, targets):
            mask &= (img == tgt).all(axis=1)
    else:
        mask = np.ones(n, dtype=bool)
        for img in imgs:
            hit = np.zeros(n, dtype=bool)
            for tgt in targets:
                hit |= (img == tgt).all(axis=1)
            mask &= hit
    sub = weyl.select(mask)
    return StabilizerResult(sub, len(sub), len(weyl) // max(len(sub), 1))


def in_general_position(case: str, pa: PointAssignment) -> bool:
    """Interior (non-boundary) test for a constraint-satisfying assignment.

    Distinctness plus the case conditions: nonzero unconstrained points
    for B and G2; x_i + x_j != 0 (all i, j) for C; distinct points for F4.
    """
    s = pa.sigma
    x = pa.points
    if len(set(x)) != len(x):
        return False
    if case.startswith("B"):
        return all(not s.is_zero(p) for p in x[1:])
    if case.startswith("C"):
        n = len(x) // 2
        half = x[:n]
        return all(
            not s.is_zero(s.add(half[i], half[j]))
            for i in range(n) for j in range(i, n)
        )
    if case == "G2":
        vals = []
        for p in x[1:]:
            vals += [p, s.neg(p)]
        return len(set(vals + [x[0]])) == len(vals) + 1
    if case == "F4":
        return True
    raise ValueError(case)
