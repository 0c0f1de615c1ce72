"""Chevalley structure constants for the divisor-level root systems.

Brackets follow the four classical relations on a Chevalley basis
{h_1..h_n, x_a}: [h_i h_j] = 0, [h_i x_a] = <a, a_i> x_a,
[x_a x_-a] = h_a, and [x_a x_b] = N(a, b) x_{a+b} with |N| = r + 1,
r the length of the a-string below b.

Sign determination: positive roots are ordered by height (ties broken
lexicographically); for each non-simple positive root the extraspecial
pair gets N = +(r+1); every other constant follows from the two
invariant-form identities

    a + b + c = 0       =>  N(a,b)/(c,c) = N(b,c)/(a,a) = N(c,a)/(b,b)
    a + b + c + d = 0   =>  sum of N(a,b)N(c,d)/(a+b, a+b) over the
                            three pairings vanishes

together with N(a,b) = -N(b,a) = -N(-a,-b).  Any consistent convention
yields an isomorphic algebra; the Jacobi check is the arbiter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._linalg import rational_solve
from .folding import folded_root_system
from .lattice import DivisorClass, IntersectionLattice
from .moduli import case_lattice, case_rank
from .rootsys import RootSystemData, SimpleSystem, decompose_in_basis


def root_string(lat_or_rs, alpha: DivisorClass, beta: DivisorClass, roots=None):
    """(r, q): beta - r alpha ... beta + q alpha is the alpha-string through beta."""
    if roots is None:
        roots = set(lat_or_rs.roots)
    r = 0
    cur = beta - alpha
    while cur in roots:
        r += 1
        cur = cur - alpha
    q = 0
    cur = beta + alpha
    while cur in roots:
        q += 1
        cur = cur + alpha
    assert r + q <= 3, "root strings have length at most 4"
    return r, q


@dataclass
class StructureConstantTable:
    lattice: IntersectionLattice
    simple: SimpleSystem
    roots: tuple[DivisorClass, ...]
    positive: tuple[DivisorClass, ...]
    n_map: dict
    cartan: dict
    coroot_coords: dict
    extraspecial: frozenset

    @property
    def rank(self) -> int:
        return len(self.simple.roots)

    def n(self, a: DivisorClass, b: DivisorClass) -> int:
        return self.n_map.get((a, b), 0)


def structure_constants(rs: RootSystemData, simple: SimpleSystem) -> StructureConstantTable:
    lat = rs.ambient
    roots = set(rs.roots)
    srl = list(simple.roots)

    coords = {}
    for rt in roots:
        c = decompose_in_basis(rt, srl)
        assert all(v >= 0 for v in c) or all(v <= 0 for v in c), \
            "root is neither positive nor negative for the given simple system"
        coords[rt] = tuple(c)
    positive = sorted(
        (rt for rt in roots if all(v >= 0 for v in coords[rt])),
        key=lambda rt: (sum(coords[rt]), coords[rt]),
    )
    index = {rt: i for i, rt in enumerate(positive)}
    norm = {rt: lat.pair(rt, rt) for rt in roots}

    pos_n: dict[tuple, int] = {}
    extraspecial = set()

    def n_pos(a, b):
        """N for a positive pair, via the table and antisymmetry."""
        if index[a] < index[b]:
            return pos_n[(a, b)]
        return -pos_n[(b, a)]

    def n_any(a, b):
        s = a + b
        if s not in roots:
            return 0
        a_pos, b_pos = a in index, b in index
        if a_pos and b_pos:
            return n_pos(a, b)
        if not a_pos and not b_pos:
            return -n_any(-a, -b)
        if a_pos and not b_pos:
            if s in index:
                val = Fraction(norm[s], norm[a]) * (-n_any(-b, s))
            else:
                val = Fraction(norm[s], norm[b]) * n_any(-s, a)
            assert val.denominator == 1
            return int(val)
        return -n_any(b, a)

    for gamma in positive:
        height = sum(coords[gamma])
        if height == 1:
            continue
        decomps = []
        for alpha in positive:
            if index[alpha] >= index[gamma]:
                break
            beta = gamma - alpha
            if beta in roots and beta in index:
                decomps.append((alpha, beta))
        a0, b0 = decomps[0]  # minimal first member: the extraspecial pair
        r0, _ = root_string(None, a0, b0, roots=roots)
        pos_n[(a0, b0)] = r0 + 1
        extraspecial.add((a0, b0))
        gnorm = Fraction(norm[gamma])
        for alpha, beta in decomps[1:]:
            if index[alpha] >= index[beta]:
                continue  # stored once per unordered pair
            t2 = Fraction(0)
            if b0 - alpha in roots:
                t2 = Fraction(n_any(b0, -alpha) * n_any(a0, -beta),
                              norm[b0 - alpha])
            t3 = Fraction(0)
            if a0 - alpha in roots:
                t3 = Fraction(n_any(-alpha, a0) * n_any(b0, -beta),
                              norm[a0 - alpha])
            val = gnorm * (t2 + t3) / pos_n[(a0, b0)]
            assert val.denominator == 1, "sign propagation produced a non-integer"
            r, _ = root_string(None, alpha, beta, roots=roots)
            assert abs(int(val)) == r + 1, \
                f"sign-propagation conflict at {alpha}, {beta}"
            pos_n[(alpha, beta)] = int(val)

    n_map = {}
    for a in roots:
        for b in roots:
            if a + b in roots:
                n_map[(a, b)] = n_any(a, b)

    cartan = {}
    for rt in roots:
        for i, si in enumerate(srl):
            num = 2 * lat.pair(rt, si)
            den = lat.pair(si, si)
            assert num % den == 0
            cartan[(rt, i)] = num // den

    # coroot of each root in the basis of simple coroots, integrally
    dim = lat.rank
    cols = [[Fraction(2 * si.coords[t], lat.pair(si, si)) for si in srl]
            for t in range(dim)]
    coroot_coords = {}
    for rt in roots:
        target = [Fraction(2 * c, norm[rt]) for c in rt.coords]
        sol = rational_solve(cols, target)
        assert all(x.denominator == 1 for x in sol), "coroot is not integral"
        coroot_coords[rt] = tuple(int(x) for x in sol)

    return StructureConstantTable(
        lattice=lat,
        simple=simple,
        roots=tuple(sorted(roots)),
        positive=tuple(positive),
        n_map=n_map,
        cartan=cartan,
        coroot_coords=coroot_coords,
        extraspecial=frozenset(extraspecial),
    )


def _bracket_basis(table: StructureConstantTable, e1, e2):
    k1, v1 = e1
    k2, v2 = e2
    if k1 == "h" and k2 == "h":
        return {}
    if k1 == "h" and k2 == "x":
        return {("x", v2): table.cartan[(v2, v1)]}
    if k1 == "x" and k2 == "h":
        return {("x", v1): -table.cartan[(v1, v2)]}
    s = v1 + v2
    if all(c == 0 for c in s.coords):
        return {("h", i): c for i, c in enumerate(table.coroot_coords[v1]) if c}
    n = table.n_map.get((v1, v2), 0)
    return {("x", s): n} if n else {}


def _bracket(table, d1: dict, d2: dict) -> dict:
    out: dict = {}
    for e1, c1 in d1.items():
        for e2, c2 in d2.items():
            for k, v in _bracket_basis(table, e1, e2).items():
                out[k] = out.get(k, 0) + c1 * c2 * v
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triples_checked: int
    first_failure: tuple | None


def verify_jacobi(table: StructureConstantTable) -> JacobiReport:
    """Jacobi identity over every basis triple (h's and root vectors)."""
    basis = [("h", i) for i in range(table.rank)]
    basis += [("x", rt) for rt in table.roots]
    singles = {b: {b: 1} for b in basis}
    checked = 0
    nb = len(basis)
    for i in range(nb):
        for j in range(i, nb):
            bij = _bracket(table, singles[basis[i]], singles[basis[j]])
            for k in range(j, nb):
                checked += 1
                acc = _bracket(table, bij, singles[basis[k]])
                for key, val in _bracket(
                    table, _bracket(table, singles[basis[j]], singles[basis[k]]),
                    singles[basis[i]],
                ).items():
                    acc[key] = acc.get(key, 0) + val
                for key, val in _bracket(
                    table, _bracket(table, singles[basis[k]], singles[basis[i]]),
                    singles[basis[j]],
                ).items():
                    acc[key] = acc.get(key, 0) + val
                if any(v != 0 for v in acc.values()):
                    return JacobiReport(False, checked, (basis[i], basis[j], basis[k]))
    return JacobiReport(True, checked, None)


@dataclass(frozen=True)
class GradedBundleDecomposition:
    trivial_rank: int
    summands: tuple[DivisorClass, ...]


def build_lie_bundle(case: str, lat: IntersectionLattice | None = None) -> GradedBundleDecomposition:
    """Trivial part of rank = folded rank, one line summand per root."""
    lat = lat or case_lattice(case)
    rs = folded_root_system(case, lat)
    return GradedBundleDecomposition(case_rank(case), tuple(sorted(rs.roots)))


def folded_simple_and_roots(case: str, lat: IntersectionLattice | None = None):
    """Convenience: (RootSystemData, SimpleSystem) for a folded case."""
    from .rootsys import standard_simple_system

    lat = lat or case_lattice(case)
    rs = folded_root_system(case, lat)
    delta = standard_simple_system(case[0] if case[0] in "BC" else case, lat)
    return rs, delta
