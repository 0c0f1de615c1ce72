import pytest

from picfold.folding import folded_root_system
from picfold.lattice import F1, P2, make_blowup_lattice
from picfold.liealg import (
    StructureConstantTable,
    build_lie_bundle,
    folded_simple_and_roots,
    root_string,
    structure_constants,
    verify_jacobi,
)
from picfold.moduli import case_lattice
from picfold.rootsys import root_sublattice, standard_simple_system


def _simply_laced(case, lat):
    if case == "E6":
        rs = root_sublattice(lat, [lat.K])
    elif case == "A":
        rs = root_sublattice(lat, [lat.K, lat.f, lat.s])
    else:
        rs = root_sublattice(lat, [lat.K, lat.f])
    return rs, standard_simple_system(case, lat)


def test_root_string_b2():
    lat = case_lattice("B2")
    rs = folded_root_system("B2", lat)
    b1 = lat.f - 2 * lat.l(2)
    b2 = 2 * (lat.l(2) - lat.l(3))
    assert root_string(rs, b1, b2) == (0, 2)
    # D4 is simply laced: strings have length at most 2
    lat4 = make_blowup_lattice(F1, 4)
    d4 = root_sublattice(lat4, [lat4.K, lat4.f])
    a = lat4.l(1) - lat4.l(2)
    b = lat4.l(2) - lat4.l(3)
    assert lat4.pair(a, b) == 1 and root_string(d4, a, b) == (0, 1)
    # no string at all when neither sum nor difference is a root
    c = lat4.l(3) - lat4.l(4)
    assert root_string(d4, a, c) == (0, 0)


@pytest.fixture(scope="module")
def tables():
    out = {}
    lat4 = make_blowup_lattice(F1, 4)
    out["D4"] = structure_constants(*_simply_laced("D", lat4))
    cubic = make_blowup_lattice(P2, 6)
    out["E6"] = structure_constants(*_simply_laced("E6", cubic))
    for case in ("B2", "B3", "B4", "C2", "C3", "G2", "F4"):
        out[case] = structure_constants(*folded_simple_and_roots(case))
    return out


def test_single_pair_table():
    lat = make_blowup_lattice(F1, 2)
    rs, simple = _simply_laced("A", lat)
    assert len(rs) == 2
    t = structure_constants(rs, simple)
    assert t.n_map == {}
    a = simple.roots[0]
    assert t.coroot_coords[a] == (1,)
    assert verify_jacobi(t).ok


def test_b2_constants(tables):
    t = tables["B2"]
    lat = t.lattice
    b1, b2 = t.simple.roots
    # every pair with a root sum gets a nonzero constant
    brute = sum(
        1 for a in t.roots for b in t.roots if a + b in set(t.roots)
    )
    assert len(t.n_map) == brute
    assert all(v != 0 for v in t.n_map.values())
    assert abs(t.n(b1, b2)) == 1
    assert abs(t.n(b1, b1 + b2)) == 2


def test_jacobi_all_cases(tables):
    for case, t in tables.items():
        rep = verify_jacobi(t)
        assert rep.ok, (case, rep.first_failure)


def test_n_values_match_string_lengths(tables):
    seen_three = set()
    for case, t in tables.items():
        roots = set(t.roots)
        for (a, b), v in t.n_map.items():
            r, _ = root_string(None, a, b, roots=roots)
            assert abs(v) == r + 1
            assert abs(v) in (1, 2, 3)
            if abs(v) == 3:
                seen_three.add(case)
        if case in ("D4", "E6"):
            assert all(abs(v) == 1 for v in t.n_map.values())
    assert seen_three == {"G2"}


def test_antisymmetry_and_negation(tables):
    t = tables["F4"]
    for (a, b), v in t.n_map.items():
        assert t.n(b, a) == -v
        assert t.n(-a, -b) == -v


def test_grading_compatibility(tables):
    for t in tables.values():
        roots = set(t.roots)
        for (a, b), v in t.n_map.items():
            assert v != 0
            assert a + b in roots  # the bracket lands in the summand of the sum class


def test_h_alpha_integral(tables):
    for t in tables.values():
        for rt in t.roots:
            coords = t.coroot_coords[rt]
            assert all(isinstance(c, int) for c in coords)
            # h_alpha acting on x_alpha gives 2
            acc = sum(c * t.cartan[(rt, i)] for i, c in enumerate(coords))
            assert acc == 2


def test_sign_flip_breaks_jacobi(tables):
    t = tables["G2"]
    flip = None
    index = {rt: i for i, rt in enumerate(t.positive)}
    for (a, b) in t.n_map:
        if a in index and b in index and index[a] < index[b] and (a, b) not in t.extraspecial:
            flip = (a, b)
            break
    assert flip is not None
    a, b = flip
    mutated = dict(t.n_map)
    for key in [(a, b), (b, a), (-a, -b), (-b, -a)]:
        mutated[key] = -mutated[key]
    broken = StructureConstantTable(
        lattice=t.lattice, simple=t.simple, roots=t.roots, positive=t.positive,
        n_map=mutated, cartan=t.cartan, coroot_coords=t.coroot_coords,
        extraspecial=t.extraspecial,
    )
    assert not verify_jacobi(broken).ok


def test_bundle_decompositions():
    b3 = build_lie_bundle("B3")
    assert b3.trivial_rank == 3 and len(b3.summands) == 18
    g2 = build_lie_bundle("G2")
    assert g2.trivial_rank == 2 and len(g2.summands) == 12
    f4 = build_lie_bundle("F4")
    assert f4.trivial_rank == 4 and len(f4.summands) == 48
    lat = case_lattice("G2")
    assert set(g2.summands) == set(folded_root_system("G2", lat).roots)
