"""Batch verification driver.

Runs named suites of finite checks and emits human-readable or
machine-readable certificates.  Claim ids are stable strings (the
verification matrix in the README documents them); two runs with the
same configuration produce identical reports apart from timings.

Exit codes: 0 all claims pass (or are skipped), 1 at least one claim
failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from math import factorial

import numpy as np

from . import abelian, configs, folding, lattice, liealg, moduli, repbundles, rootsys

VERSION = "0.1.0"

SUITES = ("lattice", "folding", "cubic", "configs", "moduli", "liealg", "repbundles")


@dataclass
class RunConfig:
    sigma: tuple[int, int] = (2, 2)
    curve: tuple[int, int, int] | None = None
    rank_b: int = 4
    rank_c: int = 3
    weyl_cap: int = 10**6
    action_cap: int = 10**8

    def as_dict(self):
        return {
            "sigma": list(self.sigma),
            "curve": list(self.curve) if self.curve else None,
            "rank_b": self.rank_b,
            "rank_c": self.rank_c,
            "weyl_cap": self.weyl_cap,
            "action_cap": self.action_cap,
        }

    def sigma_model(self):
        if self.curve is not None:
            model, _ = abelian.weierstrass_group(*self.curve)
            return model
        return abelian.make_sigma_model(*self.sigma)


class ConfigError(ValueError):
    pass


_CONFIG_KEYS = {
    "sigma.m1", "sigma.m2", "curve.p", "curve.a", "curve.b",
    "ranks.b", "ranks.c", "budget.weyl_cap", "budget.action_cap",
}


def load_config_file(path: str) -> dict:
    values: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = int(val.strip())
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


def config_from(values: dict, args) -> RunConfig:
    cfg = RunConfig()
    if "sigma.m1" in values or "sigma.m2" in values:
        cfg.sigma = (values.get("sigma.m1", 1), values.get("sigma.m2", 1))
    if {"curve.p", "curve.a", "curve.b"} & values.keys():
        cfg.curve = (values.get("curve.p", 5), values.get("curve.a", 1),
                     values.get("curve.b", 0))
    cfg.rank_b = values.get("ranks.b", cfg.rank_b)
    cfg.rank_c = values.get("ranks.c", cfg.rank_c)
    cfg.weyl_cap = values.get("budget.weyl_cap", cfg.weyl_cap)
    cfg.action_cap = values.get("budget.action_cap", cfg.action_cap)
    # command-line flags win
    if args.sigma:
        m1, m2 = (int(x) for x in args.sigma.split(","))
        cfg.sigma = (m1, m2)
    if args.curve:
        p, a, b = (int(x) for x in args.curve.split(","))
        cfg.curve = (p, a, b)
    if args.rank_b:
        cfg.rank_b = args.rank_b
    if args.rank_c:
        cfg.rank_c = args.rank_c
    return cfg


@dataclass
class VerificationReport:
    claim_id: str
    status: str
    witness: object
    ms: float


def _run_claims(claims) -> list[VerificationReport]:
    reports = []
    seen = set()
    for claim_id, fn in claims:
        assert claim_id not in seen, f"duplicate claim id {claim_id}"
        seen.add(claim_id)
        t0 = time.perf_counter()
        try:
            witness = fn()
            status = "pass"
        except SkipClaim as sk:
            witness, status = str(sk), "skipped"
        except AssertionError as exc:
            witness, status = f"assertion failed: {exc}", "fail"
        except Exception as exc:  # noqa: BLE001 - a claim failure is data
            witness, status = f"{type(exc).__name__}: {exc}", "fail"
        ms = (time.perf_counter() - t0) * 1000.0
        reports.append(VerificationReport(claim_id, status, witness, ms))
    return reports


class SkipClaim(Exception):
    pass


def _expect(value, expected, label):
    assert value == expected, f"{label}: got {value}, expected {expected}"
    return value


# --------------------------------------------------------------------------
# suite definitions


def _suite_lattice(cfg: RunConfig):
    def k_squares():
        out = {}
        for model, n in (("F1", 4), ("F1", 1), ("P2", 6)):
            lat = lattice.make_blowup_lattice(model, n)
            out[f"{model}.{n}"] = lat.pair(lat.K, lat.K)
        _expect(out["F1.4"], 4, "K^2 on the 4-point F1 blow-up")
        _expect(out["F1.1"], 7, "K^2 on the 1-point F1 blow-up")
        _expect(out["P2.6"], 3, "K^2 on the cubic")
        return out

    def lines27():
        lat = lattice.make_blowup_lattice("P2", 6)
        lines = lattice.exceptional_classes(lat)
        _expect(len(lines), 27, "line count")
        meets = lattice.lines_meeting(lat, lines)
        assert all(len(m) == 10 for m in meets.values())
        return {"lines": 27, "meets_each": 10, "disjoint_each": 16}

    def root_counts():
        f14 = lattice.make_blowup_lattice("F1", 4)
        cub = lattice.make_blowup_lattice("P2", 6)
        d4 = rootsys.root_sublattice(f14, [f14.K, f14.f])
        a3 = rootsys.root_sublattice(f14, [f14.K, f14.f, f14.s])
        e6 = rootsys.root_sublattice(cub, [cub.K])
        return {
            "D4": _expect(len(d4), 24, "D4 roots"),
            "A3": _expect(len(a3), 12, "A3 roots"),
            "E6": _expect(len(e6), 72, "E6 roots"),
        }

    def spinor_counts():
        f14 = lattice.make_blowup_lattice("F1", 4)
        return {
            kind: _expect(repbundles.weight_bundle(kind, f14).rank, 8, kind)
            for kind in ("vector", "spinor_plus", "spinor_minus")
        }

    return [
        ("lattice.K.selfint", k_squares),
        ("E6.lines.27", lines27),
        ("roots.counts", root_counts),
        ("D4.bundles.rank8", spinor_counts),
    ]


def _suite_folding(cfg: RunConfig):
    claims = []

    def folded_tags():
        out = {}
        for case in ("B", "C", "E6", "D4-triality"):
            if case == "B":
                lat = lattice.make_blowup_lattice("F1", 4)
                rho = folding.outer_automorphism("D", lat)
            elif case == "C":
                lat = lattice.make_blowup_lattice("F1", 4)
                rho = folding.outer_automorphism("A", lat)
            elif case == "E6":
                lat = lattice.make_blowup_lattice("P2", 6)
                rho = folding.outer_automorphism("E6", lat)
            else:
                lat = lattice.make_blowup_lattice("F1", 4)
                rho = folding.outer_automorphism("D4-triality", lat)
            out[case] = folding.fold_simple_system(rho.simple_system, rho).type_tag
        _expect(out["D4-triality"], "G2", "triality fold")
        _expect(out["E6"], "F4", "E6 fold")
        _expect(out["B"], "B3", "fork fold")
        assert out["C"] in ("B2", "C2")
        return out

    claims.append(("fold.tags", folded_tags))

    def root_counts():
        out = {}
        for n in range(2, cfg.rank_b + 1):
            lat = lattice.make_blowup_lattice("F1", n + 1)
            out[f"B{n}"] = _expect(
                len(folding.folded_root_system(f"B{n}", lat)), 2 * n * n, f"R(B{n})"
            )
        for n in range(2, cfg.rank_c + 1):
            lat = lattice.make_blowup_lattice("F1", 2 * n)
            out[f"C{n}"] = _expect(
                len(folding.folded_root_system(f"C{n}", lat)), 2 * n * n, f"R(C{n})"
            )
        lat = lattice.make_blowup_lattice("F1", 4)
        out["G2"] = _expect(len(folding.folded_root_system("G2", lat)), 12, "R(G2)")
        cub = lattice.make_blowup_lattice("P2", 6)
        out["F4"] = _expect(len(folding.folded_root_system("F4", cub)), 48, "R(F4)")
        return out

    claims.append(("fold.root.counts", root_counts))

    def weyl_orders():
        out = {}
        for n in range(2, cfg.rank_b + 1):
            lat = lattice.make_blowup_lattice("F1", n + 1)
            out[f"W.B{n}"] = _expect(
                len(folding.folded_weyl_group(f"B{n}", lat, cap=cfg.weyl_cap)),
                2**n * factorial(n), f"|W(B{n})|",
            )
        lat = lattice.make_blowup_lattice("F1", 4)
        out["W.G2"] = _expect(len(folding.folded_weyl_group("G2", lat)), 12, "|W(G2)|")
        cub = lattice.make_blowup_lattice("P2", 6)
        out["W.F4"] = _expect(
            len(folding.folded_weyl_group("F4", cub, cap=cfg.weyl_cap)), 1152, "|W(F4)|"
        )
        return out

    claims.append(("W.folded.orders", weyl_orders))

    def second_reduction():
        rows = {}
        for n in range(2, cfg.rank_c + 1):
            lat = lattice.make_blowup_lattice("F1", 2 * n)
            rows[f"C{n}"] = (len(folding.folded_weyl_group(f"C{n}", lat)),
                             2**n, factorial(n))
            assert rows[f"C{n}"][0] == rows[f"C{n}"][1] * rows[f"C{n}"][2]
        for n in range(2, cfg.rank_b + 1):
            lat = lattice.make_blowup_lattice("F1", n + 1)
            lat_dn = lattice.make_blowup_lattice("F1", n)
            wdn = rootsys.weyl_generate(
                rootsys.simple_reflections(rootsys.standard_simple_system("D", lat_dn), lat_dn)
            )
            wbn = folding.folded_weyl_group(f"B{n}", lat)
            rows[f"B{n}"] = (len(wbn), len(wdn), 2)
            assert len(wbn) == len(wdn) * 2
        f14 = lattice.make_blowup_lattice("F1", 4)
        l = f14.l
        a2 = [l(2) - l(3), l(3) - f14.f + l(4)]
        wa2 = rootsys.weyl_generate([rootsys.reflection(f14, r) for r in a2])
        rows["G2"] = (len(folding.folded_weyl_group("G2", f14)), len(wa2), 2)
        assert rows["G2"][0] == rows["G2"][1] * rows["G2"][2] == 12
        cub = lattice.make_blowup_lattice("P2", 6)
        wd4 = rootsys.weyl_generate(
            rootsys.simple_reflections(rootsys.standard_simple_system("D", f14), f14)
        )
        rows["F4"] = (len(folding.folded_weyl_group("F4", cub)), len(wd4), 6)
        assert rows["F4"][0] == rows["F4"][1] * rows["F4"][2] == 1152
        return {k: list(v) for k, v in rows.items()}

    claims.append(("W.second.reduction.identities", second_reduction))

    def presentations():
        pairs = [("B2", lattice.make_blowup_lattice("F1", 3)),
                 ("B3", lattice.make_blowup_lattice("F1", 4)),
                 ("C2", lattice.make_blowup_lattice("F1", 4)),
                 ("G2", lattice.make_blowup_lattice("F1", 4)),
                 ("F4", lattice.make_blowup_lattice("P2", 6))]
        out = {}
        for case, lat in pairs:
            a, b, basis = folding.restricted_reflection_matrices(case, lat)
            assert a == b, f"{case}: presentations differ"
            out[case] = len(a)
        return out

    claims.append(("fold.presentations.agree", presentations))
    return claims


def _suite_cubic(cfg: RunConfig):
    lat = lattice.make_blowup_lattice("P2", 6)

    def combinatorics():
        data = configs.cubic_combinatorics(lat)
        _expect(len(data.lines), 27, "lines")
        _expect(len(data.triangles), 45, "triangles")
        _expect(len(data.double_sixes), 36, "double sixes")
        per = {e: 0 for e in data.lines}
        for tri in data.triangles:
            for e in tri:
                per[e] += 1
        assert set(per.values()) == {5}
        return {"lines": 27, "triangles": 45, "double_sixes": 36, "per_line": 5}

    def weyl_order():
        w = rootsys.weyl_generate(
            rootsys.simple_reflections(rootsys.standard_simple_system("E6", lat), lat),
            cap=cfg.weyl_cap,
        )
        _expect(len(w), 51840, "|W(E6)|")
        return {"order": 51840}

    def bijection():
        data = configs.cubic_combinatorics(lat)
        simple = rootsys.standard_simple_system("E6", lat)
        images = set()
        for ds in data.double_sixes:
            images.add(configs.double_six_to_root(ds, lat, simple))
        _expect(len(images), 36, "distinct positive roots")
        base = frozenset(lat.l(i) for i in range(1, 7))
        ds0 = next(d for d in data.double_sixes if base in (d.first, d.second))
        alpha0 = configs.double_six_to_root(ds0, lat, simple)
        expected = 2 * lat.h - sum((lat.l(i) for i in range(2, 7)), lat.l(1))
        assert alpha0 == expected
        return {"image_size": 36, "base_root": list(alpha0.coords)}

    def stabilizers():
        w = rootsys.weyl_generate(
            rootsys.simple_reflections(rootsys.standard_simple_system("E6", lat), lat),
            cap=cfg.weyl_cap,
        )
        h, l = lat.h, lat.l
        tri = (h - l(1) - l(6), h - l(2) - l(5), h - l(3) - l(4))
        unord = configs.triangle_stabilizer(tri, False, w, lat)
        _expect(unord.order, 1152, "unordered stabilizer")
        _expect(unord.orbit_size, 45, "triangle orbit")
        ordered = configs.triangle_stabilizer(tri, True, w, lat)
        _expect(ordered.order, 192, "ordered stabilizer")
        _expect(ordered.orbit_size, 270, "ordered orbit")
        wf4 = folding.folded_weyl_group("F4", lat)
        assert unord.elements.same_elements(wf4)
        return {"unordered": 1152, "ordered": 192, "orbit": 45, "ordered_orbit": 270}

    return [
        ("E6.cubic.combinatorics", combinatorics),
        ("W.E6.order.51840", weyl_order),
        ("E6.doublesix.root.bijection", bijection),
        ("F4.triangle.stabilizers", stabilizers),
    ]


def _suite_configs(cfg: RunConfig):
    cases = [f"B{n}" for n in range(2, cfg.rank_b + 1)]
    cases += [f"C{n}" for n in range(2, cfg.rank_c + 1)]
    cases += ["G2", "F4"]

    def counts():
        out = {}
        for case in cases:
            lat = moduli.case_lattice(case)
            systems = configs.enumerate_exceptional_systems(case, lat)
            n = moduli.case_rank(case)
            expected = 1152 if case == "F4" else (12 if case == "G2" else 2**n * factorial(n))
            _expect(len(systems), expected, f"{case} system count")
            out[case] = len(systems)
        lat = moduli.case_lattice("G2")
        listed = (lat.f - lat.l(1), lat.f - lat.l(2), lat.l(4), lat.l(3))
        assert listed in configs.enumerate_exceptional_systems("G2", lat)
        return out

    def transitive():
        out = {}
        for case in cases:
            lat = moduli.case_lattice(case)
            systems = configs.enumerate_exceptional_systems(case, lat)
            w = folding.folded_weyl_group(case, lat, cap=cfg.weyl_cap)
            rep = configs.simple_transitivity_check(case, systems, w, lat)
            assert rep.simply_transitive, f"{case}: {rep.offending}"
            out[case] = rep.orbit_size
        return out

    def blowdown():
        lat = moduli.case_lattice("G2")
        l, f = lat.l, lat.f
        assert configs.is_blowdown_sequence(lat, (l(1), l(2), l(3), l(4)))
        assert configs.is_blowdown_sequence(lat, (f - l(1), f - l(2), l(4), l(3)))
        assert not configs.is_blowdown_sequence(lat, (l(1), f - l(1), l(3), l(4)))
        return {"checked": 3}

    return [
        ("configs.counts", counts),
        ("configs.simply.transitive", transitive),
        ("configs.blowdown.examples", blowdown),
    ]


def _suite_moduli(cfg: RunConfig):
    sigma = cfg.sigma_model()
    claims = []

    def agreement():
        out = {}
        for case in ("B2", "C2", "G2", "F4"):
            out[case] = moduli.invariance_agreement_exhaustive(case, sigma)
        return out

    claims.append(("moduli.invariance.agreement", agreement))

    def components():
        out = {}
        import warnings as _w

        with _w.catch_warnings():
            _w.simplefilter("ignore")
            for case in ("B2", "C2", "G2"):
                fc = moduli.fixed_components(case, sigma)
                out[case] = {"labels": len(fc.labels), "full": fc.full_torsion}
        return out

    claims.append(("moduli.fixed.components", components))

    def chi_small():
        out = {}
        for case in ("B2", "B3", "C2", "G2"):
            rep = moduli.chi_injectivity_check(case, sigma, action_cap=cfg.action_cap)
            assert rep.passed, f"{case}: {rep.counterexample}"
            out[case] = {"domain": rep.domain_size, "orbits": rep.orbits_checked}
        return out

    claims.append(("moduli.chi.injective.small", chi_small))

    def chi_f4():
        budget = sigma.order**4 * 51840
        if budget > cfg.action_cap:
            raise SkipClaim(f"budget {budget} exceeds action cap {cfg.action_cap}")
        rep = moduli.chi_injectivity_check("F4", sigma, action_cap=cfg.action_cap)
        assert rep.passed, rep.counterexample
        return {"domain": rep.domain_size, "orbits": rep.orbits_checked}

    claims.append(("moduli.chi.injective.F4", chi_f4))

    def round_trip():
        rng = random.Random(20240801)
        els = list(sigma.elements())
        out = {}
        for case in ("B2", "B3", "C2", "G2", "F4"):
            hits = 0
            for _ in range(20):
                pa = _random_admissible(case, sigma, rng)
                res = moduli.reconstruct_points(case, moduli.folded_restriction(case, pa), sigma)
                assert res.solvable and pa in res.assignments
                hits += 1
            out[case] = hits
        return out

    claims.append(("moduli.reconstruction.roundtrip", round_trip))
    return claims


def _random_admissible(case, sigma, rng):
    els = list(sigma.elements())
    n = moduli.case_lattice(case).npoints
    if case.startswith("B"):
        pts = (sigma.zero,) + tuple(rng.choice(els) for _ in range(n - 1))
    elif case.startswith("C"):
        half = [rng.choice(els) for _ in range(n // 2)]
        pts = tuple(half) + tuple(sigma.neg(p) for p in reversed(half))
    elif case == "G2":
        a, b = rng.choice(els), rng.choice(els)
        pts = (sigma.zero, a, b, sigma.add(a, b))
    else:
        x1, x2, x3, p = (rng.choice(els) for _ in range(4))
        pts = (x1, x2, x3, sigma.sub(p, x3), sigma.sub(p, x2), sigma.sub(p, x1))
    return moduli.PointAssignment(sigma, pts)


def _suite_liealg(cfg: RunConfig):
    def tables():
        out = {}
        f14 = lattice.make_blowup_lattice("F1", 4)
        cub = lattice.make_blowup_lattice("P2", 6)
        systems = {
            "D4": (rootsys.root_sublattice(f14, [f14.K, f14.f]),
                   rootsys.standard_simple_system("D", f14)),
            "E6": (rootsys.root_sublattice(cub, [cub.K]),
                   rootsys.standard_simple_system("E6", cub)),
        }
        for case in ("B2", "B3", "C2", "G2", "F4"):
            systems[case] = liealg.folded_simple_and_roots(case)
        seen3 = set()
        for name, (rs, delta) in systems.items():
            table = liealg.structure_constants(rs, delta)
            rep = liealg.verify_jacobi(table)
            assert rep.ok, f"{name}: Jacobi fails at {rep.first_failure}"
            rootset = set(table.roots)
            for (a, b), v in table.n_map.items():
                r, _ = liealg.root_string(None, a, b, roots=rootset)
                assert abs(v) == r + 1
                if abs(v) == 3:
                    seen3.add(name)
            out[name] = {"triples": rep.triples_checked, "pairs": len(table.n_map)}
        assert seen3 == {"G2"}
        return out

    return [("liealg.jacobi.all", tables)]


def _suite_repbundles(cfg: RunConfig):
    def spinor_iff():
        lat = lattice.make_blowup_lattice("F1", 3)
        sig = abelian.make_sigma_model(5, 5)
        ident, zero = repbundles.spinor_locus(lat, sig)
        assert np.array_equal(ident, zero)
        return {"tuples": int(ident.shape[1]), "indices": 3}

    def g2_iff():
        lat = lattice.make_blowup_lattice("F1", 4)
        sig = abelian.make_sigma_model(5, 5)
        masks = repbundles.g2_triple_locus(lat, sig)
        lhs = masks["sp_sm"] & masks["w_sp"]
        rhs = masks["x1_zero"] & masks["x4_sum"]
        assert np.array_equal(lhs, rhs)
        return {"tuples": int(lhs.shape[0]), "locus": int(rhs.sum())}

    def wedge_iff():
        lat = lattice.make_blowup_lattice("F1", 4)
        sig = abelian.make_sigma_model(7, 7)
        identity, paired, _ = repbundles.wedge_locus(lat, sig)
        assert np.array_equal(identity, paired)
        return {"tuples": int(identity.shape[0]), "locus": int(paired.sum())}

    def f4_decomp():
        lat = lattice.make_blowup_lattice("P2", 6)
        sig = abelian.make_sigma_model(5, 5)
        rng = random.Random(7)
        els = list(sig.elements())
        x1, x2, x3, p = (rng.choice(els) for _ in range(4))
        pts = (x1, x2, x3, sig.sub(p, x3), sig.sub(p, x2), sig.sub(p, x1))
        pa = moduli.PointAssignment(sig, pts)
        dec = repbundles.f4_rep_decomposition(lat, pa)
        return {"zero_lines": 3, "short_roots": len(dec.short_root_map),
                "kernel_rank": dec.trace_kernel_rank}

    return [
        ("bundles.spinor.iff.zero", spinor_iff),
        ("bundles.G2.triple.iff", g2_iff),
        ("bundles.C2.wedge.iff", wedge_iff),
        ("bundles.F4.rep.27=3+24", f4_decomp),
    ]


_SUITE_BUILDERS = {
    "lattice": _suite_lattice,
    "folding": _suite_folding,
    "cubic": _suite_cubic,
    "configs": _suite_configs,
    "moduli": _suite_moduli,
    "liealg": _suite_liealg,
    "repbundles": _suite_repbundles,
}


def run_suite(name: str, cfg: RunConfig) -> list[VerificationReport]:
    if name == "all":
        reports = []
        for suite in SUITES:
            reports.extend(run_suite(suite, cfg))
        return reports
    if name not in _SUITE_BUILDERS:
        raise ConfigError(f"unknown suite {name!r}")
    return _run_claims(_SUITE_BUILDERS[name](cfg))


def run_suites_parallel(names, cfg: RunConfig) -> list[VerificationReport]:
    """Run suites concurrently; reports merge in suite order regardless."""
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=min(4, len(names))) as pool:
        futures = {name: pool.submit(run_suite, name, cfg) for name in names}
    out = []
    for name in names:
        out.extend(futures[name].result())
    return out


def emit_report(reports, fmt: str, cfg: RunConfig) -> str:
    if fmt == "json":
        doc = {
            "run": {"config": cfg.as_dict(), "version": VERSION},
            "results": [
                {"id": r.claim_id, "status": r.status,
                 "witness": _jsonable(r.witness), "ms": round(r.ms, 3)}
                for r in reports
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=False)
    width = max((len(r.claim_id) for r in reports), default=10)
    lines = [f"{'claim':<{width}}  status   ms"]
    lines.append("-" * (width + 18))
    for r in reports:
        lines.append(f"{r.claim_id:<{width}}  {r.status:<7}  {r.ms:9.1f}")
        if r.status == "fail":
            lines.append(f"    {r.witness}")
    npass = sum(r.status == "pass" for r in reports)
    nfail = sum(r.status == "fail" for r in reports)
    nskip = sum(r.status == "skipped" for r in reports)
    lines.append(f"{npass} passed, {nfail} failed, {nskip} skipped")
    return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="picfold", description="exact verification suites"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES + ("all",))
    verify.add_argument("--sigma", help="m1,m2 for the finite group model")
    verify.add_argument("--curve", help="p,a,b for the Weierstrass adapter")
    verify.add_argument("--rank-b", type=int, dest="rank_b")
    verify.add_argument("--rank-c", type=int, dest="rank_c")
    verify.add_argument("--config", help="key = value configuration file")
    verify.add_argument("--format", choices=("text", "json"), default="text")
    verify.add_argument("--out", help="write the report to a file")
    verify.add_argument("--parallel", action="store_true",
                        help="run suites concurrently (deterministic merge)")
    args = parser.parse_args(argv)

    try:
        values = load_config_file(args.config) if args.config else {}
        cfg = config_from(values, args)
        cfg.sigma_model()  # validate early
    except (ConfigError, ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.suite == "all" and args.parallel:
            reports = run_suites_parallel(SUITES, cfg)
        else:
            reports = run_suite(args.suite, cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    rendered = emit_report(reports, args.format, cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered + "\n")
    else:
        print(rendered)
    return 0 if all(r.status in ("pass", "skipped") for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
