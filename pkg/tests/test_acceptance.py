"""Acceptance criteria A1-A10: each test prints one PASS/FAIL line with its runtime."""

from __future__ import annotations

import cmath
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from metawhit.cgaction import algebra_of, verify_braid_cg, verify_h_linearity, verify_involution
from metawhit.characters import character_element, freudenthal_character, weyl_numerator
from metawhit.cli import symbolic_rank1
from metawhit.dlops import (
    cs_rhs, delta, dl_closed_form, dl_simple, rank1_whittaker_closed_form, symmetrizer,
    verify_braid_dl, verify_fg, whittaker_full,
)
from metawhit.galgebra import GroupAlgebra, RationalElement
from metawhit.gausscoeff import CoeffRing, specialize
from metawhit.metastruct import MetaplecticData
from metawhit.padic_oracle import OracleConfig, gauss_numeric, rank1_integral, rank1_whittaker_oracle
from metawhit.scattering import (
    ceiling_identity, random_family, verify_intertwiner, verify_mcnamara_match,
    verify_scattering_relation,
)
from metawhit.spherical import (
    spherical_function, verify_coset_collapse, verify_hecke, verify_macdonald, verify_stabilizer,
)


class Outcome:
    def __init__(self) -> None:
        self.failures: list[str] = []
        self.checks = 0

    def check(self, cond: bool, label: str) -> None:
        self.checks += 1
        if not cond:
            self.failures.append(label)


@contextmanager
def criterion(capsys, name: str, budget: float):
    out = Outcome()
    start = time.perf_counter()
    try:
        yield out
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget
        verdict = "PASS" if not out.failures and within else "FAIL"
        detail = f"{out.checks} checks, {elapsed:.2f}s (budget {budget:g}s)"
        if out.failures:
            detail += f", failed: {out.failures[:5]}"
        with capsys.disabled():
            print(f"\n{name}: {verdict} ({detail})")
    assert not out.failures, out.failures
    assert within, f"{name} took {elapsed:.2f}s"


def test_a1_rank_one_closed_form(capsys):
    with criterion(capsys, "A1 rank-one closed form", 1.0) as out:
        for n in (1, 2, 3, 4):
            for kappa in (1, 2):
                a1 = MetaplecticData.build("A1", n, kappa)
                a2 = MetaplecticData.build("A2", n, kappa)
                v = algebra_of(a1).ring.v()
                for L in range(7):
                    # odd pairings are realized on the first root of A2
                    md, lam = (a1, (L // 2,)) if L % 2 == 0 else (a2, (0, -L))
                    f = algebra_of(md).e(lam)
                    if L > 0:
                        out.check(dl_simple(md, 0, f) == dl_closed_form(md, 0, lam), f"T n={n} k={kappa} L={L}")
                    full = f + dl_simple(md, 0, f)
                    out.check(full == rank1_whittaker_closed_form(md, 0, lam), f"W n={n} k={kappa} L={L}")
                    if md is a1:
                        res = whittaker_full(a1, lam, check=False)
                        expect = rank1_whittaker_closed_form(a1, 0, lam) * algebra_of(a1).const(v ** lam[0])
                        out.check(res.formal == expect, f"full n={n} k={kappa} L={L}")


def test_a2_gauss_relations(capsys):
    with criterion(capsys, "A2 Gauss-sum relations", 1.0) as out:
        for p, n in ((7, 3), (13, 2), (13, 3), (29, 7)):
            table = gauss_numeric(OracleConfig(p, n))
            out.check(abs(table[0] + 1) < 1e-10, f"g0 p={p} n={n}")
            for k, d in table.product_defects().items():
                out.check(d < 1e-8, f"g{k} g{n - k} p={p} n={n}")


def test_a3_oracle_vs_symbolic(capsys):
    with criterion(capsys, "A3 rank-one oracle vs symbolic", 30.0) as out:
        for p in (7, 13):
            for n in (1, 2, 3):
                if (p - 1) % (2 * n):
                    continue
                cfg = OracleConfig(p, n)
                gauss = gauss_numeric(cfg).values
                for L in range(5):
                    table = rank1_whittaker_oracle(cfg, L)
                    sym = symbolic_rank1(n, 1, L, p, gauss)
                    for j in set(table.coeffs) | set(sym):
                        diff = abs(table.coeffs.get(j, 0) - sym.get(j, 0))
                        out.check(diff < 1e-8, f"p={p} n={n} L={L} j={j}")
                    for k in range(L + 2, L + 5):
                        out.check(abs(rank1_integral(cfg, L, k)[1]) < 1e-8, f"vanish p={p} n={n} L={L} k={k}")


def test_a4_braid_relations(capsys):
    with criterion(capsys, "A4 braid relations", 120.0) as out:
        for label in ("A2", "B2", "G2"):
            bound = 1 if label == "G2" else 2
            for n in (1, 2, 3, 4):
                md = MetaplecticData.build(label, n)
                out.check(verify_braid_cg(md, bound).ok, f"cg {label} n={n}")
                out.check(verify_braid_dl(md, bound).ok, f"dl {label} n={n}")


def test_a5_symmetrizer_identity(capsys):
    with criterion(capsys, "A5 symmetrizer identity", 60.0) as out:
        for label, ns in (("A2", (1, 2, 3)), ("B2", (1, 2))):
            for n in ns:
                md = MetaplecticData.build(label, n)
                for lam in md.rs.dominant_box(2):
                    out.check(RationalElement(symmetrizer(md, lam)) == cs_rhs(md, lam), f"{label} n={n} {lam}")


def test_a6_classical_degeneration(capsys):
    with criterion(capsys, "A6 classical degeneration", 5.0) as out:
        md = MetaplecticData.build("A2", 1)
        alg = algebra_of(md)
        dv, d1 = delta(md, True).num, delta(md, False).num
        for lam in md.rs.dominant_box(2):
            rhs = cs_rhs(md, lam)
            chi = character_element(alg, freudenthal_character(md.rs, lam))
            out.check(rhs / dv == chi, f"character {lam}")
            # with the extra Weyl denominator the same side is the Weyl numerator
            numer = character_element(alg, weyl_numerator(md.rs, lam))
            out.check(rhs * d1 / dv == numer, f"numerator {lam}")
        adjoint = freudenthal_character(md.rs, (1, 1))
        out.check(sum(adjoint.values()) == 8 and adjoint[(0, 0)] == 2, "adjoint")


def test_a7_spherical_suite(capsys):
    with criterion(capsys, "A7 spherical suite", 60.0) as out:
        for label in ("A1", "A2", "B2", "G2"):
            for n in (1, 2, 3):
                md = MetaplecticData.build(label, n)
                alg = algebra_of(md)
                out.check(verify_macdonald(md).ok, f"macdonald {label} n={n}")
                out.check(verify_hecke(md, 1).ok, f"hecke {label} n={n}")
                origin = (0,) * md.rank
                out.check(spherical_function(md, origin).formal == alg.one(), f"origin {label} n={n}")
                for lam in md.rs.dominant_box(1):
                    res = spherical_function(md, lam)
                    out.check(res.routes_agree, f"routes {label} n={n} {lam}")
                    out.check(res.polynomial or not md.in_lambda0(lam), f"poly {label} n={n} {lam}")
                    out.check(verify_stabilizer(md, lam), f"stab {label} n={n} {lam}")
                    out.check(verify_coset_collapse(md, lam), f"coset {label} n={n} {lam}")


def test_a8_intertwiner_and_scattering(capsys):
    with criterion(capsys, "A8 intertwiner and scattering", 60.0) as out:
        out.check(all(ceiling_identity(k, n) for n in range(1, 13) for k in range(-20, 21)), "ceiling")
        configs = [(1, 7), (1, 13), (2, 13), (3, 7), (3, 13)]
        for label in ("A1", "A2"):
            for n, q in configs:
                md = MetaplecticData.build(label, n)
                gauss = gauss_numeric(OracleConfig(q, n)).values
                box = [(x,) for x in range(-2, 3)] if md.rank == 1 else [
                    (x, y) for x in range(-1, 2) for y in range(-1, 2)
                ]
                for i in range(md.rank):
                    for xi in box:
                        out.check(verify_intertwiner(md, i, xi, 8, q, gauss).ok, f"int {label} n={n} q={q} {xi}")
                        out.check(verify_mcnamara_match(md, i, xi), f"mcn {label} n={n} {xi}")
                rng = random.Random(1000 * n + q)
                families = [random_family(md, rng) for _ in range(100)]
                for i in range(md.rank):
                    rep = verify_scattering_relation(md, i, families, q, gauss)
                    out.check(rep.ok and rep.families == 100, f"scatter {label} n={n} q={q} i={i}")


def test_a9_twisted_expansion(capsys):
    with criterion(capsys, "A9 twisted expansion", 60.0) as out:
        for label in ("A2", "B2", "G2"):
            for n in (2, 3):
                out.check(verify_fg(MetaplecticData.build(label, n)).ok, f"{label} n={n}")
            control = MetaplecticData.build(label, 1)
            out.check(verify_fg(control, metaplectic=False, b_sign=-1).ok, f"{label} control")


def _coeff(rng: random.Random, ring: CoeffRing):
    out = ring.zero()
    for _ in range(rng.randint(1, 3)):
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        out = out + ring.v(rng.randint(-2, 2)) * ring.g(rng.randrange(ring.n)) * c
    return out


def _element(rng: random.Random, alg: GroupAlgebra, terms: int = 3, bound: int = 2):
    return alg.from_items(
        (tuple(rng.randint(-bound, bound) for _ in range(alg.rank)), _coeff(rng, alg.ring))
        for _ in range(terms)
    )


def test_a10_property_suites(capsys):
    cases = 1000
    with criterion(capsys, "A10 algebraic property suites", 30.0) as out:
        rng = random.Random(20261016)
        systems = [MetaplecticData.build(label, n) for label in ("A1", "A2", "B2") for n in (2, 3)]
        for t in range(cases):
            md = systems[t % len(systems)]
            alg = algebra_of(md)
            f = _element(rng, alg, terms=2)
            i = rng.randrange(md.rank)
            basis = md.lambda0_basis
            weights = [rng.randint(-1, 1) for _ in basis]
            h_lam = tuple(sum(c * b[s] for c, b in zip(weights, basis)) for s in range(md.rank))
            out.check(verify_involution(md, i, f), f"involution {t}")
            out.check(verify_h_linearity(md, i, alg.e(h_lam), f), f"semilinear {t}")

        for t in range(cases):
            md = systems[t % len(systems)]
            alg = algebra_of(md)
            f, g = _element(rng, alg), _element(rng, alg)
            w, u = rng.choice(md.rs.weyl), rng.choice(md.rs.weyl)
            fw = f.weyl_act(w.matrix)
            out.check((f * g).weyl_act(w.matrix) == fw * g.weyl_act(w.matrix), f"mult {t}")
            out.check((f + g).weyl_act(w.matrix) == fw + g.weyl_act(w.matrix), f"add {t}")
            out.check(f.weyl_act(md.rs.multiply(w, u).matrix) == f.weyl_act(u.matrix).weyl_act(w.matrix), f"comp {t}")

        tables = {(p, n): gauss_numeric(OracleConfig(p, n)).values for p, n in ((7, 3), (13, 2), (13, 3), (17, 4), (7, 1))}
        keys = sorted(tables)
        for t in range(cases):
            p, n = keys[t % len(keys)]
            ring = CoeffRing(n)
            x, y = _coeff(rng, ring), _coeff(rng, ring)
            sx, sy = specialize(x, p, tables[p, n]), specialize(y, p, tables[p, n])
            tol = 1e-9 * (1 + abs(sx) * abs(sy) + abs(sx) + abs(sy))
            out.check(cmath.isclose(specialize(x + y, p, tables[p, n]), sx + sy, abs_tol=tol), f"spec+ {t}")
            out.check(cmath.isclose(specialize(x * y, p, tables[p, n]), sx * sy, abs_tol=tol), f"spec* {t}")

        alg = GroupAlgebra(2, 2)
        for t in range(cases):
            f, g, h = _element(rng, alg), _element(rng, alg), _element(rng, alg)
            d1 = alg.binomial(1, (rng.randint(1, 2), rng.randint(-1, 1)))
            d2 = alg.binomial(alg.ring.v(), (rng.randint(-1, 1), rng.randint(1, 2)))
            x = RationalElement(f, d1)
            same = RationalElement(f * d2, d1 * d2)
            out.check(x == same and same == x, f"symmetric {t}")
            if not h.is_zero():
                third = RationalElement(f * h, d1 * h)
                out.check(third == same and x == third, f"transitive {t}")
            out.check((RationalElement(g, d1) == x) == (g == f), f"faithful {t}")


@pytest.mark.parametrize("job_file", ["acceptance"])
def test_packaged_acceptance_jobs(capsys, job_file):
    from metawhit.cli import run_batch

    with criterion(capsys, "packaged acceptance job file", 300.0) as out:
        summary = run_batch(job_file)
        out.check(summary["jobs"] > 0, "jobs present")
        for r in summary["results"]:
            out.check(r["ok"], r["command"])
