"""
Command-line front end.

    metawhit compute whittaker --cartan A2 --n 3 --lambda 1,2 [--q 7] [--per-w]
    metawhit verify macdonald --cartan A2 --n 2
    metawhit oracle gauss --p 7 --n 3
    metawhit --jobs acceptance_jobs.json

Coweights are comma-separated simple-coroot coordinates; use ``--lambda=-1,2``
for a leading minus sign.  Exit status is 0 when everything verified, 1 when a
check failed (the JSON report says which) and 2 for usage or configuration
errors.  ``MWF_THREADS`` bounds the worker processes used by ``--jobs``.
"""

from __future__ import annotations

__all__ = ["main", "build_parser", "run_batch", "dispatch", "UsageError"]

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from typing import Any, Callable, Sequence

from .cgaction import algebra_of, box_points, verify_braid_cg, verify_h_linearity, verify_involution
from .characters import character_element, freudenthal_character, weyl_numerator
from .dlops import (
    cs_rhs, delta, dl_simple, symmetrizer, verify_braid_dl, verify_fg, whittaker_full,
)
from .metastruct import MetaplecticData
from .padic_oracle import OracleConfig, OracleError, gauss_numeric, rank1_whittaker_oracle
from .rootsys import RootSystemError
from .scattering import (
    ceiling_identity, random_family, tau_coeffs, verify_intertwiner,
    verify_mcnamara_match, verify_scattering_relation,
)
from .spherical import (
    spherical_function, verify_braid_sph, verify_coset_collapse, verify_hecke,
    verify_macdonald, verify_stabilizer,
)


class UsageError(ValueError):
    pass


# -- helpers -----------------------------------------------------------------

def _cx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _coweight(text: str | None, rank: int) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        lam = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad coweight {text!r}") from exc
    if len(lam) != rank:
        raise UsageError(f"coweight {lam} does not have rank {rank}")
    return lam


def _data(args) -> MetaplecticData:
    if args.cartan is None:
        raise UsageError("--cartan is required")
    if args.n is None:
        raise UsageError("--n is required")
    try:
        return MetaplecticData.build(args.cartan, args.n, args.kappa)
    except (RootSystemError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _gauss(q: int, n: int) -> list[complex]:
    try:
        return gauss_numeric(OracleConfig(q, n)).values
    except OracleError as exc:
        raise UsageError(f"cannot specialize at q = {q}: {exc}") from exc


def _box(args, md: MetaplecticData) -> int:
    if args.box is not None:
        return args.box
    return 1 if md.rs.spec.label.upper().startswith("G") else 2


def _numeric(table: dict) -> list[list]:
    return [[list(lam), _cx(c)] for lam, c in sorted(table.items())]


def _echo(args) -> dict:
    keys = ("cartan", "n", "kappa", "q", "lambda_", "seed", "box", "cutoff", "p", "pairing")
    out = {}
    for k in keys:
        val = getattr(args, k, None)
        out[k.rstrip("_")] = val
    return out


# -- compute -----------------------------------------------------------------

def cmd_whittaker(args) -> dict:
    md = _data(args)
    lam = _coweight(args.lambda_, md.rank)
    if lam is None:
        raise UsageError("--lambda is required")
    gauss = _gauss(args.q, md.n) if args.q is not None else None
    res = whittaker_full(md, lam, q=args.q, gauss=gauss, per_w=args.per_w, check=True)
    out: dict[str, Any] = {
        "dominant": res.dominant,
        "nondominant": not res.dominant,
        "formal": res.formal.to_json(),
    }
    if res.dominant:
        scale = algebra_of(md).const(algebra_of(md).ring.v(md.rs.rho_pairing(lam)))
        out["closed_form"] = (cs_rhs(md, lam).to_polynomial() * scale).to_json()
        out["equal"] = bool(res.closed_form_equal)
    else:
        out["closed_form"] = algebra_of(md).zero().to_json()
        out["equal"] = True
    if res.per_w:
        out["per_w"] = [{"word": list(w), "value": f.to_json()} for w, f in sorted(res.per_w.items())]
    if res.numeric is not None:
        out["numeric"] = _numeric(res.numeric)
    out["ok"] = out["equal"]
    return out


def cmd_spherical(args) -> dict:
    md = _data(args)
    lam = _coweight(args.lambda_, md.rank)
    if lam is None:
        raise UsageError("--lambda is required")
    if not md.rs.is_dominant(lam):
        return {"dominant": False, "nondominant": True, "ok": True}
    gauss = _gauss(args.q, md.n) if args.q is not None else None
    res = spherical_function(md, lam, q=args.q, gauss=gauss)
    out: dict[str, Any] = {
        "dominant": True,
        "nondominant": False,
        "in_lambda0": md.in_lambda0(lam),
        "polynomial": res.polynomial,
        "formal": res.formal.to_json(),
        "routes_agree": res.routes_agree,
        "stabilizer_ok": verify_stabilizer(md, lam),
        "coset_collapse_ok": verify_coset_collapse(md, lam),
    }
    if not any(lam):
        out["unit_at_origin"] = res.formal == algebra_of(md).one()
    if res.numeric is not None:
        out["numeric"] = _numeric(res.numeric)
    # on Lambda_0 the value must be a Laurent polynomial
    poly_ok = res.polynomial or not md.in_lambda0(lam)
    out["ok"] = bool(
        res.routes_agree and out["stabilizer_ok"] and out["coset_collapse_ok"]
        and out.get("unit_at_origin", True) and poly_ok
    )
    return out


# -- verify ------------------------------------------------------------------

def cmd_cg_braid(args) -> dict:
    md = _data(args)
    if md.rank < 2:
        raise UsageError("braid relations need rank at least two")
    rep = verify_braid_cg(md, _box(args, md))
    return rep.to_json()


def cmd_dl_braid(args) -> dict:
    md = _data(args)
    if md.rank < 2:
        raise UsageError("braid relations need rank at least two")
    return verify_braid_dl(md, _box(args, md)).to_json()


def _dominant_points(args, md: MetaplecticData) -> list[tuple[int, ...]]:
    lam = _coweight(args.lambda_, md.rank)
    if lam is not None:
        if not md.rs.is_dominant(lam):
            raise UsageError(f"{lam} is not dominant")
        return [lam]
    return md.rs.dominant_box(_box(args, md))


def cmd_symmetrizer(args) -> dict:
    md = _data(args)
    cases = []
    for lam in _dominant_points(args, md):
        cases.append({"lambda": list(lam), "equal": symmetrizer(md, lam) == cs_rhs(md, lam)})
    return {"cases": cases, "ok": all(c["equal"] for c in cases)}


def cmd_cs(args) -> dict:
    md = _data(args)
    alg = algebra_of(md)
    cases = []
    for lam in _dominant_points(args, md):
        case: dict[str, Any] = {"lambda": list(lam)}
        case["closed_form_equal"] = bool(whittaker_full(md, lam, check=True).closed_form_equal)
        if md.n == 1:
            rhs = cs_rhs(md, lam)
            chi = character_element(alg, freudenthal_character(md.rs, lam))
            case["character_equal"] = rhs / delta(md, True).num == chi
            literal = rhs * delta(md, False).num / delta(md, True).num
            case["weyl_numerator_equal"] = literal == character_element(alg, weyl_numerator(md.rs, lam))
        case["ok"] = all(v for k, v in case.items() if k != "lambda")
        cases.append(case)
    return {"cases": cases, "ok": all(c["ok"] for c in cases)}


def cmd_fg(args) -> dict:
    md = _data(args)
    if md.rank != 2:
        raise UsageError("fg needs a rank-two system")
    meta = verify_fg(md, metaplectic=True)
    control = verify_fg(md, metaplectic=False, b_sign=-1)
    return {"metaplectic": meta.to_json(), "control": control.to_json(), "ok": meta.ok and control.ok}


def cmd_macdonald(args) -> dict:
    return verify_macdonald(_data(args)).to_json()


def cmd_hecke(args) -> dict:
    md = _data(args)
    bound = _box(args, md)
    hecke = verify_hecke(md, bound)
    out = {"hecke": hecke.to_json()}
    ok = hecke.ok
    if md.rank >= 2:
        braid = verify_braid_sph(md, min(bound, 1))
        out["braid"] = braid.to_json()
        ok = ok and braid.ok
    out["ok"] = ok
    return out


def cmd_involution(args) -> dict:
    md = _data(args)
    alg = algebra_of(md)
    bound = _box(args, md)
    failures = []
    cases = 0
    for i in range(md.rank):
        for lam in box_points(md.rank, bound):
            cases += 1
            f = alg.e(lam)
            if not verify_involution(md, i, f):
                failures.append({"root": i, "lambda": list(lam), "check": "involution"})
            for b in md.lambda0_basis:
                if not verify_h_linearity(md, i, alg.e(b), f):
                    failures.append({"root": i, "lambda": list(lam), "h": list(b), "check": "linearity"})
    return {"cases": cases, "failures": failures, "ok": not failures}


def _require_q(args) -> int:
    if args.q is None:
        raise UsageError("--q is required")
    return args.q


def cmd_intertwiner(args) -> dict:
    md = _data(args)
    q = _require_q(args)
    gauss = _gauss(q, md.n)
    cutoff = args.cutoff if args.cutoff is not None else 8
    points = []
    for i in range(md.rank):
        for xi in box_points(md.rank, _box(args, md)):
            points.append(verify_intertwiner(md, i, xi, cutoff, q, gauss).to_json())
    return {
        "points": points,
        "max_residual": max(p["max_residual"] for p in points),
        "ok": all(p["ok"] for p in points),
    }


def cmd_tau(args) -> dict:
    md = _data(args)
    ceiling = all(ceiling_identity(k, m) for m in range(1, 13) for k in range(-20, 21))
    cases = []
    for i in range(md.rank):
        for mu in box_points(md.rank, _box(args, md)):
            pair = tau_coeffs(md, i, mu)
            cases.append({
                "root": i,
                "mu": list(mu),
                "tau_diag": pair.tau_diag.to_json(),
                "tau_off": pair.tau_off.to_json(),
                "mcnamara_match": verify_mcnamara_match(md, i, mu),
            })
    return {
        "ceiling_identity": ceiling,
        "cases": cases,
        "ok": ceiling and all(c["mcnamara_match"] for c in cases),
    }


def cmd_scattering(args) -> dict:
    md = _data(args)
    q = _require_q(args)
    gauss = _gauss(q, md.n)
    seed = args.seed if args.seed is not None else 0
    rng = random.Random(seed)
    families = [random_family(md, rng) for _ in range(args.families)]
    try:
        reports = [
            verify_scattering_relation(md, i, families, q, gauss, cutoff=args.cutoff)
            for i in range(md.rank)
        ]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return {"roots": [r.to_json() for r in reports], "ok": all(r.ok for r in reports)}


# -- oracle ------------------------------------------------------------------

def _oracle_config(args) -> OracleConfig:
    if args.p is None or args.n is None:
        raise UsageError("--p and --n are required")
    try:
        return OracleConfig(args.p, args.n, args.kappa)
    except OracleError as exc:
        raise UsageError(str(exc)) from exc


def cmd_gauss(args) -> dict:
    cfg = _oracle_config(args)
    table = gauss_numeric(cfg)
    defects = table.product_defects()
    out = {f"g{k}": _cx(v) for k, v in enumerate(table.values)}
    out["primitive_root"] = cfg.primitive_root
    out["g0_defect"] = abs(table.values[0] + 1)
    out["product_defects"] = {str(k): d for k, d in defects.items()}
    out["ok"] = out["g0_defect"] < 1e-10 and all(d < 1e-8 for d in defects.values())
    return out


def symbolic_rank1(n: int, kappa: int, pairing: int, q: int, gauss: Sequence[complex]) -> dict[int, complex]:
    """``(1 + T_a)(e^lam)`` specialized, keyed by the shift along ``a``.

    Even pairings use the full rank-one Whittaker function; odd ones restrict
    an A2 computation to its first simple root.
    """
    if pairing % 2 == 0:
        md = MetaplecticData.build("A1", n, kappa)
        lam = (pairing // 2,)
        res = whittaker_full(md, lam, check=False)
        scale = complex(q) ** md.rs.rho_pairing(lam)
        table = res.formal.specialize(q, gauss)
        return {mu[0] - lam[0]: c * scale for mu, c in table.items()}
    md = MetaplecticData.build("A2", n, kappa)
    lam = (0, -pairing)
    alg = algebra_of(md)
    f = alg.e(lam)
    table = (f + dl_simple(md, 0, f)).specialize(q, gauss)
    return {mu[0] - lam[0]: c for mu, c in table.items()}


def cmd_rank1(args) -> dict:
    cfg = _oracle_config(args)
    if args.pairing is None:
        raise UsageError("--pairing is required")
    try:
        table = rank1_whittaker_oracle(cfg, args.pairing)
    except OracleError as exc:
        raise UsageError(str(exc)) from exc
    symbolic = symbolic_rank1(cfg.n, cfg.kappa, args.pairing, cfg.p, gauss_numeric(cfg).values)
    keys = sorted(set(table.coeffs) | set(symbolic))
    residual = max(abs(table.coeffs.get(j, 0) - symbolic.get(j, 0)) for j in keys)
    cal = table.calibration
    return {
        "oracle": [[j, _cx(c)] for j, c in sorted(table.coeffs.items())],
        "symbolic": [[j, _cx(c)] for j, c in sorted(symbolic.items())],
        "max_residual": residual,
        "calibration": {"s": cal.s, "t": cal.t, "reference": list(cal.reference),
                        "candidates": [list(c) for c in cal.candidates]},
        "ok": residual < 1e-8,
    }


COMMANDS: dict[tuple[str, str], Callable[[argparse.Namespace], dict]] = {
    ("compute", "whittaker"): cmd_whittaker,
    ("compute", "spherical"): cmd_spherical,
    ("verify", "cg-braid"): cmd_cg_braid,
    ("verify", "dl-braid"): cmd_dl_braid,
    ("verify", "symmetrizer"): cmd_symmetrizer,
    ("verify", "cs"): cmd_cs,
    ("verify", "fg"): cmd_fg,
    ("verify", "macdonald"): cmd_macdonald,
    ("verify", "hecke"): cmd_hecke,
    ("verify", "intertwiner"): cmd_intertwiner,
    ("verify", "tau"): cmd_tau,
    ("verify", "scattering"): cmd_scattering,
    ("verify", "involution"): cmd_involution,
    ("oracle", "gauss"): cmd_gauss,
    ("oracle", "rank1"): cmd_rank1,
}


# -- parser ------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cartan", help="A1..D4-style label, e.g. A2, B2, G2")
    p.add_argument("--n", type=int, help="cover degree")
    p.add_argument("--kappa", type=int, default=1, help="Q of a short coroot")
    p.add_argument("--lambda", dest="lambda_", help="coweight as comma-separated coordinates")
    p.add_argument("--q", type=int, help="residue field size for numeric output")
    p.add_argument("--p", type=int, help="prime for the p-adic oracle")
    p.add_argument("--box", type=int, help="half-width of the coweight box")
    p.add_argument("--cutoff", type=int, help="series cutoff")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--pairing", type=int, help="<lam, a> for the rank-one oracle")
    p.add_argument("--per-w", action="store_true", help="also print each T_w piece")
    p.add_argument("--families", type=int, default=100, help="random families for scattering")
    p.add_argument("--output", choices=("json", "text"), default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metawhit", description="Metaplectic Whittaker function toolkit.")
    parser.add_argument("--jobs", metavar="FILE", help="run a batch of jobs from a JSON file")
    parser.add_argument("--output", choices=("json", "text"), default="json")
    groups = parser.add_subparsers(dest="group")
    for group in ("compute", "verify", "oracle"):
        gp = groups.add_parser(group)
        subs = gp.add_subparsers(dest="command", required=True)
        for (g, name) in COMMANDS:
            if g == group:
                _common(subs.add_parser(name))
    return parser


# -- dispatch ----------------------------------------------------------------

def dispatch(argv: Sequence[str]) -> tuple[int, dict]:
    """Run one command and return ``(exit code, report)`` without printing."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    if args.group is None:
        raise UsageError("a command group is required")
    handler = COMMANDS[(args.group, args.command)]
    report = {"command": f"{args.group} {args.command}", "params": _echo(args)}
    report.update(handler(args))
    if args.cartan is not None and args.n is not None:
        report["data"] = _data(args).echo()
    return (0 if report.get("ok", False) else 1), report


def _emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    for key in sorted(report):
        stream.write(f"{key}: {json.dumps(report[key], sort_keys=True)}\n")


def _job_argv(job: dict) -> list[str]:
    if not isinstance(job, dict) or not isinstance(job.get("command"), str):
        raise UsageError(f"malformed job {job!r}")
    argv = job["command"].split()
    params = job.get("params", {})
    if not isinstance(params, dict):
        raise UsageError(f"malformed params in {job!r}")
    for key, val in sorted(params.items()):
        flag = "--" + key.replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
            continue
        if isinstance(val, list):
            val = ",".join(str(x) for x in val)
        argv.append(f"{flag}={val}")
    return argv


def _run_job(argv: list[str]) -> dict:
    try:
        code, report = dispatch(argv)
    except (UsageError, SystemExit) as exc:
        return {"argv": argv, "exit": 2, "ok": False, "error": str(exc)}
    return {"argv": argv, "exit": code, "ok": code == 0, "report": report}


def thread_count() -> int:
    raw = os.environ.get("MWF_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise UsageError(f"MWF_THREADS={raw!r} is not an integer") from exc
    if value < 1:
        raise UsageError("MWF_THREADS must be positive")
    return value


def load_jobs(path: str) -> list[dict]:
    if path == "acceptance":
        text = resources.files("metawhit").joinpath("data/acceptance_jobs.json").read_text()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed job file: {exc}") from exc
    jobs = config.get("jobs") if isinstance(config, dict) else None
    if not isinstance(jobs, list):
        raise UsageError("job file must be an object with a 'jobs' list")
    return jobs


def run_batch(path: str, threads: int | None = None) -> dict:
    """Run every job in a config file; results keep the file order."""
    argvs = [_job_argv(job) for job in load_jobs(path)]
    threads = threads or thread_count()
    if threads == 1 or len(argvs) <= 1:
        results = [_run_job(a) for a in argvs]
    else:
        with ProcessPoolExecutor(max_workers=min(threads, len(argvs))) as pool:
            results = list(pool.map(_run_job, argvs))
    summary: dict[str, Any] = {
        "jobs": len(results),
        "failures": sum(1 for r in results if not r["ok"]),
    }
    if results:
        summary["results"] = [
            {"command": " ".join(r["argv"]), "exit": r["exit"], "ok": r["ok"]} for r in results
        ]
    return summary


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        top = build_parser().parse_args(argv)
        if top.jobs is not None:
            summary = run_batch(top.jobs)
            _emit(summary, top.output)
            return 0 if summary["failures"] == 0 else 1
        code, report = dispatch(argv)
    except UsageError as exc:
        sys.stderr.write(f"metawhit: error: {exc}\n")
        return 2
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    _emit(report, getattr(top, "output", "json"))
    return code


if __name__ == "__main__":
    sys.exit(main())
