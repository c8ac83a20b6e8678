"""``lvint`` command line: integrals, lax, sigma, simulate, verify."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exactalg import LaurentPolynomial
from .poisson import InvalidSpecError, SystemSpec, build_A

DEFAULT_SEED = 20240101
SUITE_NAMES = ("involution", "independence", "rank", "structure")


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    fmt: str = "text"
    out: str | None = None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _poly_json(p: LaurentPolynomial) -> dict:
    return {"nvars": p.nvars, "terms": p.to_records(), "text": str(p)}


# --------------------------------------------------------------------- commands


def cmd_integrals(cfg: RunConfig) -> int:
    from .integrals import integral_family

    spec = SystemSpec(cfg.params["n"], cfg.params["k"])
    fam = integral_family(spec)
    if cfg.fmt == "json":
        print(_dump(fam.to_dict()))
        return 0
    print(f"{spec}: n={spec.n} k={spec.k} m={spec.m} r={spec.r}")
    print("A_k =")
    print(build_A(spec).dump())
    for name, p in fam.members():
        print(f"{name} = {p}")
    for l, h in enumerate(fam.rationals, start=1):
        print(f"  H{l} from {h.label}: hat = {h.hat}, sum over x{list(h.sum_indices)}")
    if fam.casimir is not None:
        print(f"C = {fam.casimir}")
    if fam.p or fam.q:
        print(f"p = {list(fam.p)}  q = {list(fam.q)}")
    return 0


def cmd_lax(cfg: RunConfig) -> int:
    from .lax import char_poly, char_poly_K

    kappa, tail = cfg.params["kappa"], cfg.params["tail"]
    det = char_poly(kappa)
    if tail:
        N = 2 * kappa + 1
        det = det.substitute_zero(range(N - tail + 1, N + 1))
    Ks = char_poly_K(kappa, tail)
    if cfg.fmt == "json":
        print(_dump({
            "kappa": kappa,
            "tail": tail,
            "variables": f"x1..x{2 * kappa + 1 - tail}, lambda, mu",
            "char_poly": _poly_json(det),
            "K": [_poly_json(K) for K in Ks],
        }))
        return 0
    nx = 2 * kappa + 1 - tail
    print(f"det(X + lambda M - mu Id), lambda = x{nx + 1}, mu = x{nx + 2}:")
    print(f"  {det}")
    for i, K in enumerate(Ks):
        print(f"K{i} = {K}")
    return 0


def cmd_sigma(cfg: RunConfig) -> int:
    from .sigma import sigma_identity_checks, sigma_table

    k = cfg.params["k"]
    table = sigma_table(k)
    rep = sigma_identity_checks(k) if cfg.params.get("check") and k >= 2 else None
    if cfg.fmt == "json":
        out = {"k": k, "table": table}
        if rep is not None:
            out["report"] = rep.to_dict()
        print(_dump(out))
    else:
        print(f"sigma^({k}) (rows i, columns j):")
        for row in table:
            print("  " + " ".join(f"{v:4d}" for v in row))
        if rep is not None:
            print(rep.summary())
    return 0 if rep is None or rep.passed else 1


def cmd_simulate(cfg: RunConfig) -> int:
    from .dynamics import integrate, random_initial_points

    spec = SystemSpec(cfg.params["n"], cfg.params["k"])
    x0 = cfg.params.get("x0")
    if x0 is None:
        x0 = random_initial_points(spec.n, 1, cfg.seed)[0]
    rec = integrate(spec, x0, cfg.params["t_end"], cfg.params["tol"], samples=cfg.params["samples"])
    if cfg.out:
        rec.write_csv(cfg.out)
    summary = {
        "spec": {"n": spec.n, "k": spec.k},
        "x0": [float(v) for v in np.asarray(x0, dtype=float)],
        "t_end": rec.times[-1].item(),
        "steps": rec.nsteps,
        "rejected": rec.nrejected,
        "aborted": rec.aborted,
        "max_drift": rec.max_drift(),
        "csv": cfg.out,
    }
    if cfg.fmt == "json":
        print(_dump(summary))
    else:
        print(f"{spec}: {rec.nsteps} steps ({rec.nrejected} rejected), {len(rec.times)} samples")
        for name, d in summary["max_drift"].items():
            print(f"  max drift {name}: {d:.3e}")
        if cfg.out:
            print(f"  trajectory written to {cfg.out}")
    return 0


def _run_suite(job):
    from .verify import SUITES

    name, n, k, seed = job
    spec = SystemSpec(n, k)
    fn = SUITES[name]
    rep = fn(spec) if name == "involution" else fn(spec, seed=seed)
    return (n, k, name), rep


def _jobs(suites, max_n: int, seed: int):
    from .verify import all_specs, suite_applies

    return [
        (name, s.n, s.k, seed)
        for s in all_specs(max_n)
        for name in suites
        if suite_applies(name, s)
    ]


def cmd_verify(cfg: RunConfig) -> int:
    suite = cfg.params["suite"]
    suites = SUITE_NAMES if suite == "all" else (suite,)
    jobs = _jobs(suites, cfg.params["max_n"], cfg.seed)
    threads = max(1, int(os.environ.get("LVINT_THREADS", "1") or 1))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_suite, jobs))
    else:
        results = [_run_suite(j) for j in jobs]
    results.sort(key=lambda item: item[0])
    reports = [rep for _, rep in results]
    ok = all(r.passed for r in reports)
    if cfg.fmt == "json":
        print(_dump({
            "suite": suite,
            "max_n": cfg.params["max_n"],
            "seed": cfg.seed,
            "passed": ok,
            "reports": [r.to_dict() for r in reports],
        }))
    else:
        for r in reports:
            print(r.summary())
        total = sum(len(r.checks) for r in reports)
        print(f"{'ALL PASS' if ok else 'FAILURES'}: {len(reports)} reports, {total} checks")
    return 0 if ok else 1


COMMANDS = {
    "integrals": cmd_integrals,
    "lax": cmd_lax,
    "sigma": cmd_sigma,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


# --------------------------------------------------------------------- parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lvint", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("json", "text"), default="text")

    def nk(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("integrals", help="print the first integrals of LV(n,k)")
    nk(p)
    fmt(p)

    p = sub.add_parser("lax", help="characteristic polynomial of the Lax operator")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--tail", type=int, default=0, help="number of trailing variables set to zero")
    fmt(p)

    p = sub.add_parser("sigma", help="sigma table and its identities")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--check", action="store_true")
    fmt(p)

    p = sub.add_parser("simulate", help="integrate LV(n,k) and record integral drift to CSV")
    nk(p)
    p.add_argument("--t-end", type=float, default=20.0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--x0", type=str, default=None, help="comma separated initial point")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", type=str, default=None)
    fmt(p)

    p = sub.add_parser("verify", help="run verification suites over all (n,k) up to --max-n")
    p.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    fmt(p)
    return parser


def parse_config(argv, parser: argparse.ArgumentParser) -> RunConfig:
    a = parser.parse_args(argv)
    cfg = RunConfig(a.command, fmt=a.format, seed=getattr(a, "seed", DEFAULT_SEED))
    if not 0 <= cfg.seed < 2**64:
        parser.error("--seed must be a 64-bit unsigned integer")
    if a.command in ("integrals", "simulate"):
        try:
            SystemSpec(a.n, a.k)
        except InvalidSpecError as exc:
            parser.error(str(exc))
        cfg.params.update(n=a.n, k=a.k)
    if a.command == "lax":
        if a.kappa < 1:
            parser.error("--kappa must be >= 1")
        if not 0 <= a.tail <= a.kappa:
            parser.error("--tail must lie in 0..kappa")
        cfg.params.update(kappa=a.kappa, tail=a.tail)
    elif a.command == "sigma":
        if a.k < 1:
            parser.error("--k must be >= 1")
        cfg.params.update(k=a.k, check=a.check)
    elif a.command == "simulate":
        x0 = None
        if a.x0 is not None:
            try:
                x0 = [float(v) for v in a.x0.split(",")]
            except ValueError:
                parser.error("--x0 must be comma separated numbers")
            if len(x0) != a.n:
                parser.error(f"--x0 needs {a.n} values")
        if not 1e-14 <= a.tol <= 1e-3:
            parser.error("--tol must lie in [1e-14, 1e-3]")
        if not a.t_end > 0:
            parser.error("--t-end must be positive")
        if a.samples < 100:
            parser.error("--samples must be at least 100")
        cfg.params.update(t_end=a.t_end, tol=a.tol, x0=x0, samples=a.samples)
        cfg.out = a.out
    elif a.command == "verify":
        if a.max_n < 1:
            parser.error("--max-n must be >= 1")
        cfg.params.update(suite=a.suite, max_n=a.max_n)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    cfg = parse_config(argv, parser)
    try:
        return run(cfg)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"lvint {cfg.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
