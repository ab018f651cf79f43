"""Command-line surface: evaluator, table builder, solver, KZ builder,
and the relation verifier with JSON reports.

Exit status contract: 0 verification passed, 1 a residual exceeded its
tolerance, 2 usage or I/O error.  Reports embed the full run configuration
and cache digest so a verdict can be reproduced from the file alone; the
elapsed-time field is the only part allowed to differ between reruns.
"""

import argparse
import dataclasses
import json
import sys
import time
from fractions import Fraction
from typing import Optional, Tuple

from mpmath import mp

from . import relations as rel
from .braid import (
    hexagon_residuals,
    is_degenerate_associator,
    pentagon_residual,
    two_cycle_residual,
)
from .kz import build_kz, grouplike_defect, save_kz
from .mzv import DEFAULT_DIGITS, MZVCache, mzv_eval, mzv_table
from .ncseries import load_series, parse_series_header, save_series, zeta_of
from .scalars import GUARD_DIGITS, to_decimal
from .solver import mu_from_phi, solve_generic

DEFAULT_CACHE = "mzv_cache.txt"


@dataclasses.dataclass
class RunConfig:
    max_weight: int
    digits: int = DEFAULT_DIGITS
    seed: Optional[int] = None
    n_values: Tuple[int, ...] = ()
    which: str = ""
    phi_source: str = ""
    cache_path: str = DEFAULT_CACHE
    report_path: Optional[str] = None
    tol_exp: Optional[int] = None

    def validate(self, numeric: bool, uses_tolerance: bool = False) -> None:
        if self.max_weight < 2:
            raise ValueError("max weight must be at least 2")
        if numeric:
            if self.digits < 30:
                raise ValueError("numeric runs need at least 30 digits")
            if uses_tolerance:
                te = self.tol_exp if self.tol_exp is not None else 40
                if te > self.digits - 10:
                    raise ValueError(
                        f"tolerance exponent {te} exceeds digits - 10 = {self.digits - 10}; "
                        "the verdict would not be backed by working precision"
                    )

    def echo(self) -> dict:
        out = dataclasses.asdict(self)
        out["n_values"] = list(self.n_values)
        return out


def _parse_index(text: str) -> tuple:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse index {text!r}; expected comma-separated integers")


def _parse_n_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse N list {text!r}; expected comma-separated integers")


# -- mzv ---------------------------------------------------------------------

def cmd_mzv_eval(args) -> int:
    index = _parse_index(args.index)
    cache = MZVCache(args.cache) if args.cache else None
    # evaluate with guard headroom so every requested digit is backed
    res = mzv_eval(index, digits=args.digits + GUARD_DIGITS, cache=cache)
    print(to_decimal(res.value, args.digits))
    return 0


def cmd_mzv_table(args) -> int:
    cfg = RunConfig(max_weight=args.max_weight, digits=args.digits, cache_path=args.cache)
    cfg.validate(numeric=True)
    cache = MZVCache(args.cache)
    table = mzv_table(args.max_weight, digits=args.digits, cache=cache)
    print(f"{len(table)} values through weight {args.max_weight}; "
          f"cache {args.cache}: {len(cache)} records")
    return 0


# -- assoc -------------------------------------------------------------------

def cmd_assoc_solve(args) -> int:
    cfg = RunConfig(max_weight=args.max_weight, seed=args.seed)
    cfg.validate(numeric=False)
    mu2 = None
    if args.hexagon_mu is not None:
        mu2 = Fraction(args.hexagon_mu) ** 2
    t0 = time.perf_counter()
    cand = solve_generic(args.max_weight, seed=args.seed, hexagon_mu2=mu2)
    out = args.out or f"phi_W{args.max_weight}_seed{args.seed}.series.txt"
    save_series(cand.phi, out)
    sidecar = out + ".dims.json"
    doc = {
        "max_weight": args.max_weight,
        "seed": args.seed,
        "source": cand.source,
        "mu_squared": str(cand.mu2),
        "dims": {str(n): d for n, d in sorted(cand.dims.items())},
        "elapsed_ms": int((time.perf_counter() - t0) * 1000),
    }
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out} and {sidecar}; free dimensions {doc['dims']}")
    return 0


def cmd_assoc_check(args) -> int:
    with open(args.path, "r", encoding="utf-8") as fh:
        header = parse_series_header(fh.readline())
    phi = load_series(args.path)
    cap = args.max_weight if args.max_weight is not None else min(phi.W, 8)
    phi = phi.truncate(min(cap, phi.W))
    numeric = header["kind"] == "decimal"
    if numeric:
        digits = int(header["digits"])
        tol_exp = args.tol_exp if args.tol_exp is not None else max(10, digits - 10)
        with mp.workdps(digits + 10):
            tol = mp.mpf(10) ** (-tol_exp)
            mu2 = mu_from_phi(phi)
            results = _residual_maxima(phi, mu2, one=mp.mpf(1))
            ok = all(v <= tol for v in results.values())
            degen = abs(mu2) < tol
            shown = {k: mp.nstr(v, 3) for k, v in results.items()}
        tolerance = f"1e-{tol_exp}"
    else:
        mu2 = mu_from_phi(phi)
        results = _residual_maxima(phi, mu2, one=Fraction(1))
        ok = all(v == 0 for v in results.values())
        degen = is_degenerate_associator(phi)
        shown = {k: str(v) for k, v in results.items()}
        tolerance = "exact"
    for name, v in shown.items():
        print(f"{name:<12} max residual {v}")
    print(f"tolerance    {tolerance}")
    print(f"degenerate associator (mu = 0): {degen}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _residual_maxima(phi, mu2, one) -> dict:
    ra, rb = hexagon_residuals(phi, mu2, one=one)
    return {
        "grouplike": grouplike_defect(phi),
        "pentagon": pentagon_residual(phi).max_abs(),
        "hexagon_a": ra.max_abs(),
        "hexagon_b": rb.max_abs(),
        "two_cycle": two_cycle_residual(phi).max_abs(),
    }


# -- kz ----------------------------------------------------------------------

def cmd_kz_build(args) -> int:
    cfg = RunConfig(max_weight=args.max_weight, digits=args.digits, cache_path=args.cache)
    cfg.validate(numeric=True)
    cache = MZVCache(args.cache)
    t0 = time.perf_counter()
    t = build_kz(W=args.max_weight, digits=args.digits, cache=cache)
    save_kz(t, args.out)
    with mp.workdps(args.digits + 10):
        mu2s = mp.nstr(t.mu2, 25)
    print(f"wrote {args.out} (W={t.W}, digits={t.digits}, mu^2={mu2s}) "
          f"in {time.perf_counter() - t0:.1f}s; cache digest {cache.digest()[:16]}")
    return 0


# -- relations ---------------------------------------------------------------

def _provider_exact(cand):
    phi = cand.phi
    return (lambda k: zeta_of(phi, k)), cand.mu2, Fraction(1)


def cmd_relations_verify(args) -> int:
    which = args.which.upper()
    if which not in ("A", "B", "C", "D"):
        raise ValueError(f"unknown relation {args.which!r}; expected A, B, C, or D")
    n_values = _parse_n_list(args.N) if args.N else ()
    if which == "D" and n_values:
        raise ValueError("relation D has no N parameter; drop --N")
    if which != "D" and not n_values:
        raise ValueError(f"relation {which} needs --N (comma-separated integers)")
    cfg = RunConfig(
        max_weight=args.max_weight,
        digits=args.digits,
        seed=args.seed,
        n_values=n_values,
        which=which,
        phi_source=args.phi,
        cache_path=args.cache,
        report_path=args.report,
        tol_exp=args.tol_exp,
    )

    t0 = time.perf_counter()
    cache_digest = None
    if args.phi == "generic":
        cfg.validate(numeric=False)
        seed = args.seed if args.seed is not None else 0
        cfg.seed = seed
        cand = solve_generic(args.max_weight, seed=seed)
        zeta_fn, mu2, one = _provider_exact(cand)
        source, tol, work_dps = cand.source, 0, None
    elif args.phi == "kz":
        cfg.validate(numeric=True, uses_tolerance=True)
        cache = MZVCache(args.cache)
        t = build_kz(W=args.max_weight, digits=args.digits, cache=cache)
        cache_digest = cache.digest()
        phi = t.phi
        zeta_fn = lambda k: zeta_of(phi, k)
        mu2, one = t.mu2, mp.mpf(1)
        source, work_dps = "kz", args.digits + 10
        tol_exp = args.tol_exp if args.tol_exp is not None else 40
        tol = mp.mpf(10) ** (-tol_exp)
    else:
        with open(args.phi, "r", encoding="utf-8") as fh:
            header = parse_series_header(fh.readline())
        phi = load_series(args.phi)
        if phi.W < args.max_weight:
            raise ValueError(
                f"series file covers weight {phi.W} < requested {args.max_weight}")
        zeta_fn = lambda k: zeta_of(phi, k)
        if header["kind"] == "decimal":
            cfg.digits = int(header["digits"])
            cfg.validate(numeric=True, uses_tolerance=True)
            work_dps = cfg.digits + 10
            with mp.workdps(work_dps):
                mu2 = mu_from_phi(phi)
            one = mp.mpf(1)
            source = f"file:{args.phi}"
            tol_exp = args.tol_exp if args.tol_exp is not None else 40
            tol = mp.mpf(10) ** (-tol_exp)
        else:
            cfg.validate(numeric=False)
            mu2, one = mu_from_phi(phi), Fraction(1)
            source, tol, work_dps = f"file:{args.phi}", 0, None

    def run_all():
        reports = []
        if which == "A":
            for n in n_values:
                reports.append(rel.verify_A(zeta_fn, mu2, n, args.max_weight,
                                            tol=tol, one=one, phi_source=source))
        elif which == "B":
            for n in n_values:
                reports.append(rel.verify_B(zeta_fn, mu2, n, args.max_weight,
                                            tol=tol, one=one, phi_source=source))
        elif which == "C":
            for n in n_values:
                reports.append(rel.verify_C(zeta_fn, mu2, n, args.max_weight,
                                            tol=tol, one=one, phi_source=source,
                                            convention=args.convention,
                                            f0=Fraction(args.f0)))
        else:
            reports.append(rel.verify_D(zeta_fn, mu2, args.max_weight,
                                        tol=tol, one=one, phi_source=source))
        return reports

    if work_dps is not None:
        with mp.workdps(work_dps):
            reports = run_all()
    else:
        reports = run_all()

    doc = _merge_reports(which, reports, cfg, cache_digest, t0)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
        for r in reports:
            tag = f" N={r.N}" if r.N is not None else ""
            print(f"relation {which}{tag}: {'pass' if r.passed else 'FAIL'}")
        print(f"report written to {args.report}")
    else:
        sys.stdout.write(text)
    return 0 if doc["pass"] else 1


def _merge_reports(which, reports, cfg: RunConfig, cache_digest, t0) -> dict:
    multi = len(reports) > 1
    residuals = []
    for r in reports:
        for entry in r.residuals:
            e = dict(entry)
            if multi:
                e["N"] = r.N
            residuals.append(e)
    doc = {
        "relation": which,
        "phi_source": reports[0].phi_source,
        "mu": reports[0].mu,
        "N": (list(cfg.n_values) if multi else reports[0].N),
        "residuals": residuals,
        "tolerance": reports[0].tolerance,
        "pass": all(r.passed for r in reports),
        "elapsed_ms": int((time.perf_counter() - t0) * 1000),
        "provenance": {
            "config": cfg.echo(),
            "cache_digest": cache_digest,
        },
    }
    if which == "C":
        doc["convention"] = reports[0].convention
        doc["calibrations"] = [
            dict(r.calibration, N=r.N) for r in reports
        ]
        doc["provenance"]["convention"] = reports[0].convention
    return doc


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="assoclab",
        description="exact and numeric workbench for truncated associators "
                    "and zeta-value relations",
    )
    sub = p.add_subparsers(dest="group", required=True)

    mz = sub.add_parser("mzv", help="numerical zeta evaluator and cache")
    mzs = mz.add_subparsers(dest="cmd", required=True)
    ev = mzs.add_parser("eval", help="evaluate one admissible index")
    ev.add_argument("--index", required=True, help="comma-separated index, e.g. 2,3")
    ev.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    ev.add_argument("--cache", default=None)
    ev.set_defaults(func=cmd_mzv_eval)
    tb = mzs.add_parser("table", help="evaluate all admissible indices up to a weight")
    tb.add_argument("--max-weight", type=int, required=True)
    tb.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    tb.add_argument("--cache", default=DEFAULT_CACHE)
    tb.set_defaults(func=cmd_mzv_table)

    asc = sub.add_parser("assoc", help="rational associator solver and checker")
    ascs = asc.add_subparsers(dest="cmd", required=True)
    so = ascs.add_parser("solve", help="solve pentagon+shuffle degree by degree")
    so.add_argument("--max-weight", type=int, required=True)
    so.add_argument("--seed", type=int, default=0)
    so.add_argument("--hexagon-mu", default=None,
                    help="rational mu; adds both hexagons at mu^2 as constraints")
    so.add_argument("--out", default=None)
    so.set_defaults(func=cmd_assoc_solve)
    ck = ascs.add_parser("check", help="run pentagon/hexagon/2-cycle/group-like checks")
    ck.add_argument("path", help="series file")
    ck.add_argument("--max-weight", type=int, default=None,
                    help="cap the check degree (default min(W, 8))")
    ck.add_argument("--tol-exp", type=int, default=None)
    ck.set_defaults(func=cmd_assoc_check)

    kzp = sub.add_parser("kz", help="numeric KZ associator")
    kzs = kzp.add_subparsers(dest="cmd", required=True)
    kb = kzs.add_parser("build", help="build and serialize the truncation")
    kb.add_argument("--max-weight", type=int, required=True)
    kb.add_argument("--digits", type=int, default=50)
    kb.add_argument("--cache", default=DEFAULT_CACHE)
    kb.add_argument("--out", required=True)
    kb.set_defaults(func=cmd_kz_build)

    rl = sub.add_parser("relations", help="verify the four relation families")
    rls = rl.add_subparsers(dest="cmd", required=True)
    rv = rls.add_parser("verify")
    rv.add_argument("--which", required=True, help="A, B, C, or D")
    rv.add_argument("--phi", required=True, help="kz | generic | path to a series file")
    rv.add_argument("--max-weight", type=int, required=True)
    rv.add_argument("--N", default=None, help="comma-separated integers")
    rv.add_argument("--digits", type=int, default=50)
    rv.add_argument("--seed", type=int, default=None)
    rv.add_argument("--cache", default=DEFAULT_CACHE)
    rv.add_argument("--tol-exp", type=int, default=None)
    rv.add_argument("--convention", default="resummed", choices=rel.C_CONVENTIONS)
    rv.add_argument("--f0", default="2", help="degenerate-factor value for printed conventions")
    rv.add_argument("--report", default=None)
    rv.set_defaults(func=cmd_relations_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
