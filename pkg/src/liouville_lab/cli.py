"""Command-line entry point: ``liouville-lab <subcommand> [flags]``.

Every subcommand builds a JSON-able payload; the emitter writes it as JSON
or CSV with floats at 12 significant digits.  With a golden directory
configured the payload is also recorded or compared as a snapshot.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import chowla, intervals, multiplicative as mult, sieve
from .dirichlet import decomposition as dec
from .dirichlet import meanvalue as mv
from .dirichlet import trials
from .dirichlet.poly import DirichletPolynomial
from .golden import GoldenMismatch, dumps, golden_dir, golden_record, normalize

__all__ = ["RunConfig", "build_parser", "parse_and_dispatch", "main"]

CSV_DEFAULT = {"variance"}


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    output: Optional[Path] = None
    format: str = "json"
    threads: int = 1
    golden_dir: Optional[Path] = None
    golden_name: Optional[str] = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        skip = {"command", "seed", "output", "format", "threads", "golden_dir", "golden_name", "handler", "csv"}
        params = {k: v for k, v in vars(ns).items() if k not in skip}
        fmt = ns.format or ("csv" if ns.command in CSV_DEFAULT else "json")
        return cls(
            ns.command,
            params,
            ns.seed,
            Path(ns.output) if ns.output else None,
            fmt,
            ns.threads,
            golden_dir(ns.golden_dir),
            ns.golden_name,
        )

    @property
    def golden_params(self) -> dict:
        # threads never changes output, so it stays out of the hash
        return {"subcommand": self.subcommand, "seed": self.seed, "format": self.format, **self.params}


# ---------------------------------------------------------------- arg types

def _threads(text: str) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1 or 'auto'")
    return value


def _int(text: str) -> int:
    """Integer flag that also accepts 1e6-style literals."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    return int(value)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}") from None


def _range(text: str) -> list[int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("expected A,B")
    return vals


def _function(text: str) -> mult.MultiplicativeFunctionSpec:
    if text.endswith(".json") or Path(text).is_file():
        return mult.MultiplicativeFunctionSpec.from_json(text)
    return mult.MultiplicativeFunctionSpec.named(text)


# ---------------------------------------------------------------- handlers

def _cmd_sieve(a, cfg):
    tab = sieve.sieve_segment(a.lo, a.hi, threads=cfg.threads)
    out = {
        "lo": a.lo,
        "hi": a.hi,
        "liouville_sum": int(tab.liouville.astype(np.int64).sum()),
        "mobius_sum": int(tab.mobius.astype(np.int64).sum()),
        "squarefree": int(tab.squarefree.sum()),
        "primes": int(tab.is_prime.sum()),
        "prime_powers": int(tab.is_prime_power.sum()),
    }
    if a.emit_cache:
        sieve.write_cache(tab, a.emit_cache)
        out["cache"] = str(a.emit_cache)
    return out


def _cmd_variance(a, cfg):
    stats = intervals.variance_scan(a.x, a.h, a.step, a.weight, a.thresholds, threads=cfg.threads)
    if a.csv:
        Path(a.csv).write_text(_to_csv(stats.row()))
    return stats.to_dict() if cfg.format == "json" else stats.row()


def _cmd_patterns(a, cfg):
    return chowla.pattern_census(a.n, a.k, threads=cfg.threads).as_dict()


def _cmd_correlate(a, cfg):
    return chowla.correlation(a.n, a.shifts, threads=cfg.threads).as_dict()


def _cmd_avg_chowla(a, cfg):
    return {"x": a.x, "h": a.h, "k": a.k, "value": chowla.averaged_chowla(a.x, a.h, a.k)}


def _cmd_log_chowla(a, cfg):
    return {"x": a.x, "shift": a.shift, "value": chowla.log_chowla(a.x, a.shift, threads=cfg.threads)}


def _cmd_discrepancy(a, cfg):
    values = None
    if a.f is not None:
        values = mult.tabulate(_function(a.f), 1, a.n)
    out = chowla.discrepancy_scan(a.n, values).as_dict()
    out["f"] = a.f or "lambda"
    return out


def _load_poly(a) -> DirichletPolynomial:
    if a.coeffs:
        return DirichletPolynomial.read_csv(a.coeffs)
    if a.liouville_range:
        lo, hi = a.liouville_range
        return DirichletPolynomial.liouville(lo, hi)
    raise ValueError("one of --coeffs or --liouville-range is required")


def _check_payload(lhs, rhs, rel_err, params, seed, **extra):
    return {"lhs": lhs, "rhs": rhs, "rel_err": rel_err, "params": params, "seed": seed, **extra}


def _cmd_plancherel(a, cfg):
    quad = mv.QuadratureParams(y_max=a.y_max)
    if a.random:
        rows = trials.plancherel_trials(a.random, a.t, a.trials, cfg.seed)
        worst = max(rows, key=lambda r: r["rel_err"])
        return _check_payload(
            worst["lhs"], worst["rhs"], worst["rel_err"],
            {"T": a.t, "N": a.random, "trials": a.trials}, cfg.seed, trials=rows,
        )
    r = mv.plancherel_check(_load_poly(a), a.t, quad)
    params = {"T": a.t, "y_max": r.y_max, "step": r.step, "quad_err": r.quad_err, "tail_bound": r.tail_bound, "converged": r.converged}
    return _check_payload(r.lhs, r.rhs, r.rel_err, params, cfg.seed)


def _cmd_meanvalue(a, cfg):
    if a.coeffs:
        r = mv.mean_value_ratio(DirichletPolynomial.read_csv(a.coeffs), a.t)
        return _check_payload(r.lhs, r.rhs, None, r.params, cfg.seed, ratio=r.ratio, quad_err=r.quad_err)
    rows = trials.mean_value_trials(a.n, a.t, a.trials, cfg.seed)
    worst = max(rows, key=lambda r: r["ratio"])
    params = {"N": a.n, "T": a.t, "trials": a.trials, "limit": 2 * math.pi + 0.1}
    return _check_payload(worst["lhs"], worst["rhs"], None, params, cfg.seed, max_ratio=worst["ratio"], trials=rows)


def _cmd_large_values(a, cfg):
    step = a.step or 1 / (4 * math.log(a.p))
    poly = DirichletPolynomial.on_primes(a.p)
    E = mv.large_values_measure(poly, a.p, a.t, a.v, step)
    d = E.as_dict()
    return _check_payload(d["measure_estimate"], d["large_values_bound"], None, {"P": a.p, "T": a.t, "V": a.v, **d}, cfg.seed)


def _cmd_hm_ratio(a, cfg):
    rows = trials.hm_trials(a.n, a.t, a.points, a.trials, cfg.seed, a.eps)
    g = max(rows, key=lambda r: r["general_ratio"])
    p = max(rows, key=lambda r: r["prime_ratio"])
    params = {"N": a.n, "T": a.t, "points": a.points, "trials": a.trials, "eps": a.eps}
    return _check_payload(
        g["general_lhs"], g["general_rhs"], None, params, cfg.seed,
        max_general_ratio=g["general_ratio"], max_prime_ratio=p["prime_ratio"], trials=rows,
    )


def _cmd_decompose(a, cfg):
    layers = dec.parse_layers(a.layers)
    out: dict[str, Any] = {"layers": [list(l) for l in layers], "X": a.x}
    if a.verify:
        decomp, poly = dec.build_decomposition(layers, a.x)
        bad = dec.decomposition_mismatches(decomp, poly)
        out["W"] = decomp.W
        out["mismatches"] = int(bad.size)
        out["first_mismatches"] = bad[:10].tolist()
        out["verified"] = bool(bad.size == 0)
    if a.turan:
        out["turan"] = [dec.turan_variance(l, a.x).as_dict() for l in layers]
    if a.restricted:
        out["restricted"] = [dec.restricted_factorization_error(l, a.x).as_dict() for l in layers]
    return out


def _cmd_twisted(a, cfg):
    return mv.twisted_sum_profile(a.kind, a.x, a.t)


def _cmd_wirsing(a, cfg):
    cutoff = a.cutoff or min(a.n, 10**6)
    out = mult.wirsing_mean(_function(a.f), a.n, cutoff).as_dict()
    out["f"] = a.f
    return out


def _cmd_signchanges(a, cfg):
    out = mult.sign_changes(_function(a.f), a.n).as_dict()
    out["f"] = a.f
    return out


def _cmd_smooth(a, cfg):
    if a.samples:
        rng = trials.trial_rng(cfg.seed, 0)
        lo = a.lo or a.n
        hi = a.hi or 2 * a.n
        Ns = np.sort(rng.integers(lo, hi + 1, a.samples))
        off = mult.smooth_offsets(Ns, a.eps, a.c)
        found = off >= 0
        scaled = off[found] / np.sqrt(Ns[found].astype(np.float64))
        return {
            "samples": a.samples,
            "range": [lo, hi],
            "eps": a.eps,
            "C": a.c,
            "all_found": bool(found.all()),
            "missing": int((~found).sum()),
            "max_offset": int(off.max()),
            "max_offset_over_sqrtN": float(scaled.max()) if scaled.size else None,
            "quantiles_over_sqrtN": {str(q): float(np.quantile(scaled, q)) for q in (0.5, 0.9, 0.99)} if scaled.size else {},
        }
    return mult.smooth_in_interval(a.n, a.eps, a.c).as_dict()


def _cmd_shortlong(a, cfg):
    out = mult.short_vs_long(_function(a.f), a.x, a.h, a.step, a.eps).as_dict()
    out["f"] = a.f
    return out


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--seed", type=_int, default=0)
    g.add_argument("--threads", type=_threads, default=1, help="worker threads or 'auto'")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--output", help="write here instead of stdout")
    g.add_argument("--golden-dir", help=f"snapshot directory (env LIOUVILLE_LAB_GOLDEN wins)")
    g.add_argument("--golden-name", help="snapshot name (default: subcommand)")

    p = argparse.ArgumentParser(prog="liouville-lab", description="Numerical experiments on Liouville's function.")
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(handler=handler)
        return sp

    s = add("sieve", _cmd_sieve, "factor-count table summary and optional binary cache")
    s.add_argument("--lo", type=_int, required=True)
    s.add_argument("--hi", type=_int, required=True)
    s.add_argument("--emit-cache")

    s = add("variance", _cmd_variance, "short-interval sum statistics over [X, 2X)")
    s.add_argument("--x", type=_int, required=True)
    s.add_argument("--h", type=_int, required=True)
    s.add_argument("--step", type=_int, default=1)
    s.add_argument("--weight", choices=intervals.WEIGHTS, default="lambda")
    s.add_argument("--thresholds", type=_float_list, default=[])
    s.add_argument("--csv", help="also write the CSV row here")

    s = add("patterns", _cmd_patterns, "sign-pattern census of consecutive values")
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--k", type=_int, required=True)

    s = add("correlate", _cmd_correlate, "shifted product sum")
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--shifts", type=_int_list, required=True)

    s = add("avg-chowla", _cmd_avg_chowla, "shift-averaged correlation")
    s.add_argument("--x", type=_int, required=True)
    s.add_argument("--h", type=_int, required=True)
    s.add_argument("--k", type=_int, required=True)

    s = add("log-chowla", _cmd_log_chowla, "logarithmically weighted two-point correlation")
    s.add_argument("--x", type=_int, required=True)
    s.add_argument("--shift", type=_int, default=1)

    s = add("discrepancy", _cmd_discrepancy, "max partial sum along homogeneous progressions")
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--f", help="named rule or JSON spec file (default lambda)")

    s = add("plancherel", _cmd_plancherel, "Plancherel identity check")
    s.add_argument("--coeffs", help="CSV with columns n,re,im")
    s.add_argument("--liouville-range", type=_range, metavar="A,B")
    s.add_argument("--random", type=_int, metavar="N", help="seeded random trials on 1..N")
    s.add_argument("--trials", type=_int, default=20)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--y-max", type=float)

    s = add("meanvalue", _cmd_meanvalue, "mean-value ratio over seeded trials or a coefficient file")
    s.add_argument("--n", type=_int, default=512)
    s.add_argument("--t", type=float, default=512.0)
    s.add_argument("--trials", type=_int, default=20)
    s.add_argument("--coeffs")

    s = add("large-values", _cmd_large_values, "large-values set of the prime polynomial")
    s.add_argument("--p", type=_int, required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--v", type=float, required=True)
    s.add_argument("--step", type=float)

    s = add("hm-ratio", _cmd_hm_ratio, "restricted-set mean value ratios")
    s.add_argument("--n", type=_int, default=256)
    s.add_argument("--t", type=float, default=1e4)
    s.add_argument("--points", type=_int, default=50)
    s.add_argument("--trials", type=_int, default=20)
    s.add_argument("--eps", type=float, default=0.1)

    s = add("decompose", _cmd_decompose, "layered prime-block coefficient identity")
    s.add_argument("--layers", required=True, help='e.g. "2:10;100:1000"')
    s.add_argument("--x", type=_int, required=True)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--turan", action="store_true")
    s.add_argument("--restricted", action="store_true")

    s = add("twisted", _cmd_twisted, "|sum n^{it}| profile for lambda or the primes")
    s.add_argument("--kind", choices=("liouville", "primes"), required=True)
    s.add_argument("--x", type=_int, required=True)
    s.add_argument("--t", type=_float_list, required=True)

    s = add("wirsing", _cmd_wirsing, "Euler product versus empirical mean")
    s.add_argument("--f", required=True)
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--cutoff", type=_int)

    s = add("signchanges", _cmd_signchanges, "sign changes among nonzero values")
    s.add_argument("--f", required=True)
    s.add_argument("--n", type=_int, required=True)

    s = add("smooth", _cmd_smooth, "smooth numbers just above N")
    s.add_argument("--n", type=_int, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--samples", type=_int, help="sample this many N in [lo, hi] instead")
    s.add_argument("--lo", type=_int)
    s.add_argument("--hi", type=_int)

    s = add("shortlong", _cmd_shortlong, "short-interval means versus the long mean")
    s.add_argument("--f", required=True)
    s.add_argument("--x", type=_int, required=True)
    s.add_argument("--h", type=_int, required=True)
    s.add_argument("--step", type=_int, default=1)
    s.add_argument("--eps", type=float, default=0.1)
    return p


# ---------------------------------------------------------------- emission

def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            continue  # nested tables are JSON-only
        elif isinstance(v, list):
            out[key] = ";".join(str(x) for x in v)
        else:
            out[key] = v
    return out


def _to_csv(payload: Any) -> str:
    rows = payload if isinstance(payload, list) else [payload]
    rows = [_flatten(normalize(r)) for r in rows]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _render(payload: Any, fmt: str) -> str:
    return _to_csv(payload) if fmt == "csv" else dumps(payload)


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cfg = RunConfig.from_args(ns)
    try:
        payload = ns.handler(ns, cfg)
        text = _render(payload, cfg.format)
        if cfg.output:
            cfg.output.write_text(text)
        else:
            sys.stdout.write(text)
        if cfg.golden_dir:
            status = golden_record(cfg.golden_name or cfg.subcommand, payload, cfg.golden_params, cfg.golden_dir)
            print(f"golden {cfg.golden_name or cfg.subcommand}: {status}", file=sys.stderr)
    except GoldenMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"{parser.prog} {cfg.subcommand}: error: {e}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as e:
        print(f"{parser.prog} {cfg.subcommand}: runtime error: {e}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
