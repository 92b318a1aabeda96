"""Command-line front end.

    qsum run    --n 3 --k 3 --r 1 --values 1,2,0 --seed 7
    qsum dist   --n 3 --k 3 --r 1 --values 1,2,0
    qsum sweep  --n 12 --k 3
    qsum lemma3 --k 16 --s 4 --A 0
    qsum trace  --which prop2 --values 1,2,0
    qsum verify [--extended]

Exit codes: 0 success, 1 verification failure, 2 malformed arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import analysis
from .algorithm import TRACE_SHAPES, run_sum, trace_small
from .operators import FunctionTable
from .verify import GridSpec, check_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """12 significant digits, '.' separator; stable across runs."""
    return f"{float(x):.12g}"


def frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class CommandConfig:
    subcommand: str
    n: Optional[int] = None
    k: Optional[int] = None
    r: Optional[int] = None
    q: Optional[int] = None
    s: Optional[int] = None
    A: int = 0
    which: Optional[str] = None
    values: Optional[tuple] = None
    seed: Optional[int] = None
    output: str = "json"
    out_path: Optional[str] = None
    extended: bool = False


def _parse_values(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise UsageError(f"--values must be comma-separated integers: {text!r}") from exc


def _load_values_file(path: str) -> tuple[int, int, tuple]:
    try:
        data = json.loads(Path(path).read_text())
        return int(data["n"]), int(data["k"]), tuple(int(v) for v in data["values"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read function table from {path}: {exc}") from exc


def config_from_args(ns: argparse.Namespace) -> CommandConfig:
    cfg = CommandConfig(
        subcommand=ns.command,
        n=getattr(ns, "n", None),
        k=getattr(ns, "k", None),
        r=getattr(ns, "r", None),
        q=getattr(ns, "q", None),
        s=getattr(ns, "s", None),
        A=getattr(ns, "A", 0) or 0,
        which=getattr(ns, "which", None),
        seed=getattr(ns, "seed", None),
        output=getattr(ns, "output", None) or ("csv" if ns.command in ("sweep", "lemma3") else "json"),
        out_path=getattr(ns, "out", None),
        extended=getattr(ns, "extended", False),
    )
    values_file = getattr(ns, "values_file", None)
    if values_file:
        n, k, vals = _load_values_file(values_file)
        cfg.n = cfg.n if cfg.n is not None else n
        cfg.k = cfg.k if cfg.k is not None else k
        cfg.values = vals
    if getattr(ns, "values", None):
        cfg.values = _parse_values(ns.values)  # inline wins over file
    _validate(cfg)
    return cfg


def _validate(cfg: CommandConfig) -> None:
    need = {
        "run": ("n", "k", "r"),
        "dist": ("n", "k", "r"),
        "sweep": ("n", "k"),
        "lemma3": ("k", "s"),
        "trace": ("which",),
        "verify": (),
    }[cfg.subcommand]
    if cfg.subcommand == "trace" and cfg.which in TRACE_SHAPES:
        n, k = TRACE_SHAPES[cfg.which]
        cfg.n = cfg.n if cfg.n is not None else n
        cfg.k = cfg.k if cfg.k is not None else k
        if cfg.values is None:
            raise UsageError("trace needs --values")
    missing = [name for name in need if getattr(cfg, name) is None]
    if missing:
        raise UsageError(f"{cfg.subcommand} requires --{', --'.join(missing)}")
    if cfg.values is not None and cfg.n is not None and len(cfg.values) != cfg.n:
        raise UsageError(f"--values has {len(cfg.values)} entries but n = {cfg.n}")
    if cfg.k is not None and cfg.k < 2:
        raise UsageError("k must be >= 2")
    if cfg.n is not None and cfg.n < 1:
        raise UsageError("n must be >= 1")
    if cfg.r is not None and cfg.n is not None and not 1 <= cfg.r <= cfg.n:
        raise UsageError("r must satisfy 1 <= r <= n")
    if cfg.q is not None and not 0 <= cfg.q <= cfg.n:
        raise UsageError("q must satisfy 0 <= q <= n")
    if cfg.subcommand == "lemma3" and not (1 <= cfg.s <= cfg.k and 0 <= cfg.A < cfg.k):
        raise UsageError("lemma3 needs 1 <= s <= k and 0 <= A < k")


def _table(cfg: CommandConfig) -> FunctionTable:
    if cfg.values is not None:
        try:
            return FunctionTable(cfg.k, cfg.values)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    rng = np.random.default_rng(cfg.seed if cfg.seed is not None else 0)
    return FunctionTable.random(cfg.n, cfg.k, rng)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_run(cfg: CommandConfig) -> tuple[int, str]:
    f = _table(cfg)
    report = run_sum(f, cfg.r, seed=cfg.seed)
    out = report.to_dict()
    out["theorem5"] = frac(analysis.success_probability(f.n, f.k, cfg.r))
    out["values_source"] = "given" if cfg.values is not None else "random"
    return EXIT_OK, _json(out)


def cmd_dist(cfg: CommandConfig) -> tuple[int, str]:
    f = _table(cfg)
    report = run_sum(f, cfg.r)
    probs = report.distribution.probs
    if cfg.output == "csv":
        return EXIT_OK, _csv(["y", "prob"], [(y, fmt(p)) for y, p in enumerate(probs)])
    out = {
        "n": f.n,
        "k": f.k,
        "r": cfg.r,
        "values": list(f.values),
        "true_sum": report.true_sum,
        "distribution": [float(p) for p in probs],
    }
    return EXIT_OK, _json(out)


def cmd_sweep(cfg: CommandConfig) -> tuple[int, str]:
    n, k = cfg.n, cfg.k
    step, smooth = analysis.figure1_curves(n, k)
    pq = [analysis.vandam_identify_prob(n, k, q) for q in range(n + 1)]
    qs = range(n + 1) if cfg.q is None else [cfg.q]
    if cfg.output == "json":
        rows = [
            {"q": q, "theorem5": frac(step.at(q)), "vandam_pq": frac(pq[q]), "vandam_bound": frac(smooth.at(q))}
            for q in qs
        ]
        return EXIT_OK, _json({"n": n, "k": k, "rows": rows})
    rows = [(q, fmt(step.at(q)), fmt(pq[q]), fmt(smooth.at(q))) for q in qs]
    return EXIT_OK, _csv(["q", "theorem5", "vandam_pq", "vandam_bound"], rows)


def cmd_lemma3(cfg: CommandConfig) -> tuple[int, str]:
    k, s, A = cfg.k, cfg.s, cfg.A
    probs = analysis.lemma3_distribution(k, s, A)
    if cfg.output == "json":
        return EXIT_OK, _json({"k": k, "s": s, "A": A, "probs": [float(p) for p in probs]})
    return EXIT_OK, _csv(["y", "prob"], [(y, fmt(p)) for y, p in enumerate(probs)])


def cmd_trace(cfg: CommandConfig) -> tuple[int, str]:
    f = _table(cfg)
    try:
        states = trace_small(f, cfg.which)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    steps = [
        {
            "step": i,
            "amplitudes": [[float(fmt(a.real)), float(fmt(a.imag))] for a in st.amps],
        }
        for i, st in enumerate(states)
    ]
    return EXIT_OK, _json({"which": cfg.which, "n": f.n, "k": f.k, "values": list(f.values), "steps": steps})


def cmd_verify(cfg: CommandConfig) -> tuple[int, str]:
    spec = GridSpec.extended() if cfg.extended else GridSpec.from_env()
    report = check_suite(spec)
    return (EXIT_OK if report.passed else EXIT_FAIL), report.to_json() + "\n"


COMMANDS = {
    "run": cmd_run,
    "dist": cmd_dist,
    "sweep": cmd_sweep,
    "lemma3": cmd_lemma3,
    "trace": cmd_trace,
    "verify": cmd_verify,
}


def run_command(cfg: CommandConfig) -> tuple[int, str]:
    return COMMANDS[cfg.subcommand](cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsum", description="Exact simulation of the adaptive quantum SUM algorithm.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, table=False, output=True):
        if table:
            p.add_argument("--values", help="comma-separated f(0),...,f(n-1)")
            p.add_argument("--values-file", help='JSON file {"n":..,"k":..,"values":[..]}')
        if output:
            p.add_argument("--output", choices=("csv", "json"))
        p.add_argument("--out", help="write to this file instead of stdout")

    for name in ("run", "dist"):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--seed", type=int)
        common(p, table=True, output=name == "dist")

    p = sub.add_parser("sweep", help="success-probability curves for q = 0..n")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--q", type=int, help="emit only this query count")
    common(p)

    p = sub.add_parser("lemma3", help="closed-form outcome law of |A_s> over y")
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--A", "--a", dest="A", type=int, default=0)
    common(p)

    p = sub.add_parser("trace", help="step-by-step states of the small algorithms")
    p.add_argument("--which", choices=sorted(TRACE_SHAPES))
    common(p, table=True, output=False)

    p = sub.add_parser("verify", help="run the exhaustive verification suite")
    p.add_argument("--extended", action="store_true", help="n, k <= 5 grid (also QSUM_GRID_EXTENDED=1)")
    common(p, output=False)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = config_from_args(ns)
        code, text = run_command(cfg)
    except UsageError as exc:
        print(f"qsum {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out_path:
        Path(cfg.out_path).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
