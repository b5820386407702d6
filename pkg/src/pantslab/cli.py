"""Command-line front end.

Every artifact carries a ``meta`` record with the tool version and a hash
of the configuration that produced it.  The hash covers only the fields
that determine the output, so the output directory, the number of worker
processes and the enumeration budget do not change it.

Exit codes
----------
==  =========================================================
0   success
1   unexpected internal error
2   invalid flags or parameters
3   budget exceeded (enumeration budget or tightening step cap)
4   output path not writable
5   input file missing or malformed
6   sampling condition cannot be met
7   decomposition failed or did not validate
==  =========================================================
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_UNWRITABLE = 4
EXIT_INPUT = 5
EXIT_UNSATISFIABLE = 6
EXIT_DECOMPOSITION = 7

EXIT_CODES = {
    EXIT_OK: "success",
    EXIT_INTERNAL: "unexpected internal error",
    EXIT_USAGE: "invalid flags or parameters",
    EXIT_BUDGET: "budget exceeded",
    EXIT_UNWRITABLE: "output path not writable",
    EXIT_INPUT: "input file missing or malformed",
    EXIT_UNSATISFIABLE: "sampling condition cannot be met",
    EXIT_DECOMPOSITION: "decomposition failed or did not validate",
}


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    out: str | None = None
    jobs: int = 1
    budget: int | None = None

    def key(self) -> dict:
        return {"command": self.command, "params": self.params, "seed": self.seed}

    @property
    def config_hash(self) -> str:
        text = json.dumps(self.key(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def meta(self) -> dict:
        return {"tool": "pantslab", "version": __version__,
                "config_hash": self.config_hash, "config": self.key()}

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


# --- artifact writing ------------------------------------------------------------


def _json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _csv(cfg: ExperimentConfig, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# pantslab {__version__} config_hash={cfg.config_hash}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(cfg: ExperimentConfig, files: dict[str, str], primary: str) -> None:
    """Write ``files`` into the output directory, or the primary one to stdout."""
    if cfg.out is None:
        sys.stdout.write(files[primary])
        return
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            tmp = out / (name + ".tmp")
            tmp.write_text(text)
            os.replace(tmp, out / name)
    except OSError as exc:
        raise CliError(EXIT_UNWRITABLE, f"cannot write to {out}: {exc}") from None


# --- commands --------------------------------------------------------------------------


def _cmd_sample(cfg: ExperimentConfig) -> None:
    from .sampler import SampleSpec, UnsatisfiableCondition, histogram_of, sample_surface

    p = cfg.params
    try:
        spec = SampleSpec(p["n"], p["count"], cfg.seed, p["condition"])
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    try:
        samples = sample_surface(spec, cfg.jobs)
    except UnsatisfiableCondition as exc:
        raise CliError(EXIT_UNSATISFIABLE, str(exc)) from None
    meta = json.dumps({"meta": cfg.meta()}, sort_keys=True, separators=(",", ":"))
    lines = [meta] + [json.dumps(x.record(), sort_keys=True, separators=(",", ":"))
                      for x in samples]
    h = histogram_of(samples, spec.n_triangles)
    hist = _csv(cfg, ["genus", "count"], sorted(h.counts.items()))
    _emit(cfg, {"samples.jsonl": "\n".join(lines) + "\n", "genus_histogram.csv": hist},
          "samples.jsonl")


def _cmd_census(cfg: ExperimentConfig) -> None:
    from .canonical import census

    entries = census(cfg.params["n"], cfg.budget, cfg.params["oriented"])
    rows = [[e.code_hex, e.multiplicity, "+".join(map(str, e.genus)), e.components]
            for e in sorted(entries, key=lambda e: e.code_hex)]
    text = _csv(cfg, ["code_hex", "multiplicity", "genus", "components"], rows)
    _emit(cfg, {"census.csv": text}, "census.csv")


def _cmd_decompose(cfg: ExperimentConfig) -> None:
    from .pants import (
        DecompositionError, PantsError, SlideError, TightenError, greedy_decomposition, tighten,
        validate_decomposition,
    )
    from .surface import SurfaceError, read_surface

    path = cfg.params["in"]
    try:
        s = read_surface(path)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from None
    except (SurfaceError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from None
    trace = []
    try:
        dec = greedy_decomposition(s)
        if cfg.params["tighten"]:
            dec = tighten(dec, trace=trace)
        validate_decomposition(dec)
    except TightenError as exc:
        raise CliError(EXIT_BUDGET, str(exc)) from None
    except (DecompositionError, PantsError, SlideError) as exc:
        raise CliError(EXIT_DECOMPOSITION, str(exc)) from None
    data = dec.to_dict()
    data["meta"] = cfg.meta()
    data["tightened"] = cfg.params["tighten"]
    data["slides"] = len(trace)
    _emit(cfg, {"decomposition.json": _json(data)}, "decomposition.json")


def _cmd_bounds(cfg: ExperimentConfig) -> None:
    from .bounds import BoundParams, combinatorial_crossover, hyperbolic_crossover, tight_pants_count_bound

    p = cfg.params
    kind = p["kind"]
    try:
        if kind == "hyperbolic":
            rep = hyperbolic_crossover(BoundParams(g=p["g"], eps=p["eps"], c=p["c"], C=p["C"]))
        elif kind == "combinatorial":
            rep = combinatorial_crossover(p["n"], p["eps"], p["c"])
        else:
            rep = tight_pants_count_bound(BoundParams(g=p["g"], N=p["n"], L=p["l"],
                                                      C=p["C"], c0=p["c0"]))
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    data = rep.to_dict()
    data["meta"] = cfg.meta()
    _emit(cfg, {f"bounds-{kind}.json": _json(data)}, f"bounds-{kind}.json")


def _cmd_oracle(cfg: ExperimentConfig) -> None:
    from . import bounds, oracles

    p = cfg.params
    kind, n = p["kind"], p["n"]
    if kind == "brown":
        if not 1 <= n <= 8:
            raise CliError(EXIT_USAGE, "brown oracle needs 1 <= n <= 8")
        header = ["n", "j", "brute_force", "formula", "as_printed", "equal"]
        rows = []
        for m in range(1, n + 1):
            counts = oracles.rooted_disks(m)
            for j in range((m - 1) % 2, m, 2):
                brute = sum(c for (nb, _), c in counts.items() if nb == j + 3)
                formula = bounds.brown_theta(m, j)
                rows.append([m, j, brute, formula, str(bounds.brown_theta_as_printed(m, j)),
                             brute == formula])
    elif kind == "matchings":
        if not 0 <= n <= 14 or n % 2:
            raise CliError(EXIT_USAGE, "matchings oracle needs an even n <= 14")
        header = ["m", "brute_force", "formula", "equal"]
        rows = []
        for m in range(0, n + 1, 2):
            brute, formula = oracles.count_matchings(m), bounds.perfect_matchings(m)
            rows.append([m, brute, formula, brute == formula])
    else:
        if not 2 <= n <= 8 or n % 2:
            raise CliError(EXIT_USAGE, "trivalent oracle needs an even vertex count 2..8")
        header = ["vertices", "labeled", "classes", "connected", "log_low", "log_high", "within"]
        rows = []
        for v in range(2, n + 1, 2):
            t = bounds.trivalent_graph_counts(v // 2)
            lo, hi = t.class_bounds
            rows.append([v, t.labeled, t.exact_small, t.exact_connected,
                         f"{lo:.12g}", f"{hi:.12g}", t.within_bounds()])
    _emit(cfg, {f"oracle-{kind}.csv": _csv(cfg, header, rows)}, f"oracle-{kind}.csv")


COMMANDS = {
    "sample": _cmd_sample,
    "census": _cmd_census,
    "decompose": _cmd_decompose,
    "bounds": _cmd_bounds,
    "oracle": _cmd_oracle,
}


def run(cfg: ExperimentConfig) -> int:
    """Execute a configuration; returns the exit status."""
    from .canonical import BudgetExceeded

    try:
        COMMANDS[cfg.command](cfg)
    except CliError as exc:
        print(f"pantslab: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"pantslab: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"pantslab: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pantslab", description=__doc__.split("\n")[0],
                 epilog="exit codes: " + "; ".join(f"{k} {v}" for k, v in EXIT_CODES.items()))
    ap.add_argument("--version", action="version", version=f"pantslab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seed=False):
        p.add_argument("--out", help="output directory (default: primary artifact to stdout)")
        p.add_argument("--jobs", type=_positive, default=1)
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sample", help="seeded random surfaces (JSONL) and genus histogram (CSV)")
    p.add_argument("--n", type=_positive, required=True, help="number of triangles")
    p.add_argument("--count", type=_positive, default=100)
    p.add_argument("--condition", default=None, help="any | connected | genus:LO-HI")
    p.add_argument("--g", type=int, default=None, help="shorthand for --condition genus:G-G")
    common(p, seed=True)

    p = sub.add_parser("census", help="isomorphism classes of all gluings (CSV)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--budget", type=_positive, default=None)
    p.add_argument("--oriented", action="store_true", help="do not identify mirror images")
    common(p)

    p = sub.add_parser("decompose", help="greedy pants decomposition of a surface file (JSON)")
    p.add_argument("--in", dest="inp", required=True, help="surface JSON file")
    p.add_argument("--tighten", action="store_true")
    common(p)

    p = sub.add_parser("bounds", help="bound reports (JSON)")
    p.add_argument("kind", choices=["hyperbolic", "combinatorial", "pants-count"])
    p.add_argument("--g", type=int, default=10)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--l", type=float, default=None, help="total length (default 3g - 3)")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--C", dest="C", type=float, default=1.0)
    p.add_argument("--c0", type=float, default=1.0)
    common(p)

    p = sub.add_parser("oracle", help="brute force against closed forms (CSV)")
    p.add_argument("kind", choices=["brown", "matchings", "trivalent"])
    p.add_argument("--n", type=int, default=None)
    common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    cmd = ns.command
    seed = None
    if cmd == "sample":
        if ns.condition is not None and ns.g is not None:
            raise CliError(EXIT_USAGE, "give either --condition or --g")
        cond = ns.condition or (f"genus:{ns.g}-{ns.g}" if ns.g is not None else "any")
        params = {"n": ns.n, "count": ns.count, "condition": cond}
        seed = ns.seed
    elif cmd == "census":
        params = {"n": ns.n, "oriented": ns.oriented}
    elif cmd == "decompose":
        params = {"in": ns.inp, "tighten": ns.tighten}
    elif cmd == "bounds":
        params = {"kind": ns.kind, "eps": ns.eps, "c": ns.c, "C": ns.C}
        if ns.kind == "combinatorial":
            params["n"] = ns.n
        else:
            params["g"] = ns.g
        if ns.kind == "pants-count":
            params.update(n=ns.n, l=ns.l if ns.l is not None else 3 * ns.g - 3, c0=ns.c0)
            del params["eps"], params["c"]
    else:
        default = {"brown": 6, "matchings": 12, "trivalent": 8}[ns.kind]
        params = {"kind": ns.kind, "n": default if ns.n is None else ns.n}
    return ExperimentConfig(cmd, params, seed, ns.out, ns.jobs, getattr(ns, "budget", None))


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = config_from_args(ns)
    except CliError as exc:
        print(f"pantslab: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"pantslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except Exception as exc:  # pragma: no cover - reported, not hidden
        print(f"pantslab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
