"""Command-line front end: ``python -m grigorchuk <command> [options]``.

Exit status: 0 success, 2 bad arguments or config, 3 resource cap hit,
4 a checked property failed.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import growth, orbits, presentations, walks
from .groups import OracleParseError, OracleSequence, build_group, classify_oracle
from .tree import BoundaryPoint, CapExceeded

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_CHECK = 0, 2, 3, 4

COMMANDS = ("growth", "contraction", "schreier", "orbit", "inverted-orbit", "walk",
            "psi", "relators", "constants", "classify")


@dataclass
class RunConfig:
    command: str
    oracle: str = "(012)*"
    stage: int = 0
    radius: int = 8
    level: int = 3
    steps: int = 10
    depth: int = 6
    base: str = "(0)"
    measure: str = "uniform"
    method: str = "exact"
    vertex: int = 0
    lam: str = "1/2"
    tol: float = 0.01
    ratio: float = 0.5
    constant: float = 1.0
    anti_level: int = 1
    anti_ratio: float = 2.0
    anti_constant: float = 1.0
    seed: int = 0
    samples: int = 100_000
    path_cap: int = walks.DEFAULT_PATH_CAP
    length_cap: int = 30
    max_elements: int = growth.DEFAULT_MAX_ELEMENTS
    time_budget: Optional[float] = None
    workers: int = 1
    format: str = "json"

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


class CheckFailed(Exception):
    pass


def emit_plot_data(obj) -> str:
    """Columnar CSV for external plotting.

    Growth tables give ``n, ball, log_ball, loglog_ball`` (blank where
    undefined); walk statistics give ``n, P, H, L``.  Empty input yields the
    header only.
    """
    if isinstance(obj, growth.GrowthTable):
        lines = ["n,ball,log_ball,loglog_ball"]
        for n, b, _ in obj.rows():
            lb = math.log(b)
            llb = repr(math.log(lb)) if lb > 0 else ""
            lines.append(f"{n},{b},{lb!r},{llb}")
        return "\n".join(lines) + "\n"
    return walks.stats_to_csv(obj)


def _dump(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _measure(cfg, ctx):
    if cfg.measure == "uniform":
        return walks.uniform(ctx)
    if cfg.measure == "kaimanovich":
        return walks.kaimanovich(ctx)
    weights = json.loads(cfg.measure)
    return walks.Measure.from_words(ctx, {w: Fraction(p) for w, p in weights.items()})


def run(cfg: RunConfig, out=None) -> int:
    """Execute one command; artifacts go to ``out`` (default stdout)."""
    out = out or sys.stdout
    try:
        return _run(cfg, out)
    except (OracleParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (growth.ResourceCap, growth.NeedsLargerTable, CapExceeded) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CheckFailed, presentations.RelatorFailed) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


def _run(cfg: RunConfig, out) -> int:
    if cfg.command not in COMMANDS:
        raise ValueError(f"unknown command {cfg.command!r}")
    if cfg.command == "constants":
        out.write(_dump(dataclasses.asdict(growth.paper_constants())))
        return EXIT_OK
    oracle = OracleSequence.parse(cfg.oracle)
    if cfg.command == "classify":
        out.write(_dump({"oracle": str(oracle), **dataclasses.asdict(classify_oracle(oracle))}))
        return EXIT_OK
    if cfg.command == "relators":
        rs = presentations.generate_relators(cfg.depth)
        presentations.verify_relators(build_group(oracle, cfg.stage), rs)
        if cfg.format == "json":
            out.write(_dump({"depth": cfg.depth, "relators": rs.relators, "verified": True}))
        else:
            out.write(rs.to_text())
        return EXIT_OK

    ctx = build_group(oracle, cfg.stage)
    if cfg.command == "growth":
        table = growth.enumerate_ball(ctx, cfg.radius, workers=cfg.workers,
                                      max_elements=cfg.max_elements,
                                      time_budget=cfg.time_budget)
        if cfg.format == "csv":
            out.write(growth.table_to_csv(table))
        elif cfg.format == "text":
            out.write(emit_plot_data(table))
        else:
            out.write(_dump(growth.table_to_json(table)))
        if not table.complete:
            print(f"incomplete: {table.stop_reason}", file=sys.stderr)
            return EXIT_RESOURCE
        return EXIT_OK

    if cfg.command == "contraction":
        table = growth.enumerate_ball(ctx, cfg.radius, max_elements=cfg.max_elements, strict=True)
        reports = [
            growth.check_contracting(ctx, table, cfg.ratio, cfg.constant,
                                     max_elements=cfg.max_elements),
            growth.check_anti_contracting(ctx, table, cfg.anti_level, cfg.anti_ratio,
                                          cfg.anti_constant, max_elements=cfg.max_elements),
        ]
        data = [dict(dataclasses.asdict(r), ok=r.ok) for r in reports]
        out.write(_dump({"oracle": str(oracle), "radius": cfg.radius, "reports": data}))
        if not all(r.ok for r in reports):
            raise CheckFailed("contraction inequality violated")
        return EXIT_OK

    if cfg.command in ("schreier", "orbit"):
        if cfg.command == "schreier":
            graph = orbits.level_graph(ctx, cfg.level)
        else:
            graph = orbits.orbit_graph_ball(ctx, BoundaryPoint.parse(cfg.base), cfg.radius)
        if cfg.format == "text":
            out.write(orbits.to_edge_list(graph))
        else:
            data = orbits.to_json(graph)
            data["growth"] = orbits.graph_growth(graph)
            out.write(_dump(data))
        return EXIT_OK

    if cfg.command == "inverted-orbit":
        base = BoundaryPoint.parse(cfg.base)
        rows = []
        for n in range(cfg.steps + 1):
            r = orbits.inverted_orbit_growth(ctx, base, n)
            rows.append({"n": n, "delta": r.delta, "witness": r.witness})
        if cfg.format == "csv":
            out.write("n,delta,witness\n" + "".join(f"{r['n']},{r['delta']},{r['witness']}\n" for r in rows))
        else:
            out.write(_dump({"oracle": str(oracle), "base": str(base), "rows": rows}))
        return EXIT_OK

    mu = _measure(cfg, ctx)
    if cfg.command == "walk":
        table = growth.enumerate_ball(ctx, cfg.steps, max_elements=cfg.max_elements, strict=True)
        stats = walks.walk_stats(mu, cfg.steps, table)
        mc = {}
        if cfg.samples:
            for n in range(1, cfg.steps + 1):
                mc[n] = walks.monte_carlo_return(mu, n, cfg.samples, cfg.seed + n,
                                                 cfg.workers).estimate
        if cfg.format in ("csv", "text"):
            out.write(emit_plot_data(stats))
        else:
            out.write(_dump(walks.stats_to_json(mu, stats, cfg.seed, cfg.samples or None, mc)))
        return EXIT_OK

    if cfg.command == "psi":
        if cfg.method == "exact":
            method = walks.TruncatedExact(cfg.length_cap)
        else:
            method = walks.MonteCarlo(cfg.samples, cfg.path_cap, cfg.seed, cfg.workers)
        v = walks.self_similar_check(mu, Fraction(cfg.lam), cfg.tol, cfg.vertex, method)
        words = {g: w for g, w in mu.words.items()}
        words.setdefault(0, "")
        atoms = {words.get(g, f"#{g}"): float(p) for g, p in v.estimate.atoms.items()}
        out.write(_dump({
            "oracle": str(oracle), "measure": {w: str(p) for w, p in mu.as_words().items()},
            "vertex": cfg.vertex, "lambda": str(v.lam), "method": cfg.method,
            "seed": cfg.seed if cfg.method != "exact" else None,
            "projected": atoms, "residual": v.residual, "capped": v.estimate.capped,
            "distance": v.distance, "tol": cfg.tol, "self_similar": v.passed,
        }))
        return EXIT_OK
    raise AssertionError(cfg.command)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grigorchuk", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON RunConfig file; command-line flags override it")
    p.add_argument("--dump-config", action="store_true", help="print the effective config and exit")
    p.add_argument("--metadata", help="write timing metadata (JSON) to this file")
    sub = p.add_subparsers(dest="command", required=True)
    defaults = RunConfig("growth")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        for f in dataclasses.fields(RunConfig):
            if f.name == "command":
                continue
            flag = "--" + f.name.replace("_", "-")
            kind = {"int": int, "float": float, "str": str}.get(str(f.type).replace("Optional[float]", "float"), str)
            sp.add_argument(flag, dest=f.name, type=kind, default=argparse.SUPPRESS,
                            help=f"default: {getattr(defaults, f.name)}")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    cfg_file = args.pop("config", None)
    dump = args.pop("dump_config", False)
    metadata = args.pop("metadata", None)
    try:
        if cfg_file:
            with open(cfg_file) as fh:
                cfg = RunConfig.from_json(fh.read())
            cfg = dataclasses.replace(cfg, **args)
        else:
            cfg = RunConfig(**args)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if dump:
        print(cfg.to_json())
        return EXIT_OK
    start = time.time()
    status = run(cfg)
    if metadata:
        with open(metadata, "w") as fh:
            json.dump({"started": start, "elapsed": time.time() - start, "status": status,
                       "pid": os.getpid()}, fh)
    return status


if __name__ == "__main__":
    sys.exit(main())
