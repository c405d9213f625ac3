"""Command line entry point: ``momapf run``, ``momapf suite``, ``momapf scen``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .instance import CostModelSpec, Instance, MapParseError, ScenarioError, make_random_scen, parse_map, parse_scen
from .mocbs import solve
from .oracle import OracleTooBig, costs_of, joint_front_bruteforce

EXIT_OK, EXIT_USAGE, EXIT_TIMEOUT, EXIT_NO_SOLUTION, EXIT_MISMATCH = 0, 1, 2, 3, 4
ALGOS = {"mocbs": "global", "mocbs-t": "tree-by-tree"}

log = logging.getLogger("momapf")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageFailure(Exception):
    pass


def load_instance(map_path, scen_path, n_agents, spec: CostModelSpec) -> Instance:
    try:
        graph = parse_map(Path(map_path).read_text())
        scen = parse_scen(Path(scen_path).read_text(), graph)
        return Instance.build(graph, scen, spec, n_agents)
    except (OSError, MapParseError, ScenarioError, ValueError) as e:
        raise UsageFailure(str(e)) from e


def spec_from(cost_model, objectives, cmax, seed) -> CostModelSpec:
    try:
        if cost_model == "time-risk":
            return CostModelSpec("time-risk", 2, 1, seed)
        return CostModelSpec("random", objectives, cmax, seed)
    except ValueError as e:
        raise UsageFailure(str(e)) from e


def write_csv(path, costs, m):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"cost_{k}" for k in range(m)])
        for c in costs:
            w.writerow(c)


def run_one(inst: Instance, algo, lowlevel, horizon, time_limit, oracle=False, dedup=True) -> tuple[dict, int]:
    res = solve(inst, ALGOS[algo], lowlevel, horizon, time_limit, dedup)
    doc = res.to_json()
    code = {"complete": EXIT_OK, "timeout": EXIT_TIMEOUT, "no_solution": EXIT_NO_SOLUTION}[res.status]
    if oracle:
        try:
            ref = costs_of(joint_front_bruteforce(inst.graph, inst.costs, inst.starts, inst.goals, res.horizon))
        except OracleTooBig as e:
            log.error("oracle unavailable: %s", e)
            doc["oracle"] = "UNAVAILABLE"
            return doc, EXIT_USAGE
        match = res.status != "timeout" and ref == set(res.costs())
        doc["oracle"] = "MATCH" if match else "MISMATCH"
        if not match:
            code = EXIT_MISMATCH
    return doc, code


def cmd_run(args) -> int:
    if args.lowlevel == "boa" and (args.cost_model == "random" and args.objectives != 2):
        raise UsageFailure("--lowlevel boa needs exactly 2 objectives")
    spec = spec_from(args.cost_model, args.objectives, args.cmax, args.seed)
    inst = load_instance(args.map, args.scen, args.agents, spec)
    doc, code = run_one(inst, args.algo, args.lowlevel, args.horizon, args.time_limit, args.oracle, not args.no_dedup)
    text = json.dumps(doc, sort_keys=True, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.csv:
        write_csv(args.csv, [f["cost"] for f in doc["front"]], inst.m)
    if "oracle" in doc:
        print(doc["oracle"], file=sys.stderr)
    return code


def cmd_suite(args) -> int:
    from .suite import load_config, run_suite, write_summary

    try:
        cfg = load_config(args.config)
    except (OSError, ValueError, KeyError) as e:
        raise UsageFailure(f"bad suite config: {e}") from e
    rows, summary = run_suite(cfg, workers=args.workers)
    write_summary(summary, args.out or cfg.get("summary", "summary.csv"))
    if args.details or cfg.get("details"):
        write_summary(rows, args.details or cfg["details"])
    mismatches = sum(1 for r in rows if r.get("oracle") == "MISMATCH")
    for row in summary:
        print(", ".join(f"{k}={v}" for k, v in row.items()))
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_scen(args) -> int:
    try:
        graph = parse_map(Path(args.map).read_text())
    except (OSError, MapParseError) as e:
        raise UsageFailure(str(e)) from e
    text = make_random_scen(graph, args.agents, args.seed, Path(args.map).name)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="momapf", description="Multi-objective multi-agent path finding (MO-CBS).")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="solve one instance")
    r.add_argument("--map", required=True)
    r.add_argument("--scen", required=True)
    r.add_argument("--agents", type=int, required=True)
    r.add_argument("--objectives", type=int, default=2)
    r.add_argument("--cost-model", choices=["random", "time-risk"], default="random")
    r.add_argument("--cmax", type=int, default=2)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--algo", choices=sorted(ALGOS), default="mocbs")
    r.add_argument("--lowlevel", choices=["boa", "namoa-dr"], default="boa")
    r.add_argument("--horizon", type=int, default=None)
    r.add_argument("--time-limit", type=float, default=300.0)
    r.add_argument("--no-dedup", action="store_true", help="expand repeated high-level nodes instead of skipping them")
    r.add_argument("--out")
    r.add_argument("--csv")
    r.add_argument("--oracle", action="store_true", help="cross-check against the joint brute-force oracle")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("suite", help="run a benchmark suite from a YAML/JSON config")
    s.add_argument("config")
    s.add_argument("--out", help="summary CSV")
    s.add_argument("--details", help="per-instance CSV")
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=cmd_suite)

    g = sub.add_parser("scen", help="write a random MovingAI scenario for a map")
    g.add_argument("--map", required=True)
    g.add_argument("--agents", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_scen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageFailure as e:
        print(f"momapf: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
