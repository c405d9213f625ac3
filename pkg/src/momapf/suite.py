"""Benchmark suites: a grid of (map, scenario, seed, N, algorithm, low level) runs summarised as CSV.

Config (YAML or JSON)::

    maps:
      - map: maps/empty-16-16.map
        scens: [scen/a.scen, scen/b.scen]   # or generate: {count: 25, seed: 0}
    agents: [2, 4]
    objectives: 2
    cost_model: random        # or time-risk
    cmax: 2
    seeds: [0]                # cost seeds, crossed with scenarios
    algos: [mocbs, mocbs-t]
    lowlevels: [boa]
    time_limit: 60
    horizon: null
    oracle: false
    dedup: true               # skip repeated high-level nodes
    workers: 1
"""
from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .instance import CostModelSpec, Instance, make_random_scen, parse_map, parse_scen

METRICS = ("n_root", "n_conflict", "n_filter", "n_sol")


def load_config(path) -> dict:
    text = Path(path).read_text()
    if str(path).endswith((".yaml", ".yml")):
        import yaml

        cfg = yaml.safe_load(text)
    else:
        cfg = json.loads(text)
    if not isinstance(cfg, dict) or "maps" not in cfg:
        raise ValueError("config needs a 'maps' list")
    cfg["_base"] = str(Path(path).resolve().parent)
    return cfg


def _resolve(base, p):
    p = Path(p)
    return p if p.is_absolute() else Path(base) / p


def expand_jobs(cfg: dict) -> list:
    """Deterministically ordered list of job dicts."""
    base = cfg.get("_base", ".")
    seeds = cfg.get("seeds", [0])
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    agents = cfg.get("agents", [2])
    if isinstance(agents, int):
        agents = [agents]
    jobs = []
    for entry in cfg["maps"]:
        map_path = _resolve(base, entry["map"])
        map_text = map_path.read_text()
        scens = []
        if "scens" in entry:
            scens = [(str(s), _resolve(base, s).read_text()) for s in entry["scens"]]
        else:
            gen = entry.get("generate", {"count": 1, "seed": 0})
            graph = parse_map(map_text)
            n_max = max(agents)
            for k in range(int(gen.get("count", 1))):
                s = int(gen.get("seed", 0)) + k
                scens.append((f"random-{s}", make_random_scen(graph, n_max, s, map_path.name)))
        for scen_name, scen_text in scens:
            for seed in seeds:
                for n in agents:
                    for algo in cfg.get("algos", ["mocbs"]):
                        for ll in cfg.get("lowlevels", ["boa"]):
                            jobs.append(
                                dict(
                                    map=map_path.name,
                                    map_text=map_text,
                                    scen=scen_name,
                                    scen_text=scen_text,
                                    seed=int(seed),
                                    agents=int(n),
                                    algo=algo,
                                    lowlevel=ll,
                                    objectives=int(cfg.get("objectives", 2)),
                                    cost_model=cfg.get("cost_model", "random"),
                                    cmax=int(cfg.get("cmax", 2)),
                                    horizon=cfg.get("horizon"),
                                    time_limit=cfg.get("time_limit", 300),
                                    dedup=bool(cfg.get("dedup", True)),
                                    oracle=bool(cfg.get("oracle", False)),
                                )
                            )
    return jobs


def run_job(job: dict) -> dict:
    from .cli import run_one, spec_from

    row = {k: job[k] for k in ("map", "scen", "seed", "agents", "algo", "lowlevel")}
    try:
        graph = parse_map(job["map_text"])
        scen = parse_scen(job["scen_text"], graph)
        spec = spec_from(job["cost_model"], job["objectives"], job["cmax"], job["seed"])
        inst = Instance.build(graph, scen, spec, job["agents"])
        doc, _ = run_one(inst, job["algo"], job["lowlevel"], job["horizon"], job["time_limit"], job["oracle"], job["dedup"])
    except Exception as e:  # recorded, never fatal for the suite
        row.update(status="error", error=f"{type(e).__name__}: {e}")
        return row
    row["status"] = doc["status"]
    for k in METRICS:
        row[k] = doc["metrics"][k]
    row["ms"] = round(doc["metrics"]["ms"], 3)
    if "oracle" in doc:
        row["oracle"] = doc["oracle"]
    return row


def summarise(rows: list) -> list:
    cells: dict = {}
    for r in rows:
        cells.setdefault((r["map"], r["agents"], r["algo"], r["lowlevel"]), []).append(r)
    out = []
    for (m, n, algo, ll), rs in sorted(cells.items()):
        ok = [r for r in rs if r["status"] == "complete"]
        s = dict(map=m, agents=n, algo=algo, lowlevel=ll, instances=len(rs), succeeded=len(ok),
                 success_rate=round(len(ok) / len(rs), 4), errors=sum(r["status"] == "error" for r in rs))
        for k in METRICS:
            vals = [r[k] for r in ok]
            s[f"{k}_min"] = min(vals) if vals else ""
            s[f"{k}_median"] = statistics.median(vals) if vals else ""
            s[f"{k}_max"] = max(vals) if vals else ""
        out.append(s)
    return out


def run_suite(cfg: dict, workers=None) -> tuple[list, list]:
    jobs = expand_jobs(cfg)
    workers = workers if workers is not None else int(cfg.get("workers", 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(run_job, jobs))  # map keeps job order, so the merge is deterministic
    else:
        rows = [run_job(j) for j in jobs]
    return rows, summarise(rows)


def write_summary(rows: list, path) -> None:
    keys: list = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys, restval="")
        w.writeheader()
        w.writerows(rows)
