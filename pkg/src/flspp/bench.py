"""Experiment harness: repeated runs, time-budget best-of, and Z sweeps."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .dataset import Dataset, load_csv, load_ppm_rgb
from .errors import ConfigError
from .lloyd import EmptyPolicy, LloydConfig
from .pipelines import AlgoConfig, RunRecord, run

PROTOCOLS = ("single", "repeated", "time_budget", "vary_z")

TIME_GRID_SAMPLES = 200


def derive_seed(master: int, run_index: int, repetition: int) -> int:
    """Stable per-(run, repetition) seed derived from the master seed."""
    ss = np.random.SeedSequence([int(master), int(run_index), int(repetition)])
    return int(ss.generate_state(1, np.uint64)[0])


def percentage_diff(c1: float, c2: float) -> float:
    """Relative cost advantage of c1 over c2, in percent: (1 - c1/c2) * 100."""
    return (1.0 - c1 / c2) * 100.0


@dataclass(frozen=True)
class ExperimentSpec:
    dataset_path: str
    algorithms: tuple  # of dicts: {name, algorithm, k, z?, greedy_l?, tol?, max_iters?, empty_policy?}
    protocol: str = "repeated"
    dataset_format: str = "csv"  # csv | ppm
    has_header: bool = False
    repetitions: int = 1  # R
    budget_repetitions: int = 1  # B, time_budget only
    budget_algorithm: str | None = None  # name of the budget-defining entry
    z_values: tuple = ()
    z_reference: int = 25
    seed: int = 0
    opt: float | None = None
    out: str | None = None
    out_format: str = "json"

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}, expected one of {PROTOCOLS}")
        if not self.algorithms:
            raise ConfigError("no algorithms")
        names = [a.get("name") or a["algorithm"] for a in self.algorithms]
        if len(set(names)) != len(names):
            raise ConfigError(f"algorithm names must be unique, got {names}")
        if self.repetitions < 1:
            raise ConfigError("repetitions (R) must be >= 1")
        if self.protocol == "time_budget":
            if self.budget_repetitions < 1:
                raise ConfigError("time_budget requires B >= 1")
            if self.budget_algorithm is None:
                raise ConfigError("time_budget requires exactly one budget_algorithm")
            if self.budget_algorithm not in names:
                raise ConfigError(f"budget_algorithm {self.budget_algorithm!r} not in {names}")
        if self.protocol == "vary_z" and not self.z_values:
            raise ConfigError("vary_z requires a non-empty z_values grid")
        if self.out_format not in ("json", "csv"):
            raise ConfigError(f"out_format must be json or csv, got {self.out_format!r}")

    @classmethod
    def from_json(cls, path) -> "ExperimentSpec":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentSpec":
        try:
            return cls(
                dataset_path=raw["dataset_path"],
                algorithms=tuple(raw["algorithms"]),
                protocol=raw.get("protocol", "repeated"),
                dataset_format=raw.get("dataset_format", "csv"),
                has_header=raw.get("has_header", False),
                repetitions=raw.get("repetitions", 1),
                budget_repetitions=raw.get("budget_repetitions", 1),
                budget_algorithm=raw.get("budget_algorithm"),
                z_values=tuple(raw.get("z_values", ())),
                z_reference=raw.get("z_reference", 25),
                seed=raw.get("seed", 0),
                opt=raw.get("opt"),
                out=raw.get("out"),
                out_format=raw.get("out_format", "json"),
            )
        except KeyError as exc:
            raise ConfigError(f"experiment spec missing required field: {exc}") from exc

    def load_dataset(self) -> Dataset:
        if self.dataset_format == "ppm":
            return load_ppm_rgb(self.dataset_path)
        return load_csv(self.dataset_path, has_header=self.has_header)

    def algo_config(self, entry: dict, seed: int, z: int | None = None) -> AlgoConfig:
        try:
            lloyd_cfg = LloydConfig(
                max_steps=entry.get("max_iters", 300),
                rel_tol=entry.get("tol", 1e-4),
                empty_policy=EmptyPolicy(entry.get("empty_policy", "farthest")),
            )
            return AlgoConfig(
                algorithm=entry["algorithm"],
                k=entry["k"],
                z=entry.get("z", 0) if z is None else z,
                greedy_candidates=entry.get("greedy_l"),
                lloyd=lloyd_cfg,
                seed=seed,
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad algorithm entry {entry!r}: {exc}") from exc


@dataclass
class AggregateReport:
    protocol: str
    dataset: str
    algorithms: list
    summary: dict  # name -> {min_cost, mean_cost, max_cost, wins, mean_repetitions, ...}
    avg_curves: dict = field(default_factory=dict)  # name -> [[t_ms, avg_cost], ...]
    pairwise: list = field(default_factory=list)  # {a1, a2, percent}
    runs: dict = field(default_factory=dict)  # name -> [record dicts]
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "AggregateReport":
        return cls(**raw)


def _algo_name(entry: dict) -> str:
    return entry.get("name") or entry["algorithm"]


def _strict_win_counts(names: list, per_run_costs: dict) -> dict:
    """per_run_costs: name -> list of costs, one per run. Strictly-smallest wins."""
    wins = {name: 0 for name in names}
    n_runs = len(next(iter(per_run_costs.values())))
    for r in range(n_runs):
        costs = [(per_run_costs[name][r], name) for name in names]
        best = min(c for c, _ in costs)
        holders = [name for c, name in costs if c == best]
        if len(holders) == 1:
            wins[holders[0]] += 1
    return wins


def _summary_from_costs(costs: list) -> dict:
    return {
        "min_cost": float(min(costs)),
        "mean_cost": float(np.mean(costs)),
        "max_cost": float(max(costs)),
    }


def _pairwise_table(names: list, mean_costs: dict) -> list:
    table = []
    for a1 in names:
        for a2 in names:
            if a1 == a2:
                continue
            table.append(
                {"a1": a1, "a2": a2, "percent": percentage_diff(mean_costs[a1], mean_costs[a2])}
            )
    return table


def _avg_curves(per_run_events: dict, grid_samples: int = TIME_GRID_SAMPLES) -> dict:
    """Mean best-so-far cost on a shared log-spaced time grid.

    ``per_run_events``: name -> list (per run) of (times_ms, best_costs)
    step functions. The grid starts at the first time where every
    algorithm has a defined value in every run.
    """
    t_min = 0.0
    t_max = 0.0
    for curves in per_run_events.values():
        for times, _ in curves:
            t_min = max(t_min, times[0])
            t_max = max(t_max, times[-1])
    if t_max <= t_min:
        t_max = t_min * 1.0 + 1e-9
    grid = np.geomspace(max(t_min, 1e-6), max(t_max, 1e-6), grid_samples)

    out = {}
    for name, curves in per_run_events.items():
        acc = np.zeros_like(grid)
        for times, values in curves:
            idx = np.searchsorted(times, grid, side="right") - 1
            idx = np.clip(idx, 0, len(values) - 1)
            acc += np.asarray(values)[idx]
        avg = acc / len(curves)
        out[name] = [[float(t), float(v)] for t, v in zip(grid, avg)]
    return out


def _trajectory_events(record: RunRecord) -> tuple:
    times = [p[0] for p in record.trajectory]
    values = [p[1] for p in record.trajectory]
    return times, values


def protocol_single(spec: ExperimentSpec, ds: Dataset | None = None) -> AggregateReport:
    ds = ds or spec.load_dataset()
    names = [_algo_name(a) for a in spec.algorithms]
    runs = {}
    costs = {}
    for entry, name in zip(spec.algorithms, names):
        rec = run(ds, spec.algo_config(entry, spec.seed), reference_opt=spec.opt)
        runs[name] = [rec.to_dict()]
        costs[name] = [rec.final_cost]
    summary = {
        name: {**_summary_from_costs(costs[name]), "wins": 0, "mean_repetitions": 1.0}
        for name in names
    }
    mean_costs = {name: summary[name]["mean_cost"] for name in names}
    return AggregateReport(
        protocol="single",
        dataset=ds.name,
        algorithms=names,
        summary=summary,
        pairwise=_pairwise_table(names, mean_costs),
        runs=runs,
    )


def protocol_repeated(spec: ExperimentSpec, ds: Dataset | None = None) -> AggregateReport:
    """R independent runs per algorithm; run r shares one master seed across
    algorithms so same-shaped seedings start from identical centers."""
    ds = ds or spec.load_dataset()
    names = [_algo_name(a) for a in spec.algorithms]
    runs = {name: [] for name in names}
    costs = {name: [] for name in names}
    for r in range(spec.repetitions):
        seed = derive_seed(spec.seed, r, 0)
        for entry, name in zip(spec.algorithms, names):
            rec = run(ds, spec.algo_config(entry, seed), reference_opt=spec.opt)
            runs[name].append(rec.to_dict())
            costs[name].append(rec.final_cost)
    wins = _strict_win_counts(names, costs)
    summary = {}
    for name in names:
        summary[name] = {
            **_summary_from_costs(costs[name]),
            "wins": wins[name],
            "mean_repetitions": 1.0,
            "mean_lloyd_steps": float(np.mean([d["lloyd_steps"] for d in runs[name]])),
            "mean_ls_iterations": float(np.mean([d["ls_iterations"] for d in runs[name]])),
        }
    mean_costs = {name: summary[name]["mean_cost"] for name in names}
    # no avg curves here: they live on a wall-clock grid, and repeated-run
    # reports are meant to be reproducible bit for bit apart from timings
    return AggregateReport(
        protocol="repeated",
        dataset=ds.name,
        algorithms=names,
        summary=summary,
        pairwise=_pairwise_table(names, mean_costs),
        runs=runs,
    )


def protocol_time_budget(spec: ExperimentSpec, ds: Dataset | None = None) -> AggregateReport:
    """Per run: B repetitions of the budget algorithm define the wall-clock
    budget; every competitor loops while its elapsed time stays under it
    (always completing at least one repetition). Best-of costs compared."""
    ds = ds or spec.load_dataset()
    names = [_algo_name(a) for a in spec.algorithms]
    entries = {name: e for e, name in zip(spec.algorithms, names)}
    budget_name = spec.budget_algorithm

    runs = {name: [] for name in names}
    best_costs = {name: [] for name in names}
    rep_counts = {name: [] for name in names}
    overshoot = {name: [] for name in names}
    events = {name: [] for name in names}
    budgets = []

    for r in range(spec.repetitions):
        # budget-defining algorithm first
        t0 = time.perf_counter()
        rep_ends = []
        rep_costs = []
        for b in range(spec.budget_repetitions):
            rec = run(ds, spec.algo_config(entries[budget_name], derive_seed(spec.seed, r, b)))
            runs[budget_name].append(rec.to_dict())
            rep_costs.append(rec.final_cost)
            rep_ends.append((time.perf_counter() - t0) * 1000.0)
        budget_ms = rep_ends[-1]
        budgets.append(budget_ms)
        best_costs[budget_name].append(min(rep_costs))
        rep_counts[budget_name].append(spec.budget_repetitions)
        overshoot[budget_name].append(0.0)
        events[budget_name].append((rep_ends, list(np.minimum.accumulate(rep_costs))))

        for name in names:
            if name == budget_name:
                continue
            t0 = time.perf_counter()
            rep_ends = []
            rep_costs = []
            i = 0
            # start a repetition only while under budget; the final one may overshoot
            while not rep_ends or (time.perf_counter() - t0) * 1000.0 < budget_ms:
                rec = run(ds, spec.algo_config(entries[name], derive_seed(spec.seed, r, i)))
                runs[name].append(rec.to_dict())
                rep_costs.append(rec.final_cost)
                rep_ends.append((time.perf_counter() - t0) * 1000.0)
                i += 1
            best_costs[name].append(min(rep_costs))
            rep_counts[name].append(len(rep_costs))
            overshoot[name].append(max(0.0, rep_ends[-1] - budget_ms))
            events[name].append((rep_ends, list(np.minimum.accumulate(rep_costs))))

    wins = _strict_win_counts(names, best_costs)
    summary = {}
    for name in names:
        summary[name] = {
            **_summary_from_costs(best_costs[name]),
            "wins": wins[name],
            "mean_repetitions": float(np.mean(rep_counts[name])),
            "mean_overshoot_ms": float(np.mean(overshoot[name])),
        }
    mean_costs = {name: summary[name]["mean_cost"] for name in names}
    return AggregateReport(
        protocol="time_budget",
        dataset=ds.name,
        algorithms=names,
        summary=summary,
        avg_curves=_avg_curves(events),
        pairwise=_pairwise_table(names, mean_costs),
        runs=runs,
        extras={"budgets_ms": budgets, "budget_algorithm": budget_name},
    )


def protocol_vary_z(spec: ExperimentSpec, ds: Dataset | None = None) -> AggregateReport:
    """Paired-init Z sweep for one foresight entry against a fixed-Z reference.

    Expects exactly two algorithm entries: the swept one (fls/gfls) and the
    reference (ls/gls, run at ``z_reference``). Every call in run r starts
    from the same master seed, hence the same initial centers.
    """
    ds = ds or spec.load_dataset()
    names = [_algo_name(a) for a in spec.algorithms]
    swept = [e for e in spec.algorithms if e["algorithm"] in ("fls", "gfls")]
    refs = [e for e in spec.algorithms if e["algorithm"] in ("ls", "gls", "km", "gkm")]
    if len(swept) != 1 or len(refs) != 1:
        raise ConfigError("vary_z expects one fls/gfls entry and one reference entry")
    swept_entry, ref_entry = swept[0], refs[0]
    swept_name, ref_name = _algo_name(swept_entry), _algo_name(ref_entry)

    per_z_costs = {str(z): [] for z in spec.z_values}
    per_z_times = {str(z): [] for z in spec.z_values}
    ref_costs = []
    ref_times = []
    runs = {swept_name: [], ref_name: []}

    for r in range(spec.repetitions):
        seed = derive_seed(spec.seed, r, 0)
        rec = run(ds, spec.algo_config(ref_entry, seed, z=spec.z_reference))
        runs[ref_name].append(rec.to_dict())
        ref_costs.append(rec.final_cost)
        ref_times.append(rec.wall_time_ms)
        for z in spec.z_values:
            rec = run(ds, spec.algo_config(swept_entry, seed, z=z))
            runs[swept_name].append(rec.to_dict())
            per_z_costs[str(z)].append(rec.final_cost)
            per_z_times[str(z)].append(rec.wall_time_ms)

    summary = {
        ref_name: {**_summary_from_costs(ref_costs), "wins": 0, "mean_repetitions": 1.0},
        swept_name: {
            **_summary_from_costs([c for cs in per_z_costs.values() for c in cs]),
            "wins": 0,
            "mean_repetitions": 1.0,
        },
    }
    extras = {
        "z_values": [int(z) for z in spec.z_values],
        "per_z": {
            str(z): {
                "mean_cost": float(np.mean(per_z_costs[str(z)])),
                "mean_time_ms": float(np.mean(per_z_times[str(z)])),
            }
            for z in spec.z_values
        },
        "reference": {
            "name": ref_name,
            "z": spec.z_reference,
            "mean_cost": float(np.mean(ref_costs)),
            "mean_time_ms": float(np.mean(ref_times)),
        },
    }
    return AggregateReport(
        protocol="vary_z",
        dataset=ds.name,
        algorithms=names,
        summary=summary,
        runs=runs,
        extras=extras,
    )


def run_experiment(spec: ExperimentSpec, ds: Dataset | None = None) -> AggregateReport:
    dispatch = {
        "single": protocol_single,
        "repeated": protocol_repeated,
        "time_budget": protocol_time_budget,
        "vary_z": protocol_vary_z,
    }
    return dispatch[spec.protocol](spec, ds)


def emit_report(report: AggregateReport, out_path, out_format: str = "json") -> list:
    """Write the report; returns the list of files written.

    JSON is a single self-contained file that parses back into an equal
    AggregateReport. CSV is split into long-form section files next to
    ``out_path``: summary, avg curves (one row per algorithm and grid
    time), and pairwise percentages.
    """
    if not report.algorithms:
        raise ConfigError("no algorithms")
    out_path = str(out_path)
    if out_format == "json":
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return [out_path]
    if out_format != "csv":
        raise ConfigError(f"unknown report format {out_format!r}")

    stem = out_path[:-4] if out_path.endswith(".csv") else out_path
    written = []

    summary_path = f"{stem}_summary.csv"
    keys = sorted({k for row in report.summary.values() for k in row})
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write("algo," + ",".join(keys) + "\n")
        for name in report.algorithms:
            row = report.summary[name]
            fh.write(name + "," + ",".join(repr(row.get(k, "")) for k in keys) + "\n")
    written.append(summary_path)

    avg_path = f"{stem}_avg.csv"
    with open(avg_path, "w", encoding="utf-8") as fh:
        fh.write("algo,t_ms,avg_cost\n")
        for name in report.algorithms:
            for t, c in report.avg_curves.get(name, []):
                fh.write(f"{name},{t!r},{c!r}\n")
    written.append(avg_path)

    pairwise_path = f"{stem}_pairwise.csv"
    with open(pairwise_path, "w", encoding="utf-8") as fh:
        fh.write("a1,a2,percent\n")
        for row in report.pairwise:
            fh.write(f"{row['a1']},{row['a2']},{row['percent']!r}\n")
    written.append(pairwise_path)
    return written
