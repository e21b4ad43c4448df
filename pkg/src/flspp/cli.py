"""Command-line entry points: single clustering runs and the bench harness.

Exit codes: 0 success, 2 input error (files, parsing), 3 configuration error.
"""

from __future__ import annotations

import json
import sys

import click

from .bench import ExperimentSpec, emit_report, run_experiment
from .dataset import load_csv, load_ppm_rgb
from .errors import ConfigError, DatasetError, FlsppError
from .lloyd import EmptyPolicy, LloydConfig
from .pipelines import ALGORITHMS, AlgoConfig, run

EXIT_INPUT_ERROR = 2
EXIT_CONFIG_ERROR = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.command("cluster")
@click.option("--input", "input_path", required=True, help="Input dataset file.")
@click.option("--ppm", is_flag=True, help="Input is a PPM image (default: numeric CSV).")
@click.option("--has-header", is_flag=True, help="Skip the first CSV row.")
@click.option("--algo", required=True, type=click.Choice(ALGORITHMS), help="Pipeline to run.")
@click.option("--k", required=True, type=int, help="Number of centers.")
@click.option("--z", default=25, show_default=True, type=int, help="Local search iterations.")
@click.option("--greedy-l", default=None, type=int, help="Greedy seeding candidates per round.")
@click.option("--seed", default=0, show_default=True, type=int, help="Master seed.")
@click.option("--tol", default=1e-4, show_default=True, type=float, help="Lloyd stopping tolerance.")
@click.option("--max-iters", default=300, show_default=True, type=int, help="Lloyd iteration cap.")
@click.option(
    "--empty-policy",
    default="farthest",
    show_default=True,
    type=click.Choice(["keep", "farthest"]),
    help="What to do with clusters that run empty.",
)
@click.option("--opt", default=None, type=float, help="Known optimal cost to echo in the record.")
@click.option("--out", "out_path", required=True, help="Output file.")
@click.option(
    "--format",
    "out_format",
    default="json",
    show_default=True,
    type=click.Choice(["csv", "json"]),
)
def cluster(
    input_path,
    ppm,
    has_header,
    algo,
    k,
    z,
    greedy_l,
    seed,
    tol,
    max_iters,
    empty_policy,
    opt,
    out_path,
    out_format,
):
    """Run one clustering pipeline on one dataset and write the run record."""
    try:
        if ppm:
            ds = load_ppm_rgb(input_path)
        else:
            ds = load_csv(input_path, has_header=has_header)
    except (DatasetError, OSError) as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))

    try:
        cfg = AlgoConfig(
            algorithm=algo,
            k=k,
            z=z,
            greedy_candidates=greedy_l,
            lloyd=LloydConfig(
                max_steps=max_iters, rel_tol=tol, empty_policy=EmptyPolicy(empty_policy)
            ),
            seed=seed,
        )
        record = run(ds, cfg, reference_opt=opt)
    except (ConfigError, ValueError) as exc:
        _fail(EXIT_CONFIG_ERROR, str(exc))

    try:
        _write_record(record, out_path, out_format)
    except OSError as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    click.echo(f"{algo}: final cost {record.final_cost:.6g} in {record.wall_time_ms:.1f} ms")


def _write_record(record, out_path, out_format):
    data = record.to_dict()
    if out_format == "json":
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    trajectory = data.pop("trajectory")
    keys = sorted(data)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(",".join(keys) + "\n")
        fh.write(",".join(str(data[key]) for key in keys) + "\n")
    stem = out_path[:-4] if str(out_path).endswith(".csv") else str(out_path)
    with open(f"{stem}_trajectory.csv", "w", encoding="utf-8") as fh:
        fh.write("t_ms,best_cost\n")
        for t, c in trajectory:
            fh.write(f"{t!r},{c!r}\n")


@click.group("bench")
def bench():
    """Experiment protocols driven by a JSON spec file."""


def _run_bench(spec_path, forced_protocol):
    try:
        spec = ExperimentSpec.from_json(spec_path)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    except ConfigError as exc:
        _fail(EXIT_CONFIG_ERROR, str(exc))
    if spec.protocol != forced_protocol:
        _fail(
            EXIT_CONFIG_ERROR,
            f"spec protocol is {spec.protocol!r} but this subcommand runs {forced_protocol!r}",
        )
    if spec.out is None:
        _fail(EXIT_CONFIG_ERROR, "spec must set an 'out' path")
    try:
        ds = spec.load_dataset()
    except (DatasetError, OSError) as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    try:
        report = run_experiment(spec, ds)
    except FlsppError as exc:
        _fail(EXIT_CONFIG_ERROR, str(exc))
    try:
        files = emit_report(report, spec.out, spec.out_format)
    except OSError as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    for f in files:
        click.echo(f"wrote {f}")


@bench.command("time-budget")
@click.option("--spec", "spec_path", required=True, help="Experiment spec JSON file.")
def bench_time_budget(spec_path):
    """Best-of comparison under the budget algorithm's wall-clock time."""
    _run_bench(spec_path, "time_budget")


@bench.command("vary-z")
@click.option("--spec", "spec_path", required=True, help="Experiment spec JSON file.")
def bench_vary_z(spec_path):
    """Paired-init sweep over local-search iteration counts."""
    _run_bench(spec_path, "vary_z")


@bench.command("repeated")
@click.option("--spec", "spec_path", required=True, help="Experiment spec JSON file.")
def bench_repeated(spec_path):
    """R fixed-seed runs per algorithm; bit-reproducible except timings."""
    _run_bench(spec_path, "repeated")
