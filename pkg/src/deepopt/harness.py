"""Experiment harness: config files, batch runs, summaries and curve data.

An experiment is described by one INI-style file (sections ``[experiment]``,
``[problem]``, ``[run]`` and optionally ``[baseline]``).  Running it executes
``repeats`` independent engine runs with seeds ``base + index``, writes one
JSON record per run plus a CSV summary and plain-text curve files into the
output directory.  Summaries never include timing, so re-running a config
with the same base seed reproduces them byte for byte.
"""

import configparser
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import engine
from .problems import HtopProblem, McParityProblem
from .tsp import TspProblem, load_optima, load_tsplib, restart_hill_climb


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    name: str
    repeats: int
    seed: int
    problem: dict
    run: dict
    baselines: dict = None
    output: str = None
    base_dir: Path = Path(".")
    raw_text: str = ""

    def validate(self):
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        build_problem(self.problem, self.base_dir)
        _make_run_config(self, self.seed).validate()
        if self.baselines:
            if self.problem.get("kind") != "tsp":
                raise ConfigError("baselines only apply to tsp experiments")
            for move in self.baselines["moves"]:
                if move not in ("swap", "insert", "two_opt"):
                    raise ConfigError(f"unknown baseline move: {move}")


@dataclass
class ResultRecord:
    experiment: str
    run_index: int
    seed: int
    best_fitness: float
    evaluations: int
    evals_to_optimum: int = None
    solutions_to_optimum: int = None
    wall_time: float = 0.0
    fitness_series: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), indent=1, sort_keys=True)


# ----------------------------------------------------------------------
# config parsing

def _parse_target(value, optimum_fitness):
    value = value.strip().lower()
    if value in ("", "none"):
        return None
    if value == "optimum":
        if optimum_fitness is None:
            raise ConfigError("target 'optimum' needs a known optimum")
        return optimum_fitness
    return float(value)


def load_config(path):
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    try:
        exp = parser["experiment"]
        problem = dict(parser["problem"])
        run = dict(parser["run"])
    except KeyError as exc:
        raise ConfigError(f"missing config section: {exc}") from exc
    baselines = None
    if parser.has_section("baseline"):
        section = parser["baseline"]
        baselines = {
            "moves": section.get("moves", "").split(),
            "trials": section.getint("trials", 10000),
            "steps": section.getint("steps", 2000),
        }
    return ExperimentConfig(
        name=exp.get("name", path.stem),
        repeats=exp.getint("repeats", 1),
        seed=exp.getint("seed", 0),
        problem=problem,
        run=_parse_run_section(run),
        baselines=baselines,
        output=exp.get("output", None),
        base_dir=path.parent,
        raw_text=path.read_text(),
    )


def _parse_run_section(raw):
    run = {}
    run["hidden_sizes"] = tuple(int(t) for t in raw.get("hidden_sizes", "").split())
    run["transition_schedule"] = tuple(
        int(t) for t in raw.get("transition_schedule", "").split()
    )
    run["steps_per_solution"] = int(raw["steps_per_solution"])
    run["total_solutions"] = int(raw["total_solutions"])
    rates = raw.get("learning_rate", "0.01").split()
    run["learning_rate"] = float(rates[0]) if len(rates) == 1 else tuple(
        float(r) for r in rates
    )
    run["mode"] = raw.get("mode", engine.LAYERWISE)
    run["train_repeats"] = int(raw.get("train_repeats", 1))
    run["naive_every"] = int(raw.get("naive_every", 0))
    run["latent_every"] = int(raw.get("latent_every", 0))
    # target/stop accept 'optimum', a float, or none; resolved per problem.
    run["_target"] = raw.get("target", "none")
    run["_stop_at"] = raw.get("stop_at", "none")
    return run


def build_problem(spec, base_dir):
    """Instantiate the problem named by a config ``[problem]`` section.

    Returns ``(problem, info)`` where info carries the problem size and, when
    known, the optimum in fitness and cost domains.
    """
    kind = spec.get("kind")
    if kind == "htop":
        problem = HtopProblem(
            int(spec["size"]),
            level_weighted=spec.get("level_weighted", "false").lower() == "true",
        )
        info = {
            "kind": kind,
            "size": problem.visible_size,
            "optimum_fitness": problem.max_fitness,
        }
        return problem, info
    if kind == "mcparity":
        problem = McParityProblem(
            int(spec["modules"]),
            module_size=int(spec.get("module_size", 4)),
            coupling=float(spec.get("coupling", 1e-4)),
        )
        info = {
            "kind": kind,
            "size": problem.visible_size,
            "optimum_fitness": problem.max_fitness,
        }
        return problem, info
    if kind == "tsp":
        file_path = Path(spec["file"])
        if not file_path.is_absolute():
            file_path = Path(base_dir) / file_path
        if not file_path.exists():
            raise ConfigError(f"instance file not found: {file_path}")
        instance = load_tsplib(str(file_path))
        optimum = None
        if "optima" in spec:
            optima_path = Path(spec["optima"])
            if not optima_path.is_absolute():
                optima_path = Path(base_dir) / optima_path
            if not optima_path.exists():
                raise ConfigError(f"optima registry not found: {optima_path}")
            optimum = load_optima(str(optima_path)).get(instance.name)
            instance.known_optimum = optimum
        problem = TspProblem(instance, naive_move=spec.get("move", "insert"))
        info = {
            "kind": kind,
            "size": instance.n,
            "name": instance.name,
            "optimum_cost": optimum,
            "optimum_fitness": -optimum if optimum is not None else None,
        }
        return problem, info
    raise ConfigError(f"unknown problem kind: {kind!r}")


# ----------------------------------------------------------------------
# execution

def _make_run_config(config, seed):
    raw = dict(config.run)
    target_spec = raw.pop("_target", "none")
    stop_spec = raw.pop("_stop_at", "none")
    _, info = build_problem(config.problem, config.base_dir)
    optimum = info.get("optimum_fitness")
    return engine.RunConfig(
        seed=seed,
        target_fitness=_parse_target(target_spec, optimum),
        stop_at_fitness=_parse_target(stop_spec, optimum),
        **raw,
    )


def execute_single_run(config, run_index):
    """One engine run of an experiment; standalone so workers can call it."""
    seed = config.seed + run_index
    problem, info = build_problem(config.problem, config.base_dir)
    run_config = _make_run_config(config, seed)
    start = time.perf_counter()
    log = engine.run(run_config, problem)
    wall = time.perf_counter() - start
    record = ResultRecord(
        experiment=config.name,
        run_index=run_index,
        seed=seed,
        best_fitness=float(log.best_fitness),
        evaluations=int(log.evaluations),
        evals_to_optimum=log.evals_to_target,
        solutions_to_optimum=log.solutions_to_target,
        wall_time=wall,
        fitness_series=[float(r.fitness) for r in log.records],
        extra=dict(info),
    )
    if info["kind"] == "tsp":
        record.extra["best_cost"] = -float(log.best_fitness)
        if info.get("optimum_cost"):
            opt = info["optimum_cost"]
            record.extra["percent_above"] = (record.extra["best_cost"] - opt) / opt * 100.0
    return record


def _execute_baseline(config, move):
    problem, info = build_problem(config.problem, config.base_dir)
    trials = config.baselines["trials"]
    steps = config.baselines["steps"]
    start = time.perf_counter()
    best, trial_costs = restart_hill_climb(
        problem.instance, move, trials, steps, seed=config.seed + 100_000
    )
    wall = time.perf_counter() - start
    record = ResultRecord(
        experiment=f"{config.name}[{move}]",
        run_index=0,
        seed=config.seed + 100_000,
        best_fitness=-best.cost,
        evaluations=trials * steps,
        wall_time=wall,
        extra=dict(info),
    )
    record.extra["best_cost"] = best.cost
    record.extra["trials"] = trials
    record.extra["trial_best_costs"] = [float(c) for c in trial_costs]
    if info.get("optimum_cost"):
        opt = info["optimum_cost"]
        record.extra["percent_above"] = (best.cost - opt) / opt * 100.0
    return record


def run_experiment(config, workers=1, force=False, output=None):
    """Execute all repeats (and baselines) of one experiment.

    Rejects invalid configs before any run starts and refuses to clobber an
    output directory holding records unless ``force``.  Returns the records;
    files written: config copy, ``run_*.json``, ``baseline_*.json``,
    ``summary.csv`` and fitness-trajectory curves.
    """
    config.validate()
    out_dir = Path(output or config.output or _default_output(config.name))
    if out_dir.exists() and any(out_dir.glob("run_*.json")) and not force:
        raise ConfigError(
            f"output directory {out_dir} already holds records (use force)"
        )
    out_dir.mkdir(parents=True, exist_ok=True)

    if workers > 1 and config.repeats > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(execute_single_run, config, i)
                for i in range(config.repeats)
            ]
            records = [f.result() for f in futures]
    else:
        records = [execute_single_run(config, i) for i in range(config.repeats)]

    baseline_records = []
    if config.baselines:
        for move in config.baselines["moves"]:
            baseline_records.append(_execute_baseline(config, move))

    _write_outputs(config, out_dir, records, baseline_records)
    return records + baseline_records


def _default_output(name):
    root = os.environ.get("DEEPOPT_OUT", "results")
    return Path(root) / name


def _write_outputs(config, out_dir, records, baseline_records):
    text = config.raw_text or (
        f"# generated from ExperimentConfig\n{config!r}\n"
    )
    (out_dir / "config.cfg").write_text(text)
    for record in records:
        (out_dir / f"run_{record.run_index:03d}.json").write_text(record.to_json())
    for record in baseline_records:
        move = record.experiment.rsplit("[", 1)[1].rstrip("]")
        (out_dir / f"baseline_{move}.json").write_text(record.to_json())
    (out_dir / "summary.csv").write_text(summarise(records + baseline_records))
    if any(r.fitness_series for r in records):
        emit_curves(records, "fitness-trajectory", out_dir)


# ----------------------------------------------------------------------
# reporting

def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def summarise(records):
    """Aggregate records into CSV text, one row per experiment name."""
    if not records:
        raise ValueError("no records to summarise")
    groups = {}
    for record in records:
        groups.setdefault(record.experiment, []).append(record)
    lines = [
        "experiment,runs,mean_best_fitness,median_best_fitness,success_rate,"
        "mean_evals_to_optimum,mean_solutions_to_optimum,percent_above_optimum"
    ]
    for name in sorted(groups):
        group = sorted(groups[name], key=lambda r: r.run_index)
        best = [r.best_fitness for r in group]
        optimum = group[0].extra.get("optimum_fitness")
        successes = [
            r for r in group
            if optimum is not None and r.best_fitness >= optimum - 1e-9
        ]
        rate = len(successes) / len(group) if optimum is not None else None
        evals = [r.evals_to_optimum for r in successes if r.evals_to_optimum]
        sols = [r.solutions_to_optimum for r in successes if r.solutions_to_optimum]
        pct = [r.extra["percent_above"] for r in group if "percent_above" in r.extra]
        lines.append(
            ",".join(
                [
                    name,
                    str(len(group)),
                    _fmt(float(np.mean(best))),
                    _fmt(float(np.median(best))),
                    _fmt(rate),
                    _fmt(float(np.mean(evals)) if evals else None),
                    _fmt(float(np.mean(sols)) if sols else None),
                    _fmt(float(np.mean(pct)) if pct else None),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def emit_curves(records, kind, out_dir):
    """Write plain-text columnar curve data for external plotting."""
    if not records:
        raise ValueError("no records to emit")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if kind == "fitness-trajectory":
        series = [r.fitness_series for r in records if r.fitness_series]
        if not series:
            raise ValueError("records hold no fitness series")
        paths = []
        for record in records:
            if not record.fitness_series:
                continue
            path = out_dir / f"curve_fitness_run{record.run_index:03d}.dat"
            path.write_text(
                "".join(
                    f"{i + 1} {_fmt(v)}\n"
                    for i, v in enumerate(record.fitness_series)
                )
            )
            paths.append(path)
        longest = max(len(s) for s in series)
        mean_lines = []
        for i in range(longest):
            values = [s[i] for s in series if len(s) > i]
            mean_lines.append(f"{i + 1} {_fmt(float(np.mean(values)))}\n")
        mean_path = out_dir / "curve_fitness_mean.dat"
        mean_path.write_text("".join(mean_lines))
        return paths + [mean_path]
    if kind == "scaling":
        by_size = {}
        for record in records:
            if record.evals_to_optimum:
                by_size.setdefault(record.extra["size"], []).append(
                    record.evals_to_optimum
                )
        if not by_size:
            raise ValueError("records hold no evaluations-to-optimum data")
        path = out_dir / "curve_scaling.dat"
        path.write_text(
            "".join(
                f"{size} {_fmt(float(np.mean(by_size[size])))}\n"
                for size in sorted(by_size)
            )
        )
        return [path]
    raise ValueError(f"unknown curve kind: {kind!r}")


def load_records(directory):
    """Read every run/baseline record JSON in a results directory."""
    directory = Path(directory)
    records = []
    for path in sorted(directory.glob("run_*.json")) + sorted(
        directory.glob("baseline_*.json")
    ):
        data = json.loads(path.read_text())
        records.append(ResultRecord(**data))
    if not records:
        raise ValueError(f"no records found in {directory}")
    return records
