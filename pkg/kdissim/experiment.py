"""Experiment pipeline: instances x K x methods -> scored result rows -> CSV.

Each (instance, K, method) triple is an independent work item. Items run in
a process pool and are merged back in submission order, so the CSV depends
only on the configuration.
"""

import glob
import logging
import math
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import pandas as pd
import yaml

from kdissim import metrics
from kdissim.bnb import solve_bb
from kdissim.config import Config
from kdissim.flow import has_k_disjoint
from kdissim.formats import TOY_PREFIX, resolve_instance, write_paths
from kdissim.formulations import (
    build,
    decode,
    objective_lower_bound,
    objective_name,
    parse_method,
    warm_start,
)
from kdissim.instances import InstanceSpec
from kdissim.ipm import as_fraction, ipm
from kdissim.loops import remove_loops
from kdissim.lp import SolveStatus, gap, solve_lp
from kdissim.network import DirectedNetwork, SolutionPaths
from kdissim.rstar import rstar
from kdissim.shortest import NoPathError
from kdissim.spread import spread_overlaps

log = logging.getLogger(__name__)

CSV_COLUMNS = ("instance", "K", "method", "status", "objective", "bound", "gap_pct",
               "time_ms", "avdi", "midi")
IPM_METHOD = "ipm"


@dataclass(frozen=True)
class InstanceRef:
    """An instance to load inside a worker, and the group its mean row belongs to."""

    instance_id: str
    group_id: str
    token: str


@dataclass(frozen=True)
class ExperimentConfig:
    instances: tuple[InstanceRef, ...]
    ks: tuple[int, ...]
    methods: tuple[str, ...]
    time_limit_ms: int = 300_000
    alpha: float = 1.0
    filter_disjoint: bool = True
    output: Path | None = None
    paths_dir: Path | None = None
    workers: int = 1
    lp_backend: str = "highs"
    spread: bool = True

    def __post_init__(self) -> None:
        if not self.instances:
            raise ValueError("Experiment lists no instances")
        if not self.ks or any(k < 2 for k in self.ks):
            raise ValueError(f"K values must be at least 2, got {list(self.ks)}")
        if not self.methods:
            raise ValueError("Experiment lists no methods")
        if self.time_limit_ms <= 0:
            raise ValueError(f"Time limit must be positive, got {self.time_limit_ms}")
        if self.workers < 1:
            raise ValueError(f"Worker count must be at least 1, got {self.workers}")

    @classmethod
    def from_yaml(cls, path: str | Path, defaults: Config | None = None) -> "ExperimentConfig":
        """Load an experiment file; settings it omits come from `defaults`."""
        defaults = defaults or Config()
        base = Path(path).parent
        with open(path) as f:
            raw = yaml.safe_load(f) or {}
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: expected a mapping at the top level")

        def local(value: str | None) -> Path | None:
            return None if value is None else base / value

        return cls(
            instances=tuple(_instance_refs(raw.get("instances", []), base)),
            ks=_k_values(raw.get("k", [])),
            methods=tuple(str(m) for m in raw.get("methods", [])),
            time_limit_ms=int(raw.get("time_limit_ms", defaults.time_limit_ms)),
            alpha=float(raw.get("alpha", defaults.alpha)),
            filter_disjoint=bool(raw.get("filter_disjoint", True)),
            output=local(raw.get("output")),
            paths_dir=local(raw.get("paths_dir")),
            workers=int(raw.get("workers", defaults.workers)),
            lp_backend=str(raw.get("lp_backend", defaults.lp_backend)),
            spread=bool(raw.get("spread_overlaps", True)),
        )


def _k_values(raw: object) -> tuple[int, ...]:
    if isinstance(raw, dict):
        return tuple(range(int(raw["from"]), int(raw["to"]) + 1))
    if isinstance(raw, int):
        return (raw,)
    if isinstance(raw, list):
        return tuple(int(k) for k in raw)
    raise ValueError(f"k must be an integer, a list or {{from, to}}, got {raw!r}")


def _seeds(raw: object) -> list[int]:
    if isinstance(raw, int):
        return list(range(1, raw + 1))
    if isinstance(raw, dict):
        return list(range(int(raw["from"]), int(raw["to"]) + 1))
    if isinstance(raw, list):
        return [int(s) for s in raw]
    raise ValueError(f"seeds must be a count, a list or {{from, to}}, got {raw!r}")


def _instance_refs(items: list, base: Path) -> list[InstanceRef]:
    refs = []
    for item in items:
        if not isinstance(item, dict) or len(item) != 1:
            raise ValueError(f"Instance entries need exactly one of grid/random/file/toy: {item!r}")
        ((kind, value),) = item.items()
        if kind == "grid":
            spec = InstanceSpec.grid(int(value[0]), int(value[1]))
            refs.append(InstanceRef(spec.instance_id, spec.group_id, spec.instance_id))
        elif kind == "random":
            for seed in _seeds(value.get("seeds", 1)):
                spec = InstanceSpec.random(int(value["n"]), int(value["m"]), seed)
                refs.append(InstanceRef(spec.instance_id, spec.group_id, spec.instance_id))
        elif kind == "file":
            matches = sorted(glob.glob(str(base / value)))
            if not matches:
                log.warning("No files match %s", value)
            refs += [InstanceRef(Path(p).stem, Path(p).stem, p) for p in matches]
        elif kind == "toy":
            token = TOY_PREFIX + str(value)
            refs.append(InstanceRef(token, token, token))
        else:
            raise ValueError(f"Unknown instance kind '{kind}'. Must be grid, random, file or toy")
    return refs


@dataclass(frozen=True)
class ResultRow:
    instance: str
    K: int
    method: str
    status: str
    objective: float | None = None
    bound: float | None = None
    gap_pct: float | None = None
    time_ms: float | None = None
    avdi: Fraction | None = None
    midi: Fraction | None = None
    group: str = ""
    paths: SolutionPaths | None = field(default=None, compare=False, repr=False)


def _scored(row: ResultRow, paths: SolutionPaths) -> ResultRow:
    return replace(row, avdi=metrics.avdi(paths), midi=metrics.midi(paths), paths=paths)


def _run_ipm(row: ResultRow, net: DirectedNetwork, K: int, method: str, alpha: float) -> ResultRow:
    _, _, value = method.partition("@")
    penalty = as_fraction(value or alpha)
    paths = ipm(net, K, penalty)
    overlaps = metrics.total_pairwise_overlaps(paths)
    return _scored(replace(row, status="heuristic", objective=float(overlaps)), paths)


def run_method(
    instance_id: str,
    net: DirectedNetwork,
    K: int,
    method: str,
    time_limit_ms: int = 300_000,
    alpha: float = 1.0,
    lp_backend: str = "highs",
    filter_disjoint: bool = False,
    group: str = "",
    spread: bool = True,
) -> ResultRow:
    """Solve one instance with one method and score the loopless result.

    Exact methods start from the IPM paths and prune against the hop-layer cut
    bound; `time_ms` covers R*, that start and branch-and-bound. With `spread`,
    optimal paths are rerouted towards a larger MiDi at the same objective.
    """
    row = ResultRow(instance=instance_id, K=K, method=method, status="", group=group)
    if filter_disjoint and has_k_disjoint(net, K):
        log.info("%s K=%d: %d disjoint paths exist, skipped", instance_id, K, K)
        return replace(row, status="filtered")

    if method == IPM_METHOD or method.startswith(IPM_METHOD + "@"):
        return _run_ipm(row, net, K, method, alpha)

    kind, bounded = parse_method(method)
    started = time.perf_counter()
    if bounded:
        kind = replace(kind, presence_bound=rstar(net, K))
    model = build(kind, net, K)
    try:
        start: dict[int, float] | None = warm_start(model, net, ipm(net, K))
    except NoPathError:
        start = None
    lower = objective_lower_bound(net, K, kind.tag)
    setup_ms = (time.perf_counter() - started) * 1000

    relaxation = solve_lp(model, backend=lp_backend)
    report = solve_bb(model, time_limit_ms=time_limit_ms, backend=lp_backend,
                      objective_bound=lower, start=start)
    row = replace(row, status=report.status.value, time_ms=setup_ms + report.time_ms,
                  bound=relaxation.objective)
    if report.assignment is None or report.objective is None:
        return row

    raw = decode(model, report.assignment, net, K)
    paths = remove_loops(raw, net)
    name = objective_name(kind.tag)
    recomputed = metrics.objective_value(name, paths)
    if report.status is SolveStatus.OPTIMAL and recomputed != round(report.objective):
        log.warning("%s K=%d %s: model objective %s but loopless paths score %s",
                    instance_id, K, method, report.objective, recomputed)
    if spread:
        paths = spread_overlaps(paths, net, name)
    if relaxation.objective is not None:
        row = replace(row, gap_pct=gap(report.objective, relaxation.objective))
    return _scored(replace(row, objective=report.objective), paths)


@dataclass(frozen=True)
class WorkItem:
    ref: InstanceRef
    K: int
    method: str
    time_limit_ms: int
    alpha: float
    lp_backend: str
    filter_disjoint: bool
    spread: bool = True


def run_item(item: WorkItem) -> ResultRow:
    """Process-pool entry point; failures become rows with status `error`."""
    try:
        _, net = resolve_instance(item.ref.token)
        return run_method(
            item.ref.instance_id, net, item.K, item.method,
            time_limit_ms=item.time_limit_ms, alpha=item.alpha, lp_backend=item.lp_backend,
            filter_disjoint=item.filter_disjoint, group=item.ref.group_id, spread=item.spread,
        )
    except (ValueError, KeyError, OSError, RuntimeError) as e:
        log.warning("%s K=%d %s failed: %s", item.ref.instance_id, item.K, item.method, e)
        return ResultRow(item.ref.instance_id, item.K, item.method, "error", group=item.ref.group_id)


def work_items(config: ExperimentConfig) -> list[WorkItem]:
    return [
        WorkItem(ref, K, method, config.time_limit_ms, config.alpha, config.lp_backend,
                 config.filter_disjoint, config.spread)
        for ref in config.instances
        for K in config.ks
        for method in config.methods
    ]


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Run every work item and write the CSV (and paths files) when configured."""
    items = work_items(config)
    log.info("Running %d work items on %d workers", len(items), config.workers)
    if config.workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(run_item, items))
    else:
        rows = [run_item(item) for item in items]

    if config.paths_dir is not None:
        config.paths_dir.mkdir(parents=True, exist_ok=True)
        for row in rows:
            if row.paths is not None:
                write_paths(row.paths, config.paths_dir / paths_filename(row))
    if config.output is not None:
        write_csv(rows, config.output)
    return rows


def paths_filename(row: ResultRow) -> str:
    safe = row.instance.replace(":", "_")
    return f"{safe}_K{row.K}_{row.method.replace('@', '_')}.paths"


def results_frame(rows: Sequence[ResultRow], with_means: bool = True) -> pd.DataFrame:
    """Rows as a DataFrame in CSV column order, plus one mean row per multi-instance group."""
    frame = pd.DataFrame(
        [
            {
                "instance": r.instance, "K": r.K, "method": r.method, "status": r.status,
                "objective": r.objective, "bound": r.bound, "gap_pct": r.gap_pct,
                "time_ms": r.time_ms,
                "avdi": None if r.avdi is None else float(r.avdi),
                "midi": None if r.midi is None else float(r.midi),
                "group": r.group,
            }
            for r in rows
        ],
        columns=[*CSV_COLUMNS, "group"],
    )
    if with_means and not frame.empty:
        scored = frame.dropna(subset=["avdi"])
        grouped = scored.groupby(["group", "K", "method"], sort=False)
        means = grouped[["gap_pct", "time_ms", "avdi", "midi"]].mean()
        sizes = grouped.size()
        means = means[sizes >= 2].reset_index()
        if not means.empty:
            means["instance"] = means["group"]
            means["status"] = "mean"
            means["objective"] = None
            means["bound"] = None
            frame = pd.concat([frame, means[[*CSV_COLUMNS, "group"]]], ignore_index=True)
    return frame[list(CSV_COLUMNS)]


def _render(value: object, digits: int) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    number = float(value)  # type: ignore[arg-type]
    if number.is_integer() and digits != 6:
        return str(int(number))
    return str(metrics.round_half_up(number, digits))


def format_csv(rows: Sequence[ResultRow], with_means: bool = True) -> str:
    frame = results_frame(rows, with_means).astype(object)
    for column, digits in (("objective", 3), ("bound", 3), ("gap_pct", 3), ("time_ms", 1),
                           ("avdi", 6), ("midi", 6)):
        frame[column] = frame[column].map(lambda v, d=digits: _render(v, d))
    return frame.to_csv(index=False, lineterminator="\n")


def write_csv(rows: Sequence[ResultRow], path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(format_csv(rows))
    log.info("Wrote %d result rows to %s", len(rows), path)
