"""Run orchestration: setup, sample creation and triangle count phases."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .estimator import aggregate
from .graph_io import EdgeList, preprocess, read_coo, split_chunks
from .oracle import exact_count
from .partitioner import (ColoringParams, build_batches, core_loads, enumerate_triplets, expected_core_load,
                          mg_merge, select_top)
from .pim_core import DEFAULT_CAPACITY, DEFAULT_SCRATCH, PimCore

PHASES = ("Setup Time", "Sample Creation Time", "Triangle Count Time")
SWEEP_AXES = {"colors": "colors", "uniform_p": "uniform_p", "capacity_fraction": "capacity_fraction",
              "mg_K": "mg_k", "mg_top_t": "mg_top"}
AUTO_SAFETY = 1.2

# spawn keys separating the independent random streams of a run
_SHUFFLE, _COLORING, _SAMPLING, _RESERVOIR = 1, 2, 3, 4


def derive_seed(seed, *keys) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, np.uint64)[0])


@dataclass
class RunConfig:
    input: str | None = None
    colors: int = 5
    uniform_p: float = 1.0
    capacity: int | str = "auto"
    capacity_fraction: float | None = None
    mg_k: int = 64
    mg_top: int = 0
    host_workers: int = 32
    core_threads: int = 16
    scratch_capacity: int | None = DEFAULT_SCRATCH
    seed: int = 0
    core_workers: int | None = None

    def __post_init__(self):
        if self.colors < 1:
            raise ValueError(f"colors must be >= 1, got {self.colors}")
        if not 0.0 < self.uniform_p <= 1.0:
            raise ValueError(f"uniform_p must be in (0, 1], got {self.uniform_p}")
        if self.capacity != "auto":
            if isinstance(self.capacity, str) or int(self.capacity) < 3:
                raise ValueError(f"capacity must be 'auto' or an integer >= 3, got {self.capacity!r}")
            if self.capacity_fraction is not None:
                raise ValueError("capacity and capacity_fraction are mutually exclusive")
        if self.capacity_fraction is not None and self.capacity_fraction <= 0:
            raise ValueError(f"capacity_fraction must be > 0, got {self.capacity_fraction}")
        if self.mg_k < 1:
            raise ValueError(f"mg_k must be >= 1, got {self.mg_k}")
        if self.mg_top < 0:
            raise ValueError(f"mg_top must be >= 0, got {self.mg_top}")
        if self.host_workers < 1 or self.core_threads < 1:
            raise ValueError("host_workers and core_threads must be >= 1")
        if self.scratch_capacity is not None and self.scratch_capacity < 2:
            raise ValueError("scratch_capacity must be >= 2")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")


@dataclass
class RunReport:
    estimate: float
    exact: bool
    setup_time: float
    sample_creation_time: float
    triangle_count_time: float
    cores: list
    config: dict
    seed: int
    edges: int
    capacity: int
    iteration: int = 0
    cumulative_edges: int = 0
    truth: int | None = None
    core_timings: list = field(default_factory=list, repr=False)

    @property
    def estimate_rounded(self) -> int:
        return round(self.estimate)

    @property
    def negative_estimate(self) -> bool:
        return self.estimate < 0

    @property
    def num_cores(self) -> int:
        return len(self.cores)

    @property
    def relative_error(self):
        return relative_error(self.estimate, self.truth) if self.truth is not None else None

    @property
    def timings(self):
        return dict(zip(PHASES, (self.setup_time, self.sample_creation_time, self.triangle_count_time)))

    def to_dict(self, timing=True):
        out = {
            "estimate": self.estimate,
            "estimate_rounded": self.estimate_rounded,
            "exact": self.exact,
            "negative_estimate": self.negative_estimate,
            "edges": self.edges,
            "cumulative_edges": self.cumulative_edges,
            "iteration": self.iteration,
            "num_cores": self.num_cores,
            "capacity": self.capacity,
            "seed": self.seed,
            "truth": self.truth,
            "relative_error": self.relative_error,
            "config": self.config,
            "cores": self.cores,
        }
        if timing:
            out["timings_ms"] = self.timings
            out["backend"] = kernels.BACKEND
        return out

    def to_json(self, timing=True):
        return json.dumps(self.to_dict(timing), sort_keys=True)


def relative_error(estimate, truth):
    if truth == 0:
        return 0.0 if estimate == 0 else math.inf
    return abs(estimate - truth) / truth


def prepare_graph(raw, seed) -> EdgeList:
    """Preprocess raw edges exactly as a run with ``seed`` would."""
    return preprocess(raw, derive_seed(seed, _SHUFFLE))


def load_graph(config: RunConfig) -> EdgeList:
    """Parse and preprocess the configured input. Raises before any phase is timed."""
    if config.input is None:
        raise ValueError("no input path configured")
    return prepare_graph(read_coo(config.input), config.seed)


def resolve_capacity(config: RunConfig, edges: np.ndarray, params: ColoringParams) -> int:
    expected = expected_core_load(len(edges), config.colors)
    if config.capacity_fraction is not None:
        return max(3, math.ceil(config.capacity_fraction * expected))
    if config.capacity != "auto":
        return int(config.capacity)
    # size the reservoirs so nothing is replaced, unless the bank cannot hold it
    busiest = int(core_loads(edges, params).max()) if len(edges) else 0
    return min(DEFAULT_CAPACITY, max(3, math.ceil(AUTO_SAFETY * expected), busiest))


def _ms(seconds):
    return seconds * 1000.0


class Pipeline:
    """Host plus simulated cores for one run. Construction is the setup phase."""

    def __init__(self, config: RunConfig, graph: EdgeList):
        start = time.perf_counter()
        self.config = config
        self.graph = graph
        self.params = ColoringParams.random(config.colors, derive_seed(config.seed, _COLORING))
        self.params.check_nodes(graph.max_node_id)
        self.capacity = resolve_capacity(config, graph.edges, self.params)
        reservoir_seed = derive_seed(config.seed, _RESERVOIR)
        self.cores = [PimCore(i, trip, self.capacity, reservoir_seed)
                      for i, trip in enumerate(enumerate_triplets(config.colors))]
        self.summary = None
        self.streamed = 0
        workers = config.core_workers or os.cpu_count() or 1
        self.pool = ThreadPoolExecutor(max_workers=min(workers, len(self.cores)))
        self.setup_time = _ms(time.perf_counter() - start)

    def close(self):
        self.pool.shutdown()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def stream(self, chunk, chunk_idx=0) -> float:
        """Sample creation: batch a chunk on the host and transfer it to the cores."""
        cfg = self.config
        start = time.perf_counter()
        mg_k = cfg.mg_k if cfg.mg_top else 0
        batches = build_batches(chunk, self.params, cfg.uniform_p, derive_seed(cfg.seed, _SAMPLING, chunk_idx),
                                workers=cfg.host_workers, mg_k=mg_k)
        list(self.pool.map(lambda pair: pair[0].receive(pair[1]), zip(self.cores, batches.batches)))
        if batches.summary is not None:
            parts = [batches.summary] if self.summary is None else [self.summary, batches.summary]
            self.summary = mg_merge(parts)
        self.streamed += len(chunk)
        return _ms(time.perf_counter() - start)

    def count(self):
        """Triangle count: remap, sort, index, count on every core, then aggregate."""
        cfg = self.config
        start = time.perf_counter()
        remap = None
        if cfg.mg_top and self.summary is not None:
            remap = select_top(self.summary, cfg.mg_top, self.graph.max_node_id)
        reports = list(self.pool.map(lambda c: c.run(remap, cfg.core_threads, cfg.scratch_capacity), self.cores))
        estimate = aggregate(reports, cfg.colors, cfg.uniform_p)
        return reports, estimate, _ms(time.perf_counter() - start)

    def report(self, reports, estimate, sample_ms, count_ms, setup_ms, iteration=0, truth=None) -> RunReport:
        cfg = asdict(self.config)
        return RunReport(
            estimate=estimate.value, exact=estimate.exact,
            setup_time=setup_ms, sample_creation_time=sample_ms, triangle_count_time=count_ms,
            cores=[r.stats() for r in reports], config=cfg, seed=self.config.seed,
            edges=len(self.graph), capacity=self.capacity, iteration=iteration,
            cumulative_edges=self.streamed, truth=truth,
            core_timings=[(_ms(r.sort_time), _ms(r.count_time)) for r in reports],
        )


def run_static(config: RunConfig, graph: EdgeList | None = None, truth=None) -> RunReport:
    if graph is None:
        graph = load_graph(config)
    with Pipeline(config, graph) as pipe:
        sample_ms = pipe.stream(graph.edges, 0)
        reports, estimate, count_ms = pipe.count()
        return pipe.report(reports, estimate, sample_ms, count_ms, pipe.setup_time, truth=truth)


def run_dynamic(config: RunConfig, k: int, graph: EdgeList | None = None, truth=None) -> list[RunReport]:
    """Stream ``k`` chunks into persistent reservoirs, counting after each.

    Report ``i`` estimates the triangles of chunks ``0..i`` combined.
    """
    if k < 1:
        raise ValueError(f"dynamic update count must be >= 1, got {k}")
    if graph is None:
        graph = load_graph(config)
    out = []
    with Pipeline(config, graph) as pipe:
        for i, chunk in enumerate(split_chunks(graph, k)):
            sample_ms = pipe.stream(chunk, i)
            reports, estimate, count_ms = pipe.count()
            setup_ms = pipe.setup_time if i == 0 else 0.0
            out.append(pipe.report(reports, estimate, sample_ms, count_ms, setup_ms, iteration=i,
                                   truth=truth if i == k - 1 else None))
    return out


def cumulative_time(reports) -> float:
    return sum(r.sample_creation_time + r.triangle_count_time for r in reports)


def sweep(config: RunConfig, axis: str, values, truth=None, graph: EdgeList | None = None) -> list[RunReport]:
    """One run per value of ``axis``; run ``i`` uses seed ``config.seed + i``."""
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {sorted(SWEEP_AXES)}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    if graph is None:
        graph = load_graph(config)
    if truth is None:
        truth = exact_count(graph.edges)
    field_name = SWEEP_AXES[axis]
    out = []
    for i, value in enumerate(values):
        changes = {field_name: value, "seed": config.seed + i}
        if field_name == "capacity_fraction":
            changes["capacity"] = "auto"
        cfg = replace(config, **changes)
        # reshuffle only matters for ordering; the edge set is seed independent
        run_graph = graph if cfg.seed == config.seed else prepare_graph(graph.edges, cfg.seed)
        run_graph.max_node_id = graph.max_node_id
        out.append(run_static(cfg, run_graph, truth=truth))
    return out


CSV_FIELDS = ["axis", "value", "iteration", "seed", "colors", "num_cores", "uniform_p", "capacity", "edges",
              "estimate", "estimate_rounded", "exact", "truth", "relative_error",
              "setup_time_ms", "sample_creation_time_ms", "triangle_count_time_ms"]


def csv_row(report: RunReport, axis="", value=""):
    return {
        "axis": axis, "value": value, "iteration": report.iteration, "seed": report.seed,
        "colors": report.config["colors"], "num_cores": report.num_cores,
        "uniform_p": report.config["uniform_p"], "capacity": report.capacity, "edges": report.edges,
        "estimate": repr(report.estimate), "estimate_rounded": report.estimate_rounded,
        "exact": report.exact, "truth": "" if report.truth is None else report.truth,
        "relative_error": "" if report.relative_error is None else repr(report.relative_error),
        "setup_time_ms": report.setup_time, "sample_creation_time_ms": report.sample_creation_time,
        "triangle_count_time_ms": report.triangle_count_time,
    }


def to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
