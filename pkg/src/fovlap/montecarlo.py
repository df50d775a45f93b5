"""Monte Carlo ensemble over noisy rotation states.

Every camera of every sample draws from its own PCG64 stream keyed by
``(master_seed, *stream_key, sample_index, camera_index)``, so any sample
can be replayed alone and results do not depend on how samples are split
across workers.
"""
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .camera import CameraPose, footprint
from .errors import EmptyEnsemble
from .geometry import NoiseModel, perturb, rodrigues, sample_perturbation
from .graph import (ComponentHistogram, ConnectivityCriteria, build_graph,
                    similarity_matrix)
from .overlap import overlap_report


@dataclass(frozen=True)
class EnsembleConfig:
    n_mc: int = 100
    master_seed: int = 0
    noise: NoiseModel = field(default_factory=NoiseModel)
    criteria: ConnectivityCriteria = field(default_factory=ConnectivityCriteria)
    stream_key: tuple = ()

    def __post_init__(self):
        if self.n_mc < 1:
            raise EmptyEnsemble(f"n_mc must be >= 1, got {self.n_mc}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")


@dataclass
class SetupSample:
    sample_index: int
    perturbed_poses: list
    footprints: list
    report: object
    graph: object

    @property
    def miss_count(self):
        return sum(1 for fp in self.footprints if fp.is_empty)


@dataclass(frozen=True)
class SampleRecord:
    """The scalars of one sample that the ensemble statistics need."""

    sample_index: int
    ao: float
    ro: float
    largest: int
    anchor_component: int
    missed_cameras: int
    anchor_miss: bool


@dataclass
class EnsembleStats:
    mean_ao: float
    mean_ro: float
    std_ro: float
    histogram: ComponentHistogram
    anchor_histogram: ComponentHistogram
    miss_count: int
    anchor_miss_count: int
    n_mc: int

    def select_histogram(self, criteria):
        return self.anchor_histogram if criteria.require_anchor_in_component else self.histogram


def camera_rng(master_seed, stream_key, sample_index, camera_index):
    ss = np.random.SeedSequence(
        master_seed, spawn_key=(*stream_key, sample_index, camera_index))
    return np.random.Generator(np.random.PCG64(ss))


def run_sample(scenario, config, sample_index, similar=None):
    perturbed = []
    footprints = []
    for c, pose in enumerate(scenario.ideal_poses):
        rng = camera_rng(config.master_seed, config.stream_key, sample_index, c)
        delta = rodrigues(sample_perturbation(config.noise, rng))
        noisy = CameraPose(pose.position, perturb(pose.rotation, delta), c)
        perturbed.append(noisy)
        footprints.append(footprint(scenario.intrinsics, noisy, scenario.surface_height))
    report = overlap_report(footprints, scenario.anchor_index)
    graph = build_graph(report, scenario.ideal_poses, config.criteria, similar)
    return SetupSample(sample_index, perturbed, footprints, report, graph)


def summarize(sample, anchor_index):
    return SampleRecord(
        sample.sample_index, sample.report.ao, sample.report.ro,
        sample.graph.largest_component_size,
        sample.graph.component_size_of(anchor_index),
        sample.miss_count, sample.report.anchor_miss)


def _run_chunk(scenario, config, indices):
    similar = similarity_matrix(scenario.ideal_poses, config.criteria)
    return [summarize(run_sample(scenario, config, i, similar), scenario.anchor_index)
            for i in indices]


def reduce_records(records):
    """Ensemble statistics from per-sample records, reduced in sample order."""
    if not records:
        raise EmptyEnsemble("no samples to reduce")
    records = sorted(records, key=lambda r: r.sample_index)
    n = len(records)
    ao = math.fsum(r.ao for r in records) / n
    ro = np.array([r.ro for r in records])
    mean_ro = math.fsum(ro) / n
    std_ro = math.sqrt(math.fsum((ro - mean_ro) ** 2) / (n - 1)) if n > 1 else 0.0
    hist = ComponentHistogram()
    anchor_hist = ComponentHistogram()
    for r in records:
        hist.counts[r.largest] += 1
        anchor_hist.counts[r.anchor_component] += 1
    hist.n_mc = anchor_hist.n_mc = n
    return EnsembleStats(
        mean_ao=ao, mean_ro=mean_ro, std_ro=std_ro, histogram=hist,
        anchor_histogram=anchor_hist,
        miss_count=sum(1 for r in records if r.missed_cameras),
        anchor_miss_count=sum(1 for r in records if r.anchor_miss),
        n_mc=n)


def _chunks(n, parts):
    size = max(1, math.ceil(n / parts))
    return [range(s, min(n, s + size)) for s in range(0, n, size)]


def run_records(scenario, config, workers=1):
    n = config.n_mc
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or n < 2:
        return _run_chunk(scenario, config, range(n))
    chunks = _chunks(n, workers * 4)
    records = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_chunk, scenario, config, ch) for ch in chunks]
        for fut in futures:
            records.extend(fut.result())
    return records


def run_ensemble(scenario, config, workers=1):
    """Sample ``config.n_mc`` rotation states and aggregate their statistics."""
    return reduce_records(run_records(scenario, config, workers))

