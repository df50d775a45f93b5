"""Calibration-connectivity graph per sample and the P_calib estimator."""
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyEnsemble

ANGULAR = "angular"
BASELINE = "baseline"


@dataclass(frozen=True)
class ConnectivityCriteria:
    """Edge rule: pairwise RO >= ``t_threshold`` and a viewpoint-similarity bound.

    In ``angular`` mode the ideal boresights must differ by at most
    ``mu_max_deg``; in ``baseline`` mode the cameras must be at most
    ``d_max_km`` apart. With ``require_anchor_in_component`` the calibrated
    cluster is the anchor's component instead of the largest one.
    """

    t_threshold: float = 0.8
    similarity_mode: str = BASELINE
    mu_max_deg: float | None = None
    d_max_km: float | None = 200.0
    require_anchor_in_component: bool = False

    def __post_init__(self):
        if not 0.0 <= self.t_threshold <= 1.0:
            raise ValueError(f"t_threshold must be in [0, 1], got {self.t_threshold}")
        if self.similarity_mode == ANGULAR:
            if self.mu_max_deg is None:
                raise ValueError("angular mode needs mu_max_deg")
        elif self.similarity_mode == BASELINE:
            if self.d_max_km is None:
                raise ValueError("baseline mode needs d_max_km")
        else:
            raise ValueError(f"unknown similarity_mode {self.similarity_mode!r}")


@dataclass
class CalibGraph:
    n_nodes: int
    adjacency: np.ndarray
    component_labels: np.ndarray

    @property
    def component_sizes(self):
        return np.bincount(self.component_labels)

    @property
    def largest_component_size(self):
        return int(self.component_sizes.max())

    def component_size_of(self, node):
        return int(self.component_sizes[self.component_labels[node]])


@dataclass
class ComponentHistogram:
    counts: Counter = field(default_factory=Counter)
    n_mc: int = 0

    def merge(self, other):
        return ComponentHistogram(self.counts + other.counts, self.n_mc + other.n_mc)


def pairwise_angle(pose_a, pose_b):
    """Angle in degrees between the optical axes of two poses."""
    za = np.asarray(pose_a.rotation)[:, 2]
    zb = np.asarray(pose_b.rotation)[:, 2]
    cosang = np.dot(za, zb) / (np.linalg.norm(za) * np.linalg.norm(zb))
    return float(abs(np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))))


def similarity_matrix(poses, criteria):
    """Boolean matrix of pairs passing the viewpoint-similarity bound."""
    n = len(poses)
    ok = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if criteria.similarity_mode == ANGULAR:
                passes = pairwise_angle(poses[i], poses[j]) <= criteria.mu_max_deg
            else:
                d = np.linalg.norm(np.asarray(poses[i].position) - np.asarray(poses[j].position))
                passes = d <= criteria.d_max_km
            ok[i, j] = ok[j, i] = passes
    return ok


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins so labels are deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def components(adjacency):
    """Label connected components 0..k-1 in order of their lowest node."""
    adj = np.asarray(adjacency, dtype=bool)
    n = adj.shape[0]
    uf = _UnionFind(n)
    rows, cols = np.nonzero(np.triu(adj, 1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        uf.union(i, j)
    roots = [uf.find(i) for i in range(n)]
    relabel = {}
    return np.array([relabel.setdefault(r, len(relabel)) for r in roots], dtype=int)


def graph_from_adjacency(adjacency):
    adj = np.array(adjacency, dtype=bool)
    np.fill_diagonal(adj, False)
    adj = adj | adj.T
    return CalibGraph(adj.shape[0], adj, components(adj))


def build_graph(report, poses, criteria, similar=None):
    """Connect c, c' when both footprints exist, RO_cc' >= T and they are similar.

    ``poses`` are the ideal (commanded) poses. ``similar`` may carry a
    precomputed :func:`similarity_matrix`, which is a formation constant.
    """
    n = len(poses)
    if report.pairwise_ro.shape != (n, n):
        raise ValueError("report and poses disagree on the number of cameras")
    if similar is None:
        similar = similarity_matrix(poses, criteria)
    valid = np.asarray(report.areas) > 0.0
    adj = (report.pairwise_ro >= criteria.t_threshold) & similar
    adj &= valid[:, None] & valid[None, :]
    return graph_from_adjacency(adj)


def accumulate(hist, graph, size=None):
    """Count one sample. ``size`` defaults to the largest component size."""
    q = graph.largest_component_size if size is None else int(size)
    counts = Counter(hist.counts)
    counts[q] += 1
    return ComponentHistogram(counts, hist.n_mc + 1)


def p_calib(hist, q):
    """Fraction of samples with a connected component of at least ``q`` views."""
    if hist.n_mc <= 0:
        raise EmptyEnsemble("histogram has no samples")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    hits = sum(n for size, n in hist.counts.items() if size >= q)
    return hits / hist.n_mc
