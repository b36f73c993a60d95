"""Dataset registry, loading, and preprocessing.

The registry lists the study networks with the node and edge counts they
are expected to have after preprocessing; loading warns (never fails) when
a file on disk deviates, since several of these datasets circulate in more
than one version.  Preprocessing symmetrizes, deduplicates, and drops
low-degree nodes in a single pass.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import Graph, MalformedInputError, from_edge_list, read_edge_list

__all__ = [
    "DatasetSpec",
    "LoadedDataset",
    "DatasetMismatchWarning",
    "EmptyGraphError",
    "REGISTRY",
    "preprocess",
    "load_dataset",
    "core_labels_report",
    "read_coordinates_csv",
    "read_labels_csv",
]

DEGREE_FILTER_THRESHOLD = 4


class EmptyGraphError(MalformedInputError):
    """Preprocessing removed every node."""


class DatasetMismatchWarning(UserWarning):
    """Post-preprocessing size differs from the registry's expected value."""


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    filename: str
    expected_n: int
    expected_m: int
    has_coordinates: bool = False
    skip_degree_filter: bool = False
    sizes_approximate: bool = False


REGISTRY = {
    spec.name: spec
    for spec in [
        DatasetSpec("world-trade", "world-trade.edges", 76, 845),
        DatasetSpec("cs-faculty", "cs-faculty.edges", 205, 2861),
        DatasetSpec("history-faculty", "history-faculty.edges", 145, 2334),
        DatasetSpec("business-faculty", "business-faculty.edges", 113, 3027),
        DatasetSpec("polblogs", "polblogs.edges", 852, 15956),
        DatasetSpec("airports", "airports.edges", 210, 2429),
        DatasetSpec("celegans", "celegans.edges", 279, 1900,
                     has_coordinates=True, sizes_approximate=True),
        DatasetSpec("open-airlines", "open-airlines.edges", 7200, 18600,
                     has_coordinates=True, sizes_approximate=True),
        DatasetSpec("london-underground", "london-underground.edges", 315, 270,
                     has_coordinates=True, skip_degree_filter=True),
    ]
}


@dataclass(frozen=True, eq=False)
class LoadedDataset:
    name: str
    graph: Graph
    old_to_new: np.ndarray
    labels: list | None
    coordinates: np.ndarray | None


def preprocess(g_raw, skip_degree_filter=False, iterate_filter=False):
    """Symmetrize, simplify, and strip low-degree nodes.

    Directionality is dropped, duplicate edges and self-loops removed, and
    nodes of degree <= 4 deleted in one pass over the cleaned graph (set
    ``iterate_filter`` to repeat the pass until a fixed point, i.e. take
    the 5-core).  Surviving nodes are reindexed densely; the old-to-new id
    map (with -1 for dropped nodes) is returned alongside the graph.

    Raises :class:`EmptyGraphError` when nothing survives the filter.
    """
    und = from_edge_list(g_raw.edges(), n=g_raw.n, directed=False,
                         labels=g_raw.labels, coordinates=g_raw.coordinates)
    if skip_degree_filter:
        return und, np.arange(und.n, dtype=np.int64)
    current = und
    old_to_new = np.arange(und.n, dtype=np.int64)
    while True:
        keep = np.nonzero(current.degrees() > DEGREE_FILTER_THRESHOLD)[0]
        if keep.size == 0:
            raise EmptyGraphError(
                "degree filter removed every node; use skip_degree_filter "
                "for very sparse networks")
        if keep.size == current.n:
            break
        current, step_map = current.subgraph(keep)
        mapped = old_to_new >= 0
        old_to_new[mapped] = step_map[old_to_new[mapped]]
        if not iterate_filter:
            break
    return current, old_to_new


def read_coordinates_csv(path):
    """Sidecar CSV ``node_id,x,y[,z]``; returns {id_token: vector}."""
    coords = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            coords[row[0]] = np.array([float(v) for v in row[1:]], dtype=float)
    if coords and len({v.size for v in coords.values()}) != 1:
        raise MalformedInputError(f"{path}: inconsistent coordinate dimensions")
    return coords


def read_labels_csv(path):
    """Sidecar CSV ``node_id,label``; returns {id_token: label}."""
    labels = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            labels[row[0]] = row[1] if len(row) > 1 else row[0]
    return labels


def load_dataset(spec, path=None, data_dir=None, iterate_filter=False):
    """Load, preprocess, and size-check one registry dataset.

    ``path`` overrides the registry filename; otherwise the file is looked
    up under ``data_dir``.  Sidecar files ``<stem>.coords.csv`` and
    ``<stem>.labels.csv`` are picked up when present.  A post-preprocessing
    (n, m) that differs from the registry's expectation raises a
    :class:`DatasetMismatchWarning` with the deltas, not an error.
    """
    if isinstance(spec, str):
        spec = REGISTRY[spec]
    if path is None:
        if data_dir is None:
            raise MalformedInputError("need a path or data_dir to locate the file")
        path = Path(data_dir) / spec.filename
    path = Path(path)
    edges, token_labels = read_edge_list(path)
    raw = from_edge_list(edges)
    if token_labels is None:
        token_labels = [str(v) for v in range(raw.n)]
    labels_path = path.with_suffix(".labels.csv")
    if labels_path.exists():
        label_map = read_labels_csv(labels_path)
        token_labels = [label_map.get(tok, tok) for tok in token_labels]
    coordinates = None
    coords_path = path.with_suffix(".coords.csv")
    if coords_path.exists():
        coord_map = read_coordinates_csv(coords_path)
        dim = next(iter(coord_map.values())).size if coord_map else 2
        coordinates = np.full((raw.n, dim), np.nan)
        # coordinate ids refer to the raw file tokens
        raw_tokens = ([str(v) for v in range(raw.n)]
                      if raw.labels is None else raw.labels)
        for i, tok in enumerate(raw_tokens):
            if tok in coord_map:
                coordinates[i] = coord_map[tok]
    raw = Graph(raw.n, raw.edges(), directed=False,
                labels=token_labels, coordinates=coordinates)
    graph, old_to_new = preprocess(
        raw, skip_degree_filter=spec.skip_degree_filter,
        iterate_filter=iterate_filter)
    if (graph.n, graph.m) != (spec.expected_n, spec.expected_m):
        warnings.warn(
            f"{spec.name}: got (n={graph.n}, m={graph.m}), registry expects "
            f"(n={spec.expected_n}, m={spec.expected_m}); "
            f"delta=({graph.n - spec.expected_n}, {graph.m - spec.expected_m})",
            DatasetMismatchWarning, stacklevel=2)
    return LoadedDataset(name=spec.name, graph=graph, old_to_new=old_to_new,
                         labels=graph.labels, coordinates=graph.coordinates)


def core_labels_report(g, heights, depth=3):
    """Node labels grouped by fitted level, for the top ``depth`` levels.

    Falls back to stringified node ids when the graph carries no labels.
    """
    h = heights.heights if hasattr(heights, "heights") else np.asarray(heights)
    labels = g.labels if g.labels is not None else [str(v) for v in range(g.n)]
    report = []
    for level in range(depth):
        nodes = np.nonzero(h == level)[0]
        report.append([labels[v] for v in nodes])
    return report
