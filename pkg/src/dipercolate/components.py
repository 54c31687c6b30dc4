"""Strongly connected components and the largest-SCC observable.

Two vertices share a component iff directed paths exist in both directions.
The partition is computed by scipy's compiled SCC routine (Tarjan-style,
O(n + m), no Python recursion), after collapsing parallel edges into a
sparse adjacency structure; multiplicities and self-loops cannot change
reachability.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .configmodel import Digraph
from .errors import EmptyGraphError, VertexOutOfRangeError

__all__ = [
    "SccPartition",
    "strongly_connected_components",
    "largest_scc_fraction",
    "strong_component_of",
    "write_labels",
]


class SccPartition:
    """Partition of the vertex set into strongly connected components.

    Attributes
    ----------
    component_id : ndarray of int
        Component label per vertex.
    component_sizes : ndarray of int
        Size per label (indexed by label).
    largest : tuple (label, size)
        A largest component; ties break to the lowest label.
    """

    def __init__(self, component_id: np.ndarray, component_sizes: np.ndarray):
        component_id = np.asarray(component_id)
        component_sizes = np.asarray(component_sizes)
        component_id.setflags(write=False)
        component_sizes.setflags(write=False)
        self.component_id = component_id
        self.component_sizes = component_sizes
        if component_sizes.size:
            label = int(np.argmax(component_sizes))
            self.largest = (label, int(component_sizes[label]))
        else:
            self.largest = (-1, 0)

    @property
    def count(self) -> int:
        return self.component_sizes.size

    def members(self, label: int) -> set[int]:
        return set(np.flatnonzero(self.component_id == label).tolist())

    def __repr__(self) -> str:
        return f"SccPartition(count={self.count}, largest={self.largest})"


def _adjacency(g: Digraph) -> csr_matrix:
    data = np.ones(g.m, dtype=np.int8)
    return csr_matrix((data, (g.src, g.dst)), shape=(g.n, g.n))


def strongly_connected_components(g: Digraph) -> SccPartition:
    """Label every vertex with its strongly connected component."""
    if g.n == 0:
        return SccPartition(np.empty(0, dtype=np.int32), np.empty(0, dtype=np.int64))
    ncomp, labels = connected_components(
        _adjacency(g), directed=True, connection="strong"
    )
    sizes = np.bincount(labels, minlength=ncomp)
    return SccPartition(labels, sizes)


def largest_scc_fraction(g: Digraph) -> float:
    """Size of the largest SCC divided by the vertex count."""
    if g.n == 0:
        raise EmptyGraphError("largest-SCC fraction undefined for an empty graph")
    return strongly_connected_components(g).largest[1] / g.n


def strong_component_of(g: Digraph, v: int) -> set[int]:
    """Vertices reachable from ``v`` in both directions (including ``v``).

    Computed as the intersection of forward and backward BFS reachability,
    independently of the partition routine.
    """
    if not 0 <= v < g.n:
        raise VertexOutOfRangeError(f"vertex {v} outside [0, {g.n})")
    adj = _adjacency(g)
    forward = breadth_first_order(adj, v, directed=True, return_predecessors=False)
    backward = breadth_first_order(adj.T, v, directed=True, return_predecessors=False)
    return set(np.intersect1d(forward, backward).tolist())


def write_labels(partition: SccPartition, path) -> None:
    """Dump `vertex label` lines (debugging aid)."""
    with open(path, "w", encoding="utf-8") as fh:
        for v, label in enumerate(partition.component_id.tolist()):
            fh.write(f"{v} {label}\n")
