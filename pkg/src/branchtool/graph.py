"""Directed multigraph representation, edge-list parsing, and basic checks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

IntMatrix = list[list[int]]


class GraphError(ValueError):
    """Invalid graph data or malformed edge-list text."""


class UnknownNodeError(GraphError):
    """Referenced node does not exist in the graph."""


@dataclass(frozen=True)
class MultiGraph:
    """Finite directed multigraph with parallel edges merged into multiplicities.

    Node indices are dense ``0..n-1``; ``labels[i]`` is the external name of
    node ``i``.  ``edges`` holds one ``(src, dst, multiplicity)`` triple per
    ordered pair, sorted by ``(src, dst)``.  Self-loops are allowed.
    Instances are immutable and hashable, so they can be shared freely and
    used as cache keys.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for label in self.labels:
            if not label or label.split() != [label]:
                raise GraphError(f"invalid node label {label!r}")
            if label in seen:
                raise GraphError(f"duplicate node label {label!r}")
            seen.add(label)
        n = len(self.labels)
        prev: tuple[int, int] | None = None
        for src, dst, mult in self.edges:
            if not (0 <= src < n and 0 <= dst < n):
                raise GraphError(f"edge ({src}, {dst}) out of range for {n} nodes")
            if mult < 1:
                raise GraphError(f"edge ({src}, {dst}) has multiplicity {mult}")
            pair = (src, dst)
            if prev is not None and pair <= prev:
                raise GraphError("edges must be sorted with unique (src, dst) pairs")
            prev = pair

    @classmethod
    def build(
        cls,
        items: Iterable[tuple[str, str, int]],
        isolated: Iterable[str] = (),
        sort_labels: bool = False,
    ) -> "MultiGraph":
        """Build a graph from raw ``(src_label, dst_label, multiplicity)`` items.

        Parallel items for the same ordered pair have their multiplicities
        summed.  Node indices follow first appearance order (sources before
        targets, then ``isolated`` extras) unless ``sort_labels`` is set, in
        which case labels are indexed lexicographically.
        """
        items = list(items)
        order: list[str] = []
        known: set[str] = set()

        def note(label: str) -> None:
            if label not in known:
                known.add(label)
                order.append(label)

        for src, dst, _ in items:
            note(src)
            note(dst)
        for label in isolated:
            note(label)
        if sort_labels:
            order = sorted(order)
        index = {label: i for i, label in enumerate(order)}
        merged: dict[tuple[int, int], int] = {}
        for src, dst, mult in items:
            if mult < 1:
                raise GraphError(f"edge {src!r} -> {dst!r} has multiplicity {mult}")
            pair = (index[src], index[dst])
            merged[pair] = merged.get(pair, 0) + mult
        edges = tuple((s, d, merged[(s, d)]) for s, d in sorted(merged))
        return cls(labels=tuple(order), edges=edges)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        """Total number of edges, counting multiplicities."""
        return sum(m for _, _, m in self.edges)

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self.label_index[label]
        except KeyError:
            raise UnknownNodeError(f"unknown node label {label!r}") from None

    @cached_property
    def successors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, the ``(target, multiplicity)`` pairs in ascending order."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for src, dst, mult in self.edges:
            out[src].append((dst, mult))
        return tuple(tuple(row) for row in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, the ``(source, multiplicity)`` pairs in ascending order."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for src, dst, mult in self.edges:
            out[dst].append((src, mult))
        return tuple(tuple(sorted(row)) for row in out)


def parse_edge_list(text: str, sort_labels: bool = False) -> MultiGraph:
    """Parse edge-list text: one ``<src> <dst> [multiplicity]`` edge per line.

    ``#`` starts a comment; blank lines are ignored.  Repeated ``(src, dst)``
    lines accumulate multiplicity.  Raises :class:`GraphError` with the
    offending line number on malformed input or non-positive multiplicity.
    """
    items: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) == 2:
            src, dst = fields
            mult = 1
        elif len(fields) == 3:
            src, dst, word = fields
            try:
                mult = int(word)
            except ValueError:
                raise GraphError(
                    f"line {lineno}: multiplicity {word!r} is not an integer"
                ) from None
            if mult < 1:
                raise GraphError(f"line {lineno}: multiplicity must be positive, got {mult}")
        else:
            raise GraphError(
                f"line {lineno}: expected '<src> <dst> [multiplicity]', got {raw!r}"
            )
        items.append((src, dst, mult))
    return MultiGraph.build(items, sort_labels=sort_labels)


def serialize_edge_list(g: MultiGraph) -> str:
    """Canonical edge-list text: sorted by (src, dst), explicit multiplicity."""
    lines = [f"{g.labels[s]} {g.labels[d]} {m}" for s, d, m in g.edges]
    return "".join(line + "\n" for line in lines)


def adjacency_matrix(g: MultiGraph) -> IntMatrix:
    """Dense exact integer adjacency matrix; entry (i, j) counts edges i -> j."""
    mat = [[0] * g.n for _ in range(g.n)]
    for src, dst, mult in g.edges:
        mat[src][dst] = mult
    return mat


def induced_subgraph(g: MultiGraph, nodes: Iterable[int]) -> MultiGraph:
    """Subgraph induced by ``nodes``, keeping all edges among them.

    Nodes are re-indexed in ascending original-index order; original labels
    are preserved, so results map back to the parent graph by label.
    """
    keep = sorted(set(nodes))
    for v in keep:
        if not 0 <= v < g.n:
            raise UnknownNodeError(f"node index {v} out of range")
    keep_set = set(keep)
    remap = {v: i for i, v in enumerate(keep)}
    labels = tuple(g.labels[v] for v in keep)
    edges = tuple(
        (remap[s], remap[d], m) for s, d, m in g.edges if s in keep_set and d in keep_set
    )
    return MultiGraph(labels=labels, edges=edges)


def is_acyclic(g: MultiGraph) -> bool:
    """True iff the graph has no directed cycle (self-loops count as cycles)."""
    indegree = [0] * g.n
    for _, dst, _ in g.edges:
        indegree[dst] += 1
    queue = deque(v for v in range(g.n) if indegree[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for dst, _ in g.successors[v]:
            indegree[dst] -= 1
            if indegree[dst] == 0:
                queue.append(dst)
    return seen == g.n
