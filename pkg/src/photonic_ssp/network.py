"""Compile an SSP instance into the layered split/pass/converge junction DAG.

Coordinates are in node units. Block ``i`` (1-based) encodes element ``e_i``:
split junctions sit on row 0 at every column of the partial-sum layer
``P_{i-1}``, diagonals descend ``e_i`` rows while moving ``e_i`` columns, and
end on a converge junction at row ``e_i``. Wherever a diagonal crosses a
vertical guide strictly inside the block a pass junction is placed.

The input port is ``(0, 0, 0)``; output ports are ``(N + 1, 0, s)``.

The network keeps only the partial-sum layers as boolean masks; explicit
node and edge lists are materialised lazily, since for large instances
(hundreds of thousands of pass junctions) only the layered form is used.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Any, NamedTuple

import numpy as np

from .ssp_core import SSPInstance


class JunctionKind(enum.Enum):
    SPLIT = "split"
    PASS = "pass"
    CONVERGE = "converge"
    INPUT = "input"
    OUTPUT = "output"
    LOSS_SINK = "sink"


class Branch(enum.Enum):
    VERTICAL = "v"
    DIAGONAL = "d"


@dataclass(frozen=True, order=True)
class Node:
    block: int
    row: int
    col: int
    kind: JunctionKind

    def key(self) -> tuple[int, int, int]:
        return (self.block, self.row, self.col)


class Edge(NamedTuple):
    src: int
    dst: int
    branch: Branch


@dataclass(frozen=True)
class NetworkStats:
    n_split: int
    n_pass: int
    n_converge: int
    n_ports: int
    depth: int


@dataclass(frozen=True, eq=False)
class JunctionNetwork:
    instance: SSPInstance
    layer_masks: tuple[np.ndarray, ...]

    @property
    def elements(self) -> tuple[int, ...]:
        return self.instance.elements

    @property
    def total(self) -> int:
        return self.instance.total

    @cached_property
    def partial_sum_layers(self) -> list[frozenset[int]]:
        return [frozenset(int(s) for s in np.flatnonzero(m)) for m in self.layer_masks]

    @cached_property
    def output_ports(self) -> tuple[int, ...]:
        return tuple(int(s) for s in np.flatnonzero(self.layer_masks[-1]))

    def block_start_depth(self, block: int) -> int:
        """Absolute depth (node units) of row 0 of ``block``."""
        return sum(self.elements[: max(block - 1, 0)])

    def depth_of(self, node: Node) -> int:
        if node.kind is JunctionKind.INPUT:
            return 0
        if node.kind is JunctionKind.OUTPUT:
            return self.total
        return self.block_start_depth(node.block) + node.row

    @cached_property
    def _graph(self) -> tuple[list[Node], list[Edge]]:
        return _materialize(self)

    @property
    def nodes(self) -> list[Node]:
        """All junctions sorted by (block, row, col), which is a topological order."""
        return self._graph[0]

    @property
    def edges(self) -> list[Edge]:
        return self._graph[1]

    def edge_length(self, edge: Edge) -> int:
        nodes = self.nodes
        return self.depth_of(nodes[edge.dst]) - self.depth_of(nodes[edge.src])


def build_network(instance: SSPInstance) -> JunctionNetwork:
    total = instance.total
    layer = np.zeros(total + 1, dtype=bool)
    layer[0] = True
    layers = [layer]
    for e in instance.elements:
        nxt = layer.copy()
        nxt[e:] |= layer[: total + 1 - e]
        layers.append(nxt)
        layer = nxt
    for m in layers:
        m.setflags(write=False)
    return JunctionNetwork(instance=instance, layer_masks=tuple(layers))


def crossings_in_block(mask: np.ndarray, element: int) -> int:
    """Number of diagonal-over-vertical crossings inside one block."""
    n = 0
    for r in range(1, min(element, len(mask))):
        n += int(np.count_nonzero(mask[:-r] & mask[r:]))
    return n


def network_stats(network: JunctionNetwork) -> NetworkStats:
    n_split = 0
    n_pass = 0
    for mask, e in zip(network.layer_masks[:-1], network.elements):
        n_split += int(np.count_nonzero(mask))
        n_pass += crossings_in_block(mask, e)
    return NetworkStats(
        n_split=n_split,
        n_pass=n_pass,
        n_converge=n_split,
        n_ports=len(network.output_ports),
        depth=network.total,
    )


def _materialize(network: JunctionNetwork) -> tuple[list[Node], list[Edge]]:
    K = JunctionKind
    elements = network.elements
    n_blocks = len(elements)
    layers = network.partial_sum_layers

    nodes_by_key: dict[tuple[int, int, int], Node] = {}

    def add(block: int, row: int, col: int, kind: JunctionKind) -> None:
        nodes_by_key[(block, row, col)] = Node(block, row, col, kind)

    # (from_key, to_key, branch)
    raw_edges: list[tuple[tuple, tuple, Branch]] = []

    add(0, 0, 0, K.INPUT)
    raw_edges.append(((0, 0, 0), (1, 0, 0), Branch.VERTICAL))

    for i, e in enumerate(elements, start=1):
        prev = layers[i - 1]
        cols = sorted(prev)
        for x in cols:
            add(i, 0, x, K.SPLIT)
            add(i, e, x + e, K.CONVERGE)
            chain = [(i, 0, x)]
            for r in range(1, e):
                if x + r in prev:
                    add(i, r, x + r, K.PASS)
                    chain.append((i, r, x + r))
            chain.append((i, e, x + e))
            raw_edges.extend((a, b, Branch.DIAGONAL) for a, b in zip(chain, chain[1:]))

        def exit_key(col: int) -> tuple[int, int, int]:
            return (i + 1, 0, col)

        for c in sorted(layers[i]):
            column = []
            if c in prev:
                column.append((i, 0, c))
                column.extend((i, r, c) for r in range(1, e) if c - r in prev)
            if c - e in prev:
                column.append((i, e, c))
            column.append(exit_key(c))
            raw_edges.extend((a, b, Branch.VERTICAL) for a, b in zip(column, column[1:]))

    for c in sorted(layers[-1]):
        add(n_blocks + 1, 0, c, K.OUTPUT)

    nodes = sorted(nodes_by_key.values())
    index = {node.key(): k for k, node in enumerate(nodes)}
    edges = sorted(Edge(index[a], index[b], br) for a, b, br in raw_edges)
    return nodes, edges


def count_paths(network: JunctionNetwork) -> dict[int, int]:
    """Count input-to-port routes that keep their direction through pass junctions.

    A route entering a pass junction on the diagonal must leave on the
    diagonal (and likewise for verticals), so each route corresponds to one
    include/exclude choice per element.
    """
    nodes, edges = network.nodes, network.edges
    incoming: dict[int, list[int]] = {}
    outgoing: dict[int, list[int]] = {}
    for k, edge in enumerate(edges):
        incoming.setdefault(edge.dst, []).append(k)
        outgoing.setdefault(edge.src, []).append(k)

    ways = [0] * len(edges)
    ports: dict[int, int] = {}
    for idx, node in enumerate(nodes):
        ins = incoming.get(idx, [])
        if node.kind is JunctionKind.INPUT:
            arriving = {Branch.VERTICAL: 1}
        else:
            arriving = {}
            for k in ins:
                arriving[edges[k].branch] = arriving.get(edges[k].branch, 0) + ways[k]
        if node.kind is JunctionKind.OUTPUT:
            ports[node.col] = sum(arriving.values())
            continue
        for k in outgoing.get(idx, []):
            if node.kind is JunctionKind.PASS:
                ways[k] = arriving.get(edges[k].branch, 0)
            else:
                ways[k] = sum(arriving.values())
    return ports


def export_network(network: JunctionNetwork) -> dict[str, Any]:
    """JSON-ready document: nodes in (block, row, col) order, edges by node index."""
    return {
        "nodes": [
            {"block": n.block, "row": n.row, "col": n.col, "kind": n.kind.value}
            for n in network.nodes
        ],
        "edges": [
            {"from": e.src, "to": e.dst, "branch": e.branch.value} for e in network.edges
        ],
        "ports": list(network.output_ports),
    }


def import_network(doc: dict[str, Any]) -> JunctionNetwork:
    """Rebuild a network from :func:`export_network` output.

    Element values are recovered from the converge rows of each block; the
    rebuilt network must reproduce the document exactly or ``ValueError`` is
    raised.
    """
    heights: dict[int, int] = {}
    for n in doc["nodes"]:
        if n["kind"] == JunctionKind.CONVERGE.value:
            heights[n["block"]] = max(heights.get(n["block"], 0), n["row"])
    if not heights or sorted(heights) != list(range(1, len(heights) + 1)):
        raise ValueError("document does not describe a contiguous block sequence")
    elements = tuple(heights[i] for i in range(1, len(heights) + 1))
    network = build_network(SSPInstance(elements))
    if export_network(network) != {
        "nodes": list(doc["nodes"]),
        "edges": list(doc["edges"]),
        "ports": list(doc["ports"]),
    }:
        raise ValueError("document is not a valid junction network")
    return network
