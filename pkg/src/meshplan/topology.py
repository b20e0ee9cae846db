"""Mesh topology construction: node placement, virtual links, interference map.

A virtual link exists between every node pair within transmission range
(with a tiny relative tolerance so exact-range geometries such as a ring
with chord == tx_range are kept). Two links interfere when the distance
between their midpoints is at most the interference range; every link
interferes with itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError

# Relative slack applied to range comparisons so that constructions placing
# nodes at exactly tx_range apart survive floating-point rounding.
_RANGE_TOL = 1e-9

DEFAULT_TX_RANGE = 250.0
DEFAULT_GAIN_REF = 10.0
DEFAULT_GAIN_EXP = 3.0

TOPOLOGY_KINDS = ("chain", "ring", "grid", "star", "binary-tree")


@dataclass(frozen=True)
class MeshNode:
    id: int
    x: float
    y: float
    nic_count: int = 1
    is_gateway: bool = False

    def __post_init__(self):
        if self.nic_count < 1:
            raise ConfigurationError(f"node {self.id}: nic_count must be >= 1")


@dataclass(frozen=True)
class VirtualLink:
    id: int
    u: int
    v: int
    distance: float
    gain: float


@dataclass(frozen=True)
class Topology:
    nodes: tuple[MeshNode, ...]
    links: tuple[VirtualLink, ...]
    tx_range: float
    interference_range: float

    def __post_init__(self):
        if self.interference_range < self.tx_range:
            raise ConfigurationError("interference_range must be >= tx_range")
        ids = [n.id for n in self.nodes]
        if ids != list(range(len(self.nodes))):
            raise ConfigurationError("node ids must be dense 0..N-1")
        lids = [l.id for l in self.links]
        if lids != list(range(len(self.links))):
            raise ConfigurationError("link ids must be dense 0..L-1")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_links(self) -> int:
        return len(self.links)

    def link_gains(self) -> tuple[float, ...]:
        return tuple(l.gain for l in self.links)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per node: (link id, neighbor node id) pairs, sorted by link id."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
        for l in self.links:
            adj[l.u].append((l.id, l.v))
            adj[l.v].append((l.id, l.u))
        for entries in adj:
            entries.sort()
        return adj


def link_gain(distance: float, d0: float = DEFAULT_GAIN_REF,
              alpha: float = DEFAULT_GAIN_EXP) -> float:
    """Clamped power-law gain: min(1, (d0/distance)^alpha).

    Equals 1 at and below the reference distance d0, then decays
    monotonically; alpha is the path-loss exponent.
    """
    if distance <= 0:
        raise ValueError("distance must be positive")
    if d0 <= 0:
        raise ValueError("d0 must be positive")
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    return min(1.0, (d0 / distance) ** alpha)


def _distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    # Nanometre quantization: symmetric constructions (ring chords, grid
    # pitches) yield bit-identical distances and gains, so gain-sum ties
    # break by channel index instead of trigonometric rounding noise.
    return round(math.hypot(a[0] - b[0], a[1] - b[1]), 9)


def _links_from_positions(nodes: tuple[MeshNode, ...], tx_range: float,
                          d0: float, alpha: float) -> tuple[VirtualLink, ...]:
    """All node pairs within tx_range become links, in (u, v) order."""
    limit = tx_range * (1.0 + _RANGE_TOL)
    links: list[VirtualLink] = []
    for u in range(len(nodes)):
        for v in range(u + 1, len(nodes)):
            d = _distance((nodes[u].x, nodes[u].y), (nodes[v].x, nodes[v].y))
            if d <= limit:
                links.append(VirtualLink(len(links), u, v, d, link_gain(d, d0, alpha)))
    return tuple(links)


def topology_from_nodes(nodes: tuple[MeshNode, ...], *, tx_range: float = DEFAULT_TX_RANGE,
                        interference_range: float | None = None,
                        d0: float = DEFAULT_GAIN_REF,
                        alpha: float = DEFAULT_GAIN_EXP) -> Topology:
    """Topology over explicit node placements; links follow the range rule."""
    if interference_range is None:
        interference_range = 2.0 * tx_range
    links = _links_from_positions(nodes, tx_range, d0, alpha)
    return Topology(nodes, links, tx_range, interference_range)


def _grid_shape(n: int) -> tuple[int, int]:
    rows = 0
    for r in range(2, int(math.isqrt(n)) + 1):
        if n % r == 0:
            rows = r
    if rows == 0:
        raise ConfigurationError(
            f"grid needs a composite node count with both sides >= 2, got {n}")
    return rows, n // rows


def _place(kind: str, n: int, spacing: float, tx_range: float) -> list[tuple[float, float]]:
    if kind == "chain":
        return [(i * spacing, 0.0) for i in range(n)]
    if kind == "ring":
        radius = spacing / (2.0 * math.sin(math.pi / n))
        return [(radius * math.cos(2.0 * math.pi * k / n),
                 radius * math.sin(2.0 * math.pi * k / n)) for k in range(n)]
    if kind == "grid":
        rows, cols = _grid_shape(n)
        return [((i % cols) * spacing, (i // cols) * spacing) for i in range(n)]
    if kind == "star":
        leaves = n - 1
        pos = [(0.0, 0.0)]
        pos += [(spacing * math.cos(2.0 * math.pi * k / leaves),
                 spacing * math.sin(2.0 * math.pi * k / leaves)) for k in range(leaves)]
        return pos
    if kind == "binary-tree":
        return _place_binary_tree(n, spacing, tx_range)
    raise ConfigurationError(f"unsupported topology kind: {kind!r}")


def _place_binary_tree(n: int, spacing: float, tx_range: float) -> list[tuple[float, float]]:
    # Heap-order layout: level d at depth d * 0.8 * spacing, horizontal slots
    # scaled so the widest parent-child offset keeps every edge <= spacing.
    if spacing > tx_range * (1.0 + _RANGE_TOL):
        raise ConfigurationError("binary-tree requires spacing <= tx_range")
    depth = n.bit_length() - 1  # depth of the deepest level for nodes 0..n-1
    v_gap = 0.8 * spacing
    h_max = math.sqrt(max(spacing * spacing - v_gap * v_gap, 0.0))
    pitch = h_max / (2.0 ** (depth - 2)) if depth >= 1 else h_max
    pos = []
    for i in range(n):
        d = (i + 1).bit_length() - 1
        slot = i - (2 ** d - 1)
        x = (slot + 0.5) * (2.0 ** (depth - d)) * pitch
        pos.append((x, d * v_gap))
    return pos


def build_topology(kind: str, n: int, spacing: float, nic_count: int = 1, *,
                   tx_range: float = DEFAULT_TX_RANGE,
                   interference_range: float | None = None,
                   d0: float = DEFAULT_GAIN_REF,
                   alpha: float = DEFAULT_GAIN_EXP) -> Topology:
    """Deterministic generator for the supported topology kinds.

    Spacing is the adjacent-node distance of the construction (chord length
    for rings, lattice pitch for grids, hub-leaf radius for stars). Links
    follow the range rule for all kinds except binary-tree, whose layered
    layout cannot realize the tree as a pure range graph beyond trivial
    depth; there the parent-child edges are created explicitly (all of them
    within tx_range).
    """
    if n < 2:
        raise ConfigurationError("topology needs at least 2 nodes")
    if spacing <= 0:
        raise ConfigurationError("spacing must be positive")
    if kind not in TOPOLOGY_KINDS:
        raise ConfigurationError(f"unsupported topology kind: {kind!r}")
    if interference_range is None:
        interference_range = 2.0 * tx_range

    positions = _place(kind, n, spacing, tx_range)
    nodes = tuple(MeshNode(i, x, y, nic_count) for i, (x, y) in enumerate(positions))

    if kind == "binary-tree":
        links: list[VirtualLink] = []
        for child in range(1, n):
            parent = (child - 1) // 2
            d = _distance(positions[parent], positions[child])
            links.append(VirtualLink(len(links), parent, child, d, link_gain(d, d0, alpha)))
        link_tuple = tuple(links)
    else:
        link_tuple = _links_from_positions(nodes, tx_range, d0, alpha)

    return Topology(nodes, link_tuple, tx_range, interference_range)


@dataclass(frozen=True)
class InterferenceMap:
    """Per link: interfering link ids (midpoint rule, includes self) and the
    node-adjacent neighbour set n1 (links sharing an endpoint, excluding self).
    """
    interferers: tuple[frozenset[int], ...]
    n1: tuple[frozenset[int], ...]


def build_interference_map(topology: Topology) -> InterferenceMap:
    links = topology.links
    mids = [((l.u, l.v), ((topology.nodes[l.u].x + topology.nodes[l.v].x) / 2.0,
                          (topology.nodes[l.u].y + topology.nodes[l.v].y) / 2.0))
            for l in links]
    limit = topology.interference_range * (1.0 + _RANGE_TOL)

    interferers = []
    n1 = []
    for i, ((iu, iv), mi) in enumerate(mids):
        within = {j for j, (_, mj) in enumerate(mids) if _distance(mi, mj) <= limit}
        within.add(i)
        interferers.append(frozenset(within))
        ends = {iu, iv}
        n1.append(frozenset(j for j, ((ju, jv), _) in enumerate(mids)
                            if j != i and (ju in ends or jv in ends)))
    return InterferenceMap(tuple(interferers), tuple(n1))
