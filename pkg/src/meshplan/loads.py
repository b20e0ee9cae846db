"""Link load estimation: per-link capacity shares, acceptable-path
enumeration, expected load under uniform multipath splitting, and the
goodput evaluator.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import ContractError, UnroutableFlowError
from .topology import InterferenceMap, Topology
from .traffic import TrafficProfile

DEFAULT_SLACK = 1
DEFAULT_PATH_CAP = 32

Pair = tuple[int, int]
Path = tuple[int, ...]


@dataclass(frozen=True)
class LoadEstimate:
    """Per-link capacity share and expected load, plus the acceptable-path
    sets the load was computed over (one entry per flow pair)."""
    capacity: tuple[float, ...]
    load: tuple[float, ...]
    paths: dict[Pair, tuple[Path, ...]] = field(default_factory=dict)

    def normalized(self, link: int) -> float:
        """Load as a fraction of the link's capacity share."""
        return self.load[link] / self.capacity[link]


@dataclass(frozen=True)
class GoodputReport:
    assigned: dict[Pair, float]
    useful: dict[Pair, float]
    total: float


def virtual_link_capacity(n_channels: int, channel_capacity: float,
                          n_interferers: int) -> float:
    """Aggregate channel capacity divided evenly among interfering links."""
    if n_channels < 1:
        raise ValueError("n_channels must be >= 1")
    if channel_capacity <= 0:
        raise ValueError("channel_capacity must be positive")
    if n_interferers < 1:
        raise ValueError("n_interferers must be >= 1")
    return n_channels * channel_capacity / n_interferers


def link_capacities(imap: InterferenceMap, n_channels: int,
                    channel_capacity: float) -> tuple[float, ...]:
    return tuple(virtual_link_capacity(n_channels, channel_capacity, len(s))
                 for s in imap.interferers)


def _hop_distances(adj, n_nodes: int, target: int) -> list[int]:
    """BFS hop count from every node to target; -1 when unreachable."""
    dist = [-1] * n_nodes
    dist[target] = 0
    q = deque([target])
    while q:
        x = q.popleft()
        for _, y in adj[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def enumerate_acceptable_paths(topology: Topology, s: int, d: int,
                               slack: int = DEFAULT_SLACK,
                               cap: int = DEFAULT_PATH_CAP) -> tuple[Path, ...]:
    """Simple paths from s to d within (shortest hops + slack), as link-id
    sequences in lexicographic order, truncated to at most cap paths.

    The DFS explores incident links in ascending id order, which emits
    paths directly in lexicographic order, so truncation equals
    sort-then-cut. Disconnected pairs yield the empty tuple.
    """
    if s == d:
        raise ValueError("source and destination must differ")
    if not (0 <= s < topology.n_nodes and 0 <= d < topology.n_nodes):
        raise ValueError(f"node ids out of range: ({s}, {d})")
    if slack < 0:
        raise ValueError("slack must be >= 0")
    if cap < 1:
        raise ValueError("cap must be >= 1")

    adj = topology.adjacency()
    dist_to_d = _hop_distances(adj, topology.n_nodes, d)
    if dist_to_d[s] < 0:
        return ()
    max_hops = dist_to_d[s] + slack

    found: list[Path] = []
    path: list[int] = []
    visited = {s}

    def walk(node: int) -> bool:
        if node == d:
            found.append(tuple(path))
            return len(found) >= cap
        for link_id, nxt in adj[node]:
            if nxt in visited:
                continue
            if len(path) + 1 + dist_to_d[nxt] > max_hops or dist_to_d[nxt] < 0:
                continue
            visited.add(nxt)
            path.append(link_id)
            if walk(nxt):
                return True
            path.pop()
            visited.remove(nxt)
        return False

    walk(s)
    return tuple(found)


def acceptable_paths_for_profile(topology: Topology, profile: TrafficProfile,
                                 slack: int = DEFAULT_SLACK,
                                 cap: int = DEFAULT_PATH_CAP) -> dict[Pair, tuple[Path, ...]]:
    return {pair: enumerate_acceptable_paths(topology, pair[0], pair[1], slack, cap)
            for pair in profile.pairs()}


def expected_link_load(n_links: int, paths: dict[Pair, tuple[Path, ...]],
                       profile: TrafficProfile) -> tuple[float, ...]:
    """Uniform multipath splitting: each pair spreads its demand evenly
    over its acceptable paths, and per-link loads add up across pairs."""
    flows = profile.by_pair()
    delta = [0.0] * n_links
    for pair in profile.pairs():
        pair_paths = paths.get(pair)
        if not pair_paths:
            raise UnroutableFlowError(*pair)
        share = flows[pair].rate_bps / len(pair_paths)
        for p in pair_paths:
            for link in p:
                delta[link] += share
    return tuple(delta)


def path_nodes(topology: Topology, s: int, links: Path) -> tuple[int, ...]:
    """Expand a link-id sequence starting at s into the node sequence."""
    nodes = [s]
    at = s
    for lid in links:
        l = topology.links[lid]
        if l.u == at:
            at = l.v
        elif l.v == at:
            at = l.u
        else:
            raise ContractError(f"link {lid} does not continue path at node {at}")
        nodes.append(at)
    return tuple(nodes)


def goodput(assigned: dict[Pair, float], profile: TrafficProfile) -> GoodputReport:
    """Total useful bandwidth: per pair, assigned bandwidth counts only up
    to the pair's demand."""
    flows = profile.by_pair()
    if set(assigned) != set(flows):
        raise ContractError("assigned bandwidth pairs do not match the traffic profile")
    for pair, b in assigned.items():
        if b < 0:
            raise ValueError(f"assigned bandwidth must be >= 0, got {b} for {pair}")
    useful = {pair: min(assigned[pair], flows[pair].rate_bps)
              for pair in sorted(assigned)}
    return GoodputReport(dict(sorted(assigned.items())), useful, sum(useful.values()))
