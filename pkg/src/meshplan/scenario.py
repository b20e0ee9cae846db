"""Scenario documents: JSON files with topology/traffic/algorithm/sim
sections, strict key validation, defaults, and the named presets.

A document may be just {"preset": "<name>"}; any sections given alongside
the preset override the preset's values key by key.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath

from .errors import ScenarioParseError, ScenarioValidationError
from .sim import SimConfig
from .topology import (DEFAULT_TX_RANGE, TOPOLOGY_KINDS, MeshNode, Topology,
                       build_topology, topology_from_nodes)
from .traffic import FLOW_KINDS, Flow, TrafficProfile, vod_flow, voip_flow


@dataclass(frozen=True)
class TopologySpec:
    """Either a generator (kind/n/spacing) or explicit node placements."""
    kind: str | None = None
    n: int = 0
    spacing: float = 0.0
    nic_count: int = 1
    tx_range: float = DEFAULT_TX_RANGE
    nodes: tuple[MeshNode, ...] = ()

    @property
    def n_nodes(self) -> int:
        return len(self.nodes) if self.nodes else self.n


@dataclass(frozen=True)
class AlgorithmParams:
    n_channels: int = 3
    threshold_fraction: float = 0.9
    slack: int = 1
    cap: int = 32
    d0: float = 10.0
    alpha: float = 3.0
    interference_multiplier: float = 2.0
    max_iters: int = 10


@dataclass(frozen=True)
class SimParams:
    slot_s: float = 1e-3
    horizon_s: float = 100.0
    channel_capacity_bps: float = 10e6
    queue_packets: int = 64
    seed: int = 1


@dataclass(frozen=True)
class Scenario:
    name: str
    topology: TopologySpec
    traffic: TrafficProfile
    algorithm: AlgorithmParams = field(default_factory=AlgorithmParams)
    sim: SimParams = field(default_factory=SimParams)

    def build_topology(self) -> Topology:
        spec, alg = self.topology, self.algorithm
        interference = alg.interference_multiplier * spec.tx_range
        if spec.nodes:
            return topology_from_nodes(spec.nodes, tx_range=spec.tx_range,
                                       interference_range=interference,
                                       d0=alg.d0, alpha=alg.alpha)
        return build_topology(spec.kind, spec.n, spec.spacing, spec.nic_count,
                              tx_range=spec.tx_range, interference_range=interference,
                              d0=alg.d0, alpha=alg.alpha)

    def sim_config(self, *, horizon_s: float | None = None,
                   seed: int | None = None) -> SimConfig:
        return SimConfig(horizon_s=self.sim.horizon_s if horizon_s is None else horizon_s,
                         channel_capacity_bps=self.sim.channel_capacity_bps,
                         slot_s=self.sim.slot_s,
                         queue_packets=self.sim.queue_packets,
                         seed=self.sim.seed if seed is None else seed)



def _preset_ring4() -> dict:
    return {
        "name": "paper-ring-4",
        "topology": {"kind": "ring", "n": 4, "spacing": 250.0, "nic_count": 2,
                     "tx_range": 250.0},
        "traffic": {"flows": [
            {"src": 0, "dst": 2, "kind": "voip"},
            {"src": 1, "dst": 3, "kind": "voip"},
            {"src": 2, "dst": 0, "kind": "vod"},
        ]},
        "algorithm": {},
        "sim": {"horizon_s": 100.0},
    }


def _preset_table1() -> dict:
    return {
        "name": "paper-table1",
        "topology": {"kind": "ring", "n": 50, "spacing": 250.0, "nic_count": 2,
                     "tx_range": 250.0},
        "traffic": {"flows": [
            {"src": 0, "dst": 25, "kind": "voip"},
            {"src": 12, "dst": 37, "kind": "voip"},
            {"src": 25, "dst": 0, "kind": "vod"},
        ]},
        "algorithm": {},
        "sim": {"horizon_s": 100.0},
    }


PRESETS = {"paper-ring-4": _preset_ring4, "paper-table1": _preset_table1}

_TOPOLOGY_KEYS = {"kind", "n", "spacing", "nic_count", "tx_range", "nodes"}
_NODE_KEYS = {"id", "x", "y", "nic_count", "is_gateway"}
_FLOW_KEYS = {"src", "dst", "rate_bps", "packet_bytes", "kind"}
_ALGO_KEYS = {"n_channels", "threshold_fraction", "slack", "cap", "d0", "alpha",
              "interference_multiplier", "max_iters"}
_SIM_KEYS = {"slot_s", "horizon_s", "channel_capacity_bps", "queue_packets", "seed"}
_TOP_KEYS = {"preset", "name", "topology", "traffic", "algorithm", "sim"}

# Nominal rate/size per flow kind, applied when a flow omits them.
_KIND_DEFAULTS = {"voip": (voip_flow(0, 1).rate_bps, voip_flow(0, 1).packet_bytes),
                  "vod": (vod_flow(0, 1).rate_bps, vod_flow(0, 1).packet_bytes)}


def _reject_unknown(section: str, given: dict, allowed: set[str]) -> None:
    unknown = set(given) - allowed
    if unknown:
        raise ScenarioValidationError(
            f"{section}: unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioValidationError(message)


def _parse_topology(doc: dict) -> TopologySpec:
    _reject_unknown("topology", doc, _TOPOLOGY_KEYS)
    if "nodes" in doc:
        _require("kind" not in doc and "n" not in doc and "spacing" not in doc,
                 "topology: explicit nodes exclude kind/n/spacing")
        nodes = []
        for i, nd in enumerate(doc["nodes"]):
            _reject_unknown(f"topology.nodes[{i}]", nd, _NODE_KEYS)
            _require("x" in nd and "y" in nd, f"topology.nodes[{i}]: x and y required")
            nodes.append(MeshNode(id=nd.get("id", i), x=float(nd["x"]), y=float(nd["y"]),
                                  nic_count=int(nd.get("nic_count", 1)),
                                  is_gateway=bool(nd.get("is_gateway", False))))
        _require([n.id for n in nodes] == list(range(len(nodes))),
                 "topology.nodes: ids must be dense 0..N-1 in order")
        return TopologySpec(nodes=tuple(nodes),
                            tx_range=float(doc.get("tx_range", DEFAULT_TX_RANGE)))
    _require("kind" in doc, "topology: kind (or nodes) required")
    _require(doc["kind"] in TOPOLOGY_KINDS,
             f"topology: unknown kind {doc['kind']!r}; supported: {list(TOPOLOGY_KINDS)}")
    _require("n" in doc and "spacing" in doc, "topology: n and spacing required")
    return TopologySpec(kind=doc["kind"], n=int(doc["n"]), spacing=float(doc["spacing"]),
                        nic_count=int(doc.get("nic_count", 1)),
                        tx_range=float(doc.get("tx_range", DEFAULT_TX_RANGE)))


def _parse_traffic(doc: dict, n_nodes: int) -> TrafficProfile:
    _reject_unknown("traffic", doc, {"flows"})
    _require("flows" in doc and isinstance(doc["flows"], list) and doc["flows"],
             "traffic: nonempty flows list required")
    flows = []
    for i, fd in enumerate(doc["flows"]):
        _reject_unknown(f"traffic.flows[{i}]", fd, _FLOW_KEYS)
        _require("src" in fd and "dst" in fd, f"traffic.flows[{i}]: src and dst required")
        kind = fd.get("kind", "cbr")
        _require(kind in FLOW_KINDS, f"traffic.flows[{i}]: unknown kind {kind!r}")
        rate, size = _KIND_DEFAULTS.get(kind, (None, None))
        rate = float(fd.get("rate_bps", rate) or 0.0)
        size = int(fd.get("packet_bytes", size) or 0)
        _require(rate > 0, f"traffic.flows[{i}]: rate_bps required for kind {kind!r}")
        _require(size > 0, f"traffic.flows[{i}]: packet_bytes required for kind {kind!r}")
        src, dst = int(fd["src"]), int(fd["dst"])
        for node in (src, dst):
            _require(0 <= node < n_nodes,
                     f"traffic.flows[{i}]: node {node} not in topology (0..{n_nodes - 1})")
        flows.append(Flow(src, dst, rate, size, kind))
    try:
        return TrafficProfile(tuple(flows))
    except ValueError as e:
        raise ScenarioValidationError(f"traffic: {e}") from e


def _parse_section(section: str, doc: dict, allowed: set[str], cls):
    _reject_unknown(section, doc, allowed)
    try:
        return cls(**doc)
    except (TypeError, ValueError) as e:
        raise ScenarioValidationError(f"{section}: {e}") from e


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioValidationError("scenario document must be a JSON object")
    _reject_unknown("scenario", doc, _TOP_KEYS)

    if "preset" in doc:
        name = doc["preset"]
        if name not in PRESETS:
            raise ScenarioValidationError(
                f"unknown preset {name!r}; available: {sorted(PRESETS)}")
        base = PRESETS[name]()
        for section in ("topology", "traffic", "algorithm", "sim"):
            if section in doc:
                merged = dict(base[section])
                merged.update(doc[section])
                base[section] = merged
        if "name" in doc:
            base["name"] = doc["name"]
        doc = base

    for section in ("topology", "traffic"):
        _require(section in doc, f"scenario: {section} section required")
    topo = _parse_topology(doc["topology"])
    traffic = _parse_traffic(doc["traffic"], topo.n_nodes)
    algorithm = _parse_section("algorithm", doc.get("algorithm", {}), _ALGO_KEYS,
                               AlgorithmParams)
    sim = _parse_section("sim", doc.get("sim", {}), _SIM_KEYS, SimParams)
    _validate_params(algorithm, sim)
    return Scenario(name=str(doc.get("name", "scenario")), topology=topo,
                    traffic=traffic, algorithm=algorithm, sim=sim)


def _validate_params(alg: AlgorithmParams, sim: SimParams) -> None:
    _require(alg.n_channels >= 1, "algorithm.n_channels must be >= 1")
    _require(0 < alg.threshold_fraction <= 1,
             "algorithm.threshold_fraction must be in (0, 1]")
    _require(alg.slack >= 0, "algorithm.slack must be >= 0")
    _require(alg.cap >= 1, "algorithm.cap must be >= 1")
    _require(alg.d0 > 0, "algorithm.d0 must be positive")
    _require(alg.alpha >= 2, "algorithm.alpha must be >= 2")
    _require(alg.interference_multiplier >= 1,
             "algorithm.interference_multiplier must be >= 1")
    _require(alg.max_iters >= 1, "algorithm.max_iters must be >= 1")
    _require(sim.slot_s > 0, "sim.slot_s must be positive")
    _require(sim.horizon_s >= sim.slot_s, "sim.horizon_s must cover at least one slot")
    _require(sim.channel_capacity_bps > 0, "sim.channel_capacity_bps must be positive")
    _require(sim.queue_packets >= 1, "sim.queue_packets must be >= 1")


def parse_scenario(path: str | FsPath) -> Scenario:
    """Load and validate a scenario file."""
    p = FsPath(path)
    if not p.exists():
        raise FileNotFoundError(f"scenario file not found: {p}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{p}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    return scenario_from_dict(doc)


def load_scenario(ref: str) -> Scenario:
    """Resolve a preset name or fall back to reading a file."""
    if ref in PRESETS:
        return scenario_from_dict({"preset": ref})
    return parse_scenario(ref)
