"""End-to-end orchestration: topology -> interference -> load estimate ->
congestion-aware routing -> channel assignment -> simulation -> goodput.

Also the channel-count and horizon sweeps the evaluation is built on, and
round-trippable serialization of the full result bundle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean

from .channels import ChannelAssignment, baseline_assign, order_links, schedule_all_frames
from .errors import PipelineError
from .loads import GoodputReport, LoadEstimate, Pair, goodput
from .routing import (LinkCost, Route, RouteTable, cost_table,
                      fixed_point_route, routed_link_loads)
from .scenario import Scenario
from .sim import SimConfig, SimMetrics, run_simulation
from .topology import build_interference_map

PROTOCOLS = ("ccmca", "baseline")


@dataclass(frozen=True)
class PipelineResult:
    scenario_name: str
    protocol: str
    n_channels: int
    config: SimConfig
    loads: LoadEstimate
    costs: LinkCost
    routes: RouteTable
    assignment: ChannelAssignment
    metrics: SimMetrics
    goodput: GoodputReport

    def to_dict(self) -> dict:
        return {
            "scenario_name": self.scenario_name,
            "protocol": self.protocol,
            "n_channels": self.n_channels,
            "config": {"horizon_s": self.config.horizon_s,
                       "channel_capacity_bps": self.config.channel_capacity_bps,
                       "slot_s": self.config.slot_s,
                       "queue_packets": self.config.queue_packets,
                       "seed": self.config.seed},
            "loads": {"capacity": list(self.loads.capacity),
                      "load": list(self.loads.load),
                      "paths": {_pk(p): [list(path) for path in paths]
                                for p, paths in sorted(self.loads.paths.items())}},
            "costs": {"values": [("inf" if math.isinf(v) else v) for v in self.costs.values],
                      "threshold_fraction": self.costs.threshold_fraction},
            "routes": {"routes": {_pk(p): {"links": list(r.links), "cost": r.cost}
                                  for p, r in sorted(self.routes.routes.items())},
                       "blocked": sorted(_pk(p) for p in self.routes.blocked),
                       "iterations": self.routes.iterations,
                       "converged": self.routes.converged},
            "assignment": self.assignment.to_dict(),
            "metrics": self.metrics.to_dict(),
            "goodput": {"assigned": {_pk(p): v for p, v in sorted(self.goodput.assigned.items())},
                        "useful": {_pk(p): v for p, v in sorted(self.goodput.useful.items())},
                        "total": self.goodput.total},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineResult":
        loads = LoadEstimate(
            capacity=tuple(d["loads"]["capacity"]),
            load=tuple(d["loads"]["load"]),
            paths={_pk_inv(k): tuple(tuple(path) for path in v)
                   for k, v in d["loads"]["paths"].items()})
        costs = LinkCost(tuple(math.inf if v == "inf" else v
                               for v in d["costs"]["values"]),
                         d["costs"]["threshold_fraction"])
        routes = RouteTable(
            routes={_pk_inv(k): Route(tuple(r["links"]), r["cost"])
                    for k, r in d["routes"]["routes"].items()},
            blocked=frozenset(_pk_inv(k) for k in d["routes"]["blocked"]),
            iterations=d["routes"]["iterations"],
            converged=d["routes"]["converged"])
        return cls(
            scenario_name=d["scenario_name"],
            protocol=d["protocol"],
            n_channels=d["n_channels"],
            config=SimConfig(**d["config"]),
            loads=loads,
            costs=costs,
            routes=routes,
            assignment=ChannelAssignment.from_dict(d["assignment"]),
            metrics=SimMetrics.from_dict(d["metrics"]),
            goodput=GoodputReport(
                assigned={_pk_inv(k): v for k, v in d["goodput"]["assigned"].items()},
                useful={_pk_inv(k): v for k, v in d["goodput"]["useful"].items()},
                total=d["goodput"]["total"]))


def _pk(pair: Pair) -> str:
    return f"{pair[0]}->{pair[1]}"


def _pk_inv(key: str) -> Pair:
    s, _, d = key.partition("->")
    return (int(s), int(d))


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, PipelineError):
                raise PipelineError(name, exc) from exc
            return False
    return _Ctx()


def run_pipeline(scenario: Scenario, protocol: str = "ccmca", *,
                 n_channels: int | None = None, horizon_s: float | None = None,
                 seed: int | None = None) -> PipelineResult:
    """Run every stage for one scenario/protocol and return the bundle.

    The keyword overrides exist for sweeps; they leave the scenario object
    untouched. Assigned per-pair bandwidth is the delivered share of the
    pair's demand, so goodput is exactly the demand when delivery is total.
    """
    if protocol not in PROTOCOLS:
        raise PipelineError("setup", ValueError(f"unknown protocol {protocol!r}"))
    alg = scenario.algorithm
    channels = alg.n_channels if n_channels is None else n_channels
    config = scenario.sim_config(horizon_s=horizon_s, seed=seed)

    with _stage("topology"):
        topology = scenario.build_topology()
    with _stage("interference"):
        imap = build_interference_map(topology)
    with _stage("routing"):
        routes, loads = fixed_point_route(
            topology, imap, scenario.traffic, n_channels=channels,
            channel_capacity=config.channel_capacity_bps,
            threshold_fraction=alg.threshold_fraction, slack=alg.slack,
            cap=alg.cap, max_iters=alg.max_iters)
        costs = cost_table(loads.load, loads.capacity, alg.threshold_fraction)
    with _stage("assignment"):
        gains = topology.link_gains()
        if protocol == "ccmca":
            # Priorities follow the loads the committed routes will induce;
            # identical to loads.load at a converged fixed point.
            induced = routed_link_loads(topology.n_links, routes, scenario.traffic)
            assignment = schedule_all_frames(order_links(induced), imap, gains, channels)
        else:
            assignment = baseline_assign(topology.n_links, channels, config.seed, imap.n1)
    with _stage("simulation"):
        metrics = run_simulation(topology, imap, scenario.traffic, routes,
                                 assignment, config)
    with _stage("goodput"):
        assigned = {}
        for pair in scenario.traffic.pairs():
            stats = metrics.per_flow.get(pair)
            rate = scenario.traffic.by_pair()[pair].rate_bps
            if stats is not None and stats.generated > 0:
                assigned[pair] = rate * (stats.delivered / stats.generated)
            else:
                assigned[pair] = 0.0
        report = goodput(assigned, scenario.traffic)

    return PipelineResult(scenario.name, protocol, channels, config, loads,
                          costs, routes, assignment, metrics, report)


@dataclass(frozen=True)
class SweepRow:
    scenario: str
    protocol: str
    channels: int
    horizon_s: float
    seed: int | str
    generated: float
    delivered: float
    dropped: float
    avg_delay_s: float
    pdr: float
    throughput_pkts: float

    def to_dict(self) -> dict:
        return {"scenario": self.scenario, "protocol": self.protocol,
                "channels": self.channels, "horizon_s": self.horizon_s,
                "seed": self.seed, "generated": self.generated,
                "delivered": self.delivered, "dropped": self.dropped,
                "avg_delay_s": self.avg_delay_s, "pdr": self.pdr,
                "throughput_pkts": self.throughput_pkts}


def _row(scenario: Scenario, result: PipelineResult, seed: int) -> SweepRow:
    m = result.metrics
    return SweepRow(scenario.name, result.protocol, result.n_channels,
                    result.config.horizon_s, seed, m.generated, m.delivered,
                    m.dropped, m.avg_delay_s, m.pdr, m.throughput_pkts)


def _mean_row(rows: list[SweepRow]) -> SweepRow:
    first = rows[0]
    return SweepRow(first.scenario, first.protocol, first.channels, first.horizon_s,
                    "mean", fmean(r.generated for r in rows),
                    fmean(r.delivered for r in rows), fmean(r.dropped for r in rows),
                    fmean(r.avg_delay_s for r in rows), fmean(r.pdr for r in rows),
                    fmean(r.throughput_pkts for r in rows))


def _sweep(scenario: Scenario, points: list, seeds: list[int] | None,
           protocols: tuple[str, ...], overrides) -> list[SweepRow]:
    if not points:
        raise ValueError("sweep needs at least one point")
    if seeds is None:
        seeds = [scenario.sim.seed]
    rows: list[SweepRow] = []
    for point in points:
        for protocol in protocols:
            group = []
            for seed in seeds:
                result = run_pipeline(scenario, protocol, seed=seed, **overrides(point))
                group.append(_row(scenario, result, seed))
            rows.extend(group)
            if len(seeds) > 1:
                rows.append(_mean_row(group))
    return rows


def sweep_channels(scenario: Scenario, channel_counts: list[int],
                   seeds: list[int] | None = None,
                   protocols: tuple[str, ...] = PROTOCOLS) -> list[SweepRow]:
    """One run per (channel count, protocol, seed), capacities and routes
    recomputed per count; plus a mean row per group when several seeds."""
    if any(c < 1 for c in channel_counts):
        raise ValueError("channel counts must be >= 1")
    return _sweep(scenario, channel_counts, seeds, protocols,
                  lambda c: {"n_channels": c})


def sweep_time(scenario: Scenario, horizons: list[float],
               seeds: list[int] | None = None,
               protocols: tuple[str, ...] = PROTOCOLS) -> list[SweepRow]:
    """One run per (horizon, protocol, seed)."""
    if any(h <= 0 for h in horizons):
        raise ValueError("horizons must be positive")
    return _sweep(scenario, horizons, seeds, protocols,
                  lambda h: {"horizon_s": h})
