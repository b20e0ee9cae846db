"""Slotted-time packet simulator.

Flows inject fixed-size packets at their configured constant bit rate.
A link may transmit only in the slots of its activation frame (frames
cycle round-robin); its per-slot service share is the channel capacity
times the slot length divided by the number of co-channel interfering
links active in the same slot. Service accrues as byte credit so packets
larger than one slot's share span several active slots. Queues are FIFO
with a fixed packet capacity; overflow drops. Everything is deterministic
for a given scenario and seed.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .channels import ChannelAssignment
from .errors import ContractError
from .loads import Pair
from .routing import RouteTable
from .topology import InterferenceMap, Topology
from .traffic import TrafficProfile

_CREDIT_EPS = 1e-6  # bits of slack on credit comparisons
_TIME_EPS = 1e-9    # relative slack on slot-boundary comparisons


@dataclass(frozen=True)
class SimConfig:
    horizon_s: float
    channel_capacity_bps: float = 10e6
    slot_s: float = 1e-3
    queue_packets: int = 64
    seed: int = 1

    def __post_init__(self):
        if self.slot_s <= 0:
            raise ValueError("slot duration must be positive")
        if self.horizon_s < self.slot_s:
            raise ValueError("horizon must cover at least one slot")
        if self.channel_capacity_bps <= 0:
            raise ValueError("channel capacity must be positive")
        if self.queue_packets < 1:
            raise ValueError("queue capacity must be >= 1 packet")

    @property
    def n_slots(self) -> int:
        return int(self.horizon_s / self.slot_s + _TIME_EPS)


@dataclass
class FlowStats:
    generated: int = 0
    delivered: int = 0
    dropped: int = 0
    delivered_bits: int = 0
    delay_sum_s: float = 0.0

    def to_dict(self) -> dict:
        return {"generated": self.generated, "delivered": self.delivered,
                "dropped": self.dropped, "delivered_bits": self.delivered_bits,
                "delay_sum_s": self.delay_sum_s}

    @classmethod
    def from_dict(cls, d: dict) -> "FlowStats":
        return cls(**d)


@dataclass
class SimMetrics:
    generated: int = 0
    delivered: int = 0
    dropped: int = 0
    in_flight: int = 0
    blocked_flows: int = 0
    avg_delay_s: float = 0.0
    pdr: float = 0.0
    throughput_pkts: int = 0
    throughput_bps: float = 0.0
    per_flow: dict[Pair, FlowStats] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"generated": self.generated, "delivered": self.delivered,
                "dropped": self.dropped, "in_flight": self.in_flight,
                "blocked_flows": self.blocked_flows, "avg_delay_s": self.avg_delay_s,
                "pdr": self.pdr, "throughput_pkts": self.throughput_pkts,
                "throughput_bps": self.throughput_bps,
                "per_flow": {f"{s}->{d}": st.to_dict()
                             for (s, d), st in sorted(self.per_flow.items())}}

    @classmethod
    def from_dict(cls, d: dict) -> "SimMetrics":
        per_flow = {}
        for key, st in d["per_flow"].items():
            s, _, t = key.partition("->")
            per_flow[(int(s), int(t))] = FlowStats.from_dict(st)
        plain = {k: v for k, v in d.items() if k != "per_flow"}
        return cls(per_flow=per_flow, **plain)


class ServiceAudit:
    """Optional per-slot record of (slot, link, granted bits, divisor)."""

    def __init__(self):
        self.grants: list[tuple[int, int, float, int]] = []

    def record(self, slot: int, link: int, bits: float, divisor: int) -> None:
        self.grants.append((slot, link, bits, divisor))


class _Packet:
    __slots__ = ("pair", "size_bits", "inject_t", "hop")

    def __init__(self, pair: Pair, size_bits: int, inject_t: float):
        self.pair = pair
        self.size_bits = size_bits
        self.inject_t = inject_t
        self.hop = 0


class _FlowRun:
    __slots__ = ("pair", "route", "size_bits", "interval_s", "next_idx", "stats")

    def __init__(self, pair: Pair, route: tuple[int, ...], size_bits: int, rate_bps: float):
        self.pair = pair
        self.route = route
        self.size_bits = size_bits
        self.interval_s = size_bits / rate_bps
        self.next_idx = 0
        self.stats = FlowStats()

    @property
    def next_t(self) -> float:
        return self.next_idx * self.interval_s


class Simulator:
    """Single deterministic run; step() advances one slot."""

    def __init__(self, topology: Topology, imap: InterferenceMap,
                 profile: TrafficProfile, routes: RouteTable,
                 assignment: ChannelAssignment, config: SimConfig,
                 audit: ServiceAudit | None = None):
        self.config = config
        self.audit = audit
        flows = profile.by_pair()

        self._flows: list[_FlowRun] = []
        self.blocked_flows = 0
        for pair in profile.pairs():
            if pair in routes.blocked:
                self.blocked_flows += 1
                continue
            route = routes.routes.get(pair)
            if route is None:
                raise ContractError(f"flow {pair} has no route and is not blocked")
            f = flows[pair]
            self._flows.append(_FlowRun(pair, route.links, f.packet_bits, f.rate_bps))

        used = sorted({l for fr in self._flows for l in fr.route})
        for l in used:
            if assignment.channel_of[l] is None or assignment.frame_of[l] is None:
                raise ContractError(f"route link {l} has no channel/frame assignment")

        self._used_links = used
        self._frame_of = {l: assignment.frame_of[l] for l in used}
        self._co_ch = {l: tuple(q for q in used
                                if q in imap.interferers[l]
                                and assignment.channel_of[q] == assignment.channel_of[l])
                       for l in used}
        self.n_frames = max(1, assignment.n_frames)
        self._queues: dict[int, deque[_Packet]] = {l: deque() for l in used}
        self._credit: dict[int, float] = {l: 0.0 for l in used}
        self._stats_by_pair = {fr.pair: fr.stats for fr in self._flows}
        self._route_by_pair = {fr.pair: fr.route for fr in self._flows}

        self.slot = 0
        self.generated = 0
        self.delivered = 0
        self.dropped = 0
        self.in_flight = 0
        self.delivered_bits = 0
        self.delay_sum_s = 0.0

    # -- slot mechanics -------------------------------------------------

    def _inject(self, now: float) -> None:
        tol = self.config.slot_s * _TIME_EPS
        qcap = self.config.queue_packets
        for fr in self._flows:
            while fr.next_t <= now + tol:
                pkt = _Packet(fr.pair, fr.size_bits, fr.next_t)
                fr.next_idx += 1
                self.generated += 1
                fr.stats.generated += 1
                q = self._queues[fr.route[0]]
                if len(q) >= qcap:
                    self.dropped += 1
                    fr.stats.dropped += 1
                else:
                    q.append(pkt)
                    self.in_flight += 1

    def step(self) -> None:
        cfg = self.config
        now = self.slot * cfg.slot_s
        self._inject(now)

        frame = self.slot % self.n_frames
        active = {l for l in self._used_links
                  if self._frame_of[l] == frame and self._queues[l]}

        outbox: list[_Packet] = []
        slot_bits = cfg.channel_capacity_bps * cfg.slot_s
        for l in self._used_links:
            if l not in active:
                continue
            divisor = sum(1 for q in self._co_ch[l] if q in active)
            share = slot_bits / divisor
            self._credit[l] += share
            if self.audit is not None:
                self.audit.record(self.slot, l, share, divisor)
            q = self._queues[l]
            while q and q[0].size_bits <= self._credit[l] + _CREDIT_EPS:
                pkt = q.popleft()
                self._credit[l] -= pkt.size_bits
                outbox.append(pkt)

        end_t = (self.slot + 1) * cfg.slot_s
        for pkt in outbox:
            route = self._route_by_pair[pkt.pair]
            st = self._stats_by_pair[pkt.pair]
            if pkt.hop == len(route) - 1:
                self.in_flight -= 1
                self.delivered += 1
                self.delivered_bits += pkt.size_bits
                self.delay_sum_s += end_t - pkt.inject_t
                st.delivered += 1
                st.delivered_bits += pkt.size_bits
                st.delay_sum_s += end_t - pkt.inject_t
            else:
                pkt.hop += 1
                q = self._queues[route[pkt.hop]]
                if len(q) >= cfg.queue_packets:
                    self.in_flight -= 1
                    self.dropped += 1
                    st.dropped += 1
                else:
                    q.append(pkt)

        for l in self._used_links:
            if not self._queues[l]:
                self._credit[l] = 0.0

        if self.generated != self.delivered + self.dropped + self.in_flight:
            raise ContractError(
                f"packet conservation violated at slot {self.slot}: "
                f"{self.generated} != {self.delivered} + {self.dropped} + {self.in_flight}")
        self.slot += 1

    def run(self, until_slot: int | None = None) -> None:
        bound = self.config.n_slots if until_slot is None else min(until_slot, self.config.n_slots)
        while self.slot < bound:
            self.step()
            if self.in_flight == 0 and self.slot < bound:
                self._skip_idle(bound)

    def _skip_idle(self, bound: int) -> None:
        """Jump over slots where nothing can happen (empty network, no
        injection due). Skipped slots change no state."""
        if not self._flows:
            self.slot = bound
            return
        next_t = min(fr.next_t for fr in self._flows)
        target = math.ceil(next_t / self.config.slot_s - _TIME_EPS)
        if target > self.slot:
            self.slot = min(target, bound)

    # -- results ---------------------------------------------------------

    def metrics(self) -> SimMetrics:
        per_flow = {fr.pair: fr.stats for fr in self._flows}
        return SimMetrics(
            generated=self.generated,
            delivered=self.delivered,
            dropped=self.dropped,
            in_flight=self.in_flight,
            blocked_flows=self.blocked_flows,
            avg_delay_s=self.delay_sum_s / self.delivered if self.delivered else 0.0,
            pdr=self.delivered / self.generated if self.generated else 0.0,
            throughput_pkts=self.delivered,
            throughput_bps=self.delivered_bits / self.config.horizon_s,
            per_flow=per_flow,
        )


def run_simulation(topology: Topology, imap: InterferenceMap, profile: TrafficProfile,
                   routes: RouteTable, assignment: ChannelAssignment,
                   config: SimConfig, audit: ServiceAudit | None = None) -> SimMetrics:
    sim = Simulator(topology, imap, profile, routes, assignment, config, audit)
    sim.run()
    return sim.metrics()
