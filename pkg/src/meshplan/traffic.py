"""Traffic profiles: one constant-bit-rate flow per communicating node pair."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError

FLOW_KINDS = ("voip", "vod", "cbr")

# GSM-AMR style voice: 12.2 kb/s, two 244-bit frames per packet.
VOIP_RATE_BPS = 12200.0
VOIP_PACKET_BYTES = 61
# Video-on-demand: 150 kb/s with large payload units.
VOD_RATE_BPS = 150000.0
VOD_PACKET_BYTES = 65536


@dataclass(frozen=True)
class Flow:
    src: int
    dst: int
    rate_bps: float
    packet_bytes: int
    kind: str = "cbr"

    def __post_init__(self):
        if self.src == self.dst:
            raise ConfigurationError(f"flow endpoints must differ, got ({self.src}, {self.dst})")
        if self.rate_bps <= 0:
            raise ConfigurationError(f"flow ({self.src}, {self.dst}): rate must be positive")
        if self.packet_bytes < 1:
            raise ConfigurationError(f"flow ({self.src}, {self.dst}): packet size must be >= 1 byte")
        if self.kind not in FLOW_KINDS:
            raise ConfigurationError(f"unknown flow kind {self.kind!r}")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.src, self.dst)

    @property
    def packet_bits(self) -> int:
        return self.packet_bytes * 8


@dataclass(frozen=True)
class TrafficProfile:
    flows: tuple[Flow, ...]

    def __post_init__(self):
        pairs = [f.pair for f in self.flows]
        if len(set(pairs)) != len(pairs):
            raise ConfigurationError("duplicate (src, dst) pair in traffic profile")

    def by_pair(self) -> dict[tuple[int, int], Flow]:
        return {f.pair: f for f in self.flows}

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(f.pair for f in self.flows)

    def total_demand_bps(self) -> float:
        return sum(f.rate_bps for f in self.flows)


def voip_flow(src: int, dst: int) -> Flow:
    return Flow(src, dst, VOIP_RATE_BPS, VOIP_PACKET_BYTES, "voip")


def vod_flow(src: int, dst: int) -> Flow:
    return Flow(src, dst, VOD_RATE_BPS, VOD_PACKET_BYTES, "vod")
