"""Shared builders for the test suite."""

from __future__ import annotations

import random

import pytest

from meshplan import (Flow, MeshNode, TrafficProfile, build_interference_map,
                      build_topology, topology_from_nodes)


@pytest.fixture
def ring4():
    # Links sort by (u, v): 0=(0,1) 1=(0,3) 2=(1,2) 3=(2,3).
    return build_topology("ring", 4, 250.0, 2)


@pytest.fixture
def ring4_imap(ring4):
    return build_interference_map(ring4)


@pytest.fixture
def grid9():
    return build_topology("grid", 9, 200.0, 2)


def cbr(src, dst, rate, packet_bytes=125):
    return Flow(src, dst, rate, packet_bytes, "cbr")


def profile(*flows):
    return TrafficProfile(tuple(flows))


def random_topology(seed: int, max_nodes: int = 12, max_links: int = 24):
    """Seeded random node scatter; grows the area until the link count fits."""
    rng = random.Random(seed)
    n = rng.randint(4, max_nodes)
    side = 600.0
    while True:
        nodes = tuple(MeshNode(i, rng.uniform(0, side), rng.uniform(0, side))
                      for i in range(n))
        topo = topology_from_nodes(nodes, tx_range=250.0)
        if 1 <= topo.n_links <= max_links:
            return topo
        side *= 1.3


def replay_schedule(order, imap, gains, n_channels):
    """Independent re-simulation of the greedy assignment walk: per-step
    exhaustive argmin over brute-force gain sums, per-frame eligibility,
    ties to the smallest channel index."""
    n = len(order)
    channel = [None] * n
    frame = [None] * n
    f = 0
    while any(c is None for c in channel):
        for link in order:
            if channel[link] is not None:
                continue
            if any(frame[e] == f for e in imap.n1[link]):
                continue
            d = []
            for c in range(n_channels):
                d.append(sum(gains[q] for q in range(n)
                             if channel[q] == c and q in imap.interferers[link]))
            best, best_c = None, None
            for c in range(n_channels):
                if best is None or d[c] < best:
                    best, best_c = d[c], c
            channel[link] = best_c
            frame[link] = f
        f += 1
    return channel, frame


GENERATOR_CASES_8 = [
    ("chain", 5, 200.0),
    ("chain", 8, 150.0),
    ("ring", 4, 250.0),
    ("ring", 6, 250.0),
    ("ring", 8, 250.0),
    ("grid", 4, 200.0),
    ("grid", 6, 200.0),
    ("grid", 8, 200.0),
    ("star", 5, 250.0),
    ("star", 6, 250.0),
    ("binary-tree", 7, 200.0),
    ("binary-tree", 8, 200.0),
]


def generator_topologies_upto_8():
    return [build_topology(kind, n, spacing) for kind, n, spacing in GENERATOR_CASES_8]
