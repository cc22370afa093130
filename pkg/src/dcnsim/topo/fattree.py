"""Three-stage folded-Clos fat tree."""

from __future__ import annotations

import math

import numpy as np

from dcnsim.topo.base import DEFAULT_HOP_DELAY, DEFAULT_LINK_RATE, Topology


def build_fat_tree(
    k: int,
    oversub: float = 1.0,
    *,
    link_rate: int = DEFAULT_LINK_RATE,
    hop_delay: int = DEFAULT_HOP_DELAY,
) -> Topology:
    """k-pod fat tree: k^2/2 edge, k^2/2 aggregation, k^2/4 core routers.

    Servers attach to edge routers only, ceil(oversub * k/2) per edge
    router, so oversub=1 gives the classic full-bandwidth k^3/4 servers.

    Router numbering: edge routers come first (pod-major), then
    aggregation routers (pod-major), then core routers grouped by the
    aggregation column they connect to.
    """
    if k < 2 or k % 2:
        raise ValueError(f"fat tree radix k must be even and >= 2, got {k}")
    half = k // 2
    n_edge = k * half
    n_agg = k * half
    edges = []
    for pod in range(k):
        for e in range(half):
            for a in range(half):
                edges.append((pod * half + e, n_edge + pod * half + a))
        for a in range(half):
            agg = n_edge + pod * half + a
            for c in range(half):
                edges.append((agg, n_edge + n_agg + a * half + c))
    p = math.ceil(oversub * half)
    return Topology.from_edges(
        "fattree",
        n_edge + n_agg + half * half,
        edges,
        concentration=p,
        server_routers=np.arange(n_edge, dtype=np.int32),
        link_rate=link_rate,
        hop_delay=hop_delay,
    )
