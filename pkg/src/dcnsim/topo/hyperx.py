"""Hamming-graph topology: routers on an integer lattice, all-to-all links
along every axis."""

from __future__ import annotations

import math

from dcnsim.topo.base import DEFAULT_HOP_DELAY, DEFAULT_LINK_RATE, Topology


def build_hyperx(
    dims: list[int],
    p: int,
    *,
    link_rate: int = DEFAULT_LINK_RATE,
    hop_delay: int = DEFAULT_HOP_DELAY,
) -> Topology:
    """Routers = product(dims); two routers connect iff their coordinate
    vectors differ in exactly one position. Degree = sum(S_i - 1),
    diameter = len(dims). dims=[2]*n gives the n-cube."""
    if not dims:
        raise ValueError("need at least one dimension")
    if any(s < 2 for s in dims):
        raise ValueError(f"every dimension must be >= 2, got {dims}")
    n = math.prod(dims)
    strides = [0] * len(dims)
    acc = 1
    for i in range(len(dims) - 1, -1, -1):
        strides[i] = acc
        acc *= dims[i]
    edges = []
    for rid in range(n):
        rem = rid
        for size, stride in zip(dims, strides):
            coord = rem // stride % size
            rem -= coord * stride
            for other in range(coord + 1, size):
                edges.append((rid, rid + (other - coord) * stride))
    return Topology.from_edges(
        "hyperx",
        n,
        edges,
        concentration=p,
        link_rate=link_rate,
        hop_delay=hop_delay,
    )
