"""Two-level hierarchical topology: complete groups joined by single global
links, one per group pair."""

from __future__ import annotations

from dcnsim.topo.base import DEFAULT_HOP_DELAY, DEFAULT_LINK_RATE, Topology


def build_dragonfly(
    a: int,
    h: int,
    p: int,
    *,
    link_rate: int = DEFAULT_LINK_RATE,
    hop_delay: int = DEFAULT_HOP_DELAY,
) -> Topology:
    """a routers per group, h global links per router, a*h+1 groups.

    Every group is internally complete and exactly one global link joins
    each group pair. Global port j of group g (ports are numbered
    group-wide, router r owning ports r*h .. r*h+h-1) reaches group
    (g + j + 1) mod (a*h + 1), which spreads the global links evenly:
    network degree is uniformly (a - 1) + h.
    """
    if a < 1:
        raise ValueError(f"routers per group must be >= 1, got {a}")
    if h < 1:
        raise ValueError(f"global links per router must be >= 1, got {h}")
    g = a * h + 1
    edges = []
    for grp in range(g):
        base = grp * a
        for i in range(a):
            for j in range(i + 1, a):
                edges.append((base + i, base + j))
    for g1 in range(g):
        for g2 in range(g1 + 1, g):
            j1 = (g2 - g1 - 1) % g
            j2 = (g1 - g2 - 1) % g
            edges.append((g1 * a + j1 // h, g2 * a + j2 // h))
    return Topology.from_edges(
        "dragonfly",
        g * a,
        edges,
        concentration=p,
        link_rate=link_rate,
        hop_delay=hop_delay,
    )
