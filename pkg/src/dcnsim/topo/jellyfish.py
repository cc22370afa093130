"""Random regular router graph, connectivity-repaired, deterministic per seed."""

from __future__ import annotations

import random

from dcnsim.topo.base import DEFAULT_HOP_DELAY, DEFAULT_LINK_RATE, Topology


def _pair_stubs(n: int, d: int, rng: random.Random) -> set[tuple[int, int]]:
    # Configuration model: shuffle n*d stubs, then repeatedly match the last
    # stub against a random remaining one, re-drawing on self-loops and
    # duplicates. Restart from scratch on the rare dead end.
    for _attempt in range(200):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges: set[tuple[int, int]] = set()
        stuck = False
        while stubs:
            u = stubs.pop()
            for _try in range(60):
                j = rng.randrange(len(stubs))
                v = stubs[j]
                if v != u and (u, v) not in edges and (v, u) not in edges:
                    stubs[j] = stubs[-1]
                    stubs.pop()
                    edges.add((u, v))
                    break
            else:
                stuck = True
                break
        if not stuck:
            return edges
    raise RuntimeError(f"could not realize a {d}-regular graph on {n} routers")


def _components(n: int, edges: set[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(comp)
    return comps


def _repair_connectivity(n: int, edges: set[tuple[int, int]], rng: random.Random) -> None:
    # Double edge swap across components: replace (a,b) and (c,d) from two
    # different components with (a,c) and (b,d). Degrees are preserved and
    # the two components merge; cross-component pairs can never duplicate
    # an existing edge.
    while True:
        comps = _components(n, edges)
        if len(comps) == 1:
            return
        members = set(comps[0])
        in_first = [e for e in edges if e[0] in members]
        in_rest = [e for e in edges if e[0] not in members]
        a, b = in_first[rng.randrange(len(in_first))]
        c, d = in_rest[rng.randrange(len(in_rest))]
        edges.remove((a, b))
        edges.remove((c, d))
        edges.add((a, c))
        edges.add((b, d))


def build_jellyfish(
    n_routers: int,
    degree: int,
    p: int,
    seed: int,
    *,
    link_rate: int = DEFAULT_LINK_RATE,
    hop_delay: int = DEFAULT_HOP_DELAY,
) -> Topology:
    """n_routers-router random graph, every router with exactly `degree`
    network links, p servers per router."""
    if degree >= n_routers:
        raise ValueError(f"degree {degree} needs more than {n_routers} routers")
    if n_routers * degree % 2:
        raise ValueError(f"n_routers*degree must be even, got {n_routers}*{degree}")
    if degree < 2 and n_routers > 2:
        raise ValueError(f"degree {degree} cannot give a connected graph on {n_routers} routers")
    rng = random.Random(seed)
    edges = _pair_stubs(n_routers, degree, rng)
    _repair_connectivity(n_routers, edges, rng)
    return Topology.from_edges(
        "jellyfish",
        n_routers,
        sorted(edges),
        concentration=p,
        link_rate=link_rate,
        hop_delay=hop_delay,
    )
