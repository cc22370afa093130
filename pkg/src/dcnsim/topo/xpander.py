"""Expander topology built as a random lift of a complete graph."""

from __future__ import annotations

import random

from dcnsim.topo.base import DEFAULT_HOP_DELAY, DEFAULT_LINK_RATE, Topology


def build_xpander(
    degree: int,
    lifts: int,
    p: int,
    seed: int = 0,
    *,
    link_rate: int = DEFAULT_LINK_RATE,
    hop_delay: int = DEFAULT_HOP_DELAY,
) -> Topology:
    """(degree+1)*lifts routers, degree-regular.

    Each edge of the base graph K_{degree+1} is replaced by a random
    permutation matching between the two corresponding groups of `lifts`
    routers; lifts=1 reproduces K_{degree+1} itself. Regenerated with a
    fresh permutation draw in the rare case the lift comes out
    disconnected.
    """
    if degree < 2:
        raise ValueError(f"degree must be >= 2, got {degree}")
    if lifts < 1:
        raise ValueError(f"lift count must be >= 1, got {lifts}")
    rng = random.Random(seed)
    n_base = degree + 1
    n = n_base * lifts
    for _attempt in range(100):
        edges = []
        for u in range(n_base):
            for v in range(u + 1, n_base):
                perm = list(range(lifts))
                rng.shuffle(perm)
                for i, pi in enumerate(perm):
                    edges.append((u * lifts + i, v * lifts + pi))
        t = Topology.from_edges(
            "xpander",
            n,
            edges,
            concentration=p,
            link_rate=link_rate,
            hop_delay=hop_delay,
        )
        if t.is_connected():
            return t
    raise RuntimeError(f"no connected {lifts}-lift of K_{n_base} found for seed {seed}")
