"""Traffic generation: permutation and hotspot pairings, a 20-point
discrete flow-size distribution, uniform arrivals over a fixed window.

Flow sets are plain parallel numpy arrays (src, dst, size, arrival); a
million flows is a few tens of megabytes, not a million objects.
"""

from __future__ import annotations

import importlib.resources
import math

import numpy as np

from dcnsim.engine import SEC


class SizeCdf:
    """Discrete flow-size distribution given as (size, cumulative prob)
    points, strictly increasing in both columns and ending at 1."""

    def __init__(self, sizes, cum_probs):
        self.sizes = np.asarray(sizes, dtype=np.int64)
        self.cum = np.asarray(cum_probs, dtype=np.float64)
        if len(self.sizes) != len(self.cum) or len(self.sizes) == 0:
            raise ValueError("need matching, non-empty size and probability columns")
        if np.any(self.sizes[1:] <= self.sizes[:-1]) or np.any(self.cum[1:] <= self.cum[:-1]):
            raise ValueError("CDF points must be strictly increasing")
        if self.sizes[0] <= 0:
            raise ValueError("flow sizes must be positive")
        if abs(self.cum[-1] - 1.0) > 1e-9:
            raise ValueError(f"cumulative probability must end at 1, got {self.cum[-1]}")

    @classmethod
    def from_file(cls, path) -> "SizeCdf":
        sizes, cum = [], []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                s, c = line.split()
                sizes.append(int(s))
                cum.append(float(c))
        return cls(sizes, cum)

    def pmf(self) -> np.ndarray:
        return np.diff(self.cum, prepend=0.0)

    def mean(self) -> float:
        return float(self.pmf() @ self.sizes)

    def mean_packets(self, mtu: int = 9000) -> float:
        return float(self.pmf() @ np.ceil(self.sizes / mtu))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.sizes[np.searchsorted(self.cum, rng.random(n), side="left")]


def load_default_cdf() -> SizeCdf:
    ref = importlib.resources.files("dcnsim") / "data" / "websearch_cdf.txt"
    with importlib.resources.as_file(ref) as path:
        return SizeCdf.from_file(path)


def generate_permutation(topology, seed: int) -> np.ndarray:
    """Random server permutation avoiding same-router destinations.

    Every server gets exactly one destination server and appears exactly
    once as a destination. Conflicting entries (destination on the source's
    own router) are re-drawn by swapping with random partners until clean.
    """
    if topology.n_routers < 2:
        raise ValueError("permutation pairing needs at least 2 routers")
    n = topology.n_servers
    router = topology.server_router
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    for _round in range(200):
        bad = np.flatnonzero(router[perm] == router[np.arange(n)])
        if len(bad) == 0:
            return perm
        partners = rng.integers(0, n, size=len(bad))
        for i, j in zip(bad, partners):
            perm[i], perm[j] = perm[j], perm[i]
    raise RuntimeError("could not untangle same-router pairs; concentration too high?")


def generate_flows(
    pairing: np.ndarray,
    *,
    cdf: SizeCdf,
    seed: int,
    window_ps: int,
    flows_per_server: int | None = None,
    lam: float | None = None,
):
    """(src, dst, size, arrival) arrays: n flows per server, arrivals
    i.i.d. uniform over [0, window_ps), sizes i.i.d. from the CDF.

    n is flows_per_server directly, or round(lam * window) when given as
    a rate; the flow set stays fixed either way.
    """
    if (flows_per_server is None) == (lam is None):
        raise ValueError("give exactly one of flows_per_server or lam")
    if flows_per_server is None:
        flows_per_server = round(lam * window_ps / SEC)
    if flows_per_server < 1:
        raise ValueError(f"rate and window give {flows_per_server} flows per server")
    n_servers = len(pairing)
    total = n_servers * flows_per_server
    rng = np.random.default_rng(seed)
    src = np.repeat(np.arange(n_servers, dtype=np.int64), flows_per_server)
    dst = pairing[src]
    size = cdf.sample(rng, total)
    arrival = rng.integers(0, window_ps, size=total, dtype=np.int64)
    return src, dst, size, arrival


def generate_skewed(
    topology,
    *,
    hotspot_fraction: float,
    cdf: SizeCdf,
    seed: int,
    window_ps: int,
    flows_per_server: int | None = None,
    lam: float | None = None,
    hotspot_router: int | None = None,
):
    """Permutation pairing with a hotspot: the given fraction of sources
    (drawn from servers outside the hotspot router) send to servers of one
    router instead of their permutation partner."""
    if not 0 < hotspot_fraction <= 1:
        raise ValueError(f"hotspot fraction must be in (0, 1], got {hotspot_fraction}")
    rng = np.random.default_rng(seed ^ 0x5EED)
    if hotspot_router is None:
        hotspot_router = int(rng.integers(0, topology.n_routers))
    targets = np.asarray(topology.servers_of(hotspot_router), dtype=np.int64)
    if len(targets) == 0:
        raise ValueError(f"router {hotspot_router} has no servers to receive the hotspot")
    pairing = generate_permutation(topology, seed)
    outside = np.flatnonzero(topology.server_router != hotspot_router)
    n_redirect = math.ceil(hotspot_fraction * len(outside))
    chosen = rng.choice(outside, size=n_redirect, replace=False)
    pairing = pairing.copy()
    pairing[chosen] = rng.choice(targets, size=n_redirect, replace=True)
    flows = generate_flows(
        pairing,
        cdf=cdf,
        seed=seed,
        window_ps=window_ps,
        flows_per_server=flows_per_server,
        lam=lam,
    )
    return flows, hotspot_router
