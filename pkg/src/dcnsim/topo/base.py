"""Topology container shared by every generator.

Adjacency lives in CSR form (indptr/indices over router ids), so storage is
O(|E|) regardless of router count. Servers attach to routers contiguously:
server ids of one router form a consecutive block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from dcnsim.engine import NS

DEFAULT_LINK_RATE = 10 * 10**9  # bits/s
DEFAULT_HOP_DELAY = 500 * NS


def concentration_for_oversubscription(degree: int, factor: float) -> int:
    """Servers per router that oversubscribe a balanced design by `factor`.

    A balanced (1:1) design spends half the router radix on servers, so
    p = ceil(factor * degree / 2).
    """
    if factor < 1:
        raise ValueError(f"oversubscription factor must be >= 1, got {factor}")
    return math.ceil(factor * degree / 2)


@dataclass
class ValidationReport:
    connected: bool
    diameter: int  # -1 when disconnected
    n_routers: int
    n_links: int
    n_servers: int
    degree_histogram: dict[int, int]


class Topology:
    """Undirected router graph in CSR form plus server attachment.

    Instances are treated as immutable after construction; routing, the
    fabric, and the workload all share one object read-only.
    """

    def __init__(
        self,
        family: str,
        indptr: np.ndarray,
        indices: np.ndarray,
        server_router: np.ndarray,
        concentration: int,
        link_rate: int = DEFAULT_LINK_RATE,
        hop_delay: int = DEFAULT_HOP_DELAY,
    ):
        self.family = family
        self.indptr = indptr
        self.indices = indices
        self.server_router = server_router
        self.concentration = concentration
        self.link_rate = link_rate
        self.hop_delay = hop_delay
        self._sparse = None

    @classmethod
    def from_edges(
        cls,
        family: str,
        n_routers: int,
        edges,
        *,
        concentration: int,
        server_routers=None,
        link_rate: int = DEFAULT_LINK_RATE,
        hop_delay: int = DEFAULT_HOP_DELAY,
    ) -> "Topology":
        if concentration < 0:
            raise ValueError(f"concentration must be >= 0, got {concentration}")
        e = np.asarray(list(edges), dtype=np.int64)
        if len(e) == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise ValueError("edges must be (u, v) pairs")
        u, v = e[:, 0], e[:, 1]
        if np.any(u == v):
            raise ValueError("self-loop in edge list")
        if np.any((e < 0) | (e >= n_routers)):
            raise ValueError("edge endpoint out of range")
        du = np.concatenate([u, v])
        dv = np.concatenate([v, u])
        order = np.lexsort((dv, du))
        du, dv = du[order], dv[order]
        if np.any((du[1:] == du[:-1]) & (dv[1:] == dv[:-1])):
            raise ValueError("duplicate edge in edge list")
        indptr = np.zeros(n_routers + 1, dtype=np.int64)
        np.cumsum(np.bincount(du, minlength=n_routers), out=indptr[1:])
        indices = dv.astype(np.int32)
        if server_routers is None:
            server_routers = np.arange(n_routers, dtype=np.int32)
        server_router = np.repeat(np.asarray(server_routers, dtype=np.int32), concentration)
        return cls(family, indptr, indices, server_router, concentration, link_rate, hop_delay)

    @property
    def n_routers(self) -> int:
        return len(self.indptr) - 1

    @property
    def n_links(self) -> int:
        return len(self.indices) // 2

    @property
    def n_servers(self) -> int:
        return len(self.server_router)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, router: int) -> np.ndarray:
        """Sorted neighbor ids of one router (a CSR slice, do not mutate)."""
        return self.indices[self.indptr[router] : self.indptr[router + 1]]

    def router_of(self, server: int) -> int:
        return int(self.server_router[server])

    def servers_of(self, router: int) -> range:
        lo, hi = np.searchsorted(self.server_router, [router, router + 1])
        return range(int(lo), int(hi))

    def sparse(self) -> csr_matrix:
        if self._sparse is None:
            self._sparse = csr_matrix(
                (np.ones(len(self.indices), dtype=np.int8), self.indices, self.indptr),
                shape=(self.n_routers, self.n_routers),
            )
        return self._sparse

    def is_connected(self) -> bool:
        n_comp, _ = connected_components(self.sparse(), directed=False)
        return n_comp == 1

    def distances_from(self, sources) -> np.ndarray:
        """Hop distances from the given routers to all routers (int32, -1 = unreachable)."""
        d = dijkstra(self.sparse(), unweighted=True, indices=sources)
        d[np.isinf(d)] = -1
        return d.astype(np.int32)

    def validate(self) -> ValidationReport:
        deg = self.degrees()
        vals, counts = np.unique(deg, return_counts=True)
        hist = {int(d): int(c) for d, c in zip(vals, counts)}
        connected = self.is_connected()
        diameter = -1
        if connected:
            diameter = 0
            for lo in range(0, self.n_routers, 512):
                batch = np.arange(lo, min(lo + 512, self.n_routers))
                diameter = max(diameter, int(self.distances_from(batch).max()))
        return ValidationReport(
            connected=connected,
            diameter=diameter,
            n_routers=self.n_routers,
            n_links=self.n_links,
            n_servers=self.n_servers,
            degree_histogram=hist,
        )

    def export_edges(self, path) -> None:
        """Write one "u v" line per undirected edge, 0-indexed."""
        u = np.repeat(np.arange(self.n_routers), np.diff(self.indptr))
        mask = u < self.indices
        np.savetxt(path, np.column_stack([u[mask], self.indices[mask]]), fmt="%d")
