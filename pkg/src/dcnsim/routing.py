"""Routing tables over arbitrary topologies: per-pair shortest-path
next-hop sets, random shortest-path sampling, and queue-id routes.

The table is one flat CSR keyed by row = src_router * N + dst_router.
Row data holds neighbor positions (uint8 indexes into the source's sorted
neighbor list) rather than router ids, which keeps the whole structure at
about 5 bytes per (src, dst) entry. No route or path is ever stored per
server pair; paths are sampled on demand and materialized per flow.
"""

from __future__ import annotations

import random

import numpy as np

from dcnsim.topo.base import Topology


class RoutingTables:
    """Shortest-path ECMP next-hop sets for every ordered router pair."""

    def __init__(self, topology: Topology, offsets: np.ndarray, positions: np.ndarray):
        self.topology = topology
        self.offsets = offsets
        self.positions = positions

    @property
    def n_entries(self) -> int:
        """Stored (src, dst) rows, excluding the vacuous src == dst rows."""
        n = self.topology.n_routers
        return n * (n - 1)

    @property
    def nbytes(self) -> int:
        return self.offsets.nbytes + self.positions.nbytes

    def ecmp_positions(self, src: int, dst: int) -> np.ndarray:
        row = src * self.topology.n_routers + dst
        return self.positions[self.offsets[row] : self.offsets[row + 1]]

    def next_hops(self, src: int, dst: int) -> list[int]:
        base = self.topology.indptr[src]
        idx = self.topology.indices
        return [int(idx[base + p]) for p in self.ecmp_positions(src, dst)]


def compute_tables(t: Topology, batch: int = 256) -> RoutingTables:
    """BFS from every router; next-hop sets are exactly the neighbors that
    strictly decrease distance to the destination."""
    if not t.is_connected():
        raise ValueError("routing tables require a connected topology")
    n = t.n_routers
    if int(t.degrees().max()) > 255:
        raise ValueError("router degree beyond 255 not supported by the table layout")

    dist = np.empty((n, n), dtype=np.int16)
    for lo in range(0, n, batch):
        src = np.arange(lo, min(lo + batch, n))
        dist[lo : lo + len(src)] = t.distances_from(src)

    offsets = np.empty(n * n + 1, dtype=np.uint32)
    offsets[0] = 0
    chunks = []
    total = 0
    for s in range(n):
        nbrs = t.neighbors(s)
        closer = dist[nbrs, :] + 1 == dist[s][None, :]  # (deg_s, n)
        dst_idx, pos = np.nonzero(closer.T)
        chunks.append(pos.astype(np.uint8))
        counts = closer.sum(axis=0, dtype=np.uint32)
        if int((counts == 0).sum()) != 1:  # only the self row may be empty
            raise AssertionError(f"router {s}: unreachable destination in a connected graph")
        row_ends = np.cumsum(counts, dtype=np.uint32)
        offsets[s * n + 1 : (s + 1) * n + 1] = row_ends + total
        total += int(row_ends[-1])
    return RoutingTables(t, offsets, np.concatenate(chunks))


def sample_paths(
    tables: RoutingTables, src_router: int, dst_router: int, k: int, rng: random.Random
) -> list[list[int]]:
    """Up to k distinct shortest router paths.

    Randomized depth-first descent through the ECMP sets: branch order is
    shuffled per expansion, so results are seed-deterministic, never
    repeat a path, and return fewer than k only when fewer exist.
    """
    if src_router == dst_router:
        raise ValueError("src and dst router must differ")
    if k < 1:
        raise ValueError(f"need k >= 1 paths, got {k}")
    t = tables.topology
    idx = t.indices
    indptr = t.indptr

    def shuffled_hops(r: int) -> list[int]:
        base = indptr[r]
        opts = [int(idx[base + p]) for p in tables.ecmp_positions(r, dst_router)]
        rng.shuffle(opts)
        return opts

    out: list[list[int]] = []
    path = [src_router]
    stack = [shuffled_hops(src_router)]
    while stack and len(out) < k:
        opts = stack[-1]
        if not opts:
            stack.pop()
            path.pop()
            continue
        nxt = opts.pop()
        if nxt == dst_router:
            out.append(path + [nxt])
        else:
            path.append(nxt)
            stack.append(shuffled_hops(nxt))
    return out


def n_queue_ids(t: Topology) -> int:
    """Id space size used by materialize_route for one topology."""
    return len(t.indices) + t.n_servers


def materialize_route(
    t: Topology, router_path: list[int], src_server: int, dst_server: int
) -> tuple[int, ...]:
    """Queue-id sequence: source NIC, then one egress queue per hop.

    Directed edge u->v maps to queue id indptr[u] + position_of_v; the NIC
    of server s is 2|E| + s. Delivery to dst_server happens implicitly
    after the final queue; the receiver downlink is not a queue.
    """
    if t.router_of(src_server) != router_path[0]:
        raise ValueError(f"server {src_server} is not attached to router {router_path[0]}")
    if t.router_of(dst_server) != router_path[-1]:
        raise ValueError(f"server {dst_server} is not attached to router {router_path[-1]}")
    route = [len(t.indices) + src_server]
    for u, v in zip(router_path, router_path[1:]):
        base, end = int(t.indptr[u]), int(t.indptr[u + 1])
        pos = int(np.searchsorted(t.indices[base:end], v))
        if base + pos >= end or t.indices[base + pos] != v:
            raise ValueError(f"routers {u} and {v} are not adjacent")
        route.append(base + pos)
    return tuple(route)
