"""Run orchestration: wire topology, routing, fabric, transport, workload,
telemetry and budget together and drive the engine to quiescence."""

from __future__ import annotations

import random

import numpy as np

from dcnsim.budget import BudgetAccountant, BudgetExceeded
from dcnsim.engine import SEC, Engine
from dcnsim.network import DATA, TRIM, Fabric, NetStats, PacketPool, FULL_PACKET_BYTES
from dcnsim.routing import RoutingTables, compute_tables, materialize_route, sample_paths
from dcnsim.transport import FlowOutcome, NdpFlow, PullPacer


def _inject(sim: "Simulation") -> None:
    sim._activate_next()


class Simulation:
    """One complete run over one topology.

    Flow injection is a single chained event: each activation schedules
    the next flow's arrival, so pending-arrival state is O(1) regardless
    of how many flows a run holds.
    """

    def __init__(
        self,
        topology,
        *,
        tables: RoutingTables | None = None,
        seed: int = 0,
        paths_per_flow: int = 5,
        queue_policy: int = TRIM,
        telemetry=None,
        budget: BudgetAccountant | None = None,
        collect_outcomes: bool = False,
        flow_size_probe=None,
    ):
        self.topology = topology
        self.engine = Engine()
        self.tables = compute_tables(topology) if tables is None else tables
        self.pool = PacketPool()
        self.stats = NetStats()
        self.fabric = Fabric(self.engine, topology, self.pool, self.stats, queue_policy)
        self.telemetry = telemetry
        self.budget = budget
        self.seed = seed
        self.paths_per_flow = paths_per_flow
        self.path_rng = random.Random((seed + 1) * 0x9E3779B9)
        self.pull_interval = FULL_PACKET_BYTES * 8 * SEC // topology.link_rate
        self.pacers: dict[int, PullPacer] = {}
        self.outcomes = [] if collect_outcomes else None
        self.flow_size_probe = flow_size_probe
        self._flows = None
        self._next = 0
        self.injected = 0
        self.completed = 0
        self.aborted = False

    # -- workload ---------------------------------------------------------

    def add_flows(self, src, dst, size, arrival) -> None:
        """Register the full flow set (parallel arrays); sorts by arrival
        and schedules the first injection."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        size = np.asarray(size, dtype=np.int64)
        arrival = np.asarray(arrival, dtype=np.int64)
        order = np.argsort(arrival, kind="stable")
        self._flows = (src[order], dst[order], size[order], arrival[order])
        self._next = 0
        if len(src):
            self.engine.post(int(arrival[order[0]]), _inject, self)

    @property
    def n_flows(self) -> int:
        return 0 if self._flows is None else len(self._flows[0])

    def _activate_next(self) -> None:
        src, dst, size, arrival = self._flows
        i = self._next
        self._next += 1
        if self._next < len(src):
            self.engine.post(int(arrival[self._next]), _inject, self)
        if self.aborted:
            return
        try:
            self._start_flow(i, int(src[i]), int(dst[i]), int(size[i]))
        except BudgetExceeded:
            # stop admitting new flows; active ones drain normally
            self.aborted = True

    def _start_flow(self, flow_id: int, src: int, dst: int, size: int) -> None:
        t = self.topology
        r_src, r_dst = t.router_of(src), t.router_of(dst)
        if r_src == r_dst:
            router_paths = [[r_src]]
        else:
            router_paths = sample_paths(self.tables, r_src, r_dst, self.paths_per_flow, self.path_rng)
        rev_paths = [list(reversed(p)) for p in router_paths]
        fwd = tuple(
            self.fabric.resolve(materialize_route(t, p, src, dst)) for p in router_paths
        )
        rev = tuple(
            self.fabric.resolve(materialize_route(t, p, dst, src)) for p in rev_paths
        )
        if self.budget is not None:
            self.budget.flow_activated(len(fwd))
        flow = NdpFlow(self, flow_id, src, dst, size, fwd, rev)
        self.injected += 1
        if self.flow_size_probe is not None:
            self.flow_size_probe(flow)
        flow.start()

    # -- transport services ----------------------------------------------

    def pacer_for(self, server: int) -> PullPacer:
        p = self.pacers.get(server)
        if p is None:
            p = PullPacer(self.engine, self.pull_interval)
            self.pacers[server] = p
        return p

    def flow_completed(self, flow: NdpFlow) -> None:
        self.completed += 1
        if self.budget is not None:
            self.budget.flow_completed(len(flow.fwd_routes))
        o = FlowOutcome(
            flow.flow_id,
            flow.src,
            flow.dst,
            flow.size,
            flow.arrival,
            self.engine.now(),
            flow.retransmissions,
            flow.paths_mask.bit_count(),
        )
        if self.telemetry is not None:
            self.telemetry.record(o)
        if self.outcomes is not None:
            self.outcomes.append(o)

    # -- driving ----------------------------------------------------------

    def run(self) -> int:
        """Drive to quiescence; returns executed event count."""
        return self.engine.run()

    def incomplete_flows(self) -> int:
        return self.n_flows - self.completed

    def healthy(self) -> bool:
        """Network fully drained and packet pool reconciled."""
        return self.pool.outstanding == 0 and self.fabric.idle() and self.stats.reconciled()
