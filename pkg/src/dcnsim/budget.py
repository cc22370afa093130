"""Memory accounting and enforcement.

Two jobs. First, charge a cost model as the run progresses: the fixed
nominal per-object costs (2 kB per live flow plus 600 B per live path,
routing tables at their real byte size, 5 kB per server of static state)
against the --max-memory-gb ceiling, so a run aborts gracefully by
accounting before the process ever swaps or dies. Second, measure actual
deep object sizes on demand, which is how the tests hold the cost model
honest.
"""

from __future__ import annotations

import sys

FLOW_MODEL_BYTES = 2048
PATH_MODEL_BYTES = 600
SERVER_MODEL_BYTES = 5 * 1024


class BudgetExceeded(RuntimeError):
    pass


class BudgetAccountant:
    __slots__ = ("limit", "static", "live", "peak", "live_flows")

    def __init__(self, limit_bytes: int | None, *, table_bytes: int = 0, n_servers: int = 0):
        self.limit = limit_bytes
        self.static = table_bytes + n_servers * SERVER_MODEL_BYTES
        if limit_bytes is not None and self.static > limit_bytes:
            raise BudgetExceeded(
                f"static state alone ({self.static} B modeled) exceeds the "
                f"{limit_bytes} B memory budget"
            )
        self.live = 0
        self.peak = 0
        self.live_flows = 0

    def flow_activated(self, n_paths: int) -> None:
        cost = FLOW_MODEL_BYTES + n_paths * PATH_MODEL_BYTES
        if self.limit is not None and self.static + self.live + cost > self.limit:
            raise BudgetExceeded(
                f"modeled memory {self.static + self.live + cost} B exceeds the "
                f"{self.limit} B budget with {self.live_flows} live flows"
            )
        self.live += cost
        self.live_flows += 1
        if self.live > self.peak:
            self.peak = self.live

    def flow_completed(self, n_paths: int) -> None:
        self.live -= FLOW_MODEL_BYTES + n_paths * PATH_MODEL_BYTES
        self.live_flows -= 1

    def report(self) -> dict:
        return {
            "model_static_bytes": self.static,
            "model_live_bytes_peak": self.peak,
            "model_limit_bytes": self.limit,
        }


def deep_flow_bytes(flow) -> int:
    """Measured footprint of one flow: the object, its integer masks and
    counters, the retransmit list, and the route tuples. Queue objects
    inside routes are shared fabric state and are not charged to flows."""
    total = sys.getsizeof(flow)
    for name in (
        "lcg",
        "retx_mask",
        "acked_mask",
        "sent_mask",
        "inflight_mask",
        "got_mask",
        "paths_mask",
    ):
        total += sys.getsizeof(getattr(flow, name))
    if flow.retx is not None:
        total += sys.getsizeof(flow.retx)
    for routes in (flow.fwd_routes, flow.rev_routes):
        if routes is not None:
            total += sys.getsizeof(routes)
            total += sum(sys.getsizeof(r) for r in routes)
    if flow.timer is not None:
        total += sys.getsizeof(flow.timer)
    return total
