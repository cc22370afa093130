"""Receiver-driven transport with packet trimming.

One NdpFlow object carries both endpoints of a flow, which halves the
per-flow object count; the engine is single-threaded so the two halves
can never race. Lifecycle: at arrival the sender sprays the first window
as 64 B probe headers (no payload, so an overloaded network sheds load
before it carries it). The receiver answers data with ACKs and headers
with NACKs, and clocks the sender with pull tokens paced at its own line
rate. The sender answers each pull with one packet: oldest NACKed
sequence first, else the next new one, sprayed uniformly across the
flow's sampled paths. A coarse safety timer recovers from lost control
packets; it is idle in healthy runs.
"""

from __future__ import annotations

from dcnsim.engine import SEC
from dcnsim.network import ACK, DATA, HDR, NACK, PULL, FULL_PACKET_BYTES, HEADER_BYTES

WINDOW_PACKETS = 8
SAFETY_RTT_MULTIPLE = 10

# Same multiplier/increment as numpy's default PCG stream; used here as a
# plain 64-bit LCG, one state word per flow.
_LCG_MUL = 6364136223846793005
_LCG_INC = 1442695040888963407
_MASK64 = (1 << 64) - 1


class FlowOutcome:
    __slots__ = ("flow_id", "src", "dst", "size", "arrival", "completion", "fct", "retransmissions", "paths_used")

    def __init__(self, flow_id, src, dst, size, arrival, completion, retransmissions, paths_used):
        self.flow_id = flow_id
        self.src = src
        self.dst = dst
        self.size = size
        self.arrival = arrival
        self.completion = completion
        self.fct = completion - arrival
        self.retransmissions = retransmissions
        self.paths_used = paths_used


class PullPacer:
    """Per-receiving-host pull pacing: one token per full-packet
    serialization time, FIFO across the host's incoming flows."""

    __slots__ = ("engine", "interval", "pending", "busy")

    def __init__(self, engine, interval: int):
        self.engine = engine
        self.interval = interval
        self.pending = []
        self.busy = False

    def request(self, flow: "NdpFlow") -> None:
        self.pending.append(flow)
        if not self.busy:
            self.busy = True
            self._emit()

    def _emit(self) -> None:
        while self.pending:
            flow = self.pending.pop(0)
            if not flow.done:
                flow.send_pull()
                self.engine.post(self.engine.now() + self.interval, _pacer_tick, self)
                return
        self.busy = False


def _pacer_tick(pacer: PullPacer) -> None:
    pacer._emit()


class NdpFlow:
    """Sender plus receiver state of one flow; the per-flow memory budget
    lives here. Bit masks are plain ints, the retransmit queue is created
    on first use, and routes are freed at completion."""

    __slots__ = (
        "sim",
        "flow_id",
        "src",
        "dst",
        "size",
        "arrival",
        "n_pkts",
        "last_size",
        "fwd_routes",
        "rev_routes",
        "lcg",
        "next_new",
        "retx",
        "retx_mask",
        "acked_mask",
        "sent_mask",
        "inflight_mask",
        "inflight",
        "acked_count",
        "got_mask",
        "got_count",
        "retransmissions",
        "paths_mask",
        "timer",
        "timer_seen_acked",
        "done",
    )

    def __init__(self, sim, flow_id: int, src: int, dst: int, size: int, fwd_routes, rev_routes):
        if size <= 0:
            raise ValueError(f"flow size must be positive, got {size}")
        self.sim = sim
        self.flow_id = flow_id
        self.src = src
        self.dst = dst
        self.size = size
        self.arrival = sim.engine.now()
        self.n_pkts = -(-size // FULL_PACKET_BYTES)
        self.last_size = size - (self.n_pkts - 1) * FULL_PACKET_BYTES
        self.fwd_routes = fwd_routes
        self.rev_routes = rev_routes
        self.lcg = (flow_id * 2 + 1 + sim.seed) & _MASK64
        self.next_new = 0
        self.retx = None
        self.retx_mask = 0
        self.acked_mask = 0
        self.sent_mask = 0
        self.inflight_mask = 0
        self.inflight = 0
        self.acked_count = 0
        self.got_mask = 0
        self.got_count = 0
        self.retransmissions = 0
        self.paths_mask = 0
        self.timer = None
        self.timer_seen_acked = -1
        self.done = False

    # -- sender side ------------------------------------------------------

    def start(self) -> None:
        for seq in range(min(WINDOW_PACKETS, self.n_pkts)):
            self._send(HDR, seq, HEADER_BYTES, self.fwd_routes)
        self._arm_timer()

    def _pick(self, routes) -> int:
        self.lcg = (self.lcg * _LCG_MUL + _LCG_INC) & _MASK64
        return (self.lcg >> 33) % len(routes)

    def _send(self, kind: int, seq: int, size: int, routes) -> None:
        i = self._pick(routes)
        if kind == DATA:
            self.paths_mask |= 1 << i
        sim = self.sim
        p = sim.pool.get(self, seq, size, kind, routes[i])
        sim.stats.sent[kind] += 1
        p.route[0].enqueue(p)

    def _send_data(self, seq: int) -> None:
        bit = 1 << seq
        if self.sent_mask & bit:
            self.retransmissions += 1
        else:
            self.sent_mask |= bit
        if not self.inflight_mask & bit:
            self.inflight_mask |= bit
            self.inflight += 1
        assert self.inflight <= WINDOW_PACKETS, "window overrun"
        size = self.last_size if seq == self.n_pkts - 1 else FULL_PACKET_BYTES
        self._send(DATA, seq, size, self.fwd_routes)

    def _rx_pull(self) -> None:
        if self.inflight >= WINDOW_PACKETS:
            return  # window full: the token is wasted, later ones clock us
        while self.retx:
            seq = self.retx.pop(0)
            self.retx_mask &= ~(1 << seq)
            if not self.acked_mask >> seq & 1:
                self._send_data(seq)
                return
        # skip anything already dispatched through the retransmit list
        # (probe NACKs put the first window there)
        while self.next_new < self.n_pkts and self.sent_mask >> self.next_new & 1:
            self.next_new += 1
        if self.next_new < self.n_pkts:
            seq = self.next_new
            self.next_new += 1
            self._send_data(seq)

    def _rx_nack(self, seq: int) -> None:
        bit = 1 << seq
        if self.inflight_mask & bit:
            self.inflight_mask &= ~bit
            self.inflight -= 1
        if not (self.acked_mask | self.retx_mask) & bit:
            self.retx_mask |= bit
            if self.retx is None:
                self.retx = []
            self.retx.append(seq)

    def _rx_ack(self, seq: int) -> None:
        bit = 1 << seq
        if self.acked_mask & bit:
            return
        self.acked_mask |= bit
        self.acked_count += 1
        if self.inflight_mask & bit:
            self.inflight_mask &= ~bit
            self.inflight -= 1
        if self.acked_count == self.n_pkts:
            self.done = True
            if self.timer is not None:
                self.timer.cancel()
                self.timer = None
            self.sim.flow_completed(self)
            self.fwd_routes = None
            self.rev_routes = None

    # -- receiver side ----------------------------------------------------

    def _rx_data(self, seq: int) -> None:
        bit = 1 << seq
        if not self.got_mask & bit:
            self.got_mask |= bit
            self.got_count += 1
        self._send(ACK, seq, HEADER_BYTES, self.rev_routes)
        if self.got_count < self.n_pkts:
            self.sim.pacer_for(self.dst).request(self)

    def _rx_hdr(self, seq: int) -> None:
        if self.got_mask >> seq & 1:
            # duplicate of something already received in full: the ACK very
            # likely got lost, so repeat it instead of asking for a resend
            self._send(ACK, seq, HEADER_BYTES, self.rev_routes)
            return
        self._send(NACK, seq, HEADER_BYTES, self.rev_routes)
        self.sim.pacer_for(self.dst).request(self)

    def send_pull(self) -> None:
        self._send(PULL, 0, HEADER_BYTES, self.rev_routes)

    # -- shared -----------------------------------------------------------

    def deliver(self, p) -> None:
        """Endpoint entry: every packet that survived the network lands
        here, senders' control on the reverse routes included."""
        sim = self.sim
        sim.stats.delivered[p.kind] += 1
        kind, seq = p.kind, p.seq
        sim.pool.put(p)
        if self.done:
            sim.stats.late += 1
            return
        if kind == DATA:
            self._rx_data(seq)
        elif kind == HDR:
            self._rx_hdr(seq)
        elif kind == ACK:
            self._rx_ack(seq)
        elif kind == NACK:
            self._rx_nack(seq)
        else:
            self._rx_pull()

    def _arm_timer(self) -> None:
        hdr_ser = HEADER_BYTES * 8 * SEC // self.sim.topology.link_rate
        full_ser = FULL_PACKET_BYTES * 8 * SEC // self.sim.topology.link_rate
        delay = self.sim.topology.hop_delay
        rtt = len(self.fwd_routes[0]) * (full_ser + delay) + len(self.rev_routes[0]) * (hdr_ser + delay)
        self.timer = self.sim.engine.schedule_after(SAFETY_RTT_MULTIPLE * rtt, _timer_fire, self)

    def _resume_stalled(self) -> None:
        # Declare whatever was in flight lost and probe the lowest
        # unacked sequence; the probe comes back as an ACK or NACK and
        # restarts the pull clock.
        self.inflight_mask = 0
        self.inflight = 0
        missing = ~self.acked_mask & (1 << self.n_pkts) - 1
        seq = (missing & -missing).bit_length() - 1
        self._send(HDR, seq, HEADER_BYTES, self.fwd_routes)


def _timer_fire(flow: NdpFlow) -> None:
    if flow.done:
        return
    if flow.acked_count == flow.timer_seen_acked:
        flow._resume_stalled()
    flow.timer_seen_acked = flow.acked_count
    flow._arm_timer()
