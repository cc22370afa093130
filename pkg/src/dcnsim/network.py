"""Data plane: finite-rate queues with trim-to-header overflow, fixed-delay
pipes, and pooled packets that carry their route as a tuple of queues.

There are no switch objects. A packet's journey is its route: the source
NIC queue, one egress queue per traversed link, then delivery to the flow
endpoint. Each hop costs exactly two engine events (service completion and
arrival after the pipe), which keeps the event count per delivered packet
low and predictable.
"""

from __future__ import annotations

from dcnsim.engine import SEC

# packet kinds
DATA = 0
HDR = 1  # trimmed data or a sender probe
ACK = 2
NACK = 3
PULL = 4
KIND_NAMES = ("data", "hdr", "ack", "nack", "pull")

HEADER_BYTES = 64
FULL_PACKET_BYTES = 9000
DATA_QUEUE_BYTES = 8 * FULL_PACKET_BYTES
CTRL_QUEUE_PACKETS = 8

TRIM = 0
DROPTAIL = 1

_BITS_TO_PS = 8 * SEC  # ser_ps = size_bytes * _BITS_TO_PS // rate_bps


class Packet:
    __slots__ = ("flow", "seq", "size", "kind", "route", "hop")


class PacketPool:
    """Free-list recycling; packets are transient, flows are not."""

    __slots__ = ("_free", "outstanding")

    def __init__(self):
        self._free = []
        self.outstanding = 0

    def get(self, flow, seq, size, kind, route) -> Packet:
        self.outstanding += 1
        p = self._free.pop() if self._free else Packet()
        p.flow = flow
        p.seq = seq
        p.size = size
        p.kind = kind
        p.route = route
        p.hop = 0
        return p

    def put(self, p: Packet) -> None:
        self.outstanding -= 1
        p.flow = None
        p.route = None
        self._free.append(p)


class NetStats:
    """Fabric-wide packet accounting, indexed by packet kind."""

    __slots__ = ("sent", "delivered", "dropped", "trims", "late")

    def __init__(self):
        self.sent = [0, 0, 0, 0, 0]
        self.delivered = [0, 0, 0, 0, 0]
        self.dropped = [0, 0, 0, 0, 0]
        self.trims = 0
        self.late = 0

    def reconciled(self) -> bool:
        """Every sent packet left the network exactly once. Trims convert
        data into headers in flight, so the header lane balances against
        sent headers plus trims."""
        if sum(self.sent) != sum(self.delivered) + sum(self.dropped):
            return False
        if self.sent[DATA] != self.delivered[DATA] + self.trims + self.dropped[DATA]:
            return False
        return self.delivered[HDR] + self.dropped[HDR] == self.sent[HDR] + self.trims


def _arrive(p: Packet) -> None:
    route = p.route
    hop = p.hop
    if hop < len(route):
        route[hop].enqueue(p)
    else:
        p.flow.deliver(p)


class Pipe:
    """Fixed propagation delay; order-preserving because the engine breaks
    timestamp ties in schedule order."""

    __slots__ = ("engine", "delay")

    def __init__(self, engine, delay: int):
        self.engine = engine
        self.delay = delay

    def send(self, p: Packet) -> None:
        self.engine.post(self.engine.now() + self.delay, _arrive, p)


class Queue:
    """Egress queue: one server, two lanes.

    The data lane holds up to 8 full-size packets by byte count; under the
    trim policy an overflowing data packet loses its payload and re-enters
    as a 64 B header. The control lane (headers, ACK/NACK/pull) holds 8
    packets, is never trimmed, and has non-preemptive priority.
    """

    __slots__ = (
        "engine",
        "pipe",
        "rate",
        "stats",
        "pool",
        "policy",
        "data_q",
        "ctrl_q",
        "data_bytes",
        "in_service",
    )

    def __init__(self, engine, pipe: Pipe, rate: int, stats: NetStats, pool: PacketPool, policy: int = TRIM):
        self.engine = engine
        self.pipe = pipe
        self.rate = rate
        self.stats = stats
        self.pool = pool
        self.policy = policy
        self.data_q = []
        self.ctrl_q = []
        self.data_bytes = 0
        self.in_service = None

    def enqueue(self, p: Packet) -> None:
        if p.kind == DATA:
            if self.data_bytes + p.size <= DATA_QUEUE_BYTES:
                self.data_q.append(p)
                self.data_bytes += p.size
                if self.in_service is None:
                    self._start_next()
                return
            if self.policy == DROPTAIL:
                self.stats.dropped[DATA] += 1
                self.pool.put(p)
                return
            self.stats.trims += 1
            p.kind = HDR
            p.size = HEADER_BYTES
        if len(self.ctrl_q) < CTRL_QUEUE_PACKETS:
            self.ctrl_q.append(p)
            if self.in_service is None:
                self._start_next()
        else:
            self.stats.dropped[p.kind] += 1
            self.pool.put(p)

    def _start_next(self) -> None:
        p = self.ctrl_q[0] if self.ctrl_q else self.data_q[0]
        self.in_service = p
        self.engine.post(self.engine.now() + p.size * _BITS_TO_PS // self.rate, _service_done, self)


def _service_done(q: Queue) -> None:
    p = q.in_service
    q.in_service = None
    if q.ctrl_q and q.ctrl_q[0] is p:
        del q.ctrl_q[0]
    else:
        del q.data_q[0]
        q.data_bytes -= p.size
    p.hop += 1
    q.pipe.send(p)
    if q.ctrl_q or q.data_q:
        q._start_next()


class Fabric:
    """Queue set over a topology's directed edges and server NICs,
    materialized lazily: a queue exists once a route touches it."""

    __slots__ = ("engine", "topology", "pipe", "stats", "pool", "policy", "queues")

    def __init__(self, engine, topology, pool: PacketPool, stats: NetStats, policy: int = TRIM):
        self.engine = engine
        self.topology = topology
        self.pipe = Pipe(engine, topology.hop_delay)
        self.stats = stats
        self.pool = pool
        self.policy = policy
        self.queues: dict[int, Queue] = {}

    def queue(self, qid: int) -> Queue:
        q = self.queues.get(qid)
        if q is None:
            q = Queue(self.engine, self.pipe, self.topology.link_rate, self.stats, self.pool, self.policy)
            self.queues[qid] = q
        return q

    def resolve(self, id_route: tuple[int, ...]) -> tuple[Queue, ...]:
        return tuple(self.queue(qid) for qid in id_route)

    def idle(self) -> bool:
        return all(q.in_service is None and not q.data_q and not q.ctrl_q for q in self.queues.values())
