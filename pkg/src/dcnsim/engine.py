"""Discrete-event engine: integer picosecond clock, priority event queue, run loop.

Time is a plain int in picoseconds.  Integer time keeps runs bit-for-bit
reproducible and resolves sub-nanosecond serialization arithmetic exactly
(64-bit picoseconds cover ~213 days of simulated time, far beyond the few
milliseconds a large run spans).

Two scheduling paths exist on purpose:

* ``schedule()`` returns an :class:`EventHandle` that supports cancellation
  (used for per-flow safety timers).  Cancellation is a tombstone flag; the
  entry stays in the heap and is skipped at dequeue, so there is never a
  linear search or re-heapify.
* ``post()`` is the allocation-light fast path used by the data plane, which
  schedules millions of non-cancellable events.
"""

from heapq import heappush, heappop
from itertools import count

# Time unit helpers (picoseconds).
PS = 1
NS = 1_000
US = 1_000_000
MS = 1_000_000_000
SEC = 1_000_000_000_000


class SchedulingError(ValueError):
    """Raised when an event is scheduled in the past or the engine is misused."""


class EventHandle:
    """Cancellable reference to a scheduled event."""

    __slots__ = ("fn", "arg", "alive")

    def __init__(self, fn, arg):
        self.fn = fn
        self.arg = arg
        self.alive = True

    def cancel(self):
        self.alive = False


def _fire_handle(handle):
    if handle.alive:
        handle.alive = False
        handle.fn(handle.arg)


class Engine:
    """Single-threaded event loop.

    Events fire in non-decreasing timestamp order; ties break by insertion
    order (FIFO), which makes runs with identical inputs reproduce exactly.
    The engine and everything it drives are confined to one thread; parallel
    experiments are separate processes.
    """

    __slots__ = ("_heap", "_seq", "_now", "_running", "events_executed")

    def __init__(self):
        self._heap = []
        self._seq = count()
        self._now = 0
        self._running = False
        self.events_executed = 0

    def now(self):
        return self._now

    def post(self, fire_at, fn, arg):
        """Schedule ``fn(arg)`` at time ``fire_at``.  Fast path, not cancellable."""
        if fire_at < self._now:
            raise SchedulingError(
                f"cannot schedule at t={fire_at} ps: clock already at {self._now} ps"
            )
        heappush(self._heap, (fire_at, next(self._seq), fn, arg))

    def schedule(self, fire_at, fn, payload=None):
        """Schedule ``fn(payload)`` at ``fire_at`` and return a cancellable handle."""
        if fire_at < self._now:
            raise SchedulingError(
                f"cannot schedule at t={fire_at} ps: clock already at {self._now} ps"
            )
        handle = EventHandle(fn, payload)
        heappush(self._heap, (fire_at, next(self._seq), _fire_handle, handle))
        return handle

    def schedule_after(self, delay, fn, payload=None):
        return self.schedule(self._now + delay, fn, payload)

    def run_until(self, t_end):
        """Execute every pending event with fire_at <= t_end, in order.

        Returns the number of events executed.  The clock ends at ``t_end``
        even when the queue drains early, so repeated calls advance time
        monotonically.
        """
        if self._running:
            raise SchedulingError("engine is already running")
        if t_end < self._now:
            raise SchedulingError(
                f"cannot run to t={t_end} ps: clock already at {self._now} ps"
            )
        self._running = True
        executed = 0
        heap = self._heap
        try:
            while heap and heap[0][0] <= t_end:
                t, _, fn, arg = heappop(heap)
                self._now = t
                fn(arg)
                executed += 1
            self._now = t_end
        finally:
            self._running = False
        self.events_executed += executed
        return executed

    def run(self):
        """Execute events until the queue is empty.  Returns the executed count.

        The clock is left at the time of the last event.
        """
        if self._running:
            raise SchedulingError("engine is already running")
        self._running = True
        executed = 0
        heap = self._heap
        try:
            while heap:
                t, _, fn, arg = heappop(heap)
                self._now = t
                fn(arg)
                executed += 1
        finally:
            self._running = False
        self.events_executed += executed
        return executed

    def pending(self):
        """Number of heap entries, including tombstoned (cancelled) ones."""
        return len(self._heap)
