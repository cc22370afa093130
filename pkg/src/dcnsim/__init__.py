"""dcnsim: packet-level data-center network simulation on a single machine."""

from dcnsim.engine import Engine, EventHandle, SchedulingError, PS, NS, US, MS, SEC

__all__ = [
    "Engine",
    "EventHandle",
    "SchedulingError",
    "PS",
    "NS",
    "US",
    "MS",
    "SEC",
]
