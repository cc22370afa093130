"""Per-flow records streamed to CSV as flows finish, plus constant-memory
aggregates grouped by flow size.

Memory here is O(size buckets x histogram bins), independent of flow
count: no FCT list is ever kept. Percentiles therefore come from the
log-spaced histogram: nearest-rank walk, reporting the lower edge of the
bin containing that rank. The binning arithmetic below is integer-exact
and is reimplemented verbatim by the analysis package, so percentiles
recomputed from the CSV must match this module digit for digit.
"""

from __future__ import annotations

from dcnsim.engine import SEC

CSV_HEADER = "flow_id,src,dst,size_bytes,arrival_ps,fct_ps,retransmissions,paths_used"

HIST_BINS_PER_OCTAVE = 16


def hist_bin_edge(v: int) -> int:
    """Lower edge of the histogram bin holding v (v >= 1): 16 linear
    sub-bins per power of two."""
    octave = v.bit_length() - 1
    base = 1 << octave
    sub = (v - base << 4) >> octave
    return base + sub * base // HIST_BINS_PER_OCTAVE


def percentile_from_hist(hist: dict[int, int], count: int, pct: float) -> int:
    """Nearest-rank percentile over binned data; returns the lower edge of
    the bin containing the ranked sample."""
    rank = max(1, -(-count * pct // 100))
    seen = 0
    for edge in sorted(hist):
        seen += hist[edge]
        if seen >= rank:
            return edge
    raise ValueError("histogram counts do not cover the requested rank")


class _Bucket:
    __slots__ = ("count", "fct_sum", "fct_max", "goodput_sum", "hist")

    def __init__(self):
        self.count = 0
        self.fct_sum = 0
        self.fct_max = 0
        self.goodput_sum = 0.0
        self.hist: dict[int, int] = {}


class Telemetry:
    """Streams one CSV row per completed flow and keeps per-size-bucket
    aggregates. Flows arriving before `warmup_cutoff_ps` are written to
    the CSV but left out of the aggregates."""

    def __init__(self, csv_file=None, warmup_cutoff_ps: int = 0):
        self._csv = csv_file
        if csv_file is not None:
            csv_file.write(CSV_HEADER + "\n")
        self.warmup_cutoff_ps = warmup_cutoff_ps
        self.buckets: dict[int, _Bucket] = {}
        self.completed = 0
        self.aggregated = 0
        self.retransmissions = 0
        self.last_completion = 0

    def record(self, o) -> None:
        if self._csv is not None:
            self._csv.write(
                f"{o.flow_id},{o.src},{o.dst},{o.size},{o.arrival},{o.fct},{o.retransmissions},{o.paths_used}\n"
            )
        self.completed += 1
        self.retransmissions += o.retransmissions
        if o.completion > self.last_completion:
            self.last_completion = o.completion
        if o.arrival < self.warmup_cutoff_ps:
            return
        b = self.buckets.get(o.size)
        if b is None:
            b = self.buckets[o.size] = _Bucket()
        b.count += 1
        b.fct_sum += o.fct
        if o.fct > b.fct_max:
            b.fct_max = o.fct
        b.goodput_sum += o.size * 8 * SEC / o.fct
        edge = hist_bin_edge(o.fct)
        b.hist[edge] = b.hist.get(edge, 0) + 1
        self.aggregated += 1

    def bucket_report(self) -> dict[str, dict]:
        out = {}
        for size in sorted(self.buckets):
            b = self.buckets[size]
            out[str(size)] = {
                "count": b.count,
                "fct_sum_ps": b.fct_sum,
                "mean_fct_ps": b.fct_sum / b.count,
                "p10_fct_ps": percentile_from_hist(b.hist, b.count, 10),
                "p99_fct_ps": percentile_from_hist(b.hist, b.count, 99),
                "max_fct_ps": b.fct_max,
                "mean_goodput_bps": b.goodput_sum / b.count,
                "histogram": {str(edge): b.hist[edge] for edge in sorted(b.hist)},
            }
        return out

    def finalize(
        self,
        *,
        incomplete: int = 0,
        aborted: bool = False,
        events: int = 0,
        data_packets: int = 0,
        stats=None,
        timing: dict | None = None,
        config: dict | None = None,
    ) -> dict:
        summary = {
            "schema": "dcnsim-summary-1",
            "warmup_cutoff_ps": self.warmup_cutoff_ps,
            "totals": {
                "flows_completed": self.completed,
                "flows_aggregated": self.aggregated,
                "flows_incomplete": incomplete,
                "retransmissions": self.retransmissions,
                "last_completion_ps": self.last_completion,
                "events": events,
                "data_packets_delivered": data_packets,
                "events_per_data_packet": events / data_packets if data_packets else 0.0,
            },
            "buckets": self.bucket_report(),
        }
        if stats is not None:
            summary["totals"]["trims"] = stats.trims
            summary["totals"]["drops"] = sum(stats.dropped)
            summary["totals"]["late_packets"] = stats.late
        summary["aborted"] = aborted
        if incomplete:
            summary["incomplete_note"] = (
                f"{incomplete} flows did not finish and are excluded from all FCT "
                "aggregates; slow flows are overrepresented among them, so the "
                "reported FCTs are biased low"
            )
        if config is not None:
            summary["config"] = config
        if timing is not None:
            summary["timing"] = timing
        if self._csv is not None:
            self._csv.flush()
        return summary
