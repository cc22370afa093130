import io
import math

from hypothesis import given, strategies as st

from dcnsim.telemetry import (
    CSV_HEADER,
    Telemetry,
    hist_bin_edge,
    percentile_from_hist,
)
from dcnsim.transport import FlowOutcome

MS = 10**9


def outcome(flow_id=0, size=9000, arrival=0, fct=MS, retx=0, paths=1):
    return FlowOutcome(flow_id, 0, 1, size, arrival, arrival + fct, retx, paths)


class TestHistBinning:
    def test_small_values_get_own_bins(self):
        assert [hist_bin_edge(v) for v in range(1, 9)] == [1, 2, 3, 4, 5, 6, 7, 8]

    def test_known_edges(self):
        assert hist_bin_edge(9000) == 8704
        assert hist_bin_edge(1_000_000) == 983_040
        assert hist_bin_edge(8192) == 8192
        assert hist_bin_edge(8191) == 7936

    def test_sixteen_bins_per_octave(self):
        edges = {hist_bin_edge(v) for v in range(1 << 20, 1 << 21)}
        assert len(edges) == 16

    @given(st.integers(min_value=1, max_value=1 << 50))
    def test_edge_brackets_value(self, v):
        e = hist_bin_edge(v)
        assert e <= v
        octave = v.bit_length() - 1
        width = max(1, (1 << octave) // 16)
        assert v - e < width + 1

    @given(st.integers(min_value=1, max_value=1 << 40), st.integers(min_value=1, max_value=1 << 40))
    def test_monotone(self, a, b):
        if a <= b:
            assert hist_bin_edge(a) <= hist_bin_edge(b)
        else:
            assert hist_bin_edge(a) >= hist_bin_edge(b)


class TestPercentile:
    def _oracle(self, values, pct):
        values = sorted(values)
        rank = max(1, math.ceil(len(values) * pct / 100))
        return hist_bin_edge(values[rank - 1])

    def test_matches_sorted_oracle(self):
        import random

        rng = random.Random(42)
        values = [int(math.exp(rng.uniform(0, 20))) + 1 for _ in range(1000)]
        hist = {}
        for v in values:
            e = hist_bin_edge(v)
            hist[e] = hist.get(e, 0) + 1
        for pct in (1, 10, 50, 90, 99, 100):
            assert percentile_from_hist(hist, len(values), pct) == self._oracle(values, pct)

    def test_single_sample(self):
        hist = {hist_bin_edge(777): 1}
        for pct in (1, 50, 100):
            assert percentile_from_hist(hist, 1, pct) == hist_bin_edge(777)


class TestTelemetry:
    def test_mean_of_three_known_fcts(self):
        t = Telemetry()
        for i, ms in enumerate((1, 2, 9)):
            t.record(outcome(flow_id=i, fct=ms * MS))
        report = t.bucket_report()
        assert list(report) == ["9000"]
        assert report["9000"]["mean_fct_ps"] == 4 * MS
        assert report["9000"]["max_fct_ps"] == 9 * MS
        assert report["9000"]["count"] == 3

    def test_buckets_keyed_by_exact_size(self):
        t = Telemetry()
        t.record(outcome(size=1000))
        t.record(outcome(size=30_000_000))
        assert sorted(t.buckets) == [1000, 30_000_000]

    def test_goodput_mean(self):
        t = Telemetry()
        t.record(outcome(size=125_000, fct=MS))  # 1 Mb in 1 ms = 1 Gb/s
        assert t.bucket_report()["125000"]["mean_goodput_bps"] == 10**9

    def test_csv_rows(self):
        buf = io.StringIO()
        t = Telemetry(csv_file=buf)
        t.record(FlowOutcome(3, 10, 20, 9000, 100, 1100, 2, 4))
        lines = buf.getvalue().splitlines()
        assert lines[0] == CSV_HEADER
        assert lines[1] == "3,10,20,9000,100,1000,2,4"

    def test_warmup_rows_written_but_not_aggregated(self):
        buf = io.StringIO()
        t = Telemetry(csv_file=buf, warmup_cutoff_ps=100)
        t.record(outcome(flow_id=0, arrival=50))
        t.record(outcome(flow_id=1, arrival=100))
        assert len(buf.getvalue().splitlines()) == 3  # header + both rows
        assert t.completed == 2
        assert t.aggregated == 1
        assert t.bucket_report()["9000"]["count"] == 1

    def test_memory_stays_bounded(self):
        t = Telemetry()
        for i in range(10_000):
            t.record(outcome(flow_id=i, fct=MS + i * 1000))
        assert len(t.buckets) == 1
        assert len(t.buckets[9000].hist) < 64

    def test_percentiles_in_report(self):
        t = Telemetry()
        for i in range(100):
            t.record(outcome(flow_id=i, fct=(i + 1) * MS))
        r = t.bucket_report()["9000"]
        assert r["p10_fct_ps"] == hist_bin_edge(10 * MS)
        assert r["p99_fct_ps"] == hist_bin_edge(99 * MS)

    def test_finalize_summary_shape(self):
        t = Telemetry()
        t.record(outcome())
        s = t.finalize(incomplete=2, aborted=True, events=100, data_packets=10)
        assert s["schema"] == "dcnsim-summary-1"
        assert s["totals"]["flows_completed"] == 1
        assert s["totals"]["flows_incomplete"] == 2
        assert s["totals"]["events_per_data_packet"] == 10.0
        assert s["aborted"] is True
        assert "incomplete_note" in s
        assert "9000" in s["buckets"]

    def test_finalize_clean_run_has_no_incomplete_note(self):
        t = Telemetry()
        t.record(outcome())
        s = t.finalize()
        assert "incomplete_note" not in s
        assert s["aborted"] is False
