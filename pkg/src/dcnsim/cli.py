"""Experiment driver: one process, one run, two artifacts.

`dcnsim --topology ... --out DIR` builds the fabric, routes, and flow
set, drives the engine to quiescence, and writes DIR/flows.csv (one row
per completed flow) plus DIR/summary.json (aggregates, reconciliation
counters, memory model, wall-clock timing). Exit status: 0 clean, 2
usage error, 3 when the memory budget aborted the run early (partial
artifacts are still written and flagged in the summary).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from dcnsim.budget import BudgetAccountant, BudgetExceeded
from dcnsim.engine import MS, SEC
from dcnsim.network import DATA, DROPTAIL, TRIM
from dcnsim.routing import compute_tables
from dcnsim.telemetry import Telemetry
from dcnsim.topo import (
    build_dragonfly,
    build_fat_tree,
    build_hyperx,
    build_jellyfish,
    build_slim_fly,
    build_xpander,
    concentration_for_oversubscription,
)
from dcnsim.experiment import Simulation
from dcnsim.workload import SizeCdf, generate_flows, generate_permutation, generate_skewed, load_default_cdf

TOPOLOGIES = ("slimfly", "fattree", "jellyfish", "xpander", "hyperx", "dragonfly")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dcnsim",
        description="Packet-level data-center network simulator",
    )
    ap.add_argument("--config", metavar="FILE", help="key=value file; explicit flags win")
    # required, but validated after the config file pass so a file can supply it
    ap.add_argument("--topology", choices=TOPOLOGIES)

    fam = ap.add_argument_group("topology family parameters")
    fam.add_argument("--q", type=int, help="slimfly: prime power radix parameter")
    fam.add_argument("--k", type=int, help="fattree: pod parameter (even)")
    fam.add_argument("--routers", type=int, help="jellyfish: router count")
    fam.add_argument("--degree", type=int, help="jellyfish/xpander: network degree")
    fam.add_argument("--lifts", type=int, help="xpander: number of lift copies")
    fam.add_argument("--dims", help="hyperx: comma-separated dimension sizes, e.g. 8,8,8")
    fam.add_argument("--dfly-a", type=int, help="dragonfly: routers per group")
    fam.add_argument("--dfly-h", type=int, help="dragonfly: global links per router")
    fam.add_argument(
        "--match-hardware-of",
        metavar="slimfly:q=N",
        help="size a jellyfish/xpander from the same router count, degree and NICs",
    )

    ap.add_argument("--servers-per-switch", type=int, help="default: from oversubscription")
    ap.add_argument("--oversubscription", type=float, default=1.0)
    ap.add_argument("--link-gbps", type=float, default=10.0)
    ap.add_argument("--hop-delay-ns", type=int, default=500)
    ap.add_argument("--paths", type=int, default=5, help="sampled shortest paths per flow")
    ap.add_argument("--queue-policy", choices=("trim", "droptail"), default="trim")

    wl = ap.add_argument_group("workload")
    wl.add_argument("--flows-per-server", type=int)
    wl.add_argument("--lambda", dest="lam", type=float, help="flows per server per second")
    wl.add_argument("--window-ms", type=float, default=100.0, help="flow injection window")
    wl.add_argument("--size-cdf", metavar="FILE", help="default: built-in web-search-like CDF")
    wl.add_argument("--pattern", choices=("permutation", "skewed"), default="permutation")
    wl.add_argument("--hotspot-fraction", type=float, default=0.1)
    wl.add_argument("--hotspot-router", type=int)
    wl.add_argument("--warmup-exclude", type=float, default=0.0,
                    metavar="FRACTION", help="drop flows arriving in this first fraction of the window from aggregates")

    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default="out", metavar="DIR")
    ap.add_argument("--max-memory-gb", type=float, default=16.0)
    return ap


def _apply_config_file(ap: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    """Two-pass parse: the config file fills parser defaults, then the
    command line is parsed again on top so explicit flags always win."""
    args = ap.parse_args(argv)
    if args.config is None:
        return args
    actions = {a.dest: a for a in ap._actions}
    overrides = {}
    for lineno, raw in enumerate(Path(args.config).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            ap.error(f"{args.config}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest == "lambda":
            dest = "lam"
        a = actions.get(dest)
        if a is None or dest == "config":
            ap.error(f"{args.config}:{lineno}: unknown option {key!r}")
        if a.type is not None:
            try:
                value = a.type(value)
            except ValueError:
                ap.error(f"{args.config}:{lineno}: bad value for {key!r}: {raw!r}")
        if a.choices is not None and value not in a.choices:
            ap.error(f"{args.config}:{lineno}: {key!r} must be one of {a.choices}")
        overrides[dest] = value
    ap.set_defaults(**overrides)
    return ap.parse_args(argv)


def _slimfly_network_degree(q: int) -> int:
    delta = {0: 0, 1: 1, 3: -1}[q % 4]
    return (3 * q - delta) // 2


def _parse_match(spec: str, ap) -> int:
    try:
        family, assign = spec.split(":", 1)
        key, value = assign.split("=", 1)
        if family != "slimfly" or key != "q":
            raise ValueError
        return int(value)
    except ValueError:
        ap.error(f"--match-hardware-of expects slimfly:q=N, got {spec!r}")


def build_topology(args, ap) -> "Topology":
    rate = int(args.link_gbps * 1e9)
    delay = args.hop_delay_ns * 1000  # ns -> ps
    kw = {"link_rate": rate, "hop_delay": delay}
    t = args.topology

    def concentration(network_degree: int) -> int:
        if args.servers_per_switch is not None:
            return args.servers_per_switch
        return concentration_for_oversubscription(args.oversubscription, network_degree)

    if args.match_hardware_of:
        q = _parse_match(args.match_hardware_of, ap)
        degree = _slimfly_network_degree(q)
        routers = 2 * q * q
        p = concentration(degree)
        if t == "jellyfish":
            return build_jellyfish(routers, degree, p, seed=args.seed, **kw)
        if t == "xpander":
            lifts = max(1, round(routers / (degree + 1)))
            return build_xpander(degree, lifts, p, seed=args.seed, **kw)
        ap.error("--match-hardware-of applies to jellyfish or xpander")

    if t == "slimfly":
        if args.q is None:
            ap.error("slimfly needs --q")
        return build_slim_fly(args.q, concentration(_slimfly_network_degree(args.q)), **kw)
    if t == "fattree":
        if args.k is None:
            ap.error("fattree needs --k")
        if args.servers_per_switch is not None:
            ap.error("fattree derives servers per switch from --k and --oversubscription")
        return build_fat_tree(args.k, args.oversubscription, **kw)
    if t == "jellyfish":
        if args.routers is None or args.degree is None:
            ap.error("jellyfish needs --routers and --degree")
        return build_jellyfish(args.routers, args.degree, concentration(args.degree), seed=args.seed, **kw)
    if t == "xpander":
        if args.degree is None or args.lifts is None:
            ap.error("xpander needs --degree and --lifts")
        return build_xpander(args.degree, args.lifts, concentration(args.degree), seed=args.seed, **kw)
    if t == "hyperx":
        if not args.dims:
            ap.error("hyperx needs --dims")
        dims = [int(s) for s in str(args.dims).split(",")]
        degree = sum(s - 1 for s in dims)
        return build_hyperx(dims, concentration(degree), **kw)
    if args.dfly_a is None or args.dfly_h is None:
        ap.error("dragonfly needs --dfly-a and --dfly-h")
    degree = args.dfly_a - 1 + args.dfly_h
    return build_dragonfly(args.dfly_a, args.dfly_h, concentration(degree), **kw)


def _config_echo(args) -> dict:
    d = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    return d


def main(argv=None) -> int:
    ap = build_parser()
    args = _apply_config_file(ap, sys.argv[1:] if argv is None else argv)

    if args.topology is None:
        ap.error("--topology is required (flag or config file)")
    if (args.flows_per_server is None) == (args.lam is None):
        ap.error("give exactly one of --flows-per-server or --lambda")
    if not 0 <= args.warmup_exclude < 1:
        ap.error(f"--warmup-exclude must be a fraction in [0, 1), got {args.warmup_exclude}")
    if args.paths < 1:
        ap.error("--paths must be >= 1")

    t_start = time.monotonic()
    topology = build_topology(args, ap)
    tables = compute_tables(topology)
    t_build = time.monotonic()

    cdf = load_default_cdf() if args.size_cdf is None else SizeCdf.from_file(args.size_cdf)
    window_ps = int(args.window_ms * MS)
    rate_kw = {"flows_per_server": args.flows_per_server, "lam": args.lam}
    try:
        if args.pattern == "permutation":
            pairing = generate_permutation(topology, args.seed)
            flows = generate_flows(pairing, cdf=cdf, seed=args.seed, window_ps=window_ps, **rate_kw)
            hotspot = None
        else:
            flows, hotspot = generate_skewed(
                topology,
                hotspot_fraction=args.hotspot_fraction,
                cdf=cdf,
                seed=args.seed,
                window_ps=window_ps,
                hotspot_router=args.hotspot_router,
                **rate_kw,
            )
    except ValueError as e:
        ap.error(str(e))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        budget = BudgetAccountant(
            int(args.max_memory_gb * 2**30),
            table_bytes=tables.nbytes,
            n_servers=topology.n_servers,
        )
    except BudgetExceeded as e:
        ap.error(str(e))

    warmup = int(args.warmup_exclude * window_ps)
    with open(out_dir / "flows.csv", "w") as csv_file:
        telemetry = Telemetry(csv_file, warmup_cutoff_ps=warmup)
        sim = Simulation(
            topology,
            tables=tables,
            seed=args.seed,
            paths_per_flow=args.paths,
            queue_policy=TRIM if args.queue_policy == "trim" else DROPTAIL,
            telemetry=telemetry,
            budget=budget,
        )
        sim.add_flows(*flows)
        events = sim.run()
        t_run = time.monotonic()

        config = _config_echo(args)
        if hotspot is not None:
            config["hotspot_router_used"] = hotspot
        summary = telemetry.finalize(
            incomplete=sim.incomplete_flows(),
            aborted=sim.aborted,
            events=events,
            data_packets=sim.stats.delivered[DATA],
            stats=sim.stats,
            config=config,
            timing={
                "build_seconds": round(t_build - t_start, 3),
                "run_seconds": round(t_run - t_build, 3),
                "events_per_second": round(events / (t_run - t_build)) if t_run > t_build else 0,
            },
        )
    summary["memory"] = budget.report()
    summary["topology"] = {
        "family": topology.family,
        "routers": topology.n_routers,
        "servers": topology.n_servers,
        "links": topology.n_links,
        "network_degree_max": int(topology.degrees().max()) if topology.n_links else 0,
    }
    summary["healthy"] = sim.healthy()
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    done = "aborted (memory budget)" if sim.aborted else "done"
    print(
        f"{done}: {telemetry.completed}/{sim.n_flows} flows, "
        f"{events} events, {summary['timing']['run_seconds']} s run",
        file=sys.stderr,
    )
    return 3 if sim.aborted else 0


if __name__ == "__main__":
    sys.exit(main())
