// Shapes of the two files a simulation run produces: per-flow CSV and
// summary JSON. Field names mirror the files exactly.

export interface FlowRow {
  flow_id: number;
  src: number;
  dst: number;
  size_bytes: number;
  arrival_ps: number;
  fct_ps: number;
  retransmissions: number;
  paths_used: number;
}

export interface BucketSummary {
  count: number;
  fct_sum_ps: number;
  mean_fct_ps: number;
  p10_fct_ps: number;
  p99_fct_ps: number;
  max_fct_ps: number;
  mean_goodput_bps: number;
  histogram: Record<string, number>;
}

export interface RunSummary {
  schema: string;
  warmup_cutoff_ps: number;
  totals: {
    flows_completed: number;
    flows_aggregated: number;
    flows_incomplete: number;
    retransmissions: number;
    last_completion_ps: number;
    events: number;
    data_packets_delivered: number;
    events_per_data_packet: number;
    trims: number;
    drops: number;
    late_packets: number;
  };
  buckets: Record<string, BucketSummary>;
  aborted: boolean;
  // config echoes whatever flags the run was started with
  config: Record<string, string | number | boolean | null>;
  topology: {
    family: string;
    routers: number;
    servers: number;
    links: number;
    network_degree_max: number;
  };
  healthy: boolean;
}

export interface Run {
  label: string;
  rows: FlowRow[];
  summary: RunSummary;
}
