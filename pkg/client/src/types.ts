/** Document shapes served by the driftwatch HTTP API.
 *
 * The client returns server documents as parsed JSON without
 * reinterpretation, so these types describe, they never transform.
 */

export type FeatureKind = 'numerical' | 'categorical' | 'text';

export type FindingStatus = 'ok' | 'warn' | 'alert';

export interface DriftFinding {
  feature: string;
  check: string;
  baseline_value: number | string | null;
  current_value: number | string | null;
  score: number;
  status: FindingStatus;
}

export interface DriftReport {
  report_id: string;
  baseline_id: string;
  current_summary_id: string;
  findings: DriftFinding[];
  checks_total: number;
  alerts_total: number;
  warns_total: number;
  overall_drift_pct: number;
  accepted_pct: number;
  verdict: 'pass' | 'fail';
  created_at: string;
}

export type MetricValue =
  | { kind: 'scalar'; value: number }
  | { kind: 'samples'; values: number[] }
  | { kind: 'proportion'; successes: number; trials: number };

/** Fields accepted when logging a version; everything is optional. */
export interface VersionDraft {
  parent_versions?: number[];
  params?: Record<string, string>;
  feature_inputs?: string[];
  /** Convenient forms allowed: plain number, number[], {successes, trials}. */
  metrics?: Record<
    string,
    number | number[] | { successes: number; trials: number } | MetricValue
  >;
  tags?: Record<string, string>;
}

export interface ModelVersion {
  model_name: string;
  version: number;
  parent_versions: number[];
  params: Record<string, string>;
  feature_inputs: string[];
  metrics: Record<string, MetricValue>;
  tags: Record<string, string>;
  created_at: string;
}

export interface TestResult {
  statistic: number;
  p_value: number;
  method: 'welch_t' | 'two_proportion_z';
  df?: number;
}

export interface ExperimentComparison {
  model_name: string;
  metric: string;
  direction: Direction;
  versions: number[];
  per_version: Record<string, { mean: number; n: number }>;
  pairwise: Record<string, TestResult>;
  alpha_adjusted: number;
  winner: number | null;
  significant: boolean;
}

export interface LineageGraph {
  model_name: string;
  versions: number[];
  edges: [number, number][];
}

export type Direction = 'max' | 'min';
