export { DriftwatchClient } from './client.js';
export type { ClientOptions } from './client.js';
export { ApiError, ConnectionError, DriftwatchClientError } from './errors.js';
export type {
  Direction,
  DriftFinding,
  DriftReport,
  ExperimentComparison,
  FeatureKind,
  FindingStatus,
  LineageGraph,
  MetricValue,
  ModelVersion,
  TestResult,
  VersionDraft,
} from './types.js';
