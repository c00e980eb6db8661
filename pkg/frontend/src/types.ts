/** Payload shapes of the /v1 workflow service. */

export interface RankScore {
  qi_overlap: number;
  size: number;
}

export interface ClusterDoc {
  members: string[];
  core_signature: string[];
  extended_signature: Record<string, number>;
  rank_score: RankScore | null;
}

export interface ClustersOutput {
  clusters: ClusterDoc[];
}

export interface ScoreDoc {
  containment: number;
  matched_distinct_keys: number;
  unique_match_fraction: number;
  risk: number;
}

export interface SharedAttributeDoc {
  name: string;
  semantic_class: string;
  entropy_left: number;
  entropy_right: number;
  entropy_min: number;
}

export interface PairDoc {
  left: string;
  right: string;
  key: string[];
  score: ScoreDoc;
  shared_attributes: SharedAttributeDoc[];
}

export interface PairsOutput {
  cluster: string;
  pair_count: number;
  pairs: PairDoc[];
}

export interface MatchDoc {
  key: string[];
  left_rows: number[];
  right_rows: number[];
}

export interface JoinOutput {
  spec: { left: string; right: string; key: string[] };
  score: ScoreDoc;
  schema: [attr: string, origin: string][];
  matched_keys: number;
  joined_row_count: number;
  truncated: boolean;
  matches: MatchDoc[];
}

export interface SuggestionDoc {
  attr: string;
  separation_gain: number;
  overconstraining: boolean;
}

export interface SuggestOutput {
  suggestions: SuggestionDoc[];
}

export interface CategoryDoc {
  value: string;
  count: number;
}

export interface AxisDoc {
  attr: string;
  categories: CategoryDoc[];
}

export interface RibbonDoc {
  left: string;
  right: string;
  count: number;
}

export interface ParallelSetsOutput {
  axes: AxisDoc[];
  ribbons: RibbonDoc[][];
  total: number;
}

export interface CandidateDoc {
  kind: "identity" | "attribute";
  key: string[];
  key_attrs: string[];
  left_index: number;
  right_index: number;
  left_attrs: string[];
  right_attrs: string[];
  left_row: string[];
  right_row: string[];
  revealed_attrs: string[];
}

export interface DisclosuresOutput {
  identity_count: number;
  attribute_count: number;
  candidates: CandidateDoc[];
}

export interface HistoryRow {
  step: string;
  at: string;
  params: Record<string, unknown>;
}

export interface SessionDoc {
  session_id: string;
  selected_qis: string[];
  selected_cluster: string | null;
  selected_pair: string[] | null;
  steps_completed: string[];
  history: HistoryRow[];
}

export interface DatasetDoc {
  portal: string;
  dataset_id: string;
  title: string;
  resource_kind: string;
  attributes: { normalized_name: string; semantic_class: string }[];
}

export interface CollectionDoc {
  size: number;
  datasets: DatasetDoc[];
}

export type ProfilesDoc = Record<string, string[]>;

export interface ErrorBody {
  error: { code: string; message: string };
}
