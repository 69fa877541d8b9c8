/** Shapes of /api/v1 responses. The panel never derives or re-orders
 * domain data; it displays these payloads verbatim. */

export type Scalar = number | string;

export interface ElementItemPayload {
  kind: "element";
  behavior: string;
  params: Record<string, Scalar>;
}

export interface InteractionSidePayload {
  behavior: string;
  params: Record<string, Scalar>;
}

export interface InteractionItemPayload {
  kind: "interaction";
  first: InteractionSidePayload;
  second: InteractionSidePayload;
  effect: string;
}

export interface Recommendation {
  id: string;
  kind: "element" | "interaction";
  label: string;
  item: ElementItemPayload | InteractionItemPayload;
  confidence: number;
  confidence_exact: string;
  support: number;
  support_exact: string;
  origin: "rule" | "frequency-fallback";
  provenance: string[];
  source_rule: { antecedent: number[]; consequent: number[] } | null;
  revision: number;
}

export interface RecommendationsResponse {
  session_id: string;
  revision: number;
  kind: string;
  recommendations: Recommendation[];
}

export interface DesignElement {
  identifier: string;
  behavior: string;
  params: Record<string, Scalar>;
  parent: string | null;
}

export interface DesignInteraction {
  index: number;
  first: string;
  second: string;
  effect: string;
  params: Record<string, Scalar>;
}

export interface DesignResponse {
  session_id: string;
  revision: number;
  name: string;
  source: string;
  elements: DesignElement[];
  interactions: DesignInteraction[];
  terminations: { kind: string; params: Record<string, Scalar>; win: boolean }[];
  level_mapping: Record<string, string[]>;
  unknown_items: string[];
}

export interface MutationResponse extends DesignResponse {
  identifier?: string;
  index?: number;
}

export interface GradeResponse {
  rubric: string;
  total: number;
  max_score: number;
  runnable: boolean;
  failure: string | null;
  per_rule: { rule: string; matched: boolean; matched_by: string | null }[];
}

export interface HealthResponse {
  status: string;
  api_version: string;
  catalog_fingerprint: string;
  corpus_size: number;
}

export interface ErrorBody {
  code: string;
  message: string;
  line?: number;
}
