import type { DesignResponse, GradeResponse, Recommendation } from "./types.js";

/** Everything the panel shows. Lists mirror the latest successful server
 * responses verbatim; `revision` tracks the server after each mutation. */
export interface PanelState {
  sessionId: string | null;
  revision: number;
  design: DesignResponse | null;
  elementRecs: Recommendation[];
  interactionRecs: Recommendation[];
  /** confidence ceiling for the low-confidence explorer, 0..1 */
  threshold: number;
  grade: GradeResponse | null;
  notice: string | null;
  pending: boolean;
  showSource: boolean;
}

export function initialState(): PanelState {
  return {
    sessionId: null,
    revision: 0,
    design: null,
    elementRecs: [],
    interactionRecs: [],
    threshold: 1,
    grade: null,
    notice: null,
    pending: false,
    showSource: false,
  };
}

export function withDesign(state: PanelState, design: DesignResponse): PanelState {
  return {
    ...state,
    sessionId: design.session_id,
    revision: design.revision,
    design,
    grade: null, // the design changed; an old score would mislead
  };
}

export function withRecommendations(
  state: PanelState,
  kind: "element" | "interaction",
  recs: Recommendation[],
): PanelState {
  return kind === "element"
    ? { ...state, elementRecs: recs }
    : { ...state, interactionRecs: recs };
}

/** Pure view filter for the explorer: keeps suggestions at or below the
 * confidence ceiling, preserving the server's order. */
export function filterByConfidence(
  recs: Recommendation[],
  threshold: number,
): Recommendation[] {
  return recs.filter((rec) => rec.confidence <= threshold);
}
