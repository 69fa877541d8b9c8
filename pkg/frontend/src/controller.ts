import { ApiClient, ApiError } from "./api.js";
import {
  initialState,
  withDesign,
  withRecommendations,
  type PanelState,
} from "./state.js";
import type { Recommendation } from "./types.js";

const RECOMMENDATION_LIMIT = 12;

/** Orchestrates the session: every mutation sends the current revision;
 * a 409 never retries silently but refreshes state and tells the user. */
export class PanelController {
  state: PanelState = initialState();

  constructor(
    private client: ApiClient,
    private onChange: (state: PanelState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  async start(initialDesign?: string): Promise<void> {
    const design = await this.client.createSession(initialDesign);
    this.state = withDesign(this.state, design);
    await this.refreshRecommendations();
    this.emit();
  }

  async refreshRecommendations(): Promise<void> {
    if (!this.state.sessionId) {
      return;
    }
    const [elements, interactions] = await Promise.all([
      this.client.getRecommendations(this.state.sessionId, "element", RECOMMENDATION_LIMIT),
      this.client.getRecommendations(
        this.state.sessionId,
        "interaction",
        RECOMMENDATION_LIMIT,
      ),
    ]);
    this.state = withRecommendations(this.state, "element", elements.recommendations);
    this.state = withRecommendations(
      this.state,
      "interaction",
      interactions.recommendations,
    );
    this.emit();
  }

  private async refreshAll(): Promise<void> {
    if (!this.state.sessionId) {
      return;
    }
    const design = await this.client.getDesign(this.state.sessionId);
    this.state = withDesign(this.state, design);
    await this.refreshRecommendations();
  }

  /** Runs a mutation; on a revision conflict the panel re-syncs and
   * surfaces a visible notice instead of retrying. */
  private async mutate(action: () => Promise<unknown>): Promise<void> {
    if (!this.state.sessionId || this.state.pending) {
      return;
    }
    this.state = { ...this.state, pending: true, notice: null };
    this.emit();
    try {
      await action();
      this.state = { ...this.state, pending: false };
      await this.refreshAll();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.state = {
          ...this.state,
          pending: false,
          notice: "The design changed under you; lists were refreshed. Try again.",
        };
        await this.refreshAll();
      } else if (error instanceof ApiError) {
        this.state = {
          ...this.state,
          pending: false,
          notice: `${error.code}: ${error.message}`,
        };
      } else {
        this.state = { ...this.state, pending: false, notice: String(error) };
        this.emit();
        throw error;
      }
    }
    this.emit();
  }

  findRecommendation(recId: string): Recommendation | undefined {
    return [...this.state.elementRecs, ...this.state.interactionRecs].find(
      (rec) => rec.id === recId,
    );
  }

  async accept(recId: string): Promise<void> {
    const rec = this.findRecommendation(recId);
    if (!rec) {
      return;
    }
    await this.mutate(async () => {
      const design = await this.client.applyRecommendation(
        this.state.sessionId!,
        rec.kind,
        rec.id,
        this.state.revision,
      );
      this.state = withDesign(this.state, design);
    });
  }

  async removeElement(identifier: string): Promise<void> {
    await this.mutate(async () => {
      const design = await this.client.removeElement(
        this.state.sessionId!,
        identifier,
        this.state.revision,
      );
      this.state = withDesign(this.state, design);
    });
  }

  async removeInteraction(index: number): Promise<void> {
    await this.mutate(async () => {
      const design = await this.client.removeInteraction(
        this.state.sessionId!,
        index,
        this.state.revision,
      );
      this.state = withDesign(this.state, design);
    });
  }

  async grade(rubric: string): Promise<void> {
    if (!this.state.design) {
      return;
    }
    const report = await this.client.grade(this.state.design.source, rubric);
    this.state = { ...this.state, grade: report };
    this.emit();
  }

  setThreshold(threshold: number): void {
    this.state = { ...this.state, threshold };
    this.emit();
  }

  toggleSource(): void {
    this.state = { ...this.state, showSource: !this.state.showSource };
    this.emit();
  }
}
