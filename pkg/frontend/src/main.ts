import { ApiClient } from "./api.js";
import { PanelController } from "./controller.js";
import {
  escapeHtml,
  renderDesign,
  renderGrade,
  renderNotice,
  renderRecommendationList,
  renderThresholdLabel,
} from "./render.js";
import type { PanelState } from "./state.js";

const RUBRIC = "space_invaders";

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node;
}

function render(state: PanelState): void {
  byId("notice-area").innerHTML = renderNotice(state);
  byId("session-label").textContent = state.sessionId
    ? `session ${state.sessionId} · revision ${state.revision}`
    : "connecting…";
  if (state.design) {
    byId("design-area").innerHTML = renderDesign(state.design);
    byId("source-area").innerHTML = state.showSource
      ? `<pre class="source">${escapeHtml(state.design.source)}</pre>`
      : "";
  }
  byId("element-recs").innerHTML = renderRecommendationList(
    state.elementRecs,
    state.threshold,
  );
  byId("interaction-recs").innerHTML = renderRecommendationList(
    state.interactionRecs,
    state.threshold,
  );
  byId("threshold-label").textContent = renderThresholdLabel(state.threshold);
  byId("grade-area").innerHTML = state.grade ? renderGrade(state.grade) : "";
  (byId("panel") as HTMLElement).classList.toggle("pending", state.pending);
}

async function bootstrap(): Promise<void> {
  const client = new ApiClient("/api/v1");
  const controller = new PanelController(client, render);

  document.body.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-action]");
    if (!(target instanceof HTMLElement)) {
      return;
    }
    const action = target.dataset.action;
    if (action === "accept" && target.dataset.recId) {
      void controller.accept(target.dataset.recId);
    } else if (action === "remove-element" && target.dataset.identifier) {
      void controller.removeElement(target.dataset.identifier);
    } else if (action === "remove-interaction" && target.dataset.index) {
      void controller.removeInteraction(Number(target.dataset.index));
    } else if (action === "grade") {
      void controller.grade(RUBRIC);
    } else if (action === "toggle-source") {
      controller.toggleSource();
    } else if (action === "copy-source" && controller.state.design) {
      void navigator.clipboard.writeText(controller.state.design.source);
    } else if (action === "download-source" && controller.state.design) {
      const blob = new Blob([controller.state.design.source], { type: "text/plain" });
      const link = document.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = `${controller.state.design.name}.vgd`;
      link.click();
      URL.revokeObjectURL(link.href);
    }
  });

  const slider = byId("threshold") as HTMLInputElement;
  slider.addEventListener("input", () => {
    controller.setThreshold(Number(slider.value) / 100);
  });

  await controller.start();
}

void bootstrap();
