import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import { PanelController } from "../src/controller.js";
import { renderDesign, renderRecommendationList } from "../src/render.js";
import type {
  DesignResponse,
  MutationResponse,
  RecommendationsResponse,
} from "../src/types.js";
import { jsonResponse, loadFixture } from "./helpers.js";

const sessionAvatar = loadFixture<DesignResponse>("session_avatar.json");
const recsBeforeElement = loadFixture<RecommendationsResponse>("recs_avatar_element.json");
const recsBeforeInteraction = loadFixture<RecommendationsResponse>(
  "recs_avatar_interaction.json",
);
const acceptResponse = loadFixture<MutationResponse>("accept_response.json");
const designAfter = loadFixture<DesignResponse>("design_after_accept.json");
const recsAfterElement = loadFixture<RecommendationsResponse>(
  "recs_after_accept_element.json",
);
const recsAfterInteraction = loadFixture<RecommendationsResponse>(
  "recs_after_accept_interaction.json",
);

/** Routes requests to the recorded responses; flips to the "after" set
 * once the accept mutation lands. */
function recordedServer() {
  const calls: string[] = [];
  let applied = false;
  const fetchFn: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    calls.push(`${method} ${url}`);
    if (method === "POST" && url.endsWith("/sessions")) {
      return jsonResponse(sessionAvatar.raw, 201);
    }
    if (method === "POST" && url.includes("/elements")) {
      applied = true;
      return jsonResponse(acceptResponse.raw);
    }
    if (url.includes("kind=element")) {
      return jsonResponse(applied ? recsAfterElement.raw : recsBeforeElement.raw);
    }
    if (url.includes("kind=interaction")) {
      return jsonResponse(applied ? recsAfterInteraction.raw : recsBeforeInteraction.raw);
    }
    if (url.includes("/design")) {
      return jsonResponse(designAfter.raw);
    }
    throw new Error(`unrouted request: ${method} ${url}`);
  };
  return { fetchFn, calls };
}

describe("accept action round-trip", () => {
  it("moves the top suggestion from the list into the design", async () => {
    const { fetchFn } = recordedServer();
    const controller = new PanelController(new ApiClient("/api/v1", fetchFn));
    await controller.start("SpriteSet\n    hopper > MovingAvatar\n");

    expect(controller.state.sessionId).toBe(sessionAvatar.body.session_id);
    expect(controller.state.revision).toBe(0);
    const top = controller.state.elementRecs[0];
    expect(top.id).toBe(recsBeforeElement.body.recommendations[0].id);

    const before = renderRecommendationList(controller.state.elementRecs, 1);
    expect(before).toContain(`data-rec-id="${top.id}"`);

    await controller.accept(top.id);

    // design view now holds the materialized element...
    expect(controller.state.revision).toBe(designAfter.body.revision);
    const identifiers = controller.state.design!.elements.map((e) => e.identifier);
    expect(identifiers).toContain(acceptResponse.body.identifier!);
    const designHtml = renderDesign(controller.state.design!);
    expect(designHtml).toContain(acceptResponse.body.identifier!);

    // ...and the suggestion is gone from the refreshed list
    const after = renderRecommendationList(controller.state.elementRecs, 1);
    expect(after).not.toContain(`data-rec-id="${top.id}"`);
    expect(controller.state.elementRecs.map((r) => r.id)).toEqual(
      recsAfterElement.body.recommendations.map((r) => r.id),
    );
  });
});

describe("revision conflicts", () => {
  it("refreshes and shows a notice, never retrying silently", async () => {
    let mutationAttempts = 0;
    const fetchFn: FetchLike = async (url, init) => {
      const method = init?.method ?? "GET";
      if (method === "POST" && url.endsWith("/sessions")) {
        return jsonResponse(sessionAvatar.raw, 201);
      }
      if (method === "POST" && url.includes("/elements")) {
        mutationAttempts += 1;
        return jsonResponse(
          JSON.stringify({ code: "revision-conflict", message: "stale" }),
          409,
        );
      }
      if (url.includes("kind=element")) {
        return jsonResponse(recsBeforeElement.raw);
      }
      if (url.includes("kind=interaction")) {
        return jsonResponse(recsBeforeInteraction.raw);
      }
      if (url.includes("/design")) {
        return jsonResponse(sessionAvatar.raw);
      }
      throw new Error(`unrouted: ${method} ${url}`);
    };

    const controller = new PanelController(new ApiClient("/api/v1", fetchFn));
    await controller.start();
    const top = controller.state.elementRecs[0];
    await controller.accept(top.id);

    expect(mutationAttempts).toBe(1);
    expect(controller.state.notice).toContain("refreshed");
    expect(controller.state.pending).toBe(false);
    // state was re-synced from the server after the conflict
    expect(controller.state.revision).toBe(sessionAvatar.body.revision);
  });
});

describe("grading through the panel", () => {
  it("stores the API report verbatim", async () => {
    const gradeFull = loadFixture("grade_full.json");
    const fetchFn: FetchLike = async (url, init) => {
      const method = init?.method ?? "GET";
      if (method === "POST" && url.endsWith("/sessions")) {
        return jsonResponse(sessionAvatar.raw, 201);
      }
      if (url.includes("kind=")) {
        return jsonResponse(recsBeforeElement.raw);
      }
      if (method === "POST" && url.endsWith("/grade")) {
        return jsonResponse(gradeFull.raw);
      }
      throw new Error(`unrouted: ${method} ${url}`);
    };
    const controller = new PanelController(new ApiClient("/api/v1", fetchFn));
    await controller.start();
    await controller.grade("space_invaders");
    expect(controller.state.grade).toEqual(gradeFull.body);
  });
});
