"""Record byte-exact API responses for the frontend contract tests.

Drives the service in-process over fixed request sequences and writes the
raw response bodies to frontend/tests/fixtures/. Re-run after any change
to the corpus, mining defaults, or response shapes, then re-run the
frontend tests.
"""
from pathlib import Path

from fastapi.testclient import TestClient

from mechforge import data
from mechforge.catalog import ingest_corpus, load_corpus_dir
from mechforge.grader import load_rubric
from mechforge.miner import default_config, mine_rulebase
from mechforge.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

AVATAR_DESIGN = "SpriteSet\n    hopper > MovingAvatar\n"


def fresh_client() -> TestClient:
    games = load_corpus_dir(data.corpus_dir())
    catalog = ingest_corpus(games)
    element_rules, interaction_rules = mine_rulebase(
        catalog, default_config(len(catalog.games)))
    rubric = load_rubric(data.rubric_path("space_invaders"))
    app = create_app(catalog, element_rules, interaction_rules,
                     rubrics={"space_invaders": rubric})
    return TestClient(app)


def save(name: str, content: bytes) -> None:
    FIXTURES.joinpath(name).write_bytes(content)
    print(f"wrote {name} ({len(content)} bytes)")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    client = fresh_client()
    save("health.json", client.get("/api/v1/health").content)
    save("session_cold.json", client.post("/api/v1/sessions", json={}).content)
    save("recs_cold_element.json", client.get(
        "/api/v1/sessions/s000001/recommendations",
        params={"kind": "element", "limit": 12}).content)

    # accept flow: a session seeded with one Frogger-style element
    client = fresh_client()
    response = client.post("/api/v1/sessions", json={"design": AVATAR_DESIGN})
    save("session_avatar.json", response.content)
    sid = response.json()["session_id"]
    save("recs_avatar_element.json", client.get(
        f"/api/v1/sessions/{sid}/recommendations",
        params={"kind": "element", "limit": 12}).content)
    save("recs_avatar_interaction.json", client.get(
        f"/api/v1/sessions/{sid}/recommendations",
        params={"kind": "interaction", "limit": 12}).content)

    top = client.get(f"/api/v1/sessions/{sid}/recommendations",
                     params={"kind": "element", "limit": 1}).json()
    top_id = top["recommendations"][0]["id"]
    save("accept_response.json", client.post(
        f"/api/v1/sessions/{sid}/elements",
        json={"revision": 0, "recommendation_id": top_id}).content)
    save("design_after_accept.json",
         client.get(f"/api/v1/sessions/{sid}/design").content)
    save("recs_after_accept_element.json", client.get(
        f"/api/v1/sessions/{sid}/recommendations",
        params={"kind": "element", "limit": 12}).content)
    save("recs_after_accept_interaction.json", client.get(
        f"/api/v1/sessions/{sid}/recommendations",
        params={"kind": "interaction", "limit": 12}).content)

    si_source = (data.corpus_dir() / "space_invaders.vgd").read_text()
    save("grade_full.json", client.post("/api/v1/grade", json={
        "source": si_source, "rubric": "space_invaders"}).content)
    save("grade_broken.json", client.post("/api/v1/grade", json={
        "source": "not a description", "rubric": "space_invaders"}).content)


if __name__ == "__main__":
    main()
