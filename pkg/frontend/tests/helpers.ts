import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

/** Raw recorded bytes plus the parsed view; contract tests compare the
 * rendered output against values taken straight from the bytes. */
export function loadFixture<T>(name: string): { raw: Buffer; body: T } {
  const raw = readFileSync(join(FIXTURES, name));
  return { raw, body: JSON.parse(raw.toString("utf-8")) as T };
}

export function jsonResponse(raw: Buffer | string, status = 200): Response {
  const body = typeof raw === "string" ? raw : new Uint8Array(raw);
  return new Response(body, {
    status,
    headers: { "Content-Type": "application/vnd.mechforge.v1+json" },
  });
}
