/**
 * End-to-end loop against the real service running in replay mode.
 *
 * Spawns `chatfsm serve` with the pair 5 cassette and codebase, then
 * drives the controller exactly like the page does: upload the fixture
 * source, send the recorded change request, flip the context toggle.
 * Everything is deterministic because the model responses come from
 * the cassette.
 */

import { spawn, ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient, FetchLike } from "../src/api.js";
import { AppController } from "../src/app.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO = join(HERE, "..", "..");
const PORT = 8937;
const BASE = `http://127.0.0.1:${PORT}`;
const PAIR5 = join(REPO, "fixtures", "pairs", "pair5");

const PAIR5_REQUEST =
  "Added state SAY_DETECT_HANDOVER announcing the detection step, " +
  "transitioning from MOVE_HUMAN_HANDOVER_JOINT_GOAL on arm_at_goal; Added " +
  "state SAY_CLOSE_NOW_GRIPPER announcing the gripper closing, " +
  "transitioning from DETECT_HANDOVER on handover_detected; Wired " +
  "SAY_DETECT_HANDOVER to DETECT_HANDOVER and SAY_CLOSE_NOW_GRIPPER to " +
  "CLOSE_GRIPPER_HANDOVER on spoken.";

let service: ChildProcess;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const response = await fetch(`${BASE}/openapi.json`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  service = spawn(
    "python3",
    [
      "-m", "chatfsm.cli", "serve",
      "--host", "127.0.0.1",
      "--port", String(PORT),
      "--cassette", join(REPO, "fixtures", "cassettes", "gpt-4o-2024-05-13.json"),
      "--cassette-mode", "replay",
      "--codebase", join(PAIR5, "codebase"),
    ],
    { cwd: REPO, stdio: ["ignore", "pipe", "pipe"] },
  );
  await waitForService();
}, 30000);

afterAll(() => {
  service.kill();
});

function countMatches(text: string, pattern: RegExp): number {
  return (text.match(pattern) ?? []).length;
}

describe("chat-and-inspect loop against the replay service", () => {
  it("upload renders the five-node graph, the change adds six diff lines and two dashed nodes", async () => {
    const recorded: { url: string; body?: unknown }[] = [];
    const recordingFetch: FetchLike = async (url, init) => {
      recorded.push({
        url,
        body: init?.body ? JSON.parse(init.body as string) : undefined,
      });
      return fetch(url, init);
    };
    const controller = new AppController(new ServiceClient(BASE, recordingFetch));

    const code = readFileSync(join(PAIR5, "parent.py"), "utf-8");
    await controller.uploadCode(code);
    expect(controller.state.sessionId).not.toBeNull();
    expect(controller.state.chatTranscript).toEqual([]);

    let rendered = controller.renderCurrentGraph();
    expect(rendered.ok).toBe(true);
    if (!rendered.ok) return;
    expect(countMatches(rendered.svg, /class="node/g)).toBe(5);
    expect(countMatches(rendered.svg, /class="node dashed"/g)).toBe(0);

    await controller.sendRequest(PAIR5_REQUEST);
    expect(controller.state.lastDiffMessages).toHaveLength(6);
    expect(controller.state.lastDiffMessages).toContain(
      "State SAY_DETECT_HANDOVER added in HandoverToHuman.",
    );
    expect(
      controller.state.chatTranscript.map((entry) => entry.role),
    ).toEqual(["user", "service"]);

    rendered = controller.renderCurrentGraph();
    expect(rendered.ok).toBe(true);
    if (!rendered.ok) return;
    expect(countMatches(rendered.svg, /class="node dashed"/g)).toBe(2);
    expect(countMatches(rendered.svg, /class="edge dashed"/g)).toBe(4);
    expect(countMatches(rendered.svg, /class="node/g)).toBe(7);

    const plainBody = recorded.find((call) => call.url.endsWith("/changes"))!
      .body as Record<string, unknown>;
    expect(plainBody).toEqual({ request: PAIR5_REQUEST, withContext: false });
  });

  it("the context toggle flips only the request flag", async () => {
    const recorded: { url: string; body?: unknown }[] = [];
    const recordingFetch: FetchLike = async (url, init) => {
      recorded.push({
        url,
        body: init?.body ? JSON.parse(init.body as string) : undefined,
      });
      return fetch(url, init);
    };
    const controller = new AppController(new ServiceClient(BASE, recordingFetch));

    const code = readFileSync(join(PAIR5, "parent.py"), "utf-8");
    await controller.uploadCode(code);
    controller.toggleContext();
    await controller.sendRequest(PAIR5_REQUEST);

    expect(controller.state.chatTranscript.map((e) => e.role)).toEqual([
      "user",
      "service",
    ]);
    expect(controller.state.lastDiffMessages).toHaveLength(6);

    const contextBody = recorded.find((call) => call.url.endsWith("/changes"))!
      .body as Record<string, unknown>;
    expect(contextBody).toEqual({ request: PAIR5_REQUEST, withContext: true });
  });

  it("a request that was never recorded surfaces as an error bubble", async () => {
    const controller = new AppController(new ServiceClient(BASE));
    const code = readFileSync(join(PAIR5, "parent.py"), "utf-8");
    await controller.uploadCode(code);
    const dotBefore = controller.state.currentDot;
    await controller.sendRequest("paint the robot purple");
    const roles = controller.state.chatTranscript.map((entry) => entry.role);
    expect(roles).toEqual(["user", "error"]);
    expect(controller.state.currentDot).toBe(dotBefore);
  });
});
