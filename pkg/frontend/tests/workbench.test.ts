/**
 * Scripted authoring loop against a live service on the demo corpus:
 * a guard typo surfaces a diagnostic at the service's line/col, fixing it
 * brings highlights at service-reported offsets, rejecting a match makes
 * the next training export omit that span.
 */
import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { mountWorkbench, Workbench } from "../src/app";

const execFileP = promisify(execFile);
const PORT = 7191;
const BASE = `http://127.0.0.1:${PORT}`;

const BROKEN_RULESET = `lf probe for sick_leave_amount priority 5 {
  require starts("full time" | "part time" | "all employees"
  require contains("accumulate.*" | "accru.*")
  match: status:("full|part" "time")? []{0,5}
         amount:([pos="NUM"]{1,2}) unit:([ner="TIME_UNIT"]{1,1})
}
`;
const FIXED_RULESET = BROKEN_RULESET.replace(
  'require starts("full time" | "part time" | "all employees"\n',
  'require starts("full time" | "part time" | "all employees")\n',
);

let serverProc: ChildProcess;
let projectDir: string;

async function waitForService(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/api/docs`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not come up");
}

async function settle(): Promise<void> {
  // the workbench fires sequential awaits; give the microtask queue room
  for (let i = 0; i < 40; i++) await new Promise((r) => setTimeout(r, 25));
}

beforeAll(async () => {
  projectDir = mkdtempSync(join(tmpdir(), "lfkit-demo-"));
  await execFileP("python3", ["-m", "lfkit.demo", projectDir]);
  serverProc = spawn(
    "python3",
    ["-m", "lfkit.cli", "serve", "--config", join(projectDir, "project.toml"), "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForService();
});

afterAll(() => {
  serverProc?.kill();
});

describe("workbench authoring loop", () => {
  let bench: Workbench;

  it("loads the demo corpus into the document list", async () => {
    const root = document.createElement("div");
    document.body.appendChild(root);
    bench = mountWorkbench(root, BASE);
    await settle();
    expect(bench.state.docs).toHaveLength(12);
    expect(bench.state.selectedDoc).toBe("cba_001");
    expect(root.querySelectorAll(".doc-select option")).toHaveLength(12);
    // boilerplate footers render dimmed
    expect(root.querySelectorAll(".boilerplate").length).toBeGreaterThan(0);
  });

  it("surfaces a guard typo at the service's line and column", async () => {
    bench.editor.value = BROKEN_RULESET;
    bench.state.buffer = BROKEN_RULESET;
    await bench.run();
    await settle();

    const expected = await (
      await fetch(`${BASE}/api/rulesets/validate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ source: BROKEN_RULESET }),
      })
    ).json();
    expect(expected.diagnostics.length).toBeGreaterThan(0);
    const want = expected.diagnostics[0];

    const items = document.querySelectorAll(".diagnostic-error");
    expect(items.length).toBe(expected.diagnostics.length);
    const first = items[0] as HTMLElement;
    expect(Number(first.dataset.line)).toBe(want.line);
    expect(Number(first.dataset.col)).toBe(want.col);
    expect(bench.state.matches).toHaveLength(0);
  });

  it("after the fix, highlights appear exactly at service offsets", async () => {
    bench.editor.value = FIXED_RULESET;
    bench.state.buffer = FIXED_RULESET;
    await bench.run();
    await settle();

    expect(bench.state.diagnostics.filter((d) => d.severity === "error")).toHaveLength(0);
    const service = await (
      await fetch(`${BASE}/api/run`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ source: FIXED_RULESET, doc_id: "cba_001" }),
      })
    ).json();
    expect(service.matches.length).toBe(1);
    const captures = service.matches[0].captures;
    expect(captures.map((c: { name: string }) => c.name).sort()).toEqual([
      "amount",
      "status",
      "unit",
    ]);

    for (const cap of captures) {
      const span = document.querySelector(
        `.capture[data-capture-start="${cap.start}"][data-capture-end="${cap.end}"]`,
      ) as HTMLElement | null;
      expect(span, `highlight for ${cap.concept} at ${cap.start}`).not.toBeNull();
      expect(span!.dataset.concept).toBe(cap.concept);
    }
    // coverage readout present after a bucket run
    expect(bench.state.coverage).not.toBeNull();
  });

  it("rejecting a match strikes it through and records the correction", async () => {
    const amount = bench.state.matches[0].captures.find((c) => c.name === "amount")!;
    const before = document.querySelectorAll(".correction-reject").length;

    const rejectButton = document.querySelector(
      `.match-item[data-start="${amount.start}"][data-end="${amount.end}"] .verdict-reject`,
    ) as HTMLButtonElement;
    expect(rejectButton).not.toBeNull();
    rejectButton.click();
    await settle();

    const struck = document.querySelector(
      `.match-item[data-start="${amount.start}"][data-end="${amount.end}"]`,
    ) as HTMLElement;
    expect(struck.classList.contains("rejected")).toBe(true);
    expect(document.querySelectorAll(".correction-reject").length).toBe(before + 1);

    const journal = readFileSync(join(projectDir, "corrections.jsonl"), "utf-8");
    expect(journal).toContain('"verdict": "reject"');
  });

  it("a subsequent training export omits the rejected span", async () => {
    const amount = bench.state.matches[0].captures.find((c) => c.name === "amount")!;
    await execFileP("python3", [
      "-m",
      "lfkit.cli",
      "export",
      "--config",
      join(projectDir, "project.toml"),
    ]);
    const lines = readFileSync(join(projectDir, "out/export/train_spans.jsonl"), "utf-8")
      .trim()
      .split("\n")
      .map((l) => JSON.parse(l));
    // cba_001 is a test doc, so prove the omission on the resolved artifact,
    // which covers every bucket
    await execFileP("python3", [
      "-m",
      "lfkit.cli",
      "run",
      "--config",
      join(projectDir, "project.toml"),
    ]);
    const resolved = readFileSync(join(projectDir, "out/resolved.jsonl"), "utf-8")
      .trim()
      .split("\n")
      .map((l) => JSON.parse(l));
    const offending = resolved.filter(
      (s) =>
        s.doc === "cba_001" &&
        s.concept === amount.concept &&
        s.start === amount.start &&
        s.end === amount.end,
    );
    expect(offending).toHaveLength(0);
    expect(lines.every((s) => s.doc !== "cba_001")).toBe(true);
  });

  it("accepting a match shows a checkmark badge", async () => {
    const unit = bench.state.matches[0].captures.find((c) => c.name === "unit")!;
    const acceptButton = document.querySelector(
      `.match-item[data-start="${unit.start}"][data-end="${unit.end}"] .verdict-accept`,
    ) as HTMLButtonElement;
    acceptButton.click();
    await settle();
    const item = document.querySelector(
      `.match-item[data-start="${unit.start}"][data-end="${unit.end}"]`,
    ) as HTMLElement;
    expect(item.classList.contains("accepted")).toBe(true);
    expect(item.querySelector(".badge-accepted")).not.toBeNull();
  });

  it("keeps the buffer when the service is unreachable", async () => {
    const body = document.createElement("div");
    document.body.appendChild(body);
    const offline = mountWorkbench(body, "http://127.0.0.1:9");
    offline.editor.value = "lf draft for x { match: x:([]) }";
    offline.state.buffer = offline.editor.value;
    await offline.run();
    await settle();
    expect(offline.state.banner).toContain("service unreachable");
    expect(offline.editor.value).toContain("lf draft");
  });
});
