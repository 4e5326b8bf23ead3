import { describe, expect, it } from "vitest";

import {
  buildSegments,
  captureKey,
  conceptColorClass,
  segmentsReassemble,
} from "../src/highlight";
import type { RunMatch } from "../src/types";

function match(captures: { concept: string; start: number; end: number }[]): RunMatch {
  return {
    lf: "lf_x",
    window: 0,
    start: Math.min(...captures.map((c) => c.start)),
    end: Math.max(...captures.map((c) => c.end)),
    text: "",
    captures: captures.map((c) => ({ name: c.concept, text: "", ...c })),
    context: null,
  };
}

describe("buildSegments", () => {
  const text = "Full time employees accrue 8 hours monthly.";

  it("cuts exactly at service-reported capture offsets", () => {
    const segments = buildSegments("d1", {
      text,
      matches: [match([{ concept: "amount", start: 27, end: 28 }])],
      boilerplate: [],
      rejectedKeys: new Set(),
    });
    const hit = segments.find((s) => s.capture);
    expect(hit).toBeDefined();
    expect(hit!.start).toBe(27);
    expect(hit!.end).toBe(28);
    expect(hit!.text).toBe("8");
    expect(segmentsReassemble(segments, text)).toBe(true);
  });

  it("never invents ranges: no matches means one plain segment", () => {
    const segments = buildSegments("d1", {
      text,
      matches: [],
      boilerplate: [],
      rejectedKeys: new Set(),
    });
    expect(segments).toHaveLength(1);
    expect(segments[0].capture).toBeNull();
    expect(segments[0].text).toBe(text);
  });

  it("marks boilerplate ranges dimmed and keeps reassembly exact", () => {
    const segments = buildSegments("d1", {
      text,
      matches: [],
      boilerplate: [[0, 9]],
      rejectedKeys: new Set(),
    });
    expect(segments[0].boilerplate).toBe(true);
    expect(segments[0].text).toBe("Full time");
    expect(segments[1].boilerplate).toBe(false);
    expect(segmentsReassemble(segments, text)).toBe(true);
  });

  it("flags rejected captures by key", () => {
    const m = match([{ concept: "amount", start: 27, end: 28 }]);
    const key = captureKey("d1", m.captures[0]);
    const segments = buildSegments("d1", {
      text,
      matches: [m],
      boilerplate: [],
      rejectedKeys: new Set([key]),
    });
    expect(segments.find((s) => s.capture)!.rejected).toBe(true);
  });

  it("handles multiple captures with one color class per concept", () => {
    const palette = ["c0", "c1", "c2"];
    const a = conceptColorClass("amount", palette);
    const b = conceptColorClass("unit", palette);
    expect(conceptColorClass("amount", palette)).toBe(a);
    expect(palette).toContain(a);
    expect(palette).toContain(b);
  });

  it("overlapping boilerplate and capture boundaries stay offset-exact", () => {
    const segments = buildSegments("d1", {
      text,
      matches: [match([{ concept: "status", start: 0, end: 9 }])],
      boilerplate: [[5, 19]],
      rejectedKeys: new Set(),
    });
    expect(segmentsReassemble(segments, text)).toBe(true);
    const starts = segments.map((s) => s.start);
    expect(starts).toEqual([...starts].sort((x, y) => x - y));
  });
});
