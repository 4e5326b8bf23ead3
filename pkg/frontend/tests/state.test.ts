import { describe, expect, it } from "vitest";

import { initialState, loadDraft, saveDraft } from "../src/state";

describe("draft persistence", () => {
  it("round-trips the editor buffer", () => {
    saveDraft("lf x for amount { match: amount:([]) }");
    expect(loadDraft()).toBe("lf x for amount { match: amount:([]) }");
  });

  it("survives overwrites with the latest content", () => {
    saveDraft("first");
    saveDraft("second");
    expect(loadDraft()).toBe("second");
  });
});

describe("initial state", () => {
  it("starts empty with no banner", () => {
    const state = initialState();
    expect(state.docs).toEqual([]);
    expect(state.banner).toBeNull();
    expect(state.matches).toEqual([]);
  });
});
