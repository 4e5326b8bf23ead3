/**
 * Thin typed client for the labeling service. Every range and diagnostic
 * shown in the UI comes from these responses; the client never recomputes
 * label math locally.
 */

import type {
  BucketRunResult,
  CorrectionEntry,
  Diagnostic,
  DocDetail,
  DocRunResult,
  Verdict,
} from "./types";

export class ServiceError extends Error {
  constructor(
    public status: number,
    message: string,
    public detail?: unknown,
  ) {
    super(message);
  }
}

export class ServiceDown extends Error {}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, init);
  } catch (err) {
    throw new ServiceDown(String(err));
  }
  const body = await resp.text();
  let parsed: unknown = null;
  try {
    parsed = body ? JSON.parse(body) : null;
  } catch {
    parsed = body;
  }
  if (!resp.ok) {
    const message =
      parsed && typeof parsed === "object" && "error" in (parsed as object)
        ? String((parsed as { error: unknown }).error)
        : `HTTP ${resp.status}`;
    throw new ServiceError(resp.status, message, (parsed as { detail?: unknown })?.detail);
  }
  return parsed as T;
}

export class ApiClient {
  constructor(public baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  listDocs(): Promise<import("./types").DocSummary[]> {
    return request(this.url("/api/docs"));
  }

  getDoc(docId: string): Promise<DocDetail> {
    return request(this.url(`/api/docs/${encodeURIComponent(docId)}`));
  }

  validate(source: string): Promise<{ diagnostics: Diagnostic[]; functions: string[] }> {
    return request(this.url("/api/rulesets/validate"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ source }),
    });
  }

  runOnDoc(source: string, docId: string): Promise<DocRunResult> {
    return request(this.url("/api/run"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ source, doc_id: docId }),
    });
  }

  runOnBucket(source: string, bucket: string): Promise<BucketRunResult> {
    return request(this.url("/api/run"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ source, bucket }),
    });
  }

  coverage(): Promise<unknown> {
    return request(this.url("/api/metrics/coverage"));
  }

  postCorrection(entry: {
    doc: string;
    concept: string;
    start: number;
    end: number;
    verdict: Verdict;
    replacement?: { start: number; end: number };
  }): Promise<{ stored: CorrectionEntry }> {
    return request(this.url("/api/corrections"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(entry),
    });
  }

  listCorrections(): Promise<CorrectionEntry[]> {
    return request(this.url("/api/corrections"));
  }
}
