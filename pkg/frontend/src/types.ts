/** Payload shapes for the labeling service API. */

export interface DocSummary {
  doc_id: string;
  pages: number;
  tokens: number;
  sentences: number;
  sections: number;
  bucket: string | null;
}

export interface TokenLayer {
  start: number;
  end: number;
  pos: string;
  ner: string;
  sentence: number;
  page: number;
  boilerplate: boolean;
}

export interface DocDetail {
  doc_id: string;
  text: string;
  pages: number[];
  tokens: TokenLayer[];
  sentences: { start: number; end: number; first_token: number; last_token: number }[];
  sections: {
    start: number;
    end: number;
    heading_start: number;
    heading_end: number;
    depth: number;
  }[];
  header_footer_spans: [number, number][];
}

export interface Diagnostic {
  severity: "error" | "warning";
  message: string;
  line: number;
  col: number;
  source: string;
}

export interface CaptureSpan {
  name: string;
  concept: string;
  start: number;
  end: number;
  text: string;
}

export interface RunMatch {
  lf: string;
  window: number;
  start: number;
  end: number;
  text: string;
  captures: CaptureSpan[];
  context: { start: number; end: number; text: string } | null;
}

export interface DocRunResult {
  doc_id: string;
  matches: RunMatch[];
  timing_ms: number;
}

export interface BucketRunResult {
  bucket: string;
  docs: Record<string, { matches: RunMatch[]; match_count: number }>;
  coverage: Record<string, number>;
  coverage_saved: Record<string, number>;
  coverage_delta: Record<string, number>;
  timing_ms: number;
}

export type Verdict = "accept" | "reject" | "replace";

export interface CorrectionEntry {
  doc: string;
  concept: string;
  start: number;
  end: number;
  verdict: Verdict;
  replacement: [number, number] | null;
  ts: string;
}

export interface ApiError {
  error: string;
  detail?: unknown;
}
