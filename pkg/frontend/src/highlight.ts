/**
 * Offset-accurate text segmentation for rendering.
 *
 * The document text is cut into contiguous segments; each carries the
 * capture (if any) and boilerplate flag for the range it covers. Segment
 * boundaries come only from service-reported ranges, so concatenating
 * segment texts always reproduces the document byte for byte.
 */

import type { CaptureSpan, RunMatch } from "./types";

export interface Segment {
  start: number;
  end: number;
  text: string;
  capture: CaptureSpan | null;
  matchIndex: number | null;
  boilerplate: boolean;
  rejected: boolean;
}

export interface HighlightInput {
  text: string;
  matches: RunMatch[];
  boilerplate: [number, number][];
  rejectedKeys: Set<string>;
}

export function captureKey(docId: string, c: CaptureSpan): string {
  return `${docId}:${c.concept}:${c.start}:${c.end}`;
}

/** Stable color class per concept: the palette repeats after ten. */
export function conceptColorClass(concept: string, palette: string[]): string {
  let hash = 0;
  for (const ch of concept) hash = (hash * 31 + ch.charCodeAt(0)) >>> 0;
  return palette[hash % palette.length];
}

export function buildSegments(docId: string, input: HighlightInput): Segment[] {
  const cuts = new Set<number>([0, input.text.length]);
  const captures: { span: CaptureSpan; matchIndex: number }[] = [];
  input.matches.forEach((m, mi) => {
    for (const c of m.captures) {
      captures.push({ span: c, matchIndex: mi });
      cuts.add(c.start);
      cuts.add(c.end);
    }
  });
  for (const [s, e] of input.boilerplate) {
    cuts.add(s);
    cuts.add(e);
  }
  const points = [...cuts].filter((p) => p >= 0 && p <= input.text.length).sort((a, b) => a - b);

  const segments: Segment[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [start, end] = [points[i], points[i + 1]];
    if (start === end) continue;
    // first covering capture wins; captures for one concept never overlap
    const hit = captures.find((c) => c.span.start <= start && end <= c.span.end) ?? null;
    const boiler = input.boilerplate.some(([s, e]) => s <= start && end <= e);
    segments.push({
      start,
      end,
      text: input.text.slice(start, end),
      capture: hit ? hit.span : null,
      matchIndex: hit ? hit.matchIndex : null,
      boilerplate: boiler,
      rejected: hit ? input.rejectedKeys.has(captureKey(docId, hit.span)) : false,
    });
  }
  return segments;
}

export function segmentsReassemble(segments: Segment[], text: string): boolean {
  return segments.map((s) => s.text).join("") === text;
}
