/**
 * Document rendering: offset-accurate highlights over the raw text, page
 * break markers, dimmed boilerplate, and per-capture verdict buttons.
 */

import { buildSegments, captureKey, conceptColorClass } from "./highlight";
import type { CaptureSpan, DocDetail, RunMatch } from "./types";

const PALETTE = [
  "c0", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9",
];

export interface DocViewCallbacks {
  onVerdict: (capture: CaptureSpan, verdict: "accept" | "reject") => void;
  onReplace: (capture: CaptureSpan, start: number, end: number) => void;
}

export class DocView {
  constructor(
    private container: HTMLElement,
    private callbacks: DocViewCallbacks,
  ) {}

  render(
    detail: DocDetail,
    matches: RunMatch[],
    rejectedKeys: Set<string>,
    acceptedKeys: Set<string>,
  ): void {
    this.container.innerHTML = "";
    const pre = document.createElement("pre");
    pre.className = "doc-text";
    const segments = buildSegments(detail.doc_id, {
      text: detail.text,
      matches,
      boilerplate: detail.header_footer_spans,
      rejectedKeys,
    });
    for (const seg of segments) {
      const parts = seg.text.split("\f");
      parts.forEach((part, i) => {
        if (i > 0) {
          const brk = document.createElement("span");
          brk.className = "page-break";
          brk.textContent = "— page break —";
          pre.appendChild(brk);
        }
        const span = document.createElement("span");
        span.textContent = part;
        span.dataset.start = String(seg.start);
        span.dataset.end = String(seg.end);
        const classes: string[] = [];
        if (seg.boilerplate) classes.push("boilerplate");
        if (seg.capture) {
          classes.push("capture", conceptColorClass(seg.capture.concept, PALETTE));
          span.dataset.concept = seg.capture.concept;
          span.dataset.captureStart = String(seg.capture.start);
          span.dataset.captureEnd = String(seg.capture.end);
          if (seg.rejected) classes.push("rejected");
          if (acceptedKeys.has(captureKey(detail.doc_id, seg.capture))) {
            classes.push("accepted");
          }
          span.title = `${seg.capture.concept} [${seg.capture.start}, ${seg.capture.end})`;
        }
        span.className = classes.join(" ");
        pre.appendChild(span);
      });
    }
    this.container.appendChild(pre);
    this.container.appendChild(
      this.renderMatchList(detail, matches, rejectedKeys, acceptedKeys),
    );
  }

  private renderMatchList(
    detail: DocDetail,
    matches: RunMatch[],
    rejectedKeys: Set<string>,
    acceptedKeys: Set<string>,
  ): HTMLElement {
    const list = document.createElement("ul");
    list.className = "match-list";
    matches.forEach((m) => {
      for (const c of m.captures) {
        const li = document.createElement("li");
        li.className = "match-item";
        const key = captureKey(detail.doc_id, c);
        if (rejectedKeys.has(key)) li.classList.add("rejected");
        if (acceptedKeys.has(key)) li.classList.add("accepted");
        li.dataset.concept = c.concept;
        li.dataset.start = String(c.start);
        li.dataset.end = String(c.end);

        const label = document.createElement("span");
        label.className = "match-label";
        label.textContent = `${m.lf} → ${c.concept}: "${c.text}" [${c.start}, ${c.end})`;
        li.appendChild(label);
        if (acceptedKeys.has(key)) {
          const badge = document.createElement("span");
          badge.className = "badge-accepted";
          badge.textContent = "✓";
          li.appendChild(badge);
        }

        const accept = document.createElement("button");
        accept.textContent = "Accept";
        accept.className = "verdict-accept";
        accept.addEventListener("click", () => this.callbacks.onVerdict(c, "accept"));
        const reject = document.createElement("button");
        reject.textContent = "Reject";
        reject.className = "verdict-reject";
        reject.addEventListener("click", () => this.callbacks.onVerdict(c, "reject"));
        const replace = document.createElement("button");
        replace.textContent = "Replace with selection";
        replace.className = "verdict-replace";
        replace.addEventListener("click", () => {
          const sel = this.currentSelectionRange();
          if (sel) this.callbacks.onReplace(c, sel[0], sel[1]);
        });
        li.append(accept, reject, replace);
        list.appendChild(li);
      }
    });
    return list;
  }

  /** Document-offset range of the current text selection, via segment data. */
  currentSelectionRange(): [number, number] | null {
    const sel = globalThis.getSelection?.();
    if (!sel || sel.rangeCount === 0 || sel.isCollapsed) return null;
    const range = sel.getRangeAt(0);
    const startSeg = (range.startContainer.parentElement as HTMLElement)?.dataset?.start;
    const endSeg = (range.endContainer.parentElement as HTMLElement)?.dataset?.start;
    if (startSeg === undefined || endSeg === undefined) return null;
    const start = Number(startSeg) + range.startOffset;
    const end = Number(endSeg) + range.endOffset;
    return start < end ? [start, end] : null;
  }
}
