/**
 * Workbench wiring: document list, text view with highlights, the ruleset
 * editor, coverage readout, and the corrections queue.
 *
 * All label math comes from the service; this module only moves service
 * responses into the DOM and user gestures back to the service.
 */

import { ApiClient, ServiceDown, ServiceError } from "./api";
import { DocView } from "./docview";
import { Editor } from "./editor";
import { captureKey } from "./highlight";
import { CoveragePanel, CorrectionsPanel } from "./panels";
import { initialState, loadDraft, saveDraft, type ViewState } from "./state";
import type { CaptureSpan } from "./types";

export class Workbench {
  state: ViewState = initialState();
  api: ApiClient;
  editor!: Editor;
  docView!: DocView;
  coveragePanel!: CoveragePanel;
  correctionsPanel!: CorrectionsPanel;
  docSelect!: HTMLSelectElement;
  bannerEl!: HTMLElement;
  rejected = new Set<string>();
  accepted = new Set<string>();

  constructor(
    private root: HTMLElement,
    baseUrl: string,
  ) {
    this.api = new ApiClient(baseUrl);
    this.buildLayout();
  }

  private buildLayout(): void {
    this.root.innerHTML = "";
    this.bannerEl = el("div", "banner");
    this.bannerEl.hidden = true;

    const toolbar = el("div", "toolbar");
    this.docSelect = document.createElement("select");
    this.docSelect.className = "doc-select";
    this.docSelect.addEventListener("change", () => {
      void this.selectDoc(this.docSelect.value);
    });
    toolbar.appendChild(this.docSelect);

    const editorBox = el("div", "editor-box");
    this.editor = new Editor(editorBox, {
      onRun: () => void this.run(),
      onBufferChange: (buffer) => {
        this.state.buffer = buffer;
        saveDraft(buffer);
      },
    });

    const docBox = el("div", "doc-box");
    this.docView = new DocView(docBox, {
      onVerdict: (capture, verdict) => void this.correct(capture, verdict),
      onReplace: (capture, start, end) => void this.replace(capture, start, end),
    });

    const coverageBox = el("div", "coverage-box");
    this.coveragePanel = new CoveragePanel(coverageBox);
    const correctionsBox = el("div", "corrections-box");
    this.correctionsPanel = new CorrectionsPanel(correctionsBox);

    this.root.append(this.bannerEl, toolbar, editorBox, docBox, coverageBox, correctionsBox);

    const draft = loadDraft();
    if (draft !== null) {
      this.state.buffer = draft;
      this.editor.value = draft;
    }
  }

  banner(message: string | null): void {
    this.state.banner = message;
    this.bannerEl.hidden = message === null;
    this.bannerEl.textContent = message ?? "";
  }

  async start(): Promise<void> {
    try {
      const docs = await this.api.listDocs();
      this.state.docs = docs.map((d) => d.doc_id);
      this.docSelect.innerHTML = "";
      for (const d of docs) {
        const option = document.createElement("option");
        option.value = d.doc_id;
        option.textContent = `${d.doc_id} (${d.bucket ?? "?"}, ${d.pages} pages)`;
        this.docSelect.appendChild(option);
      }
      await this.refreshCorrections();
      if (docs.length) await this.selectDoc(docs[0].doc_id);
      this.banner(null);
    } catch (err) {
      this.handleFailure(err);
    }
  }

  async selectDoc(docId: string): Promise<void> {
    try {
      this.state.detail = await this.api.getDoc(docId);
      this.state.selectedDoc = docId;
      this.state.matches = [];
      this.renderDoc();
      this.banner(null);
    } catch (err) {
      this.handleFailure(err); // buffer and current view stay intact
    }
  }

  /** Explicit run: validate+evaluate the buffer on the selected document. */
  async run(): Promise<void> {
    const docId = this.state.selectedDoc;
    if (!docId) return;
    try {
      const check = await this.api.validate(this.state.buffer);
      this.state.diagnostics = check.diagnostics;
      this.editor.renderDiagnostics(check.diagnostics);
      if (check.diagnostics.some((d) => d.severity === "error")) {
        this.state.matches = [];
        this.renderDoc();
        return;
      }
      const result = await this.api.runOnDoc(this.state.buffer, docId);
      this.state.matches = result.matches;
      this.renderDoc();
      await this.refreshCoverage();
      this.banner(null);
    } catch (err) {
      this.handleFailure(err);
    }
  }

  async refreshCoverage(): Promise<void> {
    const result = await this.api.runOnBucket(this.state.buffer, "train");
    this.state.coverage = result.coverage;
    this.state.coverageSaved = result.coverage_saved;
    this.coveragePanel.render(result.coverage, result.coverage_saved);
  }

  async correct(capture: CaptureSpan, verdict: "accept" | "reject"): Promise<void> {
    const docId = this.state.selectedDoc;
    if (!docId) return;
    try {
      const resp = await this.api.postCorrection({
        doc: docId,
        concept: capture.concept,
        start: capture.start,
        end: capture.end,
        verdict,
      });
      const key = captureKey(docId, capture);
      if (verdict === "reject") {
        this.rejected.add(key);
        this.accepted.delete(key);
      } else {
        this.accepted.add(key);
        this.rejected.delete(key);
      }
      await this.refreshCorrections();
      this.renderDoc();
      this.banner(null);
      void resp;
    } catch (err) {
      this.handleFailure(err);
    }
  }

  async replace(capture: CaptureSpan, start: number, end: number): Promise<void> {
    const docId = this.state.selectedDoc;
    if (!docId) return;
    try {
      const resp = await this.api.postCorrection({
        doc: docId,
        concept: capture.concept,
        start: capture.start,
        end: capture.end,
        verdict: "replace",
        replacement: { start, end },
      });
      // the stored range is the service's token-snapped version
      this.rejected.add(captureKey(docId, capture));
      await this.refreshCorrections();
      this.renderDoc();
      void resp;
    } catch (err) {
      if (err instanceof ServiceError) {
        this.banner(`correction failed: ${err.message}`);
      } else {
        this.handleFailure(err);
      }
    }
  }

  async refreshCorrections(): Promise<void> {
    this.state.corrections = await this.api.listCorrections();
    this.correctionsPanel.render(this.state.corrections);
  }

  renderDoc(): void {
    if (!this.state.detail) return;
    this.docView.render(this.state.detail, this.state.matches, this.rejected, this.accepted);
  }

  private handleFailure(err: unknown): void {
    if (err instanceof ServiceDown) {
      this.banner("service unreachable; your draft is saved, retry when it is back");
    } else if (err instanceof ServiceError) {
      this.banner(`${err.status}: ${err.message}`);
    } else {
      this.banner(String(err));
    }
  }
}

function el(tag: string, className: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

export function mountWorkbench(root: HTMLElement, baseUrl: string): Workbench {
  const bench = new Workbench(root, baseUrl);
  void bench.start();
  return bench;
}
