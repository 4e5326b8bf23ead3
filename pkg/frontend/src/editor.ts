/**
 * Ruleset editor: a plain textarea plus a diagnostics panel.
 *
 * Runs are explicit (button or Ctrl+Enter); nothing evaluates on keystroke.
 * Diagnostics render exactly the line/col the service reported.
 */

import type { Diagnostic } from "./types";

export interface EditorCallbacks {
  onRun: () => void;
  onBufferChange: (buffer: string) => void;
}

export class Editor {
  textarea: HTMLTextAreaElement;
  diagnosticsEl: HTMLElement;
  runButton: HTMLButtonElement;

  constructor(container: HTMLElement, callbacks: EditorCallbacks) {
    container.innerHTML = "";
    this.textarea = document.createElement("textarea");
    this.textarea.className = "editor-buffer";
    this.textarea.rows = 14;
    this.textarea.spellcheck = false;
    this.textarea.addEventListener("input", () =>
      callbacks.onBufferChange(this.textarea.value),
    );
    this.textarea.addEventListener("keydown", (ev) => {
      if ((ev as KeyboardEvent).key === "Enter" && (ev as KeyboardEvent).ctrlKey) {
        ev.preventDefault();
        callbacks.onRun();
      }
    });

    this.runButton = document.createElement("button");
    this.runButton.className = "run-button";
    this.runButton.textContent = "Run";
    this.runButton.addEventListener("click", () => callbacks.onRun());

    this.diagnosticsEl = document.createElement("ul");
    this.diagnosticsEl.className = "diagnostics";

    container.append(this.textarea, this.runButton, this.diagnosticsEl);
  }

  get value(): string {
    return this.textarea.value;
  }

  set value(buffer: string) {
    this.textarea.value = buffer;
  }

  renderDiagnostics(diagnostics: Diagnostic[]): void {
    this.diagnosticsEl.innerHTML = "";
    for (const d of diagnostics) {
      const li = document.createElement("li");
      li.className = `diagnostic diagnostic-${d.severity}`;
      li.dataset.line = String(d.line);
      li.dataset.col = String(d.col);
      const where = d.line > 0 ? `${d.line}:${d.col} ` : "";
      const source = d.source ? `[${d.source}] ` : "";
      li.textContent = `${where}${d.severity}: ${source}${d.message}`;
      this.diagnosticsEl.appendChild(li);
    }
  }
}
