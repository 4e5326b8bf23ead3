/** Coverage readout and the corrections queue. */

import type { CorrectionEntry } from "./types";

export class CoveragePanel {
  constructor(private container: HTMLElement) {}

  render(
    current: Record<string, number> | null,
    saved: Record<string, number> | null,
  ): void {
    this.container.innerHTML = "";
    if (!current) {
      this.container.textContent = "Run against a bucket to see coverage.";
      return;
    }
    const table = document.createElement("table");
    table.className = "coverage-table";
    const head = table.insertRow();
    for (const h of ["Concept", "Saved", "Current", "Delta"]) {
      const th = document.createElement("th");
      th.textContent = h;
      head.appendChild(th);
    }
    for (const concept of Object.keys(current).sort()) {
      const row = table.insertRow();
      row.dataset.concept = concept;
      const savedValue = saved?.[concept] ?? 0;
      const delta = current[concept] - savedValue;
      const cells = [
        concept,
        savedValue.toFixed(3),
        current[concept].toFixed(3),
        `${delta >= 0 ? "+" : ""}${delta.toFixed(3)}`,
      ];
      cells.forEach((text, i) => {
        const td = row.insertCell();
        td.textContent = text;
        if (i === 3) td.className = delta > 0 ? "delta-up" : delta < 0 ? "delta-down" : "delta-flat";
      });
    }
    this.container.appendChild(table);
  }
}

export class CorrectionsPanel {
  constructor(private container: HTMLElement) {}

  render(entries: CorrectionEntry[]): void {
    this.container.innerHTML = "";
    if (!entries.length) {
      this.container.textContent = "No corrections recorded.";
      return;
    }
    const list = document.createElement("ul");
    list.className = "corrections-list";
    for (const e of entries) {
      const li = document.createElement("li");
      li.className = `correction correction-${e.verdict}`;
      li.dataset.doc = e.doc;
      li.dataset.concept = e.concept;
      li.dataset.start = String(e.start);
      li.dataset.end = String(e.end);
      const repl = e.replacement ? ` → [${e.replacement[0]}, ${e.replacement[1]})` : "";
      li.textContent = `${e.verdict}: ${e.doc} ${e.concept} [${e.start}, ${e.end})${repl}`;
      list.appendChild(li);
    }
    this.container.appendChild(list);
  }
}
