// Screen renderers: plain DOM, no client-side pool bookkeeping. Each screen
// reflects exactly the last server response; handlers are wired by the app.

import type { Prompt, Summary } from "./api.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export interface Handlers {
  onSkip(): void;
  onProvideLabel(label: string): void;
  onToggle(id: string, checked: boolean): void;
  onExpand(): void;
  onConfirmChecked(): void;
  onBaseline(action: "confirm" | "skip" | "relabel", label?: string): void;
}

export function renderGuidelines(
  prompt: Extract<Prompt, { kind: "guidelines" }>,
  handlers: Handlers,
  busy: boolean,
): HTMLElement {
  const input = el("input", {
    type: "text",
    id: "label-input",
    value: prompt.auto_label,
    "aria-label": "label for these sentences",
  }) as HTMLInputElement;
  input.value = prompt.auto_label;

  const accept = el("button", { id: "accept-btn", class: "primary" }, "Accept suggestion");
  const provide = el("button", { id: "label-btn" }, "Provide label");
  const skip = el("button", { id: "skip-btn", class: "muted" }, "Skip");
  accept.onclick = () => handlers.onProvideLabel(prompt.auto_label);
  provide.onclick = () => handlers.onProvideLabel(input.value);
  skip.onclick = () => handlers.onSkip();
  input.onkeydown = (ev) => {
    if (ev.key === "Enter") handlers.onProvideLabel(input.value);
  };
  for (const b of [accept, provide, skip]) b.toggleAttribute("disabled", busy);

  return el(
    "section",
    { id: "guidelines-screen" },
    el("h2", {}, "Do these belong together? Name them."),
    el(
      "ul",
      { class: "pivots" },
      ...prompt.pivots.map((text) => el("li", { class: "sentence" }, text)),
    ),
    el("div", { class: "controls" }, input, accept, provide, skip),
  );
}

export function renderAnnotation(
  prompt: Extract<Prompt, { kind: "annotation" }>,
  checked: ReadonlySet<string>,
  handlers: Handlers,
  busy: boolean,
): HTMLElement {
  const list = el("ul", { class: "proposals" });
  prompt.proposed_ids.forEach((id, i) => {
    const box = el("input", {
      type: "checkbox",
      id: `check-${id}`,
      "data-id": id,
    }) as HTMLInputElement;
    box.checked = checked.has(id);
    box.disabled = busy;
    box.onchange = () => handlers.onToggle(id, box.checked);
    const label = el("label", { for: `check-${id}`, class: "sentence" }, prompt.proposed[i]);
    list.append(el("li", {}, box, label));
  });

  const more = el("button", { id: "expand-btn" }, "Show more");
  (more as HTMLButtonElement).disabled = busy || prompt.at_threshold;
  more.onclick = () => handlers.onExpand();
  const confirm = el("button", { id: "confirm-btn", class: "primary" }, "Confirm");
  (confirm as HTMLButtonElement).disabled = busy;
  confirm.onclick = () => handlers.onConfirmChecked();

  return el(
    "section",
    { id: "annotation-screen" },
    el("h2", {}, "Check everything that is ", el("mark", {}, prompt.label)),
    list,
    el("div", { class: "controls" }, more, confirm),
  );
}

export function renderBaseline(
  prompt: Extract<Prompt, { kind: "baseline" }>,
  handlers: Handlers,
  busy: boolean,
): HTMLElement {
  const input = el("input", {
    type: "text",
    id: "baseline-label-input",
    "aria-label": "replacement label",
  }) as HTMLInputElement;
  input.value = prompt.precomputed_label;

  const confirm = el("button", { id: "baseline-confirm-btn", class: "primary" }, "Confirm");
  const relabel = el("button", { id: "baseline-relabel-btn" }, "Relabel");
  const skip = el("button", { id: "baseline-skip-btn", class: "muted" }, "Skip");
  confirm.onclick = () => handlers.onBaseline("confirm");
  relabel.onclick = () => handlers.onBaseline("relabel", input.value);
  skip.onclick = () => handlers.onBaseline("skip");
  for (const b of [confirm, relabel, skip]) b.toggleAttribute("disabled", busy);

  return el(
    "section",
    { id: "baseline-screen" },
    el("h2", {}, "Does this label fit?"),
    el("p", { class: "sentence single" }, prompt.text),
    el("p", {}, "Suggested: ", el("mark", {}, prompt.precomputed_label)),
    el("div", { class: "controls" }, input, confirm, relabel, skip),
  );
}

export function renderDone(): HTMLElement {
  return el(
    "section",
    { id: "done-screen" },
    el("h2", {}, "All sentences are labelled."),
  );
}

export function renderProgress(summary: Summary, exportUrl: string): HTMLElement {
  const histogram = el("ul", { class: "histogram" });
  for (const [label, count] of Object.entries(summary.label_histogram)) {
    histogram.append(el("li", {}, `${label}: ${count}`));
  }
  return el(
    "aside",
    { id: "progress-panel" },
    el("h3", {}, "Progress"),
    el(
      "p",
      {},
      el("strong", { id: "labelled-count" }, String(summary.labelled)),
      ` labelled / ${summary.unlabelled} remaining`,
    ),
    histogram,
    el("a", { id: "export-link", href: exportUrl, download: "" }, "Download labels"),
  );
}
