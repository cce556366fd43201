// Entry point: attach to #/session/<id>, or show the minimal start form
// (upload a JSONL dataset, pick a mode, create a session).

import { ApiClient } from "./api.js";
import { App } from "./app.js";

const api = new ApiClient("");

function sessionFromHash(): string | null {
  const match = location.hash.match(/^#\/session\/([A-Za-z0-9_-]+)$/);
  return match ? match[1] : null;
}

async function waitReady(sessionId: string): Promise<void> {
  for (;;) {
    const summary = await fetch(`/api/sessions/${sessionId}`).then((r) => r.json());
    if (summary.status === "ready") return;
    if (summary.status === "error") throw new Error(summary.error);
    await new Promise((resolve) => setTimeout(resolve, 300));
  }
}

function startForm(root: HTMLElement): void {
  root.innerHTML = `
    <section id="start-screen">
      <h2>Start an annotation session</h2>
      <label>Dataset (JSONL) <input type="file" id="dataset-file" accept=".jsonl"></label>
      <label>Mode
        <select id="mode-select">
          <option value="aa">active annotation</option>
          <option value="baseline">baseline</option>
        </select>
      </label>
      <button id="start-btn" class="primary">Create session</button>
      <p id="start-status" role="status"></p>
    </section>`;
  const button = root.querySelector<HTMLButtonElement>("#start-btn")!;
  const status = root.querySelector<HTMLParagraphElement>("#start-status")!;
  button.onclick = async () => {
    const fileInput = root.querySelector<HTMLInputElement>("#dataset-file")!;
    const mode = root.querySelector<HTMLSelectElement>("#mode-select")!.value as
      | "aa"
      | "baseline";
    const file = fileInput.files?.[0];
    if (!file) {
      status.textContent = "Choose a dataset file first.";
      return;
    }
    button.disabled = true;
    try {
      status.textContent = "Uploading dataset...";
      const { dataset_id } = await api.uploadDataset(file, file.name);
      status.textContent = "Building session (clustering)...";
      const { session_id } = await api.createSession(mode, dataset_id);
      await waitReady(session_id);
      location.hash = `#/session/${session_id}`;
    } catch (error) {
      status.textContent = String((error as Error).message ?? error);
      button.disabled = false;
    }
  };
}

export async function boot(root: HTMLElement): Promise<void> {
  const sessionId = sessionFromHash();
  if (sessionId === null) {
    startForm(root);
    return;
  }
  await waitReady(sessionId);
  const app = new App(root, api, sessionId);
  await app.start();
}

const root = document.getElementById("app");
if (root) {
  window.addEventListener("hashchange", () => boot(root));
  void boot(root);
}
