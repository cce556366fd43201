// Controller: one in-flight request at a time, UI state is always the last
// server response. A stale-version 409 triggers a prompt refresh, never a
// silent retry of the mutation.

import {
  ApiClient,
  MutationResponse,
  Prompt,
  StaleStateError,
  Summary,
} from "./api.js";
import {
  Handlers,
  renderAnnotation,
  renderBaseline,
  renderDone,
  renderGuidelines,
  renderProgress,
} from "./screens.js";

export class App {
  private prompt: Prompt | null = null;
  private summary: Summary | null = null;
  private checked = new Set<string>();
  private busy = false;
  private status = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly sessionId: string,
  ) {}

  async start(): Promise<void> {
    this.summary = await this.api.summary(this.sessionId);
    this.prompt = await this.api.prompt(this.sessionId);
    this.render();
  }

  private apply(response: MutationResponse): void {
    this.prompt = response.prompt;
    this.summary = response.summary;
    this.checked = new Set();
  }

  private async refresh(): Promise<void> {
    this.prompt = await this.api.prompt(this.sessionId);
    this.summary = await this.api.summary(this.sessionId);
    this.checked = new Set();
  }

  /** Runs one mutation; on stale state, refreshes the prompt instead. */
  private act(action: (version: number) => Promise<MutationResponse>): void {
    if (this.busy || !this.prompt) return;
    const version = this.prompt.version;
    this.busy = true;
    this.status = "";
    this.render();
    action(version)
      .then((response) => this.apply(response))
      .catch(async (error) => {
        if (error instanceof StaleStateError) {
          this.status = "Somebody moved this session along; showing the fresh prompt.";
          await this.refresh();
        } else {
          this.status = String(error.message ?? error);
        }
      })
      .finally(() => {
        this.busy = false;
        this.render();
      });
  }

  private handlers(): Handlers {
    return {
      onSkip: () => this.act((v) => this.api.guidelines(this.sessionId, v, "skip")),
      onProvideLabel: (label) =>
        this.act((v) => this.api.guidelines(this.sessionId, v, "label", label)),
      onToggle: (id, on) => {
        if (on) this.checked.add(id);
        else this.checked.delete(id);
      },
      onExpand: () => this.act((v) => this.api.expand(this.sessionId, v)),
      onConfirmChecked: () =>
        this.act((v) => this.api.commit(this.sessionId, v, [...this.checked])),
      onBaseline: (action, label) =>
        this.act((v) => this.api.baseline(this.sessionId, v, action, label)),
    };
  }

  render(): void {
    this.root.replaceChildren();
    if (!this.prompt || !this.summary) return;

    let screen: HTMLElement;
    switch (this.prompt.kind) {
      case "guidelines":
        screen = renderGuidelines(this.prompt, this.handlers(), this.busy);
        break;
      case "annotation":
        screen = renderAnnotation(this.prompt, this.checked, this.handlers(), this.busy);
        break;
      case "baseline":
        screen = renderBaseline(this.prompt, this.handlers(), this.busy);
        break;
      default:
        screen = renderDone();
    }
    this.root.append(screen, renderProgress(this.summary, this.api.exportUrl(this.sessionId)));
    if (this.status) {
      const note = document.createElement("p");
      note.id = "status-note";
      note.textContent = this.status;
      this.root.append(note);
    }
  }
}
