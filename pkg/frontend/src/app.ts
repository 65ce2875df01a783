import { ApiError, SurveyApi } from "./api.js";
import { IntervalWidget } from "./interval.js";
import { RankBoard } from "./rankboard.js";
import type { PendingPair, Scenario, SessionView } from "./types.js";

const SESSION_KEY = "hoprank.session_id";

/**
 * Order the server's remaining (hop, question) pairs the way the survey
 * presents them: hops in scenario order, questions in scenario order within
 * each hop. The server reports what is left; the scenario fixes the sequence.
 */
export function orderRemaining(scenario: Scenario, remaining: PendingPair[]): PendingPair[] {
  const hopIndex = new Map(scenario.hops.map((h, i) => [h.id, i]));
  const questionIndex = new Map(scenario.questions.map((q, i) => [q.id, i]));
  const at = (map: Map<string, number>, id: string) => map.get(id) ?? Number.MAX_SAFE_INTEGER;
  return [...remaining].sort(
    (a, b) =>
      at(hopIndex, a.hop_id) - at(hopIndex, b.hop_id) ||
      at(questionIndex, a.question_id) - at(questionIndex, b.question_id),
  );
}

interface Storage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

/**
 * Single-page survey flow: enter an expert id, rank the attack vectors, then
 * answer every (hop, question) pair with an interval, one at a time. The
 * session id is kept in sessionStorage so a reload resumes from whatever the
 * server says is left; submitted answers are final and never shown for edit.
 */
export class SurveyApp {
  private scenario!: Scenario;
  private session: SessionView | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SurveyApi,
    private readonly storage: Storage,
  ) {}

  async start(): Promise<void> {
    try {
      const envelope = await this.api.getScenario();
      this.scenario = envelope.scenario;
    } catch (err) {
      this.renderFatal(err);
      return;
    }
    const stored = this.storage.getItem(SESSION_KEY);
    if (stored !== null) {
      try {
        this.session = await this.api.getSession(stored);
      } catch (err) {
        if (err instanceof ApiError && err.code === "session_not_found") {
          this.storage.removeItem(SESSION_KEY);
        } else {
          this.renderFatal(err);
          return;
        }
      }
    }
    this.route();
  }

  private route(): void {
    if (this.session === null) {
      this.renderLogin();
    } else if (this.session.state === "ranking") {
      this.renderRanking();
    } else if (this.session.state === "rating") {
      this.renderRating();
    } else {
      this.renderDone();
    }
  }

  private screen(title: string): { panel: HTMLElement; banner: HTMLElement } {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    const panel = doc.createElement("section");
    panel.className = "panel";
    const heading = doc.createElement("h1");
    heading.textContent = title;
    const banner = doc.createElement("div");
    banner.className = "banner";
    banner.style.display = "none";
    panel.append(heading, banner);
    this.root.appendChild(panel);
    return { panel, banner };
  }

  private showProblem(banner: HTMLElement, err: unknown): void {
    banner.style.display = "block";
    if (err instanceof ApiError) {
      banner.textContent = `${err.code}: ${err.message}`;
    } else {
      banner.textContent = err instanceof Error ? err.message : String(err);
    }
  }

  private renderFatal(err: unknown): void {
    const { banner } = this.screen("Something went wrong");
    this.showProblem(banner, err);
  }

  private renderLogin(): void {
    const doc = this.root.ownerDocument;
    const { panel, banner } = this.screen(`Scenario: ${this.scenario.id}`);
    const form = doc.createElement("form");
    const input = doc.createElement("input");
    input.type = "text";
    input.placeholder = "expert id";
    input.name = "expert_id";
    const button = doc.createElement("button");
    button.type = "submit";
    button.textContent = "Start";
    form.append(input, button);
    form.addEventListener("submit", async (ev) => {
      ev.preventDefault();
      const expertId = input.value.trim();
      if (expertId === "") return;
      try {
        this.session = await this.api.createSession(expertId);
        this.storage.setItem(SESSION_KEY, this.session.session_id);
        this.route();
      } catch (err) {
        this.showProblem(banner, err);
      }
    });
    panel.appendChild(form);
  }

  private renderRanking(): void {
    const doc = this.root.ownerDocument;
    const { panel, banner } = this.screen("Rank the attack vectors");
    const hint = doc.createElement("p");
    hint.textContent = "Most feasible first. Drag cards or use the arrows, then submit.";
    panel.appendChild(hint);
    const board = new RankBoard(panel, this.scenario.avs);
    const submit = doc.createElement("button");
    submit.type = "button";
    submit.textContent = "Submit ranking";
    submit.addEventListener("click", async () => {
      submit.disabled = true;
      try {
        this.session = await this.api.submitRanking(this.session!.session_id, board.ranks());
        this.route();
      } catch (err) {
        // board state is untouched, so the expert can adjust and retry
        this.showProblem(banner, err);
        submit.disabled = false;
      }
    });
    panel.appendChild(submit);
  }

  private async renderRating(): Promise<void> {
    let view: SessionView;
    try {
      view = await this.api.getSession(this.session!.session_id);
    } catch (err) {
      this.renderFatal(err);
      return;
    }
    this.session = view;
    if (view.state !== "rating") {
      this.route();
      return;
    }
    const queue = orderRemaining(this.scenario, view.remaining ?? []);
    this.renderQuestion(queue[0], view);
  }

  private renderQuestion(pair: PendingPair, view: SessionView): void {
    const doc = this.root.ownerDocument;
    const hop = this.scenario.hops.find((h) => h.id === pair.hop_id);
    const question = this.scenario.questions.find((q) => q.id === pair.question_id);
    const { panel, banner } = this.screen(hop ? hop.name : pair.hop_id);

    const progress = doc.createElement("p");
    progress.className = "progress";
    progress.textContent = `Answer ${view.answered + 1} of ${view.required}`;
    panel.appendChild(progress);

    if (hop && hop.description !== "") {
      const desc = doc.createElement("p");
      desc.textContent = hop.description;
      panel.appendChild(desc);
    }
    const prompt = doc.createElement("p");
    prompt.className = "prompt";
    prompt.textContent = question ? question.text : pair.question_id;
    panel.appendChild(prompt);

    const save = doc.createElement("button");
    save.type = "button";
    save.textContent = "Save answer";
    save.disabled = true;
    const widget = new IntervalWidget(panel, {
      onChange: () => {
        save.disabled = false;
      },
    });
    save.addEventListener("click", async () => {
      const interval = widget.value();
      if (interval === null) return;
      save.disabled = true;
      try {
        this.session = await this.api.submitInterval(
          this.session!.session_id,
          pair.hop_id,
          pair.question_id,
          interval[0],
          interval[1],
        );
        this.route();
      } catch (err) {
        if (err instanceof ApiError && err.code === "duplicate_response") {
          // already stored (e.g. a retried request landed twice): move on
          this.route();
          return;
        }
        // keep the drawn interval so a failed request costs nothing
        this.showProblem(banner, err);
        save.disabled = false;
      }
    });
    panel.appendChild(save);
  }

  private renderDone(): void {
    const doc = this.root.ownerDocument;
    const { panel } = this.screen("All done");
    const note = doc.createElement("p");
    note.textContent =
      `Session ${this.session!.session_id} is submitted: ` +
      `${this.session!.answered} of ${this.session!.required} answers recorded. ` +
      "Answers are final.";
    panel.appendChild(note);
  }
}

export function mount(root: HTMLElement, baseUrl?: string): SurveyApp {
  const url =
    baseUrl ??
    new URLSearchParams(window.location.search).get("api") ??
    window.location.origin;
  const app = new SurveyApp(root, new SurveyApi(url), window.sessionStorage);
  void app.start();
  return app;
}
