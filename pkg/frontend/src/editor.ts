import { ApiClient } from "./api.js";
import { Banner } from "./banner.js";
import { Debouncer } from "./debounce.js";
import { Popup } from "./popup.js";
import type { AnalyzedToken, AnalyzeResponse } from "./types.js";

export interface EditorOptions {
  quietMs?: number;
}

/**
 * Plain rich-text editor with live hard-word decorations.
 *
 * The contenteditable document is the single source of truth; analysis only
 * repaints decorations and never alters the text. The text is mutated by
 * exactly two things: the user's keystrokes and an explicit substitution
 * choice from the popup.
 */
export class Editor {
  readonly root: HTMLElement;
  readonly banner: Banner;
  readonly popup: Popup;

  private readonly debouncer: Debouncer;
  private readonly api: ApiClient;
  private readonly sessionId: string;

  /** version of the newest acknowledged feedback; older analyses are stale */
  private lastFeedbackVersion = 0;
  private modelVersion = 0;
  private pendingAnalysis = false;
  private analysisQueued = false;
  private feedbackChain: Promise<void> = Promise.resolve();
  private decoratedWith: AnalyzedToken[] = [];

  constructor(
    container: HTMLElement,
    api: ApiClient,
    sessionId: string,
    options: EditorOptions = {},
  ) {
    this.api = api;
    this.sessionId = sessionId;
    this.debouncer = new Debouncer(options.quietMs ?? 400);

    this.banner = new Banner(container);
    this.root = document.createElement("div");
    this.root.className = "editor";
    this.root.contentEditable = "true";
    this.root.setAttribute("spellcheck", "false");
    container.appendChild(this.root);
    this.popup = new Popup(container, {
      onSubstitute: (token, replacement) => this.substitute(token, replacement),
      onIgnore: (token) => this.ignore(token),
    });

    this.root.addEventListener("input", () => {
      this.popup.hide();
      this.debouncer.schedule(() => void this.analyzeNow());
    });
    this.root.addEventListener("mouseover", (event) => {
      const mark = (event.target as HTMLElement | null)?.closest?.("mark.hl");
      if (mark instanceof HTMLElement) void this.openPopup(mark);
    });
  }

  get text(): string {
    return this.root.textContent ?? "";
  }

  get version(): number {
    return this.modelVersion;
  }

  /** Replace the document text as if the user had typed it. */
  setText(text: string): void {
    this.root.textContent = text;
    this.root.dispatchEvent(new Event("input"));
  }

  /** Run an analysis immediately (used after feedback and on load). */
  async analyzeNow(): Promise<void> {
    if (this.pendingAnalysis) {
      // one request in flight at most; remember to run again afterwards
      this.analysisQueued = true;
      return;
    }
    this.pendingAnalysis = true;
    const snapshot = this.text;
    try {
      const response = await this.api.analyze(this.sessionId, snapshot);
      this.banner.clear();
      this.applyAnalysis(snapshot, response);
    } catch (error) {
      this.banner.show(`analysis unavailable: ${(error as Error).message}`);
    } finally {
      this.pendingAnalysis = false;
      if (this.analysisQueued) {
        this.analysisQueued = false;
        void this.analyzeNow();
      }
    }
  }

  private applyAnalysis(snapshot: string, response: AnalyzeResponse): void {
    if (response.model_version < this.lastFeedbackVersion) return; // stale model
    if (snapshot !== this.text) return; // document changed while in flight
    this.modelVersion = response.model_version;
    this.decoratedWith = response.tokens;
    this.render(snapshot, response.tokens);
  }

  /** Current decorations (highlighted/entity tokens only). */
  get decorations(): AnalyzedToken[] {
    return this.decoratedWith.filter(
      (t) => t.highlighted === true || t.kind === "entity",
    );
  }

  private render(text: string, tokens: AnalyzedToken[]): void {
    const caret = this.caretOffset();
    const fragment = document.createDocumentFragment();
    let pos = 0;
    for (const token of tokens) {
      const decorate = token.highlighted === true || token.kind === "entity";
      if (!decorate) continue;
      if (token.start > pos) {
        fragment.appendChild(document.createTextNode(text.slice(pos, token.start)));
      }
      if (token.highlighted === true) {
        const mark = document.createElement("mark");
        mark.className = "hl";
        mark.dataset.word = token.text;
        mark.dataset.start = String(token.start);
        mark.dataset.end = String(token.end);
        mark.textContent = token.text;
        fragment.appendChild(mark);
      } else {
        const span = document.createElement("span");
        span.className = "entity";
        span.textContent = token.text;
        fragment.appendChild(span);
      }
      pos = token.end;
    }
    if (pos < text.length) {
      fragment.appendChild(document.createTextNode(text.slice(pos)));
    }
    this.root.replaceChildren(fragment);
    if (caret !== null) this.restoreCaret(caret);
  }

  private caretOffset(): number | null {
    try {
      const selection = window.getSelection();
      if (!selection || selection.rangeCount === 0) return null;
      const range = selection.getRangeAt(0);
      if (!this.root.contains(range.startContainer)) return null;
      const probe = range.cloneRange();
      probe.selectNodeContents(this.root);
      probe.setEnd(range.startContainer, range.startOffset);
      return probe.toString().length;
    } catch {
      return null;
    }
  }

  private restoreCaret(offset: number): void {
    try {
      const selection = window.getSelection();
      if (!selection) return;
      const range = document.createRange();
      let remaining = offset;
      const walker = document.createTreeWalker(this.root, NodeFilter.SHOW_TEXT);
      let node = walker.nextNode();
      while (node) {
        const length = node.textContent?.length ?? 0;
        if (remaining <= length) {
          range.setStart(node, remaining);
          range.collapse(true);
          selection.removeAllRanges();
          selection.addRange(range);
          return;
        }
        remaining -= length;
        node = walker.nextNode();
      }
    } catch {
      // selection restore is best-effort; never break rendering over it
    }
  }

  private async openPopup(mark: HTMLElement): Promise<void> {
    const token: AnalyzedToken = {
      text: mark.dataset.word ?? mark.textContent ?? "",
      start: Number(mark.dataset.start ?? 0),
      end: Number(mark.dataset.end ?? 0),
      kind: "word",
      highlighted: true,
    };
    try {
      const response = await this.api.alternatives(this.sessionId, token.text);
      this.popup.show(token, response.alternatives, mark);
    } catch (error) {
      this.banner.show(`alternatives unavailable: ${(error as Error).message}`);
    }
  }

  /** Replace the highlighted word in the document and report SUBSTITUTE. */
  private substitute(token: AnalyzedToken, replacement: string): void {
    const text = this.text;
    if (text.slice(token.start, token.end) !== token.text) {
      // document changed since this analysis; just re-analyze
      void this.analyzeNow();
      return;
    }
    this.root.textContent =
      text.slice(0, token.start) + replacement + text.slice(token.end);
    this.postFeedback(() =>
      this.api.postImplicit(this.sessionId, token.text, "substitute", replacement),
    );
  }

  private ignore(token: AnalyzedToken): void {
    this.postFeedback(() =>
      this.api.postImplicit(this.sessionId, token.text, "ignore"),
    );
  }

  /** Feedback posts are serialized FIFO; each success triggers a re-analyze. */
  postFeedback(send: () => Promise<{ model_version: number }>): void {
    this.feedbackChain = this.feedbackChain.then(async () => {
      try {
        const response = await send();
        this.lastFeedbackVersion = response.model_version;
        this.banner.clear();
        await this.analyzeNow();
      } catch (error) {
        this.banner.show(`feedback failed: ${(error as Error).message}`);
      }
    });
  }

  /** Resolves once queued feedback posts (and their re-analyses) settle. */
  async idle(): Promise<void> {
    await this.feedbackChain;
  }
}
