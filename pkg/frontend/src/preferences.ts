import { ApiClient } from "./api.js";

export interface PreferencesResult {
  threshold?: number;
  add_easy?: string[];
  add_hard?: string[];
}

const parseWords = (raw: string): string[] =>
  raw
    .split(/[\s,;]+/)
    .map((w) => w.trim().toLowerCase())
    .filter((w) => w.length > 0);

/**
 * Preferences dialog: extra easy/difficult words and the highlight
 * threshold. Submitting PATCHes the session and re-analyzes.
 */
export class PreferencesDialog {
  readonly el: HTMLElement;
  private readonly easyInput: HTMLTextAreaElement;
  private readonly hardInput: HTMLTextAreaElement;
  private readonly thresholdInput: HTMLInputElement;
  private readonly error: HTMLElement;

  constructor(
    parent: HTMLElement,
    private readonly api: ApiClient,
    private readonly sessionId: string,
    private readonly onApplied: () => void,
    threshold = 0.7,
  ) {
    this.el = document.createElement("div");
    this.el.className = "dialog preferences";
    this.el.hidden = true;
    this.el.innerHTML = `
      <h2>Preferences</h2>
      <label>Words you find easy to pronounce
        <textarea class="pref-easy" rows="2"></textarea></label>
      <label>Words you find difficult to pronounce
        <textarea class="pref-hard" rows="2"></textarea></label>
      <label>Highlight threshold
        <input class="pref-threshold" type="range" min="0" max="1" step="0.05"></label>
      <div class="pref-error" role="alert" hidden></div>
      <div class="dialog-buttons">
        <button type="button" class="pref-save">Save</button>
        <button type="button" class="pref-close">Close</button>
      </div>`;
    parent.appendChild(this.el);
    this.easyInput = this.el.querySelector(".pref-easy") as HTMLTextAreaElement;
    this.hardInput = this.el.querySelector(".pref-hard") as HTMLTextAreaElement;
    this.thresholdInput = this.el.querySelector(".pref-threshold") as HTMLInputElement;
    this.thresholdInput.value = String(threshold);
    this.error = this.el.querySelector(".pref-error") as HTMLElement;
    (this.el.querySelector(".pref-save") as HTMLButtonElement)
      .addEventListener("click", () => void this.save());
    (this.el.querySelector(".pref-close") as HTMLButtonElement)
      .addEventListener("click", () => this.close());
  }

  open(): void {
    this.error.hidden = true;
    this.el.hidden = false;
  }

  close(): void {
    this.el.hidden = true;
  }

  async save(): Promise<void> {
    const update: PreferencesResult = {
      threshold: Number(this.thresholdInput.value),
    };
    const easy = parseWords(this.easyInput.value);
    const hard = parseWords(this.hardInput.value);
    if (easy.length) update.add_easy = easy;
    if (hard.length) update.add_hard = hard;
    try {
      await this.api.updatePreferences(this.sessionId, update);
      this.easyInput.value = "";
      this.hardInput.value = "";
      this.close();
      this.onApplied();
    } catch (error) {
      this.error.textContent = (error as Error).message;
      this.error.hidden = false;
    }
  }
}
