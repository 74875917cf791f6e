import { ApiClient } from "./api.js";

/**
 * Refine Model loop: repeatedly fetches the word the model is most
 * uncertain about and records the user's yes/no answer. Every answer is
 * persisted immediately, so closing the dialog mid-loop loses nothing.
 */
export class RefineDialog {
  readonly el: HTMLElement;
  private readonly question: HTMLElement;
  private readonly status: HTMLElement;
  private currentWord: string | null = null;
  private asked: string[] = [];

  constructor(
    parent: HTMLElement,
    private readonly api: ApiClient,
    private readonly sessionId: string,
    private readonly onAnswered: () => void,
  ) {
    this.el = document.createElement("div");
    this.el.className = "dialog refine";
    this.el.hidden = true;
    this.el.innerHTML = `
      <h2>Refine Model</h2>
      <p class="refine-question"></p>
      <div class="dialog-buttons">
        <button type="button" class="refine-yes">Yes</button>
        <button type="button" class="refine-no">No</button>
        <button type="button" class="refine-close">Close</button>
      </div>
      <p class="refine-status"></p>`;
    parent.appendChild(this.el);
    this.question = this.el.querySelector(".refine-question") as HTMLElement;
    this.status = this.el.querySelector(".refine-status") as HTMLElement;
    (this.el.querySelector(".refine-yes") as HTMLButtonElement)
      .addEventListener("click", () => void this.answer(true));
    (this.el.querySelector(".refine-no") as HTMLButtonElement)
      .addEventListener("click", () => void this.answer(false));
    (this.el.querySelector(".refine-close") as HTMLButtonElement)
      .addEventListener("click", () => this.close());
  }

  get askedWords(): readonly string[] {
    return this.asked;
  }

  get word(): string | null {
    return this.currentWord;
  }

  async open(): Promise<void> {
    this.el.hidden = false;
    this.asked = [];
    await this.nextQuestion();
  }

  close(): void {
    this.el.hidden = true;
    this.currentWord = null;
  }

  private async nextQuestion(): Promise<void> {
    try {
      const response = await this.api.nextQuery(this.sessionId);
      this.currentWord = response.word;
      this.asked.push(response.word);
      this.question.textContent =
        `Is the word '${response.word}' difficult to pronounce?`;
      this.status.textContent = `${this.asked.length} words reviewed`;
    } catch (error) {
      this.currentWord = null;
      this.question.textContent = `no more words to review: ${(error as Error).message}`;
    }
  }

  async answer(isHard: boolean): Promise<void> {
    if (this.currentWord === null) return;
    const word = this.currentWord;
    this.currentWord = null; // ignore double clicks while the post is in flight
    try {
      await this.api.postExplicit(this.sessionId, word, isHard);
      this.onAnswered();
      await this.nextQuestion();
    } catch (error) {
      this.question.textContent = `could not record the answer: ${(error as Error).message}`;
      this.currentWord = word;
    }
  }
}
