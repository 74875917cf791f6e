import type { AnalyzedToken } from "./types.js";

export interface PopupActions {
  onSubstitute(token: AnalyzedToken, replacement: string): void;
  onIgnore(token: AnalyzedToken): void;
}

/**
 * Suggestion popup anchored right below a highlighted word. Always offers
 * Ignore; alternatives are added when the service knows any.
 */
export class Popup {
  readonly el: HTMLElement;
  private token: AnalyzedToken | null = null;

  constructor(parent: HTMLElement, private readonly actions: PopupActions) {
    this.el = document.createElement("div");
    this.el.className = "popup";
    this.el.hidden = true;
    parent.appendChild(this.el);
  }

  get visibleFor(): AnalyzedToken | null {
    return this.el.hidden ? null : this.token;
  }

  show(token: AnalyzedToken, alternatives: string[], anchor: HTMLElement): void {
    this.token = token;
    this.el.innerHTML = "";
    const list = document.createElement("div");
    list.className = "popup-list";
    for (const word of alternatives) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "popup-alt";
      button.textContent = word;
      button.addEventListener("click", () => {
        this.hide();
        this.actions.onSubstitute(token, word);
      });
      list.appendChild(button);
    }
    const ignore = document.createElement("button");
    ignore.type = "button";
    ignore.className = "popup-ignore";
    ignore.textContent = "Ignore";
    ignore.addEventListener("click", () => {
      this.hide();
      this.actions.onIgnore(token);
    });
    list.appendChild(ignore);
    this.el.appendChild(list);

    const rect = anchor.getBoundingClientRect();
    this.el.style.left = `${rect.left + window.scrollX}px`;
    this.el.style.top = `${rect.bottom + window.scrollY + 2}px`;
    this.el.hidden = false;
  }

  hide(): void {
    this.el.hidden = true;
    this.token = null;
  }
}
