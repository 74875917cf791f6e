/** Non-blocking error banner pinned above the editor. */
export class Banner {
  readonly el: HTMLElement;

  constructor(parent: HTMLElement) {
    this.el = document.createElement("div");
    this.el.className = "banner";
    this.el.hidden = true;
    this.el.setAttribute("role", "alert");
    parent.prepend(this.el);
  }

  show(message: string): void {
    this.el.textContent = message;
    this.el.hidden = false;
  }

  clear(): void {
    this.el.hidden = true;
    this.el.textContent = "";
  }
}
