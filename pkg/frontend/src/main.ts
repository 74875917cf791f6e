import { ApiClient } from "./api.js";
import { Editor } from "./editor.js";
import { PreferencesDialog } from "./preferences.js";
import { RefineDialog } from "./refine.js";

const parseWords = (raw: string): string[] =>
  raw.split(/[\s,;]+/).map((w) => w.trim()).filter((w) => w.length > 0);

/** Boot the single-page app inside `root`. */
export function boot(root: HTMLElement, api = new ApiClient()): void {
  root.innerHTML = `
    <div class="setup">
      <h1>New session</h1>
      <p>List at least 5 words you find easy and 5 you find difficult to
         pronounce. The more words, the better the initial model.</p>
      <label>Easy words <textarea class="setup-easy" rows="2"></textarea></label>
      <label>Difficult words <textarea class="setup-hard" rows="2"></textarea></label>
      <div class="setup-error" role="alert" hidden></div>
      <button type="button" class="setup-start">Start writing</button>
    </div>
    <div class="workspace" hidden>
      <div class="toolbar">
        <span class="session-label"></span>
        <span class="toolbar-spacer"></span>
        <button type="button" class="open-refine">Refine Model</button>
        <button type="button" class="open-preferences">Preferences</button>
      </div>
      <div class="editor-container"></div>
    </div>`;

  const setup = root.querySelector(".setup") as HTMLElement;
  const workspace = root.querySelector(".workspace") as HTMLElement;
  const error = root.querySelector(".setup-error") as HTMLElement;

  (root.querySelector(".setup-start") as HTMLButtonElement).addEventListener(
    "click",
    () => {
      void (async () => {
        const easy = parseWords(
          (root.querySelector(".setup-easy") as HTMLTextAreaElement).value);
        const hard = parseWords(
          (root.querySelector(".setup-hard") as HTMLTextAreaElement).value);
        try {
          const session = await api.createSession(easy, hard);
          setup.hidden = true;
          workspace.hidden = false;
          (root.querySelector(".session-label") as HTMLElement).textContent =
            `session ${session.session_id.slice(0, 8)}`;

          const container = root.querySelector(".editor-container") as HTMLElement;
          const editor = new Editor(container, api, session.session_id);
          const preferences = new PreferencesDialog(
            root, api, session.session_id,
            () => void editor.analyzeNow(), session.threshold);
          const refine = new RefineDialog(
            root, api, session.session_id, () => void editor.analyzeNow());
          (root.querySelector(".open-preferences") as HTMLButtonElement)
            .addEventListener("click", () => preferences.open());
          (root.querySelector(".open-refine") as HTMLButtonElement)
            .addEventListener("click", () => void refine.open());
        } catch (err) {
          error.textContent = (err as Error).message;
          error.hidden = false;
        }
      })();
    },
  );
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot(document.getElementById("app") as HTMLElement);
}
