// DOM wiring: login form, audio player, two caption cards, three buttons.

import { AnnotationApi, Choice } from "./api.js";
import { RaterSession } from "./session.js";

const api = new AnnotationApi("");
let session: RaterSession | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const loginForm = el<HTMLFormElement>("login");
const raterInput = el<HTMLInputElement>("rater-id");
const task = el<HTMLDivElement>("task");
const progress = el<HTMLSpanElement>("progress");
const notice = el<HTMLDivElement>("notice");
const audio = el<HTMLAudioElement>("player");
const captionA = el<HTMLDivElement>("caption-a");
const captionB = el<HTMLDivElement>("caption-b");
const buttons: Record<Choice, HTMLButtonElement> = {
  A: el<HTMLButtonElement>("choose-a"),
  B: el<HTMLButtonElement>("choose-b"),
  NotSure: el<HTMLButtonElement>("choose-unsure"),
};
const errorBox = el<HTMLDivElement>("error");
const retryButton = el<HTMLButtonElement>("retry");
const doneBox = el<HTMLDivElement>("done");
const gateHint = el<HTMLDivElement>("gate-hint");

function render(): void {
  if (!session) return;
  const s = session.state;
  progress.textContent = session.progressLabel();
  notice.textContent = session.lastNotice ? session.lastNotice.message : "";
  notice.hidden = session.lastNotice === null;
  errorBox.hidden = s.kind !== "error";
  doneBox.hidden = s.kind !== "done";
  task.hidden = !(s.kind === "judging" || s.kind === "submitting");

  if (s.kind === "judging" || s.kind === "submitting") {
    captionA.textContent = s.pair.caption_a;
    captionB.textContent = s.pair.caption_b;
    const src = api.audioUrl(s.pair);
    if (audio.getAttribute("src") !== src) {
      audio.setAttribute("src", src);
      audio.load();
    }
  }
  if (s.kind === "error") {
    el<HTMLSpanElement>("error-message").textContent = s.message;
  }
  const enabled = session.canSubmit();
  for (const button of Object.values(buttons)) {
    button.disabled = !enabled;
  }
  gateHint.hidden = enabled || s.kind !== "judging";
}

loginForm.addEventListener("submit", (event) => {
  event.preventDefault();
  const raterId = raterInput.value.trim();
  if (!raterId) return;
  session = new RaterSession(api, raterId);
  session.onChange = render;
  loginForm.hidden = true;
  void session.start();
});

audio.addEventListener("play", () => {
  session?.markAudioStarted();
  render();
});

for (const [choice, button] of Object.entries(buttons) as [Choice, HTMLButtonElement][]) {
  button.addEventListener("click", () => {
    void session?.submit(choice);
  });
}

retryButton.addEventListener("click", () => {
  void session?.retry();
});
