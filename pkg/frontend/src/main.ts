import { ApiClient, resolveBaseUrl } from "./api.js";
import { ConsoleSession } from "./session.js";
import { refreshStats, submitQuestion } from "./controller.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function start(): void {
  const baseUrl = resolveBaseUrl(window.location.search);
  const client = new ApiClient(baseUrl);
  const session = new ConsoleSession(baseUrl);

  const form = byId<HTMLFormElement>("ask-form");
  const input = byId<HTMLInputElement>("question");
  const submit = byId<HTMLButtonElement>("submit");
  const history = byId<HTMLDivElement>("history");
  const error = byId<HTMLDivElement>("error");
  const stats = byId<HTMLDivElement>("stats");
  byId<HTMLSpanElement>("endpoint").textContent = baseUrl;

  const syncSubmit = () => {
    submit.disabled = !session.canSubmit(input.value);
  };
  input.addEventListener("input", syncSubmit);
  syncSubmit();

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value;
    if (!session.canSubmit(text)) {
      return;
    }
    syncSubmit();
    void submitQuestion(session, client, text).then((update) => {
      history.innerHTML = update.historyHtml;
      error.innerHTML = update.errorHtml;
      if (!update.errorHtml) {
        input.value = "";
      }
      syncSubmit();
      history.lastElementChild?.scrollIntoView({ block: "end" });
    });
  });

  const stats_refresh = () => {
    void refreshStats(client).then((html) => {
      stats.innerHTML = html;
    });
  };
  byId<HTMLButtonElement>("stats-refresh").addEventListener("click", stats_refresh);
  stats_refresh();
}

document.addEventListener("DOMContentLoaded", start);
