import { ApiClient, ApiError } from "./api.js";
import { ConsoleSession } from "./session.js";
import { renderError, renderHistory, renderStats } from "./render.js";

export interface ViewUpdate {
  historyHtml: string;
  errorHtml: string;
}

/** Ask one question and report what the view should show. Failures keep
 * the history intact and surface as an inline banner. */
export async function submitQuestion(
  session: ConsoleSession,
  client: ApiClient,
  text: string,
): Promise<ViewUpdate> {
  const question = text.trim();
  if (!session.canSubmit(question)) {
    return { historyHtml: renderHistory(session.history), errorHtml: "" };
  }
  session.pending = true;
  try {
    const response = await client.ask(question);
    session.record(question, response);
    return { historyHtml: renderHistory(session.history), errorHtml: "" };
  } catch (err) {
    const message = err instanceof ApiError ? err.message : String(err);
    return {
      historyHtml: renderHistory(session.history),
      errorHtml: renderError(message),
    };
  } finally {
    session.pending = false;
  }
}

export async function refreshStats(client: ApiClient): Promise<string> {
  try {
    return renderStats(await client.ontologyStats());
  } catch (err) {
    const message = err instanceof ApiError ? err.message : String(err);
    return renderError(message);
  }
}
