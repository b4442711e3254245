import type { AskResponse } from "./types.js";

export interface HistoryEntry {
  question: string;
  response: AskResponse;
}

/** Client-side session state: an append-only ask history plus the
 * single-flight guard for the submit button. */
export class ConsoleSession {
  readonly baseUrl: string;
  pending = false;
  private entries: HistoryEntry[] = [];

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl;
  }

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }

  record(question: string, response: AskResponse): void {
    this.entries.push({ question, response });
  }

  canSubmit(text: string): boolean {
    return text.trim().length > 0 && !this.pending;
  }
}
