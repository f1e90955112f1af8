/**
 * View state and controller for the chat-and-inspect loop.
 *
 * Pure application logic: the DOM layer renders whatever this module
 * holds. The transcript keeps client sequence numbers so its order
 * always equals submission order, and at most one change request is in
 * flight per session (submission is refused while pending).
 */

import { ServiceApiError, ServiceClient } from "./api.js";
import { renderDot, RenderResult } from "./render.js";

export type TranscriptRole = "user" | "service" | "error";

export interface TranscriptEntry {
  seq: number;
  role: TranscriptRole;
  text: string;
}

export interface ViewState {
  sessionId: string | null;
  codeText: string;
  chatTranscript: TranscriptEntry[];
  currentDot: string;
  lastDiffMessages: string[];
  contextToggle: boolean;
  pending: boolean;
}

export class AppController {
  readonly state: ViewState = {
    sessionId: null,
    codeText: "",
    chatTranscript: [],
    currentDot: "",
    lastDiffMessages: [],
    contextToggle: false,
    pending: false,
  };

  private nextSeq = 0;

  constructor(private readonly client: ServiceClient) {}

  setCode(code: string): void {
    this.state.codeText = code;
  }

  canUpload(): boolean {
    return this.state.codeText.trim().length > 0 && !this.state.pending;
  }

  canSend(): boolean {
    return this.state.sessionId !== null && !this.state.pending;
  }

  toggleContext(): void {
    this.state.contextToggle = !this.state.contextToggle;
  }

  private append(role: TranscriptRole, text: string): TranscriptEntry {
    const entry = { seq: this.nextSeq, role, text };
    this.nextSeq += 1;
    this.state.chatTranscript.push(entry);
    this.state.chatTranscript.sort((a, b) => a.seq - b.seq);
    return entry;
  }

  /** Start a session from the pasted or uploaded code. */
  async uploadCode(code?: string): Promise<void> {
    if (code !== undefined) {
      this.setCode(code);
    }
    if (!this.canUpload()) {
      return;
    }
    this.state.pending = true;
    try {
      const session = await this.client.createSession(this.state.codeText);
      this.state.sessionId = session.sessionId;
      this.state.chatTranscript = [];
      this.state.lastDiffMessages = [];
      this.state.currentDot = await this.client.getDot(session.sessionId);
    } catch (error) {
      this.append("error", describeError(error));
    } finally {
      this.state.pending = false;
    }
  }

  /** Send one change request; failures leave the graph untouched. */
  async sendRequest(text: string): Promise<void> {
    if (!this.canSend() || text.trim() === "") {
      return;
    }
    const sessionId = this.state.sessionId!;
    this.state.pending = true;
    this.append("user", text);
    try {
      const change = await this.client.postChange(
        sessionId,
        text,
        this.state.contextToggle,
      );
      this.state.currentDot = change.dot;
      this.state.lastDiffMessages = change.diff.messages;
      this.append(
        "service",
        change.diff.messages.length > 0
          ? change.diff.messages.join("\n")
          : "No structural changes.",
      );
    } catch (error) {
      this.append("error", describeError(error));
    } finally {
      this.state.pending = false;
    }
  }

  /** SVG for the current graph, or the raw-text fallback. */
  renderCurrentGraph(): RenderResult {
    return renderDot(this.state.currentDot);
  }
}

export function describeError(error: unknown): string {
  if (error instanceof ServiceApiError) {
    const detail = error.body.detail ? ` (${error.body.detail})` : "";
    return `${error.body.message}${detail}`;
  }
  return error instanceof Error ? error.message : String(error);
}
