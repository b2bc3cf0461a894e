/**
 * Application wiring: one session, one poller, one render loop.
 *
 * Mutations are serialized (one in-flight request at a time) and every
 * mutation or relevant event is followed by a problem re-fetch; the client
 * never mutates proof structure locally.
 */

import { ApiClient, ApiError, RULES } from "./api.js";
import { CancelFn, EventPoller, Ticker } from "./poller.js";
import {
  ViewState,
  applyEvent,
  applyProblem,
  dismissPrompt,
  initialState,
  toggleSelection,
} from "./state.js";
import { Handlers, render } from "./ui.js";

export class TutorApp {
  private state: ViewState = initialState();
  private sessionId = "";
  private poller: EventPoller | null = null;
  private cancelTicks: CancelFn | null = null;
  private busy = false;
  private switchRequested = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly ticker: Ticker,
    private readonly pollIntervalMs = 1000,
  ) {}

  async start(studentId: string): Promise<void> {
    const session = await this.api.createSession(studentId);
    this.sessionId = session.session_id;
    const poller = new EventPoller(this.api, this.sessionId);
    poller.onEvent((record) => {
      this.state = applyEvent(this.state, record);
    });
    this.poller = poller;
    this.cancelTicks = this.ticker.every(this.pollIntervalMs, async () => {
      await poller.poll();
      await this.afterPoll();
    });
    await this.refreshProblem();
  }

  stop(): void {
    if (this.cancelTicks !== null) {
      this.cancelTicks();
      this.cancelTicks = null;
    }
  }

  /** Runs after each poll cycle: re-fetch the problem when events marked it stale. */
  private async afterPoll(): Promise<void> {
    if (this.state.needsRefresh && !this.state.sessionDone) {
      await this.refreshProblem();
    } else {
      this.render();
    }
  }

  private async refreshProblem(): Promise<void> {
    try {
      const problem = await this.api.getProblem(this.sessionId);
      this.state = applyProblem(this.state, problem);
    } catch (error) {
      if (error instanceof ApiError && error.code === "session-done") {
        this.state = { ...this.state, sessionDone: true };
      } else {
        throw error;
      }
    }
    this.render();
  }

  private render(): void {
    render(this.root, this.state, this.handlers());
  }

  private async mutate(action: () => Promise<void>): Promise<void> {
    if (this.busy) {
      return;
    }
    this.busy = true;
    try {
      this.state = { ...this.state, lastError: null };
      await action();
    } catch (error) {
      if (error instanceof ApiError) {
        this.state = { ...this.state, lastError: `${error.code}: ${error.message}` };
      } else {
        throw error;
      }
    } finally {
      this.busy = false;
    }
    await this.refreshProblem();
  }

  private handlers(): Handlers {
    return {
      onToggleRef: (ref) => {
        this.state = toggleSelection(this.state, ref);
        this.render();
      },
      onRuleChange: (rule) => {
        this.state = { ...this.state, selectedRule: rule };
        this.render();
      },
      onApplyStep: () => {
        const rule = RULES.find((candidate) => candidate.name === this.state.selectedRule);
        const refs = this.state.selection;
        if (rule === undefined || refs.length !== rule.arity) {
          this.state = {
            ...this.state,
            lastError: `${this.state.selectedRule} needs ${rule?.arity ?? "?"} selected premise(s)`,
          };
          this.render();
          return;
        }
        void this.mutate(async () => {
          const outcome = await this.api.submitStep(this.sessionId, rule.name, refs);
          if (!outcome.accepted) {
            this.state = { ...this.state, lastError: "That step does not apply; try again." };
          }
        });
      },
      onSwitch: () => {
        void this.mutate(async () => {
          await this.api.switchStrategy(this.sessionId);
        });
      },
      onAdvance: () => {
        void this.mutate(async () => {
          await this.api.advance(this.sessionId);
        });
      },
      onPromptAccept: () => {
        // Accept triggers exactly one switch request even under double-clicks.
        if (this.switchRequested) {
          return;
        }
        this.switchRequested = true;
        this.state = dismissPrompt(this.state);
        void this.mutate(async () => {
          try {
            await this.api.switchStrategy(this.sessionId);
          } finally {
            this.switchRequested = false;
          }
        });
      },
      onPromptDismiss: () => {
        this.state = dismissPrompt(this.state);
        this.render();
      },
    };
  }

  /** Exposed for tests. */
  get viewState(): ViewState {
    return this.state;
  }

  get session(): string {
    return this.sessionId;
  }
}
