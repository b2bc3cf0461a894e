/**
 * DOM rendering for the proof canvas.
 *
 * Layout follows the tutor's convention: premises at the top, derived
 * lines in the middle, the goal slot at the bottom.  In FC the goal slot
 * holds the conclusion; after a switch it holds the contradiction constant
 * and the negated conclusion appears among the premises.
 */

import { RULES } from "./api.js";
import { ViewState, rulePickerEnabled, switchEnabled } from "./state.js";

export interface Handlers {
  onToggleRef(ref: string): void;
  onRuleChange(rule: string): void;
  onApplyStep(): void;
  onSwitch(): void;
  onAdvance(): void;
  onPromptAccept(): void;
  onPromptDismiss(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function premiseRow(
  formula: string,
  ref: string,
  state: ViewState,
  handlers: Handlers,
  extra = "",
): HTMLElement {
  const row = el("li", `formula-row ${extra}`.trim());
  row.dataset.ref = ref;
  const tag = el("span", "ref-tag", ref);
  const text = el("span", "formula-text", formula);
  row.append(tag, text);
  if (state.selection.includes(ref)) {
    row.classList.add("selected");
  }
  row.addEventListener("click", () => handlers.onToggleRef(ref));
  return row;
}

function renderProgress(state: ViewState): HTMLElement {
  const problem = state.problem;
  const map = el("div", "progress-map");
  if (problem === null) {
    return map;
  }
  map.append(el("span", "phase-badge", problem.phase));
  if (problem.phase === "Training" && problem.level !== null && problem.ordinal !== null) {
    for (let level = 1; level <= 5; level += 1) {
      const row = el("div", "progress-level");
      row.append(el("span", "progress-level-label", `L${level}`));
      for (let ordinal = 1; ordinal <= 4; ordinal += 1) {
        const cell = el("span", "progress-cell", "");
        if (level < problem.level || (level === problem.level && ordinal < problem.ordinal)) {
          cell.classList.add("done");
        } else if (level === problem.level && ordinal === problem.ordinal) {
          cell.classList.add("current");
        }
        row.append(cell);
      }
      map.append(row);
    }
  }
  return map;
}

function renderWorkedExample(state: ViewState, handlers: Handlers): HTMLElement {
  const problem = state.problem;
  const panel = el("div", "we-panel");
  if (problem === null || !problem.worked_example) {
    panel.classList.add("hidden");
    return panel;
  }
  panel.append(el("h3", "we-title", "Worked example: solving by contradiction"));
  panel.append(
    el(
      "p",
      "we-progress",
      `Step ${problem.we_steps_revealed} of ${problem.we_steps_total} revealed`,
    ),
  );
  if (problem.we_commentary !== null) {
    panel.append(el("p", "we-commentary", problem.we_commentary));
  }
  const next = el("button", "we-next-button", problem.completed ? "Continue" : "Show next step");
  next.addEventListener("click", () => handlers.onAdvance());
  panel.append(next);
  return panel;
}

export function render(root: HTMLElement, state: ViewState, handlers: Handlers): void {
  root.textContent = "";
  const problem = state.problem;
  if (state.sessionDone) {
    root.append(el("div", "session-done", "Session complete. Thanks for working through it!"));
    return;
  }
  if (problem === null) {
    root.append(el("div", "loading", "Loading problem..."));
    return;
  }

  const header = el("div", "header");
  header.append(el("span", "problem-id", problem.problem_id));
  header.append(el("span", `mode-badge mode-${problem.mode.toLowerCase()}`, problem.mode));
  header.append(el("span", "action-counter", `${problem.action_count} actions`));
  header.append(renderProgress(state));
  root.append(header);

  // Prompt banner: advisory, so dismiss hides it without any request.
  const banner = el("div", "prompt-banner");
  if (state.promptVisible) {
    banner.append(el("p", "prompt-text", state.promptText));
    const accept = el("button", "prompt-accept", "Switch to backward chaining");
    accept.addEventListener("click", () => handlers.onPromptAccept());
    const dismiss = el("button", "prompt-dismiss", "Keep going forward");
    dismiss.addEventListener("click", () => handlers.onPromptDismiss());
    banner.append(accept, dismiss);
  } else {
    banner.classList.add("hidden");
  }
  root.append(banner);

  root.append(renderWorkedExample(state, handlers));

  const canvas = el("div", "proof-canvas");
  const premises = el("ul", "premise-list");
  problem.givens.forEach((formula, index) => {
    const isNegatedConclusion = problem.mode === "BC" && index === problem.givens.length - 1;
    premises.append(
      premiseRow(formula, `g${index}`, state, handlers, isNegatedConclusion ? "negated-conclusion" : ""),
    );
  });
  canvas.append(el("h4", "section-label", "Premises"), premises);

  const derived = el("ul", "node-list");
  problem.nodes.forEach((node, index) => {
    const row = premiseRow(node.formula, `n${index}`, state, handlers, "derived");
    row.append(el("span", "justification", `${node.rule_name}(${node.parent_refs.join(", ")})`));
    derived.append(row);
  });
  canvas.append(el("h4", "section-label", "Derived"), derived);

  const goal = el("div", "goal-slot");
  goal.append(el("span", "goal-label", problem.mode === "FC" ? "Goal" : "Derive contradiction"));
  goal.append(el("span", "goal-formula", problem.target));
  if (problem.completed) {
    goal.classList.add("completed");
  }
  canvas.append(goal);
  root.append(canvas);

  const controls = el("div", "controls");
  const picker = el("select", "rule-picker") as HTMLSelectElement;
  for (const rule of RULES) {
    const option = document.createElement("option");
    option.value = rule.name;
    option.textContent = `${rule.name} - ${rule.label} (${rule.arity})`;
    picker.append(option);
  }
  picker.value = state.selectedRule;
  picker.disabled = !rulePickerEnabled(state);
  picker.addEventListener("change", () => handlers.onRuleChange(picker.value));

  const apply = el("button", "apply-button", "Apply rule");
  apply.disabled = !rulePickerEnabled(state);
  apply.addEventListener("click", () => handlers.onApplyStep());

  const switchButton = el("button", "switch-button", "Switch to backward chaining");
  switchButton.disabled = !switchEnabled(state);
  switchButton.addEventListener("click", () => handlers.onSwitch());

  const advance = el("button", "advance-button", "Next problem");
  advance.disabled = !problem.completed || problem.worked_example;
  advance.addEventListener("click", () => handlers.onAdvance());

  controls.append(picker, apply, switchButton, advance);
  root.append(controls);

  const toast = el("div", "error-toast", state.lastError ?? "");
  if (state.lastError === null) {
    toast.classList.add("hidden");
  }
  root.append(toast);
}
