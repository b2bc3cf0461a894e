"""Walk through the proof kernel by hand: parse, derive, switch, contradict.

Run:  python demos/demo_proof_engine.py
"""

from logictutor import (
    Mode,
    apply_step,
    catalog,
    default_curriculum,
    format_formula,
    start_problem,
    switch_strategy,
)

curriculum = default_curriculum()
problem = curriculum.by_id("pre_1")  # givens: p -> q, ~q; conclusion: ~p

print("Rule catalog:")
for rule in catalog():
    print(f"  {rule.name:8} ({rule.arity} premise{'s' if rule.arity > 1 else ''})  {rule.description}")

print(f"\nProblem {problem.id}: from", [format_formula(g) for g in problem.givens],
      "derive", format_formula(problem.conclusion))

# Forward chaining: one modus tollens closes it.
state = start_problem(problem)
state = apply_step(state, "MT", ["g0", "g1"])
print(f"FC: MT(g0, g1) -> {format_formula(state.nodes[-1].formula)}  completed={state.completed}")

# The same problem by contradiction: switch, then derive bottom.
state = start_problem(problem)
state = switch_strategy(state, elapsed_s=35.0)
print(f"\nAfter switching: mode={state.mode.value}, premises now "
      f"{[format_formula(f) for f in state.working_premises]}, target={format_formula(state.target)}")
for rule, refs in [("DN_E", ["g2"]), ("MP", ["g0", "n0"]), ("CONTRA", ["n1", "g1"])]:
    state = apply_step(state, rule, refs)
    print(f"  {rule}({', '.join(refs)}) -> {format_formula(state.nodes[-1].formula)}")
print(f"completed={state.completed} after {state.action_count} actions "
      f"(switch recorded at action {state.switch_record.action_index})")

# A wrong step is rejected and counted, never applied.
fresh = start_problem(problem)
rejected = apply_step(fresh, "MP", ["g0", "g1"])  # second premise is ~q, not p
print(f"\nWrong step: nodes={len(rejected.nodes)}, rejected_attempts={rejected.rejected_attempts}")

assert state.mode is Mode.BC
