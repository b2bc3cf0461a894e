"""Validate the bundled corpus and print reference proofs for every problem.

Run:  python demos/demo_reference_prover.py
"""

from logictutor import Mode, default_curriculum, format_formula, solve, validate_curriculum

curriculum = default_curriculum()

print("Corpus validation:")
for report in validate_curriculum(curriculum):
    print(f"  {report.problem_id:8} {'ok' if report.ok else report.failures}")

print("\nReference proofs (shortest found per mode):")
for problem in curriculum.sequence():
    fc = solve(problem, Mode.FC)
    bc = solve(problem, Mode.BC)
    fc_rules = " ".join(step.rule_name for step in fc)
    bc_rules = " ".join(step.rule_name for step in bc)
    print(f"  {problem.id:8} ref={problem.reference_length}  FC[{len(fc)}]: {fc_rules:28}  BC[{len(bc)}]: {bc_rules}")

problem = curriculum.by_id("t5_2")
print(f"\nFull FC derivation for {problem.id} "
      f"({[format_formula(g) for g in problem.givens]} |- {format_formula(problem.conclusion)}):")
for i, step in enumerate(solve(problem, Mode.FC)):
    print(f"  n{i}: {step.rule_name}({', '.join(step.parent_refs)}) = {format_formula(step.formula)}")
