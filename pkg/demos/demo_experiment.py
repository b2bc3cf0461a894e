"""Simulate the full study population and print the evaluation analytics.

Five behaviour groups work pretest, training (with worked examples and
switch prompts in the experimental condition), and posttest; everything
below is recomputed from the event logs.

Run:  python demos/demo_experiment.py        (~10 s)
"""

from logictutor import PopulationGroup, PopulationSpec, default_curriculum, run_experiment

spec = PopulationSpec(
    groups=(
        PopulationGroup(policy="rote", count=35, condition="Experimental"),
        PopulationGroup(policy="dabbler", count=26, condition="Experimental"),
        PopulationGroup(policy="rote", count=25, condition="Control"),
        PopulationGroup(policy="dabbler", count=16, condition="Control"),
        PopulationGroup(policy="selective", count=26, condition="SelectiveOriginal"),
    ),
    master_seed=20240801,
)

result = run_experiment(spec, default_curriculum())
report = result.report

print("Population:", report["population"]["by_group"])
chi = report["chi_square"]
print(f"Condition balance over Rote/Dabbler: chi2(1) = {chi['statistic']:.3f}, p = {chi['p_value']:.2f}")

for phase in ("training", "posttest"):
    print(f"\nSwitch behaviour, {phase} (percent of problems):")
    print(f"  {'group':14} {'no':>7} {'early':>7} {'late':>7}")
    profiles = report[phase]["profiles"]
    ordered = sorted(profiles, key=lambda g: -profiles[g]["pct_early"])
    for group in ordered:
        p = profiles[group]
        print(f"  {group:14} {p['pct_no']:7.1f} {p['pct_early']:7.1f} {p['pct_late']:7.1f}")
    anova = report[phase]["early_fraction_anova"]
    print(f"  one-way ANOVA on per-student early-switch fractions: "
          f"F({anova['df'][0]},{anova['df'][1]}) = {anova['F']:.1f}, p = {anova['p_value']:.2e}")

print("\nMean scores by group:")
print(f"  {'group':14} {'pre':>6} {'post':>6} {'iso':>6} {'nlg':>7}")
for group, scores in report["scores"].items():
    nlg = f"{scores['nlg']:.3f}" if scores["nlg"] is not None else "   n/a"
    print(f"  {group:14} {scores['pre']:6.1f} {scores['post']:6.1f} {scores['iso_post']:6.1f} {nlg:>7}")
