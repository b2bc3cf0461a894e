"""Train the decision forest on simulated pretest behaviour and inspect it.

Run:  python demos/demo_classifier.py        (~5 s)
"""

from logictutor import (
    GroupLabel,
    PRESETS,
    default_curriculum,
    evaluate_classifier,
    extract_features,
    predict,
    rule_baseline,
    run_pretest,
    train_forest,
)
from logictutor.classifier import FEATURE_NAMES

curriculum = default_curriculum()

roster = [("rote", GroupLabel.ROTE)] * 60 + [("dabbler", GroupLabel.DABBLER)] * 60 + [
    ("selective", GroupLabel.SELECTIVE)
] * 60
dataset = []
for i, (policy, label) in enumerate(roster):
    events = run_pretest(PRESETS[policy], curriculum, seed=500 + i, student_id=f"{policy}{i}")
    dataset.append((extract_features(events), label))

train, held_out = dataset[0::2], dataset[1::2]
forest = train_forest(train, n_trees=100, max_depth=6, seed=11)
metrics = evaluate_classifier(forest, held_out)
print("Held-out metrics:", {k: round(v, 3) for k, v in metrics.items()})

agreement = sum(
    1 for fv, _ in held_out if predict(forest, fv)[0] is rule_baseline(fv)
) / len(held_out)
print(f"Forest agrees with the transparent rule baseline on {agreement:.1%} of held-out students")

fv, truth = held_out[0]
label, shares = predict(forest, fv)
print(f"\nOne student (truth {truth.value}): predicted {label.value} "
      f"with vote shares {{ {', '.join(f'{k.value}: {v:.2f}' for k, v in shares.items())} }}")
print("Feature vector:")
for name, value in zip(FEATURE_NAMES, fv):
    print(f"  {name:24} {value:8.2f}")
