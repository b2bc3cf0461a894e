"""Metacognitive grouping from pretest behavior.

Students are labeled Rote (never switches strategy), Dabbler (switches, but
not at the right time), or Selective (switches early when it helps) before
training starts, from how they worked the two pretest problems.  Two
classifiers are provided: a transparent rule baseline that applies the
group definitions directly, and a from-scratch random forest (bagged Gini
trees, sqrt-feature subsampling) trainable on labeled populations.

The 16-entry feature vector concatenates, per pretest problem:
switched, switch action index, switch elapsed seconds, total actions,
rejected fraction, solve time, completed -- followed by the aggregates
switch count and earliest switch action.  Missing switches encode as -1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .analytics import EARLY_SWITCH_ACTION_THRESHOLD
from .events import EventRecord, EventType

__all__ = [
    "GroupLabel",
    "GROUP_ORDER",
    "FEATURE_COUNT",
    "FEATURE_NAMES",
    "Forest",
    "extract_features",
    "rule_baseline",
    "train_forest",
    "predict",
    "evaluate",
    "save_forest",
    "load_forest",
]


class GroupLabel(str, Enum):
    ROTE = "Rote"
    DABBLER = "Dabbler"
    SELECTIVE = "Selective"


# Tie-break order: prefer the group that receives the most support.
GROUP_ORDER: tuple[GroupLabel, ...] = (
    GroupLabel.ROTE,
    GroupLabel.DABBLER,
    GroupLabel.SELECTIVE,
)

_PER_PROBLEM = [
    "switched",
    "switch_action_index",
    "switch_elapsed_s",
    "total_actions",
    "rejected_fraction",
    "solve_time_s",
    "completed",
]
FEATURE_NAMES = tuple(
    [f"p{i}_{name}" for i in (1, 2) for name in _PER_PROBLEM]
    + ["switch_count", "earliest_switch_action"]
)
FEATURE_COUNT = len(FEATURE_NAMES)  # 16


def extract_features(pretest_log: list[EventRecord]) -> np.ndarray:
    """Deterministic 16-feature vector from the two-problem pretest log."""
    order: list[str] = []
    per_problem: dict[str, list[EventRecord]] = {}
    for record in pretest_log:
        if record.event_type == EventType.PROBLEM_STARTED:
            order.append(record.problem_id)
            per_problem[record.problem_id] = []
        if record.problem_id in per_problem:
            per_problem[record.problem_id].append(record)
    if len(order) != 2:
        raise ValueError(f"pretest log must cover exactly 2 problems, found {len(order)}")
    features: list[float] = []
    switch_indices: list[float] = []
    for problem_id in order:
        records = per_problem[problem_id]
        accepted = sum(1 for r in records if r.event_type == EventType.STEP_APPLIED)
        rejected = sum(1 for r in records if r.event_type == EventType.STEP_REJECTED)
        switches = [r for r in records if r.event_type == EventType.STRATEGY_SWITCHED]
        completions = [r for r in records if r.event_type == EventType.PROBLEM_COMPLETED]
        started = records[0]
        if switches:
            switch_index = float(switches[0].payload["action_index"])
            switch_elapsed = float(switches[0].payload["elapsed_s"])
            switch_indices.append(switch_index)
        else:
            switch_index = -1.0
            switch_elapsed = -1.0
        if completions:
            solve_time = float(completions[0].payload["elapsed_s"])
        else:
            solve_time = (records[-1].timestamp_ms - started.timestamp_ms) / 1000.0
        attempts = accepted + rejected
        features.extend(
            [
                1.0 if switches else 0.0,
                switch_index,
                switch_elapsed,
                float(attempts + len(switches)),
                rejected / attempts if attempts else 0.0,
                solve_time,
                1.0 if completions else 0.0,
            ]
        )
    features.append(float(len(switch_indices)))
    features.append(min(switch_indices) if switch_indices else -1.0)
    vector = np.asarray(features, dtype=float)
    assert vector.shape == (FEATURE_COUNT,)
    return vector


def rule_baseline(features: np.ndarray) -> GroupLabel:
    """Apply the group definitions directly to the aggregate switch features."""
    switch_count = features[14]
    earliest = features[15]
    if switch_count == 0:
        return GroupLabel.ROTE
    if 0 <= earliest <= EARLY_SWITCH_ACTION_THRESHOLD:
        return GroupLabel.SELECTIVE
    return GroupLabel.DABBLER


# ---------------------------------------------------------------------------
# Random forest
# ---------------------------------------------------------------------------


@dataclass
class _Tree:
    # Parallel node arrays; children are -1 at leaves.
    feature: list[int]
    threshold: list[float]
    left: list[int]
    right: list[int]
    counts: list[list[int]]

    def predict_counts(self, x: np.ndarray) -> list[int]:
        node = 0
        while self.left[node] != -1:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return self.counts[node]


@dataclass
class Forest:
    trees: list[_Tree]
    n_trees: int
    max_depth: int
    seed: int


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.square(p).sum())


def _build_tree(
    x: np.ndarray,
    y: np.ndarray,
    indices: np.ndarray,
    max_depth: int,
    n_split_features: int,
    rng: np.random.Generator,
) -> _Tree:
    tree = _Tree([], [], [], [], [])

    def leaf(node_indices: np.ndarray) -> int:
        counts = np.bincount(y[node_indices], minlength=len(GROUP_ORDER))
        tree.feature.append(-1)
        tree.threshold.append(0.0)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.counts.append([int(c) for c in counts])
        return len(tree.feature) - 1

    def best_split_on(feature: int, node_indices: np.ndarray) -> tuple[float, float] | None:
        values = x[node_indices, feature]
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        boundaries = np.nonzero(np.diff(sorted_values) > 0)[0]
        if boundaries.size == 0:
            return None
        # Prefix class counts give every candidate split's Gini in one pass.
        one_hot = np.zeros((len(node_indices), len(GROUP_ORDER)))
        one_hot[np.arange(len(node_indices)), y[node_indices][order]] = 1.0
        prefix = np.cumsum(one_hot, axis=0)
        left = prefix[boundaries]
        total = prefix[-1]
        right = total - left
        n_left = left.sum(axis=1)
        n_right = right.sum(axis=1)
        gini_left = 1.0 - np.square(left / n_left[:, None]).sum(axis=1)
        gini_right = 1.0 - np.square(right / n_right[:, None]).sum(axis=1)
        weighted = (n_left * gini_left + n_right * gini_right) / len(node_indices)
        pick = int(np.argmin(weighted))
        threshold = (sorted_values[boundaries[pick]] + sorted_values[boundaries[pick] + 1]) / 2.0
        return float(weighted[pick]), float(threshold)

    def grow(node_indices: np.ndarray, depth: int) -> int:
        labels = y[node_indices]
        if depth >= max_depth or len(node_indices) < 2 or len(np.unique(labels)) == 1:
            return leaf(node_indices)
        candidates = rng.choice(x.shape[1], size=n_split_features, replace=False)
        parent_counts = np.bincount(labels, minlength=len(GROUP_ORDER))
        best = (_gini(parent_counts), -1, 0.0)
        for feature in sorted(int(c) for c in candidates):
            found = best_split_on(feature, node_indices)
            if found is not None and found[0] < best[0] - 1e-12:
                best = (found[0], feature, found[1])
        if best[1] == -1:
            return leaf(node_indices)
        _, feature, threshold = best
        mask = x[node_indices, feature] <= threshold
        node = leaf(node_indices)  # placeholder row; rewritten below
        tree.feature[node] = feature
        tree.threshold[node] = threshold
        tree.left[node] = grow(node_indices[mask], depth + 1)
        tree.right[node] = grow(node_indices[~mask], depth + 1)
        return node

    grow(indices, 0)
    return tree


def train_forest(
    dataset: list[tuple[np.ndarray, GroupLabel]],
    n_trees: int = 100,
    max_depth: int = 6,
    seed: int = 0,
) -> Forest:
    """Bagged Gini trees over bootstrap samples; deterministic for a fixed seed."""
    label_to_index = {label: i for i, label in enumerate(GROUP_ORDER)}
    x = np.asarray([fv for fv, _ in dataset], dtype=float)
    y = np.asarray([label_to_index[label] for _, label in dataset], dtype=int)
    counts = np.bincount(y, minlength=len(GROUP_ORDER))
    for label, count in zip(GROUP_ORDER, counts):
        if count < 10:
            raise ValueError(f"need at least 10 examples of {label.value}, have {int(count)}")
    n_split_features = max(1, int(np.sqrt(x.shape[1])))
    rng = np.random.default_rng(seed)
    trees = []
    for _ in range(n_trees):
        bootstrap = rng.integers(0, len(dataset), size=len(dataset))
        trees.append(_build_tree(x, y, bootstrap, max_depth, n_split_features, rng))
    return Forest(trees=trees, n_trees=n_trees, max_depth=max_depth, seed=seed)


def predict(forest: Forest, features: np.ndarray) -> tuple[GroupLabel, dict[GroupLabel, float]]:
    """Majority vote over trees; ties break toward the earlier group in order."""
    votes = np.zeros(len(GROUP_ORDER), dtype=int)
    x = np.asarray(features, dtype=float)
    for tree in forest.trees:
        counts = np.asarray(tree.predict_counts(x))
        votes[int(np.argmax(counts))] += 1  # argmax takes the first maximum
    winner = GROUP_ORDER[int(np.argmax(votes))]
    shares = {label: float(v) / len(forest.trees) for label, v in zip(GROUP_ORDER, votes)}
    return winner, shares


def evaluate(
    forest: Forest, dataset: list[tuple[np.ndarray, GroupLabel]]
) -> dict[str, float]:
    """Accuracy plus unweighted macro recall/precision over the three groups."""
    if not dataset:
        raise ValueError("empty evaluation dataset")
    confusion = np.zeros((len(GROUP_ORDER), len(GROUP_ORDER)), dtype=int)
    index = {label: i for i, label in enumerate(GROUP_ORDER)}
    for features, label in dataset:
        predicted, _ = predict(forest, features)
        confusion[index[label], index[predicted]] += 1
    accuracy = float(np.trace(confusion)) / float(confusion.sum())
    recalls, precisions = [], []
    for i in range(len(GROUP_ORDER)):
        actual = confusion[i, :].sum()
        predicted = confusion[:, i].sum()
        recalls.append(confusion[i, i] / actual if actual else 0.0)
        precisions.append(confusion[i, i] / predicted if predicted else 0.0)
    return {
        "accuracy": accuracy,
        "macro_recall": float(np.mean(recalls)),
        "macro_precision": float(np.mean(precisions)),
    }


def save_forest(forest: Forest, path: str | Path) -> None:
    document = {
        "classes": [label.value for label in GROUP_ORDER],
        "n_trees": forest.n_trees,
        "max_depth": forest.max_depth,
        "seed": forest.seed,
        "trees": [
            {
                "feature": tree.feature,
                "threshold": tree.threshold,
                "left": tree.left,
                "right": tree.right,
                "counts": tree.counts,
            }
            for tree in forest.trees
        ],
    }
    Path(path).write_text(json.dumps(document, sort_keys=True), encoding="utf-8")


def load_forest(path: str | Path) -> Forest:
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    if document["classes"] != [label.value for label in GROUP_ORDER]:
        raise ValueError("model file declares an unexpected class order")
    trees = [
        _Tree(
            feature=list(raw["feature"]),
            threshold=list(raw["threshold"]),
            left=list(raw["left"]),
            right=list(raw["right"]),
            counts=[list(c) for c in raw["counts"]],
        )
        for raw in document["trees"]
    ]
    return Forest(
        trees=trees,
        n_trees=document["n_trees"],
        max_depth=document["max_depth"],
        seed=document["seed"],
    )
