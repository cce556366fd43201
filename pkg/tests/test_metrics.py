import itertools
import math
import random

import numpy as np
import pytest

from activeanno.errors import EvalError
from activeanno.metrics import (
    centroid_classifier_cv,
    centroid_classifier_train_eval,
    cohens_kappa,
    macro_f1,
    map_labels,
    mean_std,
)


def labeling_from_table(table):
    """Build two labelings from a contingency table (rows: A, cols: B)."""
    a, b = {}, {}
    idx = 0
    for i, row in enumerate(table):
        for j, count in enumerate(row):
            for _ in range(count):
                a[f"x{idx}"] = f"c{i}"
                b[f"x{idx}"] = f"c{j}"
                idx += 1
    return a, b


def kappa_oracle(table):
    """Direct formula evaluation on the contingency table."""
    n = sum(sum(row) for row in table)
    p_o = sum(table[i][i] for i in range(len(table))) / n
    p_e = sum(
        (sum(table[i]) / n) * (sum(row[i] for row in table) / n)
        for i in range(len(table))
    )
    return (p_o - p_e) / (1 - p_e)


def test_identical_labelings_give_one():
    labels = {f"x{i}": f"c{i % 3}" for i in range(30)}
    assert cohens_kappa(labels, dict(labels)) == 1.0


def test_hand_computed_contingency_table():
    table = [[20, 5], [10, 15]]
    a, b = labeling_from_table(table)
    assert cohens_kappa(a, b) == pytest.approx(kappa_oracle(table), abs=1e-12)


def test_kappa_symmetric():
    table = [[12, 3, 1], [2, 9, 4], [0, 5, 14]]
    a, b = labeling_from_table(table)
    assert cohens_kappa(a, b) == pytest.approx(cohens_kappa(b, a), abs=1e-12)


def test_random_permutation_kappa_near_zero():
    rng = random.Random(42)
    n = 4000
    labels = {f"x{i}": ("a" if i < n // 2 else "b") for i in range(n)}
    values = list(labels.values())
    rng.shuffle(values)
    shuffled = {f"x{i}": v for i, v in enumerate(values)}
    assert abs(cohens_kappa(labels, shuffled)) < 0.05


def test_chance_agreement_one_edge_cases():
    # both constant on the same label: p_e = 1 and p_o = 1 -> kappa 1
    same = {"a": "x", "b": "x"}
    assert cohens_kappa(same, dict(same)) == 1.0
    # constant on different labels: p_e = 0, p_o = 0 -> kappa 0
    other = {"a": "y", "b": "y"}
    assert cohens_kappa(same, other) == 0.0


def test_kappa_input_validation():
    with pytest.raises(EvalError):
        cohens_kappa({}, {})
    with pytest.raises(EvalError):
        cohens_kappa({"a": "x"}, {"b": "x"})


# --- macro F1 ----------------------------------------------------------


def test_perfect_prediction():
    gold = {f"x{i}": f"c{i % 4}" for i in range(40)}
    assert macro_f1(dict(gold), gold) == 1.0


def test_all_one_class_on_two_balanced_classes():
    gold = {f"x{i}": ("a" if i < 10 else "b") for i in range(20)}
    pred = {k: "a" for k in gold}
    assert macro_f1(pred, gold) == pytest.approx(1 / 3, abs=1e-12)


def test_disjoint_class_vocabularies_give_zero():
    gold = {f"x{i}": "a" for i in range(5)}
    pred = {f"x{i}": "z" for i in range(5)}
    assert macro_f1(pred, gold) == 0.0


def test_f1_invariant_under_bijection():
    rng = random.Random(3)
    gold = {f"x{i}": f"c{rng.randrange(3)}" for i in range(60)}
    pred = {k: f"c{rng.randrange(3)}" for k in gold}
    base = macro_f1(pred, gold)
    rename = {"c0": "zebra", "c1": "apple", "c2": "mango"}
    assert macro_f1(
        {k: rename[v] for k, v in pred.items()}, {k: rename[v] for k, v in gold.items()}
    ) == pytest.approx(base, abs=1e-12)


def test_f1_range():
    rng = random.Random(9)
    gold = {f"x{i}": f"c{rng.randrange(4)}" for i in range(50)}
    pred = {k: f"c{rng.randrange(4)}" for k in gold}
    assert 0.0 <= macro_f1(pred, gold) <= 1.0


# --- label mapping -------------------------------------------------------


def test_identity_mapping_for_identical_sets():
    gold = {f"x{i}": f"c{i % 3}" for i in range(30)}
    mapping = map_labels(dict(gold), gold)
    assert mapping.mapping == {"c0": "c0", "c1": "c1", "c2": "c2"}
    assert mapping.unmapped == []


def test_split_class_maps_both_to_gold():
    gold = {f"x{i}": "add" for i in range(10)}
    session = {f"x{i}": ("add_a" if i < 6 else "add_b") for i in range(10)}
    mapping = map_labels(session, gold)
    assert mapping.mapping == {"add_a": "add", "add_b": "add"}


def exhaustive_mapping_oracle(session, gold):
    """Try every mapping of session labels to gold labels, maximize overlap."""
    session_labels = sorted(set(session.values()))
    gold_labels = sorted(set(gold.values()))
    best, best_score = None, -1
    for assignment in itertools.product(gold_labels, repeat=len(session_labels)):
        table = dict(zip(session_labels, assignment))
        score = sum(1 for i in session if table[session[i]] == gold[i])
        if score > best_score:
            best, best_score = table, score
    return best, best_score


def test_greedy_matches_exhaustive_oracle_small():
    rng = random.Random(7)
    for _ in range(5):
        gold = {f"x{i}": f"g{rng.randrange(3)}" for i in range(40)}
        session = {f"x{i}": f"s{rng.randrange(4)}" for i in range(40)}
        mapping = map_labels(session, gold)
        _oracle, oracle_score = exhaustive_mapping_oracle(session, gold)
        got_score = sum(
            1 for i in session if mapping.mapping[session[i]] == gold[i]
        )
        assert got_score == oracle_score


def test_manual_override_takes_precedence():
    gold = {f"x{i}": "keep" for i in range(4)}
    session = {f"x{i}": "weird" for i in range(4)}
    mapping = map_labels(session, gold, overrides={"weird": None})
    assert mapping.mapping["weird"] is None
    assert "weird" in mapping.unmapped
    assert mapping.apply(session) == {}


def test_mapping_tie_is_lexicographic():
    gold = {"a": "g1", "b": "g2"}
    session = {"a": "s", "b": "s"}
    assert map_labels(session, gold).mapping["s"] == "g1"


# --- centroid classifier ---------------------------------------------------


def test_training_point_at_centroid_classifies_correctly():
    train = [("alpha alpha", "a"), ("beta beta", "b")]
    test = [("alpha alpha", "a"), ("beta beta", "b")]
    assert centroid_classifier_train_eval(train, test) == 1.0


def test_linearly_separable_toy_set():
    train = [
        ("book a ticket", "booking"),
        ("book two tickets", "booking"),
        ("hello there friend", "greeting"),
        ("hello hello", "greeting"),
    ]
    test = [("book the ticket now", "booking"), ("hello again", "greeting")]
    assert centroid_classifier_train_eval(train, test) == 1.0


def test_cv_deterministic_and_bounded():
    rng = random.Random(5)
    words = {"a": "alpha beta", "b": "gamma delta", "c": "epsilon zeta"}
    rows = [(f"{words[c]} w{rng.randrange(8)}", c) for c in "abc" for _ in range(15)]
    one = centroid_classifier_cv(rows, folds=5)
    two = centroid_classifier_cv(rows, folds=5)
    assert one == two
    assert 0.0 <= one <= 1.0


def test_classifier_requires_data():
    with pytest.raises(EvalError):
        centroid_classifier_train_eval([], [("x", "a")])
    with pytest.raises(EvalError):
        centroid_classifier_train_eval([("x", "a")], [])


def test_mean_std_nan_handling():
    mean, std = mean_std([1.0, 3.0, float("nan")])
    assert mean == 2.0
    assert std == 1.0
    mean, std = mean_std([float("nan")])
    assert math.isnan(mean) and math.isnan(std)
    assert np.isclose(mean_std([2.0, 2.0])[1], 0.0)
