"""Simulated-annotator experiments: active-annotation vs baseline throughput
and quality under an abstract time budget.

A seeded oracle annotator drives a real session: in guidelines steps it
provides the majority gold label of the pivots (wrong with probability
eps), in annotation steps it checks exactly the proposals whose gold label
matches the active label (each decision flipped with probability eps), and
in the baseline it confirms a suggestion iff the suggestion effectively
means the sentence's gold label, otherwise types a replacement. Every
annotator action debits the cost model; typing a label during a baseline
relabel costs the label-typing charge on top of the per-item charge.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

from . import baseline as bl
from . import metrics
from . import session as ss
from .data import Dataset
from .errors import EvalError

MODE_AA = "aa"
MODE_BASELINE = "baseline"

EXPAND_NEVER = "never"
EXPAND_ALWAYS = "always"
EXPAND_WHEN_PURE = "when-pure"


@dataclass(frozen=True)
class CostModel:
    """Abstract per-action time charges (arbitrary units)."""

    guidelines_label_cost: float = 10.0
    guidelines_skip_cost: float = 3.0
    binary_check_cost: float = 1.0
    baseline_item_cost: float = 5.0

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if value <= 0:
                raise EvalError(f"cost model field {name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CostModel":
        return cls(**d)


@dataclass
class RunStats:
    mode: str
    seed: int
    sentences_labelled: int
    distinct_labels: int
    budget_spent: float
    kappa_vs_gold: float
    f1_test: float
    f1_cv: float

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("kappa_vs_gold", "f1_test", "f1_cv"):
            if math.isnan(d[key]):
                d[key] = None
        return d


def _gold_of(dataset: Dataset) -> dict[str, str]:
    gold = {}
    for utt in dataset:
        if utt.gold_label is None:
            raise EvalError(f"utterance {utt.id!r} has no gold label")
        gold[utt.id] = utt.gold_label
    return gold


def _majority(labels: Sequence[str]) -> str:
    counts = Counter(labels)
    top = max(counts.values())
    return min(lab for lab, c in counts.items() if c == top)


def _wrong_label(rng: random.Random, vocab: Sequence[str], correct: str) -> str:
    others = [v for v in vocab if v != correct]
    if not others:
        return correct
    return rng.choice(others)


def _drive_aa(
    dataset: Dataset,
    gold: Mapping[str, str],
    cost_model: CostModel,
    budget: float,
    eps: float,
    seed: int,
    config: ss.SessionConfig | None,
    expand_policy: str,
) -> tuple[dict[str, str], float]:
    config = config or ss.SessionConfig(rng_seed=seed)
    sess = ss.create_session(dataset, config, session_id=f"sim-aa-{seed}")
    rng = random.Random(f"aa-oracle:{seed}")
    vocab = sorted(set(gold.values()))
    spent = 0.0

    while sess.phase != ss.PHASE_DONE:
        if sess.phase == ss.PHASE_GUIDELINES:
            if spent + cost_model.guidelines_label_cost > budget:
                break
            prompt = ss.next_guidelines_prompt(sess)
            if prompt is None:
                break
            spent += cost_model.guidelines_label_cost
            majority = _majority([gold[i] for i in prompt["pivot_ids"]])
            label = majority if rng.random() >= eps else _wrong_label(rng, vocab, majority)
            ss.respond_guidelines(sess, label)
        elif sess.phase == ss.PHASE_ANNOTATION:
            proposal = ss.next_annotation_proposal(sess)
            if proposal is None:
                continue
            active_label = proposal["label"]
            checked: list[str] = []
            reviewed = 0
            out_of_budget = False
            pending = list(proposal["proposed_ids"])
            while True:
                for pid in pending:
                    if spent + cost_model.binary_check_cost > budget:
                        out_of_budget = True
                        break
                    spent += cost_model.binary_check_cost
                    reviewed += 1
                    match = gold[pid] == active_label
                    if rng.random() < eps:
                        match = not match
                    if match:
                        checked.append(pid)
                if out_of_budget:
                    break
                all_checked = reviewed > 0 and len(checked) == reviewed
                want_more = expand_policy == EXPAND_ALWAYS or (
                    expand_policy == EXPAND_WHEN_PURE and all_checked
                )
                if not want_more:
                    break
                result = ss.expand_proposal(sess)
                if not result.added_ids:
                    break
                pending = result.added_ids
            ss.commit_annotation(sess, checked)
            if out_of_budget:
                break
    return dict(sess.labelled), spent


def _drive_baseline(
    dataset: Dataset,
    gold: Mapping[str, str],
    cost_model: CostModel,
    budget: float,
    eps: float,
    seed: int,
) -> tuple[dict[str, str], float]:
    sess = bl.create_baseline_session(dataset, seed, session_id=f"sim-baseline-{seed}")
    rng = random.Random(f"baseline-oracle:{seed}")
    vocab = sorted(set(gold.values()))
    spent = 0.0

    while sess.phase != bl.PHASE_DONE:
        if spent + cost_model.baseline_item_cost > budget:
            break
        item = bl.next_baseline_item(sess)
        if item is None:
            break
        spent += cost_model.baseline_item_cost
        uid = item["id"]
        suggestion_right = item["precomputed_label"] == gold[uid]
        confirm = suggestion_right
        if rng.random() < eps:
            confirm = not confirm
        if confirm:
            bl.respond_baseline(sess, "confirm")
        else:
            if spent + cost_model.guidelines_label_cost > budget:
                break  # cannot afford typing the replacement; item stays pending
            spent += cost_model.guidelines_label_cost
            label = gold[uid] if rng.random() >= eps else _wrong_label(rng, vocab, gold[uid])
            bl.respond_baseline(sess, "relabel", label)
    return dict(sess.labelled), spent


def evaluate_labels(
    labelled: Mapping[str, str],
    dataset: Dataset,
    test_rows: Sequence[dict] | None,
    train_cap: int | None = None,
    seed: int = 0,
    mapping_overrides: Mapping[str, str | None] | None = None,
) -> dict:
    """Map session labels to gold vocabulary, then score agreement and the
    centroid classifier. Unmapped labels are dropped (and reported).

    The test-set classifier trains on everything the session labelled;
    ``train_cap`` (matching the baseline's labelled count) applies only to
    the cross-validation pool.
    """
    nan = float("nan")
    if not labelled:
        return {"kappa": nan, "f1_test": nan, "f1_cv": nan, "unmapped": []}
    gold_sub = {i: dataset[i].gold_label for i in labelled}
    mapping = metrics.map_labels(labelled, gold_sub, mapping_overrides)
    mapped = mapping.apply(labelled)
    kappa = (
        metrics.cohens_kappa(mapped, {i: gold_sub[i] for i in mapped}) if mapped else nan
    )
    train_ids = sorted(mapped)
    train = [(dataset[i].text, mapped[i]) for i in train_ids]
    f1_test = nan
    if train and test_rows:
        test = [(r["text"], r["gold_label"]) for r in test_rows]
        f1_test = metrics.centroid_classifier_train_eval(train, test)
    cv_ids = train_ids
    if train_cap is not None and len(cv_ids) > train_cap:
        cv_ids = sorted(random.Random(f"downsample:{seed}").sample(cv_ids, train_cap))
    cv_rows = [(dataset[i].text, mapped[i]) for i in cv_ids]
    f1_cv = metrics.centroid_classifier_cv(cv_rows) if cv_rows else nan
    return {"kappa": kappa, "f1_test": f1_test, "f1_cv": f1_cv, "unmapped": mapping.unmapped}


def simulate(
    mode: str,
    dataset: Dataset,
    cost_model: CostModel,
    budget: float,
    eps: float,
    seed: int,
    test_rows: Sequence[dict] | None = None,
    train_cap: int | None = None,
    session_config: ss.SessionConfig | None = None,
    expand_policy: str = EXPAND_WHEN_PURE,
) -> RunStats:
    """Drive one seeded simulated run and return its statistics."""
    if budget < 0:
        raise EvalError("budget must be >= 0")
    if not 0 <= eps < 1:
        raise EvalError("eps must be in [0, 1)")
    gold = _gold_of(dataset)
    if mode == MODE_AA:
        labelled, spent = _drive_aa(
            dataset, gold, cost_model, budget, eps, seed, session_config, expand_policy
        )
    elif mode == MODE_BASELINE:
        labelled, spent = _drive_baseline(dataset, gold, cost_model, budget, eps, seed)
    else:
        raise EvalError(f"unknown simulation mode {mode!r}")
    scores = evaluate_labels(labelled, dataset, test_rows, train_cap=train_cap, seed=seed)
    return RunStats(
        mode=mode,
        seed=seed,
        sentences_labelled=len(labelled),
        distinct_labels=len(set(labelled.values())),
        budget_spent=spent,
        kappa_vs_gold=scores["kappa"],
        f1_test=scores["f1_test"],
        f1_cv=scores["f1_cv"],
    )


def run_experiment(
    dataset: Dataset,
    test_rows: Sequence[dict] | None,
    cost_model: CostModel,
    budget: float,
    eps: float,
    seeds: Sequence[int],
    downsample: bool = True,
    session_config: ss.SessionConfig | None = None,
    expand_policy: str = EXPAND_WHEN_PURE,
) -> dict:
    """Paired baseline/AA runs per seed; with ``downsample`` the AA
    classifier trains on a sample matching the baseline's labelled count."""
    runs: list[RunStats] = []
    for seed in seeds:
        base_stats = simulate(
            MODE_BASELINE, dataset, cost_model, budget, eps, seed, test_rows=test_rows
        )
        runs.append(base_stats)
        cap = base_stats.sentences_labelled if downsample else None
        cfg = session_config
        if cfg is None:
            cfg = ss.SessionConfig(rng_seed=seed)
        elif cfg.rng_seed != seed:
            cfg = ss.SessionConfig.from_dict({**cfg.to_dict(), "rng_seed": seed})
        runs.append(
            simulate(
                MODE_AA,
                dataset,
                cost_model,
                budget,
                eps,
                seed,
                test_rows=test_rows,
                train_cap=cap,
                session_config=cfg,
                expand_policy=expand_policy,
            )
        )

    summary: dict[str, dict] = {}
    for mode in (MODE_BASELINE, MODE_AA):
        mode_runs = [r for r in runs if r.mode == mode]
        summary[mode] = {}
        for metric in ("sentences_labelled", "distinct_labels", "budget_spent",
                       "kappa_vs_gold", "f1_test", "f1_cv"):
            mean, std = metrics.mean_std([float(getattr(r, metric)) for r in mode_runs])
            summary[mode][metric] = {"mean": mean, "std": std}
    return {
        "cost_model": cost_model.to_dict(),
        "budget": budget,
        "eps": eps,
        "seeds": list(seeds),
        "downsample": downsample,
        "expand_policy": expand_policy,
        "runs": [r.to_dict() for r in runs],
        "summary": summary,
    }
