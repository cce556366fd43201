"""Annotation session state machine.

Alternates guidelines prompts (pick a cluster, show pivot sentences plus a
suggested label; annotator labels or skips) with annotation proposals
(nearest unlabelled neighbours of the pivots, committed by check-mark).
Every state change appends an event; replaying the log against the same
dataset reconstructs the exact session state.
"""

from __future__ import annotations

import json
import random
import time
import uuid
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from . import clustering as clu
from . import dimred, labeling, neighbors
from .data import Dataset
from .embedding import EmbedderSpec, EmbeddingMatrix, embed
from .errors import ActiveAnnoError, InvalidResponseError, SessionError

PHASE_GUIDELINES = "Guidelines"
PHASE_ANNOTATION = "Annotation"
PHASE_DONE = "Done"

EV_SESSION_CREATED = "SessionCreated"
EV_GUIDELINES_PROMPT = "GuidelinesPrompt"
EV_GUIDELINES_SKIP = "GuidelinesSkip"
EV_GUIDELINES_LABEL = "GuidelinesLabel"
EV_ANNOTATION_PROPOSAL = "AnnotationProposal"
EV_ANNOTATION_EXPAND = "AnnotationExpand"
EV_ANNOTATION_COMMIT = "AnnotationCommit"
EV_RECLUSTER = "ReclusterTriggered"


@dataclass(frozen=True)
class AnnotationEvent:
    seq: int
    timestamp: float
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "timestamp": self.timestamp, "kind": self.kind, "payload": self.payload}

    @classmethod
    def from_dict(cls, d: dict) -> "AnnotationEvent":
        return cls(seq=d["seq"], timestamp=d["timestamp"], kind=d["kind"], payload=d["payload"])


@dataclass
class SessionConfig:
    pivot_count: int = 3
    proposal_count: int = 5
    proposal_max: int = 20
    embedder: EmbedderSpec = field(default_factory=EmbedderSpec)
    rng_seed: int = 0
    pca_variance: float = dimred.DEFAULT_VARIANCE_THRESHOLD
    pca_max_components: int = dimred.DEFAULT_MAX_COMPONENTS
    k_min: int = clu.DEFAULT_K_MIN
    k_max: int | None = None
    # pipeline default is deliberately higher than the bare elbow op's 5:
    # restart count is the main defence against k-means local optima
    seeds_per_k: int = 10
    recluster_threshold: float | None = 0.5  # None disables reclustering

    def __post_init__(self) -> None:
        if self.pivot_count < 1:
            raise SessionError("pivot_count must be >= 1")
        if self.proposal_count < 1 or self.proposal_count > self.proposal_max:
            raise SessionError("require 1 <= proposal_count <= proposal_max")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["embedder"] = self.embedder.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        import dataclasses

        known = {f.name for f in dataclasses.fields(cls)}
        d = {k: v for k, v in d.items() if k in known}
        if "embedder" in d and isinstance(d["embedder"], dict):
            d["embedder"] = EmbedderSpec.from_dict(d["embedder"])
        return cls(**d)


@dataclass
class ActivePrompt:
    cluster: int
    pivot_ids: list[str]
    auto_label: str
    label: str | None = None
    proposed_ids: list[str] = field(default_factory=list)
    expand_count: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExpandResult:
    added_ids: list[str]
    at_threshold: bool


@dataclass
class Session:
    id: str
    config: SessionConfig
    dataset: Dataset
    space: EmbeddingMatrix          # reduced vectors for every id, fixed at creation
    clustering: clu.Clustering      # over the ids unlabelled at (re)cluster time
    unlabelled: set[str]
    labelled: dict[str, str]
    phase: str
    active: ActivePrompt | None
    event_log: list[AnnotationEvent]
    prev_cluster: int | None
    pool_at_last_clustering: int
    no_elbow: bool
    rng: random.Random

    @property
    def version(self) -> int:
        return len(self.event_log)

    def cluster_members_unlabelled(self, cluster: int) -> list[str]:
        return [
            i for i in self.space.ids
            if i in self.unlabelled and self.clustering.assignment.get(i) == cluster
        ]

    def nonempty_clusters(self) -> list[int]:
        present = {
            self.clustering.assignment[i]
            for i in self.unlabelled
            if i in self.clustering.assignment
        }
        return sorted(present)


def _log(session: Session, kind: str, payload: dict) -> AnnotationEvent:
    event = AnnotationEvent(
        seq=len(session.event_log), timestamp=time.time(), kind=kind, payload=payload
    )
    session.event_log.append(event)
    return event


def _auto_label(session: Session, member_ids: Iterable[str]) -> str:
    texts = session.dataset.texts(list(member_ids))
    return labeling.cluster_label(texts).canonical


def _check_done(session: Session) -> None:
    if not session.unlabelled:
        session.phase = PHASE_DONE
        session.active = None


def create_session(
    dataset: Dataset, config: SessionConfig, session_id: str | None = None
) -> Session:
    """Run the full pipeline (embed, reduce, pick k, cluster, label) and
    open the session in the Guidelines phase with everything unlabelled."""
    if len(dataset) < 2:
        raise SessionError("session needs at least 2 data points")
    session_id = session_id or uuid.uuid4().hex

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ActiveAnnoError as exc:
            raise SessionError(f"pipeline stage {name!r} failed: {exc}") from exc

    E = stage("embed", embed, dataset, config.embedder)
    model = stage(
        "pca", dimred.fit_pca_auto, E, config.pca_variance, config.pca_max_components
    )
    space = stage("transform", dimred.transform, model, E)
    k_max = config.k_max
    if k_max is not None:
        k_max = min(k_max, len(dataset) - 1)
    elbow = stage(
        "cluster",
        clu.elbow_select_k,
        space,
        k_min=config.k_min,
        k_max=k_max,
        seeds_per_k=config.seeds_per_k,
        seed=config.rng_seed,
    )

    session = Session(
        id=session_id,
        config=config,
        dataset=dataset,
        space=space,
        clustering=elbow.best,
        unlabelled=set(dataset.ids),
        labelled={},
        phase=PHASE_GUIDELINES,
        active=None,
        event_log=[],
        prev_cluster=None,
        pool_at_last_clustering=len(dataset),
        no_elbow=elbow.no_elbow,
        rng=random.Random(config.rng_seed),
    )
    _log(
        session,
        EV_SESSION_CREATED,
        {
            "session_id": session_id,
            "config": config.to_dict(),
            "n_points": len(dataset),
            "k": elbow.best.k,
            "no_elbow": elbow.no_elbow,
        },
    )
    return session


def next_guidelines_prompt(session: Session) -> dict | None:
    """Pick a cluster at random (never the immediately previous one when a
    choice exists), select the unlabelled members nearest its centroid as
    pivots, and suggest the auto-computed label."""
    if session.phase != PHASE_GUIDELINES:
        raise SessionError(f"no guidelines prompt in phase {session.phase}")
    _check_done(session)
    if session.phase == PHASE_DONE:
        return None

    candidates = session.nonempty_clusters()
    if len(candidates) > 1 and session.prev_cluster in candidates:
        candidates = [c for c in candidates if c != session.prev_cluster]
    cluster = candidates[session.rng.randrange(len(candidates))]

    members = session.cluster_members_unlabelled(cluster)
    vectors = session.space.rows(members)
    centroid = session.clustering.centroids[cluster][None, :]
    d2 = np.linalg.norm(vectors - centroid, axis=1)
    order = sorted(range(len(members)), key=lambda i: (d2[i], members[i]))
    pivot_ids = [members[i] for i in order[: session.config.pivot_count]]

    auto = _auto_label(session, members)
    session.active = ActivePrompt(cluster=cluster, pivot_ids=pivot_ids, auto_label=auto)
    session.prev_cluster = cluster
    _log(
        session,
        EV_GUIDELINES_PROMPT,
        {"cluster": cluster, "pivot_ids": pivot_ids, "auto_label": auto},
    )
    return {
        "cluster": cluster,
        "pivot_ids": pivot_ids,
        "pivots": session.dataset.texts(pivot_ids),
        "auto_label": auto,
    }


def respond_guidelines(session: Session, label: str | None) -> None:
    """``label=None`` skips; a string labels the pivots and moves the
    session to the Annotation phase. Empty labels are rejected unchanged."""
    if session.phase != PHASE_GUIDELINES or session.active is None:
        raise SessionError("no guidelines prompt is active")
    if label is None:
        cluster = session.active.cluster
        session.active = None
        _log(session, EV_GUIDELINES_SKIP, {"cluster": cluster})
        return
    normalized = labeling.normalize_label(label)
    if not normalized:
        raise InvalidResponseError("label must be non-empty")
    pivots = list(session.active.pivot_ids)
    for pid in pivots:
        session.labelled[pid] = normalized
        session.unlabelled.discard(pid)
    session.active.label = normalized
    _log(session, EV_GUIDELINES_LABEL, {"label": normalized, "pivot_ids": pivots})
    if session.unlabelled:
        session.phase = PHASE_ANNOTATION
    else:
        session.phase = PHASE_DONE
        session.active = None


def _candidate_pool(session: Session) -> tuple[list[str], np.ndarray]:
    ids = [i for i in session.space.ids if i in session.unlabelled]
    return ids, session.space.rows(ids)


def next_annotation_proposal(session: Session) -> dict | None:
    """Propose the unlabelled points nearest the labelled pivots."""
    if session.phase != PHASE_ANNOTATION or session.active is None or session.active.label is None:
        raise SessionError("no annotation step is active")
    if not session.unlabelled:
        session.phase = PHASE_DONE
        session.active = None
        return None
    cand_ids, cand_vecs = _candidate_pool(session)
    pivots = session.space.rows(session.active.pivot_ids)
    proposed = neighbors.knn_to_pivots(
        cand_ids, cand_vecs, pivots, session.config.proposal_count
    )
    session.active.proposed_ids = proposed
    _log(
        session,
        EV_ANNOTATION_PROPOSAL,
        {"proposed_ids": proposed, "label": session.active.label},
    )
    return {
        "label": session.active.label,
        "proposed_ids": proposed,
        "proposed": session.dataset.texts(proposed),
        "at_threshold": len(proposed) >= session.config.proposal_max,
    }


def expand_proposal(session: Session) -> ExpandResult:
    """Append the next ranked neighbours in proposal_count batches, up to
    proposal_max. At the threshold this is a no-op with a signal."""
    if session.phase != PHASE_ANNOTATION or session.active is None or not session.active.proposed_ids:
        raise SessionError("no annotation proposal is active")
    current = session.active.proposed_ids
    if len(current) >= session.config.proposal_max:
        return ExpandResult(added_ids=[], at_threshold=True)
    target = min(len(current) + session.config.proposal_count, session.config.proposal_max)
    cand_ids, cand_vecs = _candidate_pool(session)
    pivots = session.space.rows(session.active.pivot_ids)
    ranking = neighbors.knn_to_pivots(cand_ids, cand_vecs, pivots, target)
    added = ranking[len(current):]
    if not added:
        return ExpandResult(added_ids=[], at_threshold=False)
    session.active.proposed_ids = ranking
    session.active.expand_count += 1
    _log(session, EV_ANNOTATION_EXPAND, {"added_ids": added})
    return ExpandResult(added_ids=added, at_threshold=len(ranking) >= session.config.proposal_max)


def commit_annotation(session: Session, checked_ids: Iterable[str]) -> int:
    """Label the checked proposals, return to Guidelines (or Done), and
    recluster if the pool has shrunk past the configured threshold."""
    if session.phase != PHASE_ANNOTATION or session.active is None or not session.active.proposed_ids:
        raise SessionError("no annotation proposal is active")
    checked = list(dict.fromkeys(checked_ids))
    proposed = set(session.active.proposed_ids)
    outside = [i for i in checked if i not in proposed]
    if outside:
        raise InvalidResponseError(f"checked id {outside[0]!r} is not in the proposal")
    label = session.active.label
    assert label is not None
    for cid in checked:
        session.labelled[cid] = label
        session.unlabelled.discard(cid)
    _log(session, EV_ANNOTATION_COMMIT, {"checked_ids": sorted(checked), "label": label})
    session.active = None
    if session.unlabelled:
        session.phase = PHASE_GUIDELINES
        maybe_recluster(session)
    else:
        session.phase = PHASE_DONE
    return len(checked)


def maybe_recluster(session: Session) -> clu.Clustering | None:
    """Re-run elbow + k-means over the remaining pool once it shrinks below
    the threshold fraction of its size at the last clustering."""
    threshold = session.config.recluster_threshold
    if threshold is None:
        return None
    if len(session.unlabelled) >= threshold * session.pool_at_last_clustering:
        return None
    if not session.unlabelled:
        return None
    sub = session.space.subset([i for i in session.space.ids if i in session.unlabelled])
    rounds = sum(1 for e in session.event_log if e.kind == EV_RECLUSTER) + 1
    k_max = session.config.k_max
    if k_max is not None:
        k_max = min(k_max, len(sub.ids) - 1)
    elbow = clu.elbow_select_k(
        sub,
        k_min=session.config.k_min,
        k_max=k_max,
        seeds_per_k=session.config.seeds_per_k,
        seed=session.config.rng_seed + 1_000_000_007 * rounds,
    )
    session.clustering = elbow.best
    session.no_elbow = elbow.no_elbow
    session.pool_at_last_clustering = len(session.unlabelled)
    session.prev_cluster = None
    _log(
        session,
        EV_RECLUSTER,
        {"k": elbow.best.k, "pool_size": len(session.unlabelled), "no_elbow": elbow.no_elbow},
    )
    return elbow.best


def export_labels(session: Session) -> list[dict]:
    """One row per labelled utterance, in dataset order."""
    return [
        {"id": i, "text": session.dataset[i].text, "label": session.labelled[i]}
        for i in session.dataset.ids
        if i in session.labelled
    ]


def label_histogram(session: Session) -> dict[str, int]:
    hist: dict[str, int] = {}
    for lab in session.labelled.values():
        hist[lab] = hist.get(lab, 0) + 1
    return dict(sorted(hist.items()))


def snapshot(session: Session) -> str:
    """Canonical JSON state, excluding timestamps; byte-comparable."""
    state = {
        "id": session.id,
        "config": session.config.to_dict(),
        "phase": session.phase,
        "unlabelled": sorted(session.unlabelled),
        "labelled": dict(sorted(session.labelled.items())),
        "active": session.active.to_dict() if session.active else None,
        "prev_cluster": session.prev_cluster,
        "pool_at_last_clustering": session.pool_at_last_clustering,
        "no_elbow": session.no_elbow,
        "clustering": session.clustering.to_dict(),
        "n_events": len(session.event_log),
    }
    return json.dumps(state, sort_keys=True)


def replay(dataset: Dataset, events: list[AnnotationEvent], verify: bool = True) -> Session:
    """Rebuild a session by re-running its event log against the dataset.

    Derived events (prompts, proposals, recluster) are regenerated by the
    operations themselves; with ``verify`` the regenerated log is checked
    against the source log (kinds and payloads; timestamps differ).
    """
    if not events or events[0].kind != EV_SESSION_CREATED:
        raise SessionError("event log must start with SessionCreated")
    head = events[0].payload
    config = SessionConfig.from_dict(head["config"])
    session = create_session(dataset, config, session_id=head["session_id"])
    for event in events[1:]:
        if event.kind == EV_GUIDELINES_PROMPT:
            next_guidelines_prompt(session)
        elif event.kind == EV_GUIDELINES_SKIP:
            respond_guidelines(session, None)
        elif event.kind == EV_GUIDELINES_LABEL:
            respond_guidelines(session, event.payload["label"])
        elif event.kind == EV_ANNOTATION_PROPOSAL:
            next_annotation_proposal(session)
        elif event.kind == EV_ANNOTATION_EXPAND:
            expand_proposal(session)
        elif event.kind == EV_ANNOTATION_COMMIT:
            commit_annotation(session, event.payload["checked_ids"])
        elif event.kind == EV_RECLUSTER:
            continue  # re-emitted by the preceding commit
        else:
            raise SessionError(f"unknown event kind {event.kind!r}")
    if verify:
        got = [(e.kind, json.dumps(e.payload, sort_keys=True)) for e in session.event_log]
        want = [(e.kind, json.dumps(e.payload, sort_keys=True)) for e in events]
        if got != want:
            raise SessionError("replay diverged from the recorded event log")
    return session
