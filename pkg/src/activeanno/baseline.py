"""Human-only baseline annotation: one random sentence at a time.

Each sentence gets a precomputed predicate-argument label (the same
extractor the clusters use, applied to the single sentence); the
annotator confirms it, types a replacement, or skips. Skipped items
re-queue at the tail so nothing is ever lost.
"""

from __future__ import annotations

import random
import uuid
from collections import deque
from dataclasses import dataclass, field

from . import labeling
from .data import Dataset
from .errors import InvalidResponseError, SessionError
from .session import AnnotationEvent, _log  # shared event plumbing

PHASE_ANNOTATION = "Annotation"
PHASE_DONE = "Done"

EV_BASELINE_CREATED = "BaselineCreated"
EV_BASELINE_PROMPT = "BaselinePrompt"
EV_BASELINE_CONFIRM = "BaselineConfirm"
EV_BASELINE_RELABEL = "BaselineRelabel"
EV_BASELINE_SKIP = "BaselineSkip"


@dataclass
class BaselineSession:
    id: str
    dataset: Dataset
    seed: int
    precomputed: dict[str, str]
    queue: deque[str]
    labelled: dict[str, str] = field(default_factory=dict)
    active_id: str | None = None
    event_log: list[AnnotationEvent] = field(default_factory=list)

    @property
    def version(self) -> int:
        return len(self.event_log)

    @property
    def phase(self) -> str:
        return PHASE_DONE if not self.queue and self.active_id is None else PHASE_ANNOTATION

    @property
    def unlabelled(self) -> set[str]:
        pool = set(self.queue)
        if self.active_id is not None:
            pool.add(self.active_id)
        return pool


def create_baseline_session(
    dataset: Dataset, seed: int, session_id: str | None = None
) -> BaselineSession:
    """Precompute a per-sentence label and a seeded presentation order."""
    session_id = session_id or uuid.uuid4().hex
    precomputed = {
        u.id: labeling.cluster_label([u.text]).canonical for u in dataset
    }
    order = list(dataset.ids)
    random.Random(seed).shuffle(order)
    session = BaselineSession(
        id=session_id,
        dataset=dataset,
        seed=seed,
        precomputed=precomputed,
        queue=deque(order),
    )
    _log(
        session,
        EV_BASELINE_CREATED,
        {"session_id": session_id, "seed": seed, "n_points": len(dataset)},
    )
    return session


def next_baseline_item(session: BaselineSession) -> dict | None:
    """The next unresolved item in the permutation, with its precomputed label."""
    if session.active_id is None:
        if not session.queue:
            return None
        session.active_id = session.queue.popleft()
        _log(session, EV_BASELINE_PROMPT, {"id": session.active_id})
    uid = session.active_id
    return {
        "id": uid,
        "text": session.dataset[uid].text,
        "precomputed_label": session.precomputed[uid],
    }


def respond_baseline(
    session: BaselineSession, action: str, label: str | None = None
) -> None:
    """``confirm`` keeps the precomputed label, ``relabel`` stores a
    normalized user label, ``skip`` re-queues the item at the tail."""
    if session.active_id is None:
        raise SessionError("no baseline item is active")
    uid = session.active_id
    if action == "confirm":
        session.labelled[uid] = session.precomputed[uid]
        _log(session, EV_BASELINE_CONFIRM, {"id": uid, "label": session.precomputed[uid]})
    elif action == "relabel":
        normalized = labeling.normalize_label(label or "")
        if not normalized:
            raise InvalidResponseError("label must be non-empty")
        session.labelled[uid] = normalized
        _log(session, EV_BASELINE_RELABEL, {"id": uid, "label": normalized})
    elif action == "skip":
        session.queue.append(uid)
        _log(session, EV_BASELINE_SKIP, {"id": uid})
    else:
        raise InvalidResponseError(f"unknown baseline action {action!r}")
    session.active_id = None


def export_labels(session: BaselineSession) -> list[dict]:
    return [
        {"id": i, "text": session.dataset[i].text, "label": session.labelled[i]}
        for i in session.dataset.ids
        if i in session.labelled
    ]


def label_histogram(session: BaselineSession) -> dict[str, int]:
    hist: dict[str, int] = {}
    for lab in session.labelled.values():
        hist[lab] = hist.get(lab, 0) + 1
    return dict(sorted(hist.items()))


def replay(dataset: Dataset, events: list[AnnotationEvent], verify: bool = True) -> BaselineSession:
    if not events or events[0].kind != EV_BASELINE_CREATED:
        raise SessionError("event log must start with BaselineCreated")
    head = events[0].payload
    session = create_baseline_session(dataset, head["seed"], session_id=head["session_id"])
    for event in events[1:]:
        if event.kind == EV_BASELINE_PROMPT:
            next_baseline_item(session)
        elif event.kind == EV_BASELINE_CONFIRM:
            respond_baseline(session, "confirm")
        elif event.kind == EV_BASELINE_RELABEL:
            respond_baseline(session, "relabel", event.payload["label"])
        elif event.kind == EV_BASELINE_SKIP:
            respond_baseline(session, "skip")
        else:
            raise SessionError(f"unknown event kind {event.kind!r}")
    if verify:
        got = [(e.kind, sorted(e.payload.items())) for e in session.event_log]
        want = [(e.kind, sorted(e.payload.items())) for e in events]
        if got != want:
            raise SessionError("replay diverged from the recorded event log")
    return session
