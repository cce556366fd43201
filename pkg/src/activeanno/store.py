"""On-disk layout for datasets and session event logs.

    <data_dir>/datasets/<dataset_id>.jsonl
    <data_dir>/sessions/<session_id>.meta.json    {"mode", "dataset_id"}
    <data_dir>/sessions/<session_id>.events.jsonl (append-only)

The event log is authoritative: a session is reconstructed by replaying
it against its dataset.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .data import Dataset, ingest_dataset
from .errors import DatasetError, SessionError
from .session import AnnotationEvent


class DataStore:
    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        (self.root / "datasets").mkdir(parents=True, exist_ok=True)
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        self._datasets: dict[str, Dataset] = {}

    # datasets ---------------------------------------------------------

    def _dataset_path(self, dataset_id: str) -> Path:
        return self.root / "datasets" / f"{dataset_id}.jsonl"

    def register_dataset_bytes(self, raw: bytes) -> str:
        """Validate and store an uploaded JSONL dataset; id is content-derived."""
        dataset_id = hashlib.sha256(raw).hexdigest()[:12]
        path = self._dataset_path(dataset_id)
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(raw)
            try:
                ingest_dataset(tmp)
            except DatasetError:
                tmp.unlink(missing_ok=True)
                raise
            tmp.rename(path)
        return dataset_id

    def register_dataset_file(self, source: str | Path) -> str:
        return self.register_dataset_bytes(Path(source).read_bytes())

    def has_dataset(self, dataset_id: str) -> bool:
        return self._dataset_path(dataset_id).exists()

    def load_dataset(self, dataset_id: str) -> Dataset:
        if dataset_id not in self._datasets:
            path = self._dataset_path(dataset_id)
            if not path.exists():
                raise DatasetError(f"unknown dataset {dataset_id!r}")
            self._datasets[dataset_id] = ingest_dataset(path)
        return self._datasets[dataset_id]

    def list_datasets(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "datasets").glob("*.jsonl"))

    # sessions ---------------------------------------------------------

    def _events_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.events.jsonl"

    def _meta_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.meta.json"

    def write_session_meta(self, session_id: str, mode: str, dataset_id: str) -> None:
        self._meta_path(session_id).write_text(
            json.dumps({"mode": mode, "dataset_id": dataset_id}), encoding="utf-8"
        )

    def read_session_meta(self, session_id: str) -> dict:
        path = self._meta_path(session_id)
        if not path.exists():
            raise SessionError(f"unknown session {session_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def has_session(self, session_id: str) -> bool:
        return self._meta_path(session_id).exists()

    def append_events(self, session_id: str, events: list[AnnotationEvent]) -> None:
        if not events:
            return
        with self._events_path(session_id).open("a", encoding="utf-8") as fh:
            for event in events:
                fh.write(json.dumps(event.to_dict(), ensure_ascii=False) + "\n")

    def load_events(self, session_id: str) -> list[AnnotationEvent]:
        path = self._events_path(session_id)
        if not path.exists():
            raise SessionError(f"no event log for session {session_id!r}")
        events = []
        with path.open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    events.append(AnnotationEvent.from_dict(json.loads(line)))
        return events

    def list_sessions(self) -> list[str]:
        return sorted(p.stem.replace(".meta", "") for p in (self.root / "sessions").glob("*.meta.json"))
