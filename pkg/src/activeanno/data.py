"""Dataset ingestion: JSONL utterance files.

One JSON object per line with keys ``id`` (string), ``text`` (string) and
optionally ``gold_label`` (string, used only by the evaluation harness).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DatasetError


@dataclass(frozen=True)
class Utterance:
    id: str
    text: str
    gold_label: str | None = None


@dataclass
class Dataset:
    """Ordered collection of utterances with unique ids."""

    utterances: list[Utterance]
    _by_id: dict[str, Utterance] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        by_id: dict[str, Utterance] = {}
        for utt in self.utterances:
            if utt.id in by_id:
                raise DatasetError(f"duplicate utterance id {utt.id!r}")
            by_id[utt.id] = utt
        self._by_id = by_id

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)

    def __getitem__(self, utt_id: str) -> Utterance:
        return self._by_id[utt_id]

    def __contains__(self, utt_id: str) -> bool:
        return utt_id in self._by_id

    @property
    def ids(self) -> list[str]:
        return [u.id for u in self.utterances]

    def texts(self, ids: Iterable[str]) -> list[str]:
        return [self._by_id[i].text for i in ids]


def _parse_line(line: str, lineno: int, seen: dict[str, int]) -> Utterance | None:
    stripped = line.strip()
    if not stripped:
        return None
    try:
        obj = json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise DatasetError(f"line {lineno}: expected a JSON object")
    utt_id = obj.get("id")
    text = obj.get("text")
    if not isinstance(utt_id, str) or not utt_id:
        raise DatasetError(f"line {lineno}: missing or non-string 'id'")
    if not isinstance(text, str) or not text.strip():
        raise DatasetError(f"line {lineno}: missing or empty 'text'")
    if utt_id in seen:
        raise DatasetError(
            f"line {lineno}: duplicate id {utt_id!r} (first seen on line {seen[utt_id]})"
        )
    seen[utt_id] = lineno
    gold = obj.get("gold_label")
    if gold is not None and not isinstance(gold, str):
        raise DatasetError(f"line {lineno}: 'gold_label' must be a string")
    return Utterance(id=utt_id, text=text, gold_label=gold)


def ingest_dataset(path: str | Path, format: str = "jsonl") -> Dataset:
    """Read and validate a JSONL utterance file, preserving file order."""
    if format != "jsonl":
        raise DatasetError(f"unsupported dataset format {format!r}")
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    utterances: list[Utterance] = []
    seen: dict[str, int] = {}
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            utt = _parse_line(line, lineno, seen)
            if utt is not None:
                utterances.append(utt)
    if not utterances:
        raise DatasetError(f"dataset file is empty: {path}")
    return Dataset(utterances)


def dataset_from_rows(rows: Iterable[dict]) -> Dataset:
    """Build a dataset from in-memory row dicts (same schema as the file)."""
    utterances = [
        Utterance(id=r["id"], text=r["text"], gold_label=r.get("gold_label"))
        for r in rows
    ]
    if not utterances:
        raise DatasetError("no rows provided")
    return Dataset(utterances)


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
