"""HTTP JSON API for annotation sessions.

One writer per session: every mutation takes the session lock and carries
the client's last-seen state version (the event-log length); a stale
version gets 409 and no state change. Mutating endpoints answer with the
next prompt so one round-trip serves one annotator action. Session builds
run in a background thread; clients poll until status leaves "building".
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Request, UploadFile
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import baseline as bl
from . import session as ss
from .errors import ActiveAnnoError
from .store import DataStore

MAX_UPLOAD_BYTES = 50 * 1024 * 1024

MODE_AA = "aa"
MODE_BASELINE = "baseline"


@dataclass
class SessionHandle:
    session_id: str
    mode: str
    dataset_id: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    session: Any = None           # Session | BaselineSession once built
    error: str | None = None
    persisted: int = 0            # events already flushed to disk

    @property
    def status(self) -> str:
        if self.error:
            return "error"
        return "ready" if self.session is not None else "building"


class ServiceState:
    def __init__(self, store: DataStore):
        self.store = store
        self.handles: dict[str, SessionHandle] = {}
        self.registry_lock = threading.Lock()

    def get_handle(self, session_id: str) -> SessionHandle:
        with self.registry_lock:
            handle = self.handles.get(session_id)
            if handle is not None:
                return handle
            if not self.store.has_session(session_id):
                raise HTTPException(404, f"unknown session {session_id!r}")
            meta = self.store.read_session_meta(session_id)
            handle = SessionHandle(
                session_id=session_id, mode=meta["mode"], dataset_id=meta["dataset_id"]
            )
            self.handles[session_id] = handle
        # rebuild outside the registry lock: replay is CPU-heavy
        with handle.lock:
            if handle.session is None and handle.error is None:
                dataset = self.store.load_dataset(handle.dataset_id)
                events = self.store.load_events(session_id)
                if handle.mode == MODE_BASELINE:
                    handle.session = bl.replay(dataset, events)
                else:
                    handle.session = ss.replay(dataset, events)
                handle.persisted = len(events)
        return handle

    def flush(self, handle: SessionHandle) -> None:
        events = handle.session.event_log
        if len(events) > handle.persisted:
            self.store.append_events(handle.session_id, events[handle.persisted:])
            handle.persisted = len(events)


def _prompt_payload(handle: SessionHandle) -> dict:
    session = handle.session
    if handle.mode == MODE_BASELINE:
        item = bl.next_baseline_item(session)
        if item is None:
            return {"kind": "done"}
        return {"kind": "baseline", **item}
    if session.phase == ss.PHASE_GUIDELINES:
        if session.active is None:
            prompt = ss.next_guidelines_prompt(session)
            if prompt is None:
                return {"kind": "done"}
        else:
            prompt = {
                "cluster": session.active.cluster,
                "pivot_ids": session.active.pivot_ids,
                "pivots": session.dataset.texts(session.active.pivot_ids),
                "auto_label": session.active.auto_label,
            }
        return {"kind": "guidelines", **prompt}
    if session.phase == ss.PHASE_ANNOTATION:
        if not session.active.proposed_ids:
            proposal = ss.next_annotation_proposal(session)
            if proposal is None:
                return {"kind": "done"}
        else:
            proposal = {
                "label": session.active.label,
                "proposed_ids": session.active.proposed_ids,
                "proposed": session.dataset.texts(session.active.proposed_ids),
                "at_threshold": len(session.active.proposed_ids) >= session.config.proposal_max,
            }
        return {"kind": "annotation", **proposal}
    return {"kind": "done"}


def _summary_payload(handle: SessionHandle) -> dict:
    session = handle.session
    if handle.mode == MODE_BASELINE:
        labelled = session.labelled
        unlabelled = len(session.unlabelled)
        histogram = bl.label_histogram(session)
        phase = session.phase
    else:
        labelled = session.labelled
        unlabelled = len(session.unlabelled)
        histogram = ss.label_histogram(session)
        phase = session.phase
    return {
        "session_id": handle.session_id,
        "mode": handle.mode,
        "dataset_id": handle.dataset_id,
        "status": handle.status,
        "phase": phase,
        "version": session.version,
        "labelled": len(labelled),
        "unlabelled": unlabelled,
        "label_histogram": histogram,
    }


def _check_version(handle: SessionHandle, payload: dict) -> None:
    version = payload.get("version")
    if not isinstance(version, int):
        raise HTTPException(400, "missing integer 'version'")
    if version != handle.session.version:
        raise HTTPException(
            409,
            f"stale state version {version}, current is {handle.session.version}",
        )


def create_app(
    data_dir: str | Path,
    ui_dir: str | Path | None = None,
    max_upload_bytes: int = MAX_UPLOAD_BYTES,
) -> FastAPI:
    store = DataStore(data_dir)
    state = ServiceState(store)
    app = FastAPI(title="activeanno", docs_url=None, redoc_url=None)
    app.state.service = state

    @app.exception_handler(ActiveAnnoError)
    async def _domain_error(_req: Request, exc: ActiveAnnoError):
        # domain failures are the client's problem; 409 is reserved for
        # version conflicts, which raise HTTPException directly
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.post("/api/datasets")
    async def upload_dataset(file: UploadFile):
        raw = await file.read()
        if len(raw) > max_upload_bytes:
            raise HTTPException(413, "dataset exceeds upload size cap")
        dataset_id = store.register_dataset_bytes(raw)
        n = len(store.load_dataset(dataset_id))
        return {"dataset_id": dataset_id, "size": n}

    @app.get("/api/datasets")
    def list_datasets():
        return {"datasets": store.list_datasets()}

    @app.post("/api/sessions")
    def create_session_endpoint(payload: dict):
        mode = payload.get("mode", MODE_AA)
        if mode not in (MODE_AA, MODE_BASELINE):
            raise HTTPException(400, f"unknown mode {mode!r}")
        dataset_id = payload.get("dataset_id")
        if not dataset_id or not store.has_dataset(dataset_id):
            raise HTTPException(404, f"unknown dataset {dataset_id!r}")
        config = ss.SessionConfig.from_dict(payload.get("config") or {})
        dataset = store.load_dataset(dataset_id)

        import uuid

        session_id = uuid.uuid4().hex[:12]
        handle = SessionHandle(session_id=session_id, mode=mode, dataset_id=dataset_id)
        with state.registry_lock:
            state.handles[session_id] = handle
        store.write_session_meta(session_id, mode, dataset_id)

        def build():
            try:
                if mode == MODE_BASELINE:
                    built = bl.create_baseline_session(
                        dataset, config.rng_seed, session_id=session_id
                    )
                else:
                    built = ss.create_session(dataset, config, session_id=session_id)
                with handle.lock:
                    handle.session = built
                    state.flush(handle)
            except Exception as exc:  # surface build failures to pollers
                handle.error = str(exc)

        threading.Thread(target=build, daemon=True).start()
        return {"session_id": session_id, "status": "building"}

    @app.get("/api/sessions/{session_id}")
    def session_summary(session_id: str):
        handle = state.get_handle(session_id)
        if handle.status == "building":
            return {"session_id": session_id, "status": "building"}
        if handle.status == "error":
            return JSONResponse(status_code=500, content={"status": "error", "error": handle.error})
        with handle.lock:
            return _summary_payload(handle)

    @app.get("/api/sessions/{session_id}/prompt")
    def get_prompt(session_id: str):
        handle = state.get_handle(session_id)
        if handle.status != "ready":
            return JSONResponse(status_code=409, content={"status": handle.status, "error": handle.error})
        with handle.lock:
            prompt = _prompt_payload(handle)
            state.flush(handle)
            prompt["version"] = handle.session.version
            return prompt

    def _mutate(session_id: str, payload: dict, apply):
        handle = state.get_handle(session_id)
        if handle.status != "ready":
            raise HTTPException(409, f"session is {handle.status}")
        with handle.lock:
            _check_version(handle, payload)
            result = apply(handle) or {}
            prompt = _prompt_payload(handle)
            state.flush(handle)
            prompt["version"] = handle.session.version
            return {**result, "prompt": prompt, "summary": _summary_payload(handle)}

    @app.post("/api/sessions/{session_id}/guidelines")
    def guidelines_endpoint(session_id: str, payload: dict):
        action = payload.get("action")

        def apply(handle: SessionHandle):
            if handle.mode != MODE_AA:
                raise HTTPException(400, "guidelines apply to aa sessions only")
            if action == "skip":
                ss.respond_guidelines(handle.session, None)
            elif action == "label":
                ss.respond_guidelines(handle.session, payload.get("label", ""))
            else:
                raise HTTPException(400, f"unknown action {action!r}")

        return _mutate(session_id, payload, apply)

    @app.post("/api/sessions/{session_id}/annotations")
    def annotations_endpoint(session_id: str, payload: dict):
        checked = payload.get("checked")
        if not isinstance(checked, list):
            raise HTTPException(400, "missing 'checked' id list")

        def apply(handle: SessionHandle):
            if handle.mode != MODE_AA:
                raise HTTPException(400, "annotations apply to aa sessions only")
            committed = ss.commit_annotation(handle.session, checked)
            return {"committed": committed}

        return _mutate(session_id, payload, apply)

    @app.post("/api/sessions/{session_id}/expand")
    def expand_endpoint(session_id: str, payload: dict):
        def apply(handle: SessionHandle):
            if handle.mode != MODE_AA:
                raise HTTPException(400, "expand applies to aa sessions only")
            result = ss.expand_proposal(handle.session)
            return {"added_ids": result.added_ids, "at_threshold": result.at_threshold}

        return _mutate(session_id, payload, apply)

    @app.post("/api/sessions/{session_id}/baseline")
    def baseline_endpoint(session_id: str, payload: dict):
        action = payload.get("action")

        def apply(handle: SessionHandle):
            if handle.mode != MODE_BASELINE:
                raise HTTPException(400, "baseline actions apply to baseline sessions only")
            bl.next_baseline_item(handle.session)  # ensure an active item
            if action in ("confirm", "skip"):
                bl.respond_baseline(handle.session, action)
            elif action == "relabel":
                bl.respond_baseline(handle.session, "relabel", payload.get("label", ""))
            else:
                raise HTTPException(400, f"unknown action {action!r}")

        return _mutate(session_id, payload, apply)

    @app.get("/api/sessions/{session_id}/export")
    def export_endpoint(session_id: str):
        handle = state.get_handle(session_id)
        if handle.status != "ready":
            raise HTTPException(409, f"session is {handle.status}")
        with handle.lock:
            if handle.mode == MODE_BASELINE:
                rows = bl.export_labels(handle.session)
            else:
                rows = ss.export_labels(handle.session)
        import json as _json

        body = "".join(_json.dumps(r, ensure_ascii=False) + "\n" for r in rows)
        return Response(
            content=body,
            media_type="application/x-ndjson",
            headers={
                "Content-Disposition": f'attachment; filename="{session_id}.labels.jsonl"'
            },
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
