"""HTTP facade over consult, KB management, and evaluation runs.

All payloads are JSON under /v1; error bodies carry {code, message,
trace_id}. The consult endpoint streams server-sent events whose delta
payloads concatenate byte-for-byte to the final answer text. Evaluation
runs execute on an in-process worker pool; completed descriptors and
reports persist under runs_dir and survive restarts.
"""

from __future__ import annotations

import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterator

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .config import Workbench, builtin_config
from .errors import (
    EmptyQuery,
    IndexEmpty,
    LexkitError,
    TransportError,
    ValidationError,
)
from .judge import (
    evaluate as judge_evaluate,
    load_default_rubric,
    load_subjective_dataset,
    report_summary,
)
from .kb import RetrievalConfig
from .mcq import FewShotConfig, evaluate as mcq_evaluate, load_mcq_dataset
from .rag import consult

DELTA_CHUNK = 64

RUN_STATES = ("queued", "running", "done", "failed")
_ALLOWED_TRANSITIONS = {
    "queued": {"running"},
    "running": {"done", "failed"},
    "done": set(),
    "failed": set(),
}


def _new_trace_id() -> str:
    return uuid.uuid4().hex[:16]


def _error_body(code: str, message: str) -> dict:
    return {"code": code, "message": message, "trace_id": _new_trace_id()}


class RunRegistry:
    """Descriptor store for evaluation runs, persisted one JSON per run."""

    def __init__(self, runs_dir: Path) -> None:
        self.runs_dir = runs_dir
        self._lock = threading.Lock()
        self._runs: dict[str, dict] = {}
        if runs_dir.exists():
            for path in runs_dir.glob("*.json"):
                if path.name.endswith(".report.json"):
                    continue
                descriptor = json.loads(path.read_text(encoding="utf-8"))
                self._runs[descriptor["run_id"]] = descriptor

    def create(self, run_id: str, kind: str) -> dict:
        with self._lock:
            if run_id in self._runs:
                raise ValidationError(f"duplicate run_id {run_id!r}")
            descriptor = {
                "run_id": run_id,
                "kind": kind,
                "status": "queued",
                "report_ref": None,
                "error": None,
            }
            self._runs[run_id] = descriptor
            self._persist(descriptor)
            return dict(descriptor)

    def get(self, run_id: str) -> dict | None:
        with self._lock:
            descriptor = self._runs.get(run_id)
            return dict(descriptor) if descriptor else None

    def transition(self, run_id: str, status: str, **updates) -> None:
        with self._lock:
            descriptor = self._runs[run_id]
            if status not in _ALLOWED_TRANSITIONS[descriptor["status"]]:
                raise ValidationError(
                    f"illegal status transition {descriptor['status']} -> {status}"
                )
            descriptor["status"] = status
            descriptor.update(updates)
            self._persist(descriptor)

    def report_path(self, run_id: str) -> Path:
        return self.runs_dir / f"{run_id}.report.json"

    def _persist(self, descriptor: dict) -> None:
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        path = self.runs_dir / f"{descriptor['run_id']}.json"
        path.write_text(json.dumps(descriptor, ensure_ascii=False), encoding="utf-8")


def create_app(workbench: Workbench | None = None) -> FastAPI:
    bench = workbench or Workbench(builtin_config())
    app = FastAPI(title="lexkit service", version="1")
    # the browser companion may be served from another origin (no auth here)
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    registry = RunRegistry(bench.config.runs_dir)
    workers = ThreadPoolExecutor(max_workers=2)

    @app.exception_handler(LexkitError)
    async def lexkit_error_handler(request: Request, exc: LexkitError):
        if isinstance(exc, TransportError):
            return JSONResponse(
                _error_body(exc.code, str(exc)), status_code=503,
                headers={"Retry-After": "1"},
            )
        if isinstance(exc, IndexEmpty):
            return JSONResponse(_error_body(exc.code, str(exc)), status_code=409)
        if isinstance(exc, ValidationError):
            return JSONResponse(_error_body(exc.code, str(exc)), status_code=400)
        return JSONResponse(_error_body(exc.code, str(exc)), status_code=500)

    # --- health ---

    @app.get("/healthz")
    def healthz() -> dict:
        size = bench.kb.index_size
        return {"status": "ok" if size > 0 else "degraded", "index_size": size}

    # --- knowledge base ---

    def _hit_payload(hit) -> dict:
        chunk = bench.kb.resolve_chunk(hit.chunk_id)
        doc = bench.kb.store.get(chunk.doc_id, version=chunk.version)
        return {
            "chunk_id": hit.chunk_id,
            "score": hit.score,
            "rank": hit.rank,
            "text": chunk.text,
            "article_no": chunk.article_no,
            "doc_id": chunk.doc_id,
            "version": chunk.version,
            "category": doc.category,
            "title": doc.title,
        }

    @app.get("/v1/kb/search")
    def kb_search(q: str = "", k: int = 3) -> dict:
        if not q.strip():
            raise EmptyQuery("query parameter q is empty")
        if k < 1:
            raise ValidationError("k must be >= 1")
        return {"hits": [_hit_payload(h) for h in bench.kb.search(q, RetrievalConfig(k=k))]}

    @app.post("/v1/kb/documents")
    def kb_upsert(body: dict) -> dict:
        for field in ("category", "title", "body"):
            if not body.get(field):
                raise ValidationError(f"field {field!r} is required")
        doc = bench.kb.upsert(
            body["body"],
            {
                "category": body["category"],
                "title": body["title"],
                "effective_date": body.get("effective_date"),
            },
        )
        bench.save_kb()
        return {"doc_id": doc.doc_id, "version": doc.version}

    # --- consult ---

    def _consult(query: str, k: int | None, template_name: str | None):
        entry = bench.config.provider()
        template = bench.templates.get(template_name or "rag_default")
        config = RetrievalConfig(k=k or bench.config.eval.k)
        return consult(
            query,
            config,
            template,
            entry.profile,
            bench.kb,
            bench.gateway(entry.name),
            entry.model,
            trace_path=bench.config.trace_path,
        )

    def _sse(payload: dict) -> str:
        return f"data: {json.dumps(payload, ensure_ascii=False)}\n\n"

    def _stream_consult(query: str, k: int | None, template_name: str | None) -> Iterator[str]:
        try:
            answer = _consult(query, k, template_name)
        except LexkitError as exc:
            yield _sse({"type": "error", "code": exc.code, "message": str(exc)})
            return
        text = answer.text
        for start in range(0, len(text), DELTA_CHUNK):
            yield _sse({"type": "delta", "text": text[start : start + DELTA_CHUNK]})
        yield _sse(
            {
                "type": "final",
                "citations": [_hit_payload(c) for c in answer.citations],
                "trace_id": answer.trace_id,
            }
        )

    @app.post("/v1/consult")
    def consult_endpoint(body: dict):
        query = (body.get("query") or "").strip()
        if not query:
            raise EmptyQuery("query is empty")
        k = body.get("k")
        if k is not None and int(k) < 1:
            raise ValidationError("k must be >= 1")
        template_name = body.get("template")
        if body.get("stream", True):
            return StreamingResponse(
                _stream_consult(query, k, template_name), media_type="text/event-stream"
            )
        answer = _consult(query, k, template_name)
        return {
            "text": answer.text,
            "citations": [_hit_payload(c) for c in answer.citations],
            "template_name": answer.template_name,
            "trace_id": answer.trace_id,
        }

    # --- evaluation runs ---

    def _submit(kind: str, run_id: str | None, job: Callable[[], dict]) -> JSONResponse:
        rid = run_id or f"{kind}-{uuid.uuid4().hex[:10]}"
        try:
            descriptor = registry.create(rid, kind)
        except ValidationError as exc:
            return JSONResponse(_error_body("duplicate_run", str(exc)), status_code=409)

        def execute() -> None:
            registry.transition(rid, "running")
            try:
                summary = job()
            except Exception as exc:  # noqa: BLE001 - reported on the run
                registry.transition(rid, "failed", error=f"{type(exc).__name__}: {exc}")
                return
            report_path = registry.report_path(rid)
            report_path.write_text(
                json.dumps(summary, ensure_ascii=False, indent=2), encoding="utf-8"
            )
            registry.transition(rid, "done", report_ref=str(report_path))

        workers.submit(execute)
        return JSONResponse(descriptor, status_code=202)

    @app.post("/v1/eval/objective/runs")
    def submit_objective(body: dict):
        dataset_path = Path(body.get("dataset", ""))
        pool_path = Path(body.get("pool", ""))
        if not dataset_path.is_file():
            raise ValidationError(f"dataset file not found: {dataset_path}")
        if not pool_path.is_file():
            raise ValidationError(f"exemplar pool file not found: {pool_path}")
        entry = bench.config.provider(body.get("provider"))
        defaults = bench.config.eval

        def job() -> dict:
            dataset = load_mcq_dataset(dataset_path)
            pool = load_mcq_dataset(pool_path)
            config = FewShotConfig(
                n_single=int(body.get("shots_single", defaults.shots_single)),
                n_multi=int(body.get("shots_multi", defaults.shots_multi)),
                seed=int(body.get("seed", defaults.seed)),
            )
            result = mcq_evaluate(
                dataset,
                pool,
                config,
                entry.profile,
                bench.gateway(entry.name),
                body.get("model", entry.model),
                concurrency=int(body.get("concurrency", bench.config.concurrency)),
            )
            return result.report.to_summary()

        return _submit("objective", body.get("run_id"), job)

    @app.post("/v1/eval/subjective/runs")
    def submit_subjective(body: dict):
        dataset_path = Path(body.get("dataset", ""))
        if not dataset_path.is_file():
            raise ValidationError(f"dataset file not found: {dataset_path}")
        entry = bench.config.provider(body.get("provider"))
        judge_entry = bench.config.provider(body.get("judge_provider"))
        defaults = bench.config.eval

        def job() -> dict:
            dataset = load_subjective_dataset(dataset_path)
            report, _ = judge_evaluate(
                dataset,
                entry.profile,
                judge_entry.profile,
                bench.gateway(entry.name),
                load_default_rubric(bench.templates),
                body.get("model", entry.model),
                body.get("judge_model", judge_entry.model),
                repeats=int(body.get("repeats", defaults.repeats)),
                concurrency=int(body.get("concurrency", bench.config.concurrency)),
                judge_gateway=bench.gateway(judge_entry.name),
            )
            return report_summary(report)

        return _submit("subjective", body.get("run_id"), job)

    @app.get("/v1/eval/runs/{run_id}")
    def get_run(run_id: str):
        descriptor = registry.get(run_id)
        if descriptor is None:
            return JSONResponse(_error_body("unknown_run", run_id), status_code=404)
        if descriptor["status"] == "done" and descriptor["report_ref"]:
            descriptor["report"] = json.loads(
                Path(descriptor["report_ref"]).read_text(encoding="utf-8")
            )
        return descriptor

    return app
