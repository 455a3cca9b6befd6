"""Uniform chat-completion client with retries, rate limiting, and
record/replay transcripts.

Every LLM call in the workbench goes through Gateway.complete(). In replay
mode the response comes verbatim from a transcript store keyed by a canonical
request hash, which makes every downstream pipeline deterministic and
offline. Record mode performs the live call and appends the response to the
store; the transcript file is one JSON object per line with fields
{tag, response_text, finish_reason}.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import (
    AuthMissing,
    CorruptTranscript,
    ReplayMiss,
    TransportError,
    ValidationError,
)

ROLES = ("system", "user", "assistant")

BACKOFF_BASE_S = 0.25
BACKOFF_CAP_S = 8.0


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValidationError(f"unknown role: {self.role!r}")
        if self.role in ("user", "assistant") and not self.content:
            raise ValidationError(f"empty content for role {self.role!r}")


def canonical_payload(
    provider_id: str,
    model_id: str,
    messages: Sequence[ChatMessage],
    temperature: float,
) -> str:
    """Field-ordered, whitespace-free rendering of the tag-relevant fields."""
    obj = {
        "messages": [{"content": m.content, "role": m.role} for m in messages],
        "model_id": model_id,
        "provider_id": provider_id,
        "temperature": temperature,
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def request_tag(
    provider_id: str,
    model_id: str,
    messages: Sequence[ChatMessage],
    temperature: float,
) -> str:
    payload = canonical_payload(provider_id, model_id, messages, temperature)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ChatRequest:
    """A chat completion request.

    request_tag is derived from (provider_id, model_id, messages,
    temperature); fields outside that canonical set (max_tokens) never
    change the tag.
    """

    provider_id: str
    model_id: str
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.0
    max_tokens: int = 1024
    request_tag: str = field(default="")

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValidationError("message list is empty")
        if self.messages[0].role == "assistant":
            raise ValidationError("message list must start with system or user")
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValidationError("max_tokens must be positive")
        tag = request_tag(
            self.provider_id, self.model_id, self.messages, self.temperature
        )
        object.__setattr__(self, "request_tag", tag)


def user_request(
    provider_id: str,
    model_id: str,
    text: str,
    temperature: float = 0.0,
    max_tokens: int = 1024,
) -> ChatRequest:
    """Single user-message request, the shape used by all pipeline prompts."""
    return ChatRequest(
        provider_id=provider_id,
        model_id=model_id,
        messages=(ChatMessage("user", text),),
        temperature=temperature,
        max_tokens=max_tokens,
    )


@dataclass(frozen=True)
class ChatResponse:
    text: str
    finish_reason: str = "stop"  # stop | length | error
    attempts: int = 1
    latency_ms: int = 0


@dataclass(frozen=True)
class ProviderProfile:
    """Connection parameters for one provider.

    mode: "live" performs network calls, "record" performs them and appends
    to the transcript store, "replay" never touches the network.
    auth_ref names the environment variable holding the credential; empty
    means the endpoint needs none.
    """

    provider_id: str
    endpoint: str = ""
    auth_ref: str = ""
    max_concurrent: int = 4
    retry_budget: int = 2
    mode: str = "replay"

    def __post_init__(self) -> None:
        if self.mode not in ("live", "record", "replay"):
            raise ValidationError(f"unknown gateway mode: {self.mode!r}")
        if self.max_concurrent < 1:
            raise ValidationError("max_concurrent must be positive")
        if self.retry_budget < 0:
            raise ValidationError("retry_budget must be >= 0")


@dataclass(frozen=True)
class TranscriptEntry:
    tag: str
    response_text: str
    finish_reason: str = "stop"


class TranscriptStore:
    """Ordered transcript entries with per-tag lookup.

    Appends are serialized; reads are lock-free snapshots. A tag may occur
    several times (e.g. repeated judging of one prompt); lookup(tag, i)
    returns the i-th occurrence, clamped to the last.
    """

    def __init__(self, entries: Iterable[TranscriptEntry] = ()) -> None:
        self._lock = threading.Lock()
        self._entries: list[TranscriptEntry] = []
        self._by_tag: dict[str, list[int]] = {}
        for e in entries:
            self.append(e)

    def append(self, entry: TranscriptEntry) -> None:
        with self._lock:
            self._by_tag.setdefault(entry.tag, []).append(len(self._entries))
            self._entries.append(entry)

    def lookup(self, tag: str, occurrence: int = 0) -> TranscriptEntry | None:
        positions = self._by_tag.get(tag)
        if not positions:
            return None
        idx = positions[min(occurrence, len(positions) - 1)]
        return self._entries[idx]

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TranscriptStore):
            return NotImplemented
        return self._entries == other._entries

    @property
    def entries(self) -> tuple[TranscriptEntry, ...]:
        return tuple(self._entries)


def transcript_export(store: TranscriptStore, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for e in store.entries:
            fh.write(
                json.dumps(
                    {
                        "tag": e.tag,
                        "response_text": e.response_text,
                        "finish_reason": e.finish_reason,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def transcript_import(path: str | Path) -> TranscriptStore:
    store = TranscriptStore()
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                entry = TranscriptEntry(
                    tag=obj["tag"],
                    response_text=obj["response_text"],
                    finish_reason=obj.get("finish_reason", "stop"),
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CorruptTranscript(f"line {lineno}: {exc}") from exc
            if not isinstance(entry.tag, str) or not isinstance(
                entry.response_text, str
            ):
                raise CorruptTranscript(f"line {lineno}: wrong field types")
            store.append(entry)
    return store


# A transport performs one live call and returns (text, finish_reason).
# It raises TransportError for retryable failures.
Transport = Callable[[ChatRequest, ProviderProfile, str], tuple[str, str]]


def http_transport(req: ChatRequest, profile: ProviderProfile, api_key: str) -> tuple[str, str]:
    """OpenAI-style chat completions POST. Only used in live/record mode."""
    import httpx

    headers = {"Content-Type": "application/json"}
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    body = {
        "model": req.model_id,
        "messages": [{"role": m.role, "content": m.content} for m in req.messages],
        "temperature": req.temperature,
        "max_tokens": req.max_tokens,
    }
    try:
        resp = httpx.post(profile.endpoint, headers=headers, json=body, timeout=60.0)
        resp.raise_for_status()
        data = resp.json()
        choice = data["choices"][0]
        return choice["message"]["content"], choice.get("finish_reason", "stop")
    except Exception as exc:  # noqa: BLE001 - collapsed into the retry loop
        raise TransportError(str(exc)) from exc


class Gateway:
    """Shareable client front-end; callers may issue requests in parallel.

    A per-provider semaphore caps in-flight live calls at
    profile.max_concurrent. Retries use exponential backoff with full jitter
    (base 250 ms, cap 8 s); a sleeper/rng can be injected for tests.
    """

    def __init__(
        self,
        store: TranscriptStore | None = None,
        transport: Transport | None = None,
        sleeper: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
    ) -> None:
        self.store = store if store is not None else TranscriptStore()
        self._transport = transport if transport is not None else http_transport
        self._sleeper = sleeper
        self._rng = rng or random.Random()
        self._sem_lock = threading.Lock()
        self._semaphores: dict[str, threading.BoundedSemaphore] = {}

    def _semaphore(self, profile: ProviderProfile) -> threading.BoundedSemaphore:
        with self._sem_lock:
            sem = self._semaphores.get(profile.provider_id)
            if sem is None:
                sem = threading.BoundedSemaphore(profile.max_concurrent)
                self._semaphores[profile.provider_id] = sem
            return sem

    def complete(
        self, req: ChatRequest, profile: ProviderProfile, occurrence: int = 0
    ) -> ChatResponse:
        """Run one request. In replay mode, `occurrence` selects among
        multiple stored responses for the same tag (clamped to the last)."""
        if profile.mode == "replay":
            entry = self.store.lookup(req.request_tag, occurrence)
            if entry is None:
                raise ReplayMiss(f"no transcript entry for tag {req.request_tag}")
            return ChatResponse(
                text=entry.response_text,
                finish_reason=entry.finish_reason,
                attempts=1,
                latency_ms=0,
            )

        api_key = ""
        if profile.auth_ref:
            api_key = os.environ.get(profile.auth_ref, "")
            if not api_key:
                raise AuthMissing(
                    f"environment variable {profile.auth_ref} is not set"
                )

        sem = self._semaphore(profile)
        last_error: Exception | None = None
        start = time.monotonic()
        for attempt in range(1, profile.retry_budget + 2):
            with sem:
                try:
                    text, finish_reason = self._transport(req, profile, api_key)
                except TransportError as exc:
                    last_error = exc
                    if attempt <= profile.retry_budget:
                        delay = min(BACKOFF_CAP_S, BACKOFF_BASE_S * 2 ** (attempt - 1))
                        self._sleeper(self._rng.uniform(0.0, delay))
                    continue
            latency_ms = int((time.monotonic() - start) * 1000)
            if profile.mode == "record":
                self.store.append(
                    TranscriptEntry(req.request_tag, text, finish_reason)
                )
            return ChatResponse(
                text=text,
                finish_reason=finish_reason,
                attempts=attempt,
                latency_ms=latency_ms,
            )
        raise TransportError(
            f"provider {profile.provider_id} failed after "
            f"{profile.retry_budget + 1} attempts: {last_error}"
        )
