"""Workbench configuration: a commented YAML file with nested sections.

Flags override config values; exactly one provider must be marked default
(a lone provider is implicitly default). Replay transcripts and a custom
template manifest must exist at load time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ValidationError
from .gateway import Gateway, ProviderProfile, TranscriptStore, transcript_export, transcript_import
from .kb import KnowledgeBase
from .prompts import TemplateLibrary, default_library

DEFAULT_CONFIG_NAME = "lexkit.yaml"


@dataclass(frozen=True)
class ProviderEntry:
    name: str
    profile: ProviderProfile
    model: str
    transcript: Path | None = None


@dataclass
class EvalDefaults:
    shots_single: int = 4
    shots_multi: int = 5
    seed: int = 0
    repeats: int = 3
    k: int = 3


@dataclass
class WorkbenchConfig:
    providers: dict[str, ProviderEntry] = field(default_factory=dict)
    default_provider: str = ""
    kb_store_dir: Path = Path("kb_store")
    template_manifest: Path | None = None
    eval: EvalDefaults = field(default_factory=EvalDefaults)
    concurrency: int = 4
    trace_path: Path | None = None
    runs_dir: Path = Path("runs")
    base_dir: Path = Path(".")

    def provider(self, name: str | None = None) -> ProviderEntry:
        key = name or self.default_provider
        entry = self.providers.get(key)
        if entry is None:
            raise ValidationError(f"unknown provider {key!r}")
        return entry


def builtin_config() -> WorkbenchConfig:
    """Offline default: one replay provider with an empty transcript."""
    entry = ProviderEntry(
        name="replay",
        profile=ProviderProfile(provider_id="replay", mode="replay"),
        model="scripted-v1",
        transcript=None,
    )
    return WorkbenchConfig(providers={"replay": entry}, default_provider="replay")


def load_config(path: str | Path) -> WorkbenchConfig:
    path = Path(path)
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    base = path.parent

    providers: dict[str, ProviderEntry] = {}
    defaults: list[str] = []
    for name, raw in (data.get("providers") or {}).items():
        raw = raw or {}
        profile = ProviderProfile(
            provider_id=name,
            endpoint=raw.get("endpoint", ""),
            auth_ref=raw.get("auth_ref", ""),
            max_concurrent=int(raw.get("max_concurrent", 4)),
            retry_budget=int(raw.get("retry_budget", 2)),
            mode=raw.get("mode", "replay"),
        )
        transcript = raw.get("transcript")
        transcript_path = (base / transcript) if transcript else None
        if profile.mode == "replay":
            if transcript_path is None:
                raise ValidationError(f"provider {name!r}: replay mode needs a transcript")
            if not transcript_path.exists():
                raise ValidationError(
                    f"provider {name!r}: transcript {transcript_path} does not exist"
                )
        if raw.get("default"):
            defaults.append(name)
        providers[name] = ProviderEntry(
            name=name,
            profile=profile,
            model=raw.get("model", "scripted-v1"),
            transcript=transcript_path,
        )
    if not providers:
        raise ValidationError("config defines no providers")
    if len(providers) == 1 and not defaults:
        defaults = list(providers)
    if len(defaults) != 1:
        raise ValidationError(f"exactly one default provider required, got {defaults}")

    manifest = data.get("templates", {}).get("manifest") if data.get("templates") else None
    manifest_path = (base / manifest) if manifest else None
    if manifest_path is not None and not manifest_path.exists():
        raise ValidationError(f"template manifest {manifest_path} does not exist")

    eval_raw = data.get("eval") or {}
    eval_defaults = EvalDefaults(
        shots_single=int(eval_raw.get("shots_single", 4)),
        shots_multi=int(eval_raw.get("shots_multi", 5)),
        seed=int(eval_raw.get("seed", 0)),
        repeats=int(eval_raw.get("repeats", 3)),
        k=int(eval_raw.get("k", 3)),
    )

    kb_raw = data.get("kb") or {}
    trace = data.get("trace_path")
    return WorkbenchConfig(
        providers=providers,
        default_provider=defaults[0],
        kb_store_dir=base / kb_raw.get("store_dir", "kb_store"),
        template_manifest=manifest_path,
        eval=eval_defaults,
        concurrency=int(data.get("concurrency", 4)),
        trace_path=(base / trace) if trace else None,
        runs_dir=base / data.get("runs_dir", "runs"),
        base_dir=base,
    )


class Workbench:
    """Live assembly of the configured pieces: per-provider gateways, the
    knowledge base, and the template library."""

    def __init__(self, config: WorkbenchConfig) -> None:
        self.config = config
        self._gateways: dict[str, Gateway] = {}
        self._kb: KnowledgeBase | None = None
        self._templates: TemplateLibrary | None = None

    @property
    def templates(self) -> TemplateLibrary:
        if self._templates is None:
            if self.config.template_manifest is not None:
                self._templates = TemplateLibrary.load(self.config.template_manifest)
            else:
                self._templates = default_library()
        return self._templates

    @property
    def kb(self) -> KnowledgeBase:
        if self._kb is None:
            store_dir = self.config.kb_store_dir
            if (store_dir / "documents.jsonl").exists():
                self._kb = KnowledgeBase.load(store_dir)
            else:
                self._kb = KnowledgeBase()
        return self._kb

    def save_kb(self) -> None:
        if self._kb is not None:
            self._kb.save(self.config.kb_store_dir)

    def gateway(self, provider: str | None = None) -> Gateway:
        entry = self.config.provider(provider)
        if entry.name not in self._gateways:
            if entry.transcript is not None and entry.transcript.exists():
                store = transcript_import(entry.transcript)
            else:
                store = TranscriptStore()
            self._gateways[entry.name] = Gateway(store)
        return self._gateways[entry.name]

    def flush_transcripts(self) -> None:
        """Persist record-mode stores back to their transcript files."""
        for name, gateway in self._gateways.items():
            entry = self.config.providers[name]
            if entry.profile.mode == "record" and entry.transcript is not None:
                transcript_export(gateway.store, entry.transcript)
