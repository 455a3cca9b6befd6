"""Versioned prompt-template assets.

Templates are plain UTF-8 files with single-brace placeholders; a manifest
maps name -> version -> path. Each kind has a fixed placeholder contract,
checked at load time: "rag" bodies take {input} exactly once and {references}
at most once (plus a no-reference variant without {references}); "lcot"
bodies take {X} exactly once; "text" bodies take none. Unknown placeholders
are rejected.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import TemplateInvalid

PLACEHOLDER_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")

_KIND_RULES: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    # kind -> (required placeholders, optional placeholders)
    "rag": (frozenset({"input"}), frozenset({"references"})),
    "lcot": (frozenset({"X"}), frozenset()),
    "text": (frozenset(), frozenset()),
}


def _check_placeholders(body: str, kind: str, *, forbid: frozenset[str] = frozenset()) -> None:
    required, optional = _KIND_RULES[kind]
    seen: dict[str, int] = {}
    for m in PLACEHOLDER_RE.finditer(body):
        seen[m.group(1)] = seen.get(m.group(1), 0) + 1
    for name in seen:
        if name not in required | optional:
            raise TemplateInvalid(f"unknown placeholder {{{name}}} in {kind} template")
        if name in forbid:
            raise TemplateInvalid(f"placeholder {{{name}}} not allowed in this variant")
    for name in required:
        if seen.get(name, 0) != 1:
            raise TemplateInvalid(
                f"placeholder {{{name}}} must appear exactly once, found {seen.get(name, 0)}"
            )
    for name in optional:
        if seen.get(name, 0) > 1:
            raise TemplateInvalid(f"placeholder {{{name}}} may appear at most once")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    version: int
    kind: str
    body: str
    noref_body: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KIND_RULES:
            raise TemplateInvalid(f"unknown template kind: {self.kind!r}")
        if self.version < 1:
            raise TemplateInvalid("version must be a positive integer")
        _check_placeholders(self.body, self.kind)
        if self.noref_body is not None:
            _check_placeholders(self.noref_body, self.kind, forbid=frozenset({"references"}))

    def render(self, values: dict[str, str], *, noref: bool = False) -> str:
        body = self.noref_body if noref else self.body
        if body is None:
            raise TemplateInvalid(f"template {self.name} has no no-reference variant")
        for key, value in values.items():
            body = body.replace("{" + key + "}", value)
        return body


class TemplateLibrary:
    """Templates loaded from a manifest file; defaults to the packaged set."""

    def __init__(self, templates: dict[str, PromptTemplate]) -> None:
        self._templates = templates

    @classmethod
    def load(cls, manifest_path: str | Path | None = None) -> "TemplateLibrary":
        if manifest_path is None:
            root = resources.files("lexkit") / "templates"
            manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
            read = lambda rel: (root / rel).read_text(encoding="utf-8")  # noqa: E731
        else:
            base = Path(manifest_path).parent
            manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
            read = lambda rel: (base / rel).read_text(encoding="utf-8")  # noqa: E731
        templates: dict[str, PromptTemplate] = {}
        for entry in manifest["templates"]:
            tpl = PromptTemplate(
                name=entry["name"],
                version=int(entry["version"]),
                kind=entry["kind"],
                body=read(entry["path"]),
                noref_body=read(entry["noref_path"]) if entry.get("noref_path") else None,
            )
            templates[tpl.name] = tpl
        return cls(templates)

    def get(self, name: str) -> PromptTemplate:
        tpl = self._templates.get(name)
        if tpl is None:
            raise TemplateInvalid(f"unknown template: {name!r}")
        return tpl

    def names(self) -> list[str]:
        return sorted(self._templates)


_default_library: TemplateLibrary | None = None


def default_library() -> TemplateLibrary:
    global _default_library
    if _default_library is None:
        _default_library = TemplateLibrary.load()
    return _default_library
