"""Knowledge base: pre-collected element images, routines, parameter defaults.

On-disk layout is a directory holding ``kb.json`` plus the element image
files it references::

    {
      "elements": {"Windows menu": "windows_logo.ppm"},
      "routines": {
        "open settings": [
          {"keyword": "type", "target_type": "Text", "target_object": "settings"},
          {"keyword": "press", "target_object": "Enter"},
          {"keyword": "click", "target_type": "Icon", "target_object": "Settings"}
        ]
      },
      "defaults": {"ip_address": "192.0.2.10"}
    }

Routine keys are matched as ``"<keyword> <target>"``, case-insensitively.
Routine steps may name element images via ``target_path`` (relative to
the knowledge-base directory).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from ..errors import M2VError
from ..extraction import ActionRecord
from ..lexicon import TargetType


class KnowledgeBaseError(M2VError):
    """Malformed knowledge base."""


@dataclass(frozen=True)
class KnowledgeBase:
    element_images: Mapping[str, str]  # casefolded name -> absolute path
    routines: Mapping[str, tuple[ActionRecord, ...]]  # casefolded key -> steps
    defaults: Mapping[str, str]

    @classmethod
    def empty(cls) -> "KnowledgeBase":
        return cls(MappingProxyType({}), MappingProxyType({}), MappingProxyType({}))

    def image_for(self, name: str) -> str | None:
        return self.element_images.get(name.casefold())

    def routine_for(self, keyword: str, target: str) -> tuple[ActionRecord, ...] | None:
        return self.routines.get(f"{keyword} {target}".casefold())


def _parse_routine_step(key: str, index: int, data: dict, root: Path) -> ActionRecord:
    if "keyword" not in data or "target_object" not in data:
        raise KnowledgeBaseError(
            f"routine {key!r} step {index}: keyword and target_object are required"
        )
    try:
        target_type = TargetType(data.get("target_type", "Unknown"))
    except ValueError as exc:
        raise KnowledgeBaseError(f"routine {key!r} step {index}: {exc}") from exc
    target_path = data.get("target_path")
    if target_path is not None:
        resolved = root / target_path
        if not resolved.is_file():
            raise KnowledgeBaseError(
                f"routine {key!r} step {index}: image not found: {resolved}"
            )
        target_path = str(resolved)
    return ActionRecord(
        keyword=data["keyword"],
        target_type=target_type,
        target_object=data["target_object"],
        target_path=target_path,
        condition=data.get("condition"),
        from_routine=True,
    )


def load_kb(path: str | Path) -> KnowledgeBase:
    """Load and validate a knowledge base directory (or its kb.json)."""
    path = Path(path)
    json_path = path / "kb.json" if path.is_dir() else path
    root = json_path.parent
    try:
        data = json.loads(json_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise KnowledgeBaseError(f"cannot read knowledge base {json_path}: {exc}") from exc

    elements: dict[str, str] = {}
    for name, rel in data.get("elements", {}).items():
        resolved = root / rel
        if not resolved.is_file():
            raise KnowledgeBaseError(f"element image for {name!r} not found: {resolved}")
        elements[name.casefold()] = str(resolved)

    routines: dict[str, tuple[ActionRecord, ...]] = {}
    for key, steps in data.get("routines", {}).items():
        if not isinstance(steps, list) or not steps:
            raise KnowledgeBaseError(f"routine {key!r} must expand to at least one step")
        routines[key.casefold()] = tuple(
            _parse_routine_step(key, i, step, root) for i, step in enumerate(steps)
        )

    defaults = {str(k): str(v) for k, v in data.get("defaults", {}).items()}
    return KnowledgeBase(
        element_images=MappingProxyType(elements),
        routines=MappingProxyType(routines),
        defaults=MappingProxyType(defaults),
    )
