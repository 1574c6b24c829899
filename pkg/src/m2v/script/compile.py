"""The five enrichment passes that turn action records into a runnable script.

Order: knowledge-base paths, abstract-action expansion, parameter
filling, peripheral mapping, wait insertion. Path attachment runs once
more after expansion (it never overwrites) so routine steps can pick up
knowledge-base images by name too.
"""

from __future__ import annotations

import dataclasses
import logging
import re
from dataclasses import dataclass, field

from ..errors import M2VError
from ..extraction import ActionRecord
from ..lexicon import TargetType
from .kb import KnowledgeBase
from .model import ENRICHMENT, ActionScript, ScriptStep

logger = logging.getLogger(__name__)


class UnmappableKeywordError(M2VError):
    """A record's keyword has no peripheral mapping."""


class UnresolvedParameterError(M2VError):
    """A ${placeholder} has no binding in overrides or KB defaults."""


@dataclass(frozen=True)
class CompileOptions:
    wait_seconds: float = 2.0
    wait_for_timeout: float = 30.0
    slow_targets: frozenset[str] = field(default_factory=frozenset)
    environment: str = "sim"
    screen_size: tuple[int, int] = (512, 320)
    fps: int = 10
    test_name: str = "Converted Procedure"


# --- step 3: knowledge-base image paths ---------------------------------------


def attach_paths(records: list[ActionRecord], kb: KnowledgeBase) -> list[ActionRecord]:
    """Fill empty target paths from the knowledge base; never overwrite."""
    out: list[ActionRecord] = []
    for record in records:
        if record.target_path is None and record.target_object:
            path = kb.image_for(record.target_object)
            if path is not None:
                out.append(dataclasses.replace(record, target_path=path))
                continue
            if record.target_type is TargetType.ICON:
                logger.warning(
                    "icon target %r has no knowledge-base image", record.target_object
                )
        out.append(record)
    return out


# --- step 4: abstract-action routines ------------------------------------------


def expand_abstract(records: list[ActionRecord], kb: KnowledgeBase) -> list[ActionRecord]:
    """Replace records matching a routine key with the routine's steps.

    Expansion is non-recursive: routine-born records are marked and never
    re-expanded, which also makes this pass idempotent.
    """
    out: list[ActionRecord] = []
    for record in records:
        if record.from_routine:
            out.append(record)
            continue
        routine = kb.routine_for(record.keyword, record.target_object)
        if routine is None:
            out.append(record)
            continue
        for i, template in enumerate(routine):
            condition = template.condition
            if i == 0 and condition is None:
                condition = record.condition
            out.append(
                dataclasses.replace(
                    template,
                    source_block=record.source_block,
                    condition=condition,
                )
            )
    return out


# --- step 5: parameter defaults -------------------------------------------------

_PLACEHOLDER = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")


def fill_parameters(
    records: list[ActionRecord],
    kb: KnowledgeBase,
    overrides: dict[str, str] | None = None,
) -> tuple[list[ActionRecord], list[tuple[str, str]]]:
    """Resolve ``${name}`` placeholders; overrides beat KB defaults.

    Returns the rewritten records plus the bindings used, in first-use
    order (they become the script's variables section).
    """
    overrides = overrides or {}
    bindings: list[tuple[str, str]] = []

    def resolve(match: re.Match) -> str:
        name = match.group(1)
        if name in overrides:
            value = overrides[name]
        elif name in kb.defaults:
            value = kb.defaults[name]
        else:
            raise UnresolvedParameterError(f"no value for parameter ${{{name}}}")
        if (name, value) not in bindings:
            bindings.append((name, value))
        return value

    out: list[ActionRecord] = []
    for record in records:
        changed = record
        for field_name in ("target_object", "condition"):
            value = getattr(changed, field_name)
            if value and "${" in value:
                changed = dataclasses.replace(
                    changed, **{field_name: _PLACEHOLDER.sub(resolve, value)}
                )
        out.append(changed)
    return out, bindings


# --- step 1: peripheral mapping --------------------------------------------------

_CLICK_FAMILY = {"click", "select", "check", "uncheck", "choose", "open"}
_TYPE_FAMILY = {"type", "input", "enter"}


def map_peripheral(record: ActionRecord, origin: int | str = ENRICHMENT) -> ScriptStep:
    """Map one record onto a concrete mouse/keyboard step."""
    keyword = record.keyword
    if keyword in _CLICK_FAMILY:
        if record.target_path:
            return ScriptStep("click_image", (record.target_path,), origin=origin)
        return ScriptStep("click_text", (record.target_object,), origin=origin)
    if keyword in ("right-click", "double-click"):
        if not record.target_path:
            raise UnmappableKeywordError(
                f"{keyword} needs an element image for {record.target_object!r};"
                " none was extracted or found in the knowledge base"
            )
        step_kw = "right_click_image" if keyword == "right-click" else "double_click_image"
        return ScriptStep(step_kw, (record.target_path,), origin=origin)
    if keyword in _TYPE_FAMILY:
        return ScriptStep("type_text", (record.target_object,), origin=origin)
    if keyword == "press":
        return ScriptStep("press_key", (record.target_object,), origin=origin)
    raise UnmappableKeywordError(f"no peripheral mapping for keyword {record.keyword!r}")


# --- step 2: waits ---------------------------------------------------------------

_RECORDER_KEYWORDS = ("start_recording", "stop_recording")


def insert_waits(
    steps: list[ScriptStep],
    options: CompileOptions,
    slow_indices: frozenset[int] | None = None,
) -> list[ScriptStep]:
    """Give every action step the standard pause, or a completion wait.

    Steps at ``slow_indices`` whose successor has a locatable target get
    ``wait_for`` that target (the completion indicator) instead of the
    fixed pause. Recorder control steps take no wait at all.
    """
    slow_indices = slow_indices or frozenset()
    out: list[ScriptStep] = []
    for i, step in enumerate(steps):
        if step.keyword in _RECORDER_KEYWORDS or step.wait_after or step.wait_for:
            out.append(step)
            continue
        if i in slow_indices and i + 1 < len(steps):
            indicator = steps[i + 1].target()
            if indicator is not None:
                out.append(dataclasses.replace(step, wait_for=indicator))
                continue
        out.append(dataclasses.replace(step, wait_after=options.wait_seconds))
    return out


# --- the whole pipeline -----------------------------------------------------------


def compile_records(
    records: list[ActionRecord],
    kb: KnowledgeBase,
    options: CompileOptions | None = None,
    overrides: dict[str, str] | None = None,
) -> ActionScript:
    """Enrich an action list into a complete script, bracketed by recording."""
    if not records:
        raise ValueError("cannot compile an empty action list")
    options = options or CompileOptions()

    enriched = attach_paths(records, kb)
    enriched = expand_abstract(enriched, kb)
    enriched = attach_paths(enriched, kb)
    enriched, bindings = fill_parameters(enriched, kb, overrides)

    steps: list[ScriptStep] = [ScriptStep("start_recording")]
    slow: set[int] = set()
    slow_names = {name.casefold() for name in options.slow_targets}
    for index, record in enumerate(enriched):
        mapped = map_peripheral(record, origin=index)
        if record.condition:
            # Conditional actions wait for their own target to appear
            # before acting; the scenario must eventually present it.
            indicator = mapped.target() or ("text", record.target_object)
            steps.append(
                ScriptStep(
                    f"wait_for_{indicator[0]}", (indicator[1],), origin=index
                )
            )
        if record.target_object.casefold() in slow_names:
            slow.add(len(steps))
        steps.append(mapped)
    steps.append(ScriptStep("stop_recording"))
    steps = insert_waits(steps, options, frozenset(slow))

    settings = (
        ("environment", options.environment),
        ("screen_size", f"{options.screen_size[0]}x{options.screen_size[1]}"),
        ("fps", str(options.fps)),
    )
    return ActionScript(
        settings=settings,
        variables=tuple(bindings),
        test_cases=((options.test_name, tuple(steps)),),
        keywords=(),
    )
