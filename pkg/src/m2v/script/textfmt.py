"""Text form of action scripts: tabular keyword syntax in four sections.

Layout rules:

* exactly four section headers, in order: ``*** Settings ***``,
  ``*** Variables ***``, ``*** Test Cases ***``, ``*** Keywords ***``
* settings are ``name  value`` rows; variables are ``${name}  value``
* a test case (or user keyword) is an unindented name line followed by
  4-space-indented step lines
* step columns separate on two or more spaces, so single spaces are fine
  inside arguments; trailing ``wait_after=``/``wait_for=``/``origin=``
  columns carry step options (argument values must not start with one of
  those prefixes)
* ``#`` starts a full-line comment; blank lines are ignored
"""

from __future__ import annotations

import re

from ..errors import M2VError
from .model import ENRICHMENT, ActionScript, ScriptStep

_SECTIONS = ("Settings", "Variables", "Test Cases", "Keywords")
_HEADER_RE = re.compile(r"^\*\*\*\s+(.+?)\s+\*\*\*\s*$")
_COLUMN_SPLIT = re.compile(r" {2,}")
_OPTION_RE = re.compile(r"^(wait_after|wait_for|origin)=(.*)$", re.DOTALL)
_VARIABLE_RE = re.compile(r"^\$\{([A-Za-z_][A-Za-z0-9_]*)\}$")


class ScriptSyntaxError(M2VError):
    """Script text violates the format; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# --- serialization -----------------------------------------------------------


def _format_number(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def _step_line(step: ScriptStep) -> str:
    columns = [step.keyword, *step.args]
    if step.wait_after:
        columns.append(f"wait_after={_format_number(step.wait_after)}")
    if step.wait_for is not None:
        columns.append(f"wait_for={step.wait_for[0]}:{step.wait_for[1]}")
    if step.origin != ENRICHMENT:
        columns.append(f"origin={step.origin}")
    return "    " + "  ".join(columns)


def serialize_script(script: ActionScript) -> str:
    lines: list[str] = ["*** Settings ***"]
    lines += [f"{key}  {value}" for key, value in script.settings]
    lines += ["", "*** Variables ***"]
    lines += [f"${{{name}}}  {value}" for name, value in script.variables]
    lines += ["", "*** Test Cases ***"]
    for name, steps in script.test_cases:
        lines.append(name)
        lines += [_step_line(step) for step in steps]
    lines += ["", "*** Keywords ***"]
    for name, steps in script.keywords:
        lines.append(name)
        lines += [_step_line(step) for step in steps]
    return "\n".join(lines) + "\n"


# --- parsing -------------------------------------------------------------------


def _parse_step(columns: list[str], line_no: int) -> ScriptStep:
    keyword = columns[0]
    args: list[str] = []
    options: dict[str, str] = {}
    for column in columns[1:]:
        match = _OPTION_RE.match(column)
        if match:
            name, value = match.groups()
            if name in options:
                raise ScriptSyntaxError(f"duplicate option {name!r}", line_no)
            options[name] = value
        elif options:
            raise ScriptSyntaxError(
                "positional argument after step options", line_no
            )
        else:
            args.append(column)
    wait_after = 0.0
    if "wait_after" in options:
        try:
            wait_after = float(options["wait_after"])
        except ValueError:
            raise ScriptSyntaxError(
                f"bad wait_after value {options['wait_after']!r}", line_no
            ) from None
    wait_for = None
    if "wait_for" in options:
        kind, sep, value = options["wait_for"].partition(":")
        if not sep:
            raise ScriptSyntaxError("wait_for needs kind:value", line_no)
        wait_for = (kind, value)
    origin: int | str = ENRICHMENT
    if "origin" in options:
        raw = options["origin"]
        origin = int(raw) if raw.lstrip("-").isdigit() else raw
    try:
        return ScriptStep(
            keyword=keyword,
            args=tuple(args),
            wait_after=wait_after,
            wait_for=wait_for,
            origin=origin,
        )
    except ValueError as exc:
        raise ScriptSyntaxError(str(exc), line_no) from None


def parse_script(text: str) -> ActionScript:
    """Parse script text; structural inverse of :func:`serialize_script`."""
    settings: list[tuple[str, str]] = []
    variables: list[tuple[str, str]] = []
    cases: list[tuple[str, tuple[ScriptStep, ...]]] = []
    keyword_defs: list[tuple[str, tuple[ScriptStep, ...]]] = []

    section_index = -1  # position within _SECTIONS
    current_name: str | None = None
    current_steps: list[ScriptStep] = []
    line_no = 0

    def flush_block() -> None:
        nonlocal current_name, current_steps
        if current_name is None:
            return
        block = (current_name, tuple(current_steps))
        (cases if section_index == 2 else keyword_defs).append(block)
        current_name = None
        current_steps = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.strip().startswith("#"):
            continue
        header = _HEADER_RE.match(raw)
        if header:
            flush_block()
            name = header.group(1)
            if name not in _SECTIONS:
                raise ScriptSyntaxError(f"unknown section {name!r}", line_no)
            expected = _SECTIONS[section_index + 1] if section_index + 1 < 4 else None
            if name != expected:
                raise ScriptSyntaxError(
                    f"expected section *** {expected} *** before *** {name} ***"
                    if expected
                    else f"section *** {name} *** appears twice",
                    line_no,
                )
            section_index += 1
            continue
        if section_index < 0:
            raise ScriptSyntaxError("content before *** Settings ***", line_no)
        section = _SECTIONS[section_index]
        indented = raw.startswith("    ")
        columns = _COLUMN_SPLIT.split(raw.strip())
        if section == "Settings":
            if len(columns) != 2:
                raise ScriptSyntaxError("settings rows are 'name  value'", line_no)
            settings.append((columns[0], columns[1]))
        elif section == "Variables":
            if len(columns) != 2:
                raise ScriptSyntaxError("variable rows are '${name}  value'", line_no)
            match = _VARIABLE_RE.match(columns[0])
            if not match:
                raise ScriptSyntaxError(
                    f"bad variable name {columns[0]!r}", line_no
                )
            variables.append((match.group(1), columns[1]))
        else:  # Test Cases / Keywords
            if indented:
                if current_name is None:
                    raise ScriptSyntaxError(
                        "step line outside a test case", line_no
                    )
                current_steps.append(_parse_step(columns, line_no))
            else:
                flush_block()
                current_name = raw.strip()
    flush_block()

    if section_index != 3:
        missing = _SECTIONS[section_index + 1]
        raise ScriptSyntaxError(f"missing section *** {missing} ***", max(line_no, 1))
    try:
        return ActionScript(
            settings=tuple(settings),
            variables=tuple(variables),
            test_cases=tuple(cases),
            keywords=tuple(keyword_defs),
        )
    except ValueError as exc:
        raise ScriptSyntaxError(str(exc), max(line_no, 1)) from None
