"""Scenario model and its JSON loader.

A scenario is the single source of truth for a simulated GUI: screens of
widgets, plus transitions that fire on input events. Validation errors
carry a JSON-pointer-style location so broken fixtures are easy to fix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from ..errors import M2VError
from ..raster import Raster, read_image

ELEMENT_KINDS = ("button", "checkbox", "label", "textbox", "icon", "menu_item")
EVENT_KINDS = ("click", "right_click", "double_click", "text_committed")
STATE_FIELDS = {"enabled": bool, "checked": bool, "text": str, "focused": bool}


class SchemaError(M2VError):
    """Scenario JSON is malformed; message includes a JSON pointer."""


@dataclass(frozen=True)
class ElementState:
    enabled: bool = True
    checked: bool = False
    text: str = ""
    focused: bool = False


@dataclass(frozen=True)
class Element:
    id: str
    kind: str
    label: str
    rect: tuple[int, int, int, int]  # x, y, w, h
    state: ElementState = field(default_factory=ElementState)
    icon_image: Raster | None = None

    def contains(self, x: int, y: int) -> bool:
        ex, ey, ew, eh = self.rect
        return ex <= x < ex + ew and ey <= y < ey + eh


@dataclass(frozen=True)
class Screen:
    id: str
    background: tuple[int, int, int]
    elements: tuple[Element, ...]  # later elements draw on top

    def element(self, element_id: str) -> Element | None:
        for el in self.elements:
            if el.id == element_id:
                return el
        return None


@dataclass(frozen=True)
class Goto:
    screen: str


@dataclass(frozen=True)
class SetState:
    screen: str
    element: str
    field: str
    value: bool | str


@dataclass(frozen=True)
class Delay:
    ticks: int


Effect = Union[Goto, SetState, Delay]


@dataclass(frozen=True)
class Transition:
    screen: str
    element: str
    event: str
    effects: tuple[Effect, ...]


@dataclass(frozen=True)
class Scene:
    screen_size: tuple[int, int]
    screens: dict[str, Screen]
    initial_screen: str
    transitions: tuple[Transition, ...]
    goal_screen: str | None = None


def _err(pointer: str, message: str) -> SchemaError:
    return SchemaError(f"{pointer}: {message}")


def _require(data: dict, key: str, pointer: str):
    if key not in data:
        raise _err(pointer, f"missing field {key!r}")
    return data[key]


def _int_pair(value, pointer: str) -> tuple[int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) and v > 0 for v in value)
    ):
        raise _err(pointer, "expected [width, height] of positive integers")
    return (value[0], value[1])


def _color(value, pointer: str) -> tuple[int, int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or not all(isinstance(v, int) and 0 <= v <= 255 for v in value)
    ):
        raise _err(pointer, "expected [r, g, b] bytes")
    return (value[0], value[1], value[2])


def _parse_state(data, pointer: str) -> ElementState:
    if not isinstance(data, dict):
        raise _err(pointer, "state must be an object")
    kwargs = {}
    for key, value in data.items():
        if key not in STATE_FIELDS:
            raise _err(pointer, f"unknown state field {key!r}")
        if not isinstance(value, STATE_FIELDS[key]):
            raise _err(pointer, f"state field {key!r} must be {STATE_FIELDS[key].__name__}")
        kwargs[key] = value
    return ElementState(**kwargs)


def _parse_element(data, pointer: str, screen_size: tuple[int, int], base: Path) -> Element:
    if not isinstance(data, dict):
        raise _err(pointer, "element must be an object")
    element_id = _require(data, "id", pointer)
    kind = _require(data, "kind", pointer)
    if kind not in ELEMENT_KINDS:
        raise _err(f"{pointer}/kind", f"unknown kind {kind!r}")
    rect = _require(data, "rect", pointer)
    if (
        not isinstance(rect, list)
        or len(rect) != 4
        or not all(isinstance(v, int) for v in rect)
        or rect[2] < 1
        or rect[3] < 1
    ):
        raise _err(f"{pointer}/rect", "expected [x, y, w, h] with positive size")
    x, y, w, h = rect
    sw, sh = screen_size
    if x < 0 or y < 0 or x + w > sw or y + h > sh:
        raise _err(f"{pointer}/rect", f"rect {rect} outside screen {sw}x{sh}")
    state = _parse_state(data.get("state", {}), f"{pointer}/state")
    icon = None
    if "icon_image" in data:
        icon_path = base / data["icon_image"]
        if not icon_path.is_file():
            raise _err(f"{pointer}/icon_image", f"image not found: {icon_path}")
        icon = read_image(icon_path)
    elif kind == "icon":
        raise _err(pointer, "icon elements need an icon_image")
    return Element(
        id=element_id,
        kind=kind,
        label=str(data.get("label", "")),
        rect=(x, y, w, h),
        state=state,
        icon_image=icon,
    )


def _parse_effect(data, pointer: str, screens: dict[str, Screen]) -> Effect:
    if not isinstance(data, dict) or len(data) != 1:
        raise _err(pointer, "effect must be one of goto/set_state/delay")
    if "goto" in data:
        target = data["goto"]
        if target not in screens:
            raise _err(f"{pointer}/goto", f"unknown screen {target!r}")
        return Goto(target)
    if "delay" in data:
        ticks = data["delay"]
        if not isinstance(ticks, int) or ticks < 0:
            raise _err(f"{pointer}/delay", "delay must be a non-negative tick count")
        return Delay(ticks)
    if "set_state" in data:
        body = data["set_state"]
        for key in ("screen", "element", "field", "value"):
            if not isinstance(body, dict) or key not in body:
                raise _err(f"{pointer}/set_state", f"missing {key!r}")
        screen = screens.get(body["screen"])
        if screen is None:
            raise _err(f"{pointer}/set_state/screen", f"unknown screen {body['screen']!r}")
        if screen.element(body["element"]) is None:
            raise _err(
                f"{pointer}/set_state/element",
                f"unknown element {body['element']!r} on screen {body['screen']!r}",
            )
        field_name = body["field"]
        if field_name not in STATE_FIELDS:
            raise _err(f"{pointer}/set_state/field", f"unknown field {field_name!r}")
        if not isinstance(body["value"], STATE_FIELDS[field_name]):
            raise _err(
                f"{pointer}/set_state/value",
                f"{field_name} takes {STATE_FIELDS[field_name].__name__}",
            )
        return SetState(body["screen"], body["element"], field_name, body["value"])
    raise _err(pointer, "effect must be one of goto/set_state/delay")


def load_scenario(path: str | Path) -> Scene:
    """Load and validate a scenario JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _err("", "scenario must be a JSON object")

    screen_size = _int_pair(_require(data, "screen_size", ""), "/screen_size")
    raw_screens = _require(data, "screens", "")
    if not isinstance(raw_screens, list) or not raw_screens:
        raise _err("/screens", "expected a non-empty array")

    screens: dict[str, Screen] = {}
    for i, raw in enumerate(raw_screens):
        pointer = f"/screens/{i}"
        if not isinstance(raw, dict):
            raise _err(pointer, "screen must be an object")
        screen_id = _require(raw, "id", pointer)
        if screen_id in screens:
            raise _err(f"{pointer}/id", f"duplicate screen id {screen_id!r}")
        background = _color(raw.get("background", [255, 255, 255]), f"{pointer}/background")
        elements: list[Element] = []
        seen: set[str] = set()
        focused = 0
        for j, element_data in enumerate(raw.get("elements", [])):
            element = _parse_element(
                element_data, f"{pointer}/elements/{j}", screen_size, path.parent
            )
            if element.id in seen:
                raise _err(f"{pointer}/elements/{j}/id", f"duplicate id {element.id!r}")
            seen.add(element.id)
            if element.kind == "textbox" and element.state.focused:
                focused += 1
            elements.append(element)
        if focused > 1:
            raise _err(f"{pointer}/elements", "at most one focused textbox per screen")
        screens[screen_id] = Screen(screen_id, background, tuple(elements))

    initial = _require(data, "initial", "")
    if initial not in screens:
        raise _err("/initial", f"unknown screen {initial!r}")

    transitions: list[Transition] = []
    for i, raw in enumerate(data.get("transitions", [])):
        pointer = f"/transitions/{i}"
        if not isinstance(raw, dict):
            raise _err(pointer, "transition must be an object")
        on = _require(raw, "on", pointer)
        if not isinstance(on, list) or len(on) != 3:
            raise _err(f"{pointer}/on", "expected [screen, element, event]")
        screen_id, element_id, event = on
        screen = screens.get(screen_id)
        if screen is None:
            raise _err(f"{pointer}/on", f"unknown screen {screen_id!r}")
        if screen.element(element_id) is None:
            raise _err(f"{pointer}/on", f"unknown element {element_id!r}")
        if event not in EVENT_KINDS:
            raise _err(f"{pointer}/on", f"unknown event {event!r}")
        raw_effects = _require(raw, "effects", pointer)
        if not isinstance(raw_effects, list) or not raw_effects:
            raise _err(f"{pointer}/effects", "expected a non-empty array")
        effects = tuple(
            _parse_effect(effect, f"{pointer}/effects/{j}", screens)
            for j, effect in enumerate(raw_effects)
        )
        transitions.append(Transition(screen_id, element_id, event, effects))

    goal = data.get("goal")
    if goal is not None and goal not in screens:
        raise _err("/goal", f"unknown screen {goal!r}")

    return Scene(
        screen_size=screen_size,
        screens=screens,
        initial_screen=initial,
        transitions=tuple(transitions),
        goal_screen=goal,
    )
