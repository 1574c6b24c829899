"""Simulation state: virtual clock, event dispatch, delayed effects.

State is single-owner mutable: dispatch/advance_clock mutate in place and
return the state for chaining. Every input event is appended to the
event log with its tick, so a run can be replayed from the initial state.
"""

from __future__ import annotations

import dataclasses
import heapq
from dataclasses import dataclass, field
from typing import Union

from .scene import Delay, Effect, ElementState, Goto, Scene, SetState


@dataclass(frozen=True)
class Click:
    x: int
    y: int


@dataclass(frozen=True)
class RightClick:
    x: int
    y: int


@dataclass(frozen=True)
class DoubleClick:
    x: int
    y: int


@dataclass(frozen=True)
class Key:
    char: str


@dataclass(frozen=True)
class KeyNamed:
    name: str


Event = Union[Click, RightClick, DoubleClick, Key, KeyNamed]

_POINTER_EVENT_NAMES = {
    Click: "click",
    RightClick: "right_click",
    DoubleClick: "double_click",
}


@dataclass
class SimState:
    scene: Scene
    current_screen: str
    element_states: dict[tuple[str, str], dict] = field(default_factory=dict)
    clock: int = 0
    event_log: list[dict] = field(default_factory=list)
    pending: list[tuple[int, int, Effect]] = field(default_factory=list)
    _seq: int = 0
    last_handled: bool = False


def new_state(scene: Scene) -> SimState:
    return SimState(scene=scene, current_screen=scene.initial_screen)


def element_state(state: SimState, screen_id: str, element_id: str) -> ElementState:
    """Scenario-declared state merged with runtime overrides."""
    base = state.scene.screens[screen_id].element(element_id).state
    overrides = state.element_states.get((screen_id, element_id))
    if not overrides:
        return base
    return dataclasses.replace(base, **overrides)


def _set_field(state: SimState, screen_id: str, element_id: str, name: str, value) -> None:
    state.element_states.setdefault((screen_id, element_id), {})[name] = value


def hit_test(state: SimState, x: int, y: int) -> str | None:
    """Topmost enabled element under the point on the current screen."""
    screen = state.scene.screens[state.current_screen]
    for element in reversed(screen.elements):
        if not element_state(state, screen.id, element.id).enabled:
            continue
        if element.contains(x, y):
            return element.id
    return None


def _log(state: SimState, event: str, **payload) -> None:
    state.event_log.append({"tick": state.clock, "event": event, **payload})


def _apply_effect(state: SimState, effect: Effect) -> None:
    if isinstance(effect, Goto):
        state.current_screen = effect.screen
        _log(state, "goto", screen=effect.screen)
    elif isinstance(effect, SetState):
        _set_field(state, effect.screen, effect.element, effect.field, effect.value)
        _log(
            state,
            "set_state",
            screen=effect.screen,
            element=effect.element,
            field=effect.field,
            value=effect.value,
        )


def _fire_transitions(state: SimState, screen_id: str, element_id: str, event: str) -> bool:
    fired = False
    for transition in state.scene.transitions:
        if (transition.screen, transition.element, transition.event) != (
            screen_id,
            element_id,
            event,
        ):
            continue
        fired = True
        delay = 0
        for effect in transition.effects:
            if isinstance(effect, Delay):
                delay += effect.ticks
            elif delay > 0:
                heapq.heappush(
                    state.pending, (state.clock + delay, state._seq, effect)
                )
                state._seq += 1
            else:
                _apply_effect(state, effect)
    return fired


def _focused_textbox(state: SimState) -> str | None:
    screen = state.scene.screens[state.current_screen]
    for element in screen.elements:
        if element.kind != "textbox":
            continue
        st = element_state(state, screen.id, element.id)
        if st.enabled and st.focused:
            return element.id
    return None


def dispatch(state: SimState, event: Event) -> SimState:
    """Deliver one input event; always total (unhandled events just log)."""
    handled = False
    if isinstance(event, (Click, RightClick, DoubleClick)):
        name = _POINTER_EVENT_NAMES[type(event)]
        screen_id = state.current_screen
        hit = hit_test(state, event.x, event.y)
        _log(state, name, x=event.x, y=event.y, hit=hit)
        if hit is not None:
            handled = True
            element = state.scene.screens[screen_id].element(hit)
            if name == "click":
                if element.kind == "checkbox":
                    current = element_state(state, screen_id, hit).checked
                    _set_field(state, screen_id, hit, "checked", not current)
                elif element.kind == "textbox":
                    for other in state.scene.screens[screen_id].elements:
                        if other.kind == "textbox":
                            _set_field(state, screen_id, other.id, "focused", other.id == hit)
            _fire_transitions(state, screen_id, hit, name)
    elif isinstance(event, Key):
        target = _focused_textbox(state)
        _log(state, "key", char=event.char, hit=target)
        if target is not None:
            handled = True
            current = element_state(state, state.current_screen, target).text
            _set_field(state, state.current_screen, target, "text", current + event.char)
    elif isinstance(event, KeyNamed):
        target = _focused_textbox(state)
        _log(state, "key_named", name=event.name, hit=target)
        if event.name == "Enter" and target is not None:
            handled = True
            screen_id = state.current_screen
            _log(state, "text_committed", element=target)
            _fire_transitions(state, screen_id, target, "text_committed")
    else:
        raise TypeError(f"unknown event {event!r}")
    state.last_handled = handled
    return state


def advance_clock(state: SimState, ticks: int) -> SimState:
    """Advance the virtual clock, applying due delayed effects in order."""
    if ticks < 0:
        raise ValueError("ticks must be >= 0")
    state.clock += ticks
    while state.pending and state.pending[0][0] <= state.clock:
        _, _, effect = heapq.heappop(state.pending)
        _apply_effect(state, effect)
    return state


_INPUT_EVENTS = {
    "click": lambda entry: Click(entry["x"], entry["y"]),
    "right_click": lambda entry: RightClick(entry["x"], entry["y"]),
    "double_click": lambda entry: DoubleClick(entry["x"], entry["y"]),
    "key": lambda entry: Key(entry["char"]),
    "key_named": lambda entry: KeyNamed(entry["name"]),
}


def replay(scene: Scene, event_log: list[dict]) -> SimState:
    """Rebuild a state by re-dispatching the logged input events."""
    state = new_state(scene)
    final_tick = 0
    for entry in event_log:
        maker = _INPUT_EVENTS.get(entry["event"])
        final_tick = max(final_tick, entry["tick"])
        if maker is None:
            continue
        if entry["tick"] > state.clock:
            advance_clock(state, entry["tick"] - state.clock)
        dispatch(state, maker(entry))
    if final_tick > state.clock:
        advance_clock(state, final_tick - state.clock)
    return state
