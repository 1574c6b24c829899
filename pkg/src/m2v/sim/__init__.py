"""Deterministic simulated GUI: scenario model, renderer, event dispatch."""

from .render import render
from .scene import (
    Element,
    ElementState,
    Scene,
    SchemaError,
    Screen,
    Transition,
    load_scenario,
)
from .state import (
    Click,
    DoubleClick,
    Key,
    KeyNamed,
    RightClick,
    SimState,
    advance_clock,
    dispatch,
    hit_test,
    new_state,
    replay,
)

__all__ = [
    "Click",
    "DoubleClick",
    "Element",
    "ElementState",
    "Key",
    "KeyNamed",
    "RightClick",
    "Scene",
    "SchemaError",
    "Screen",
    "SimState",
    "Transition",
    "advance_clock",
    "dispatch",
    "hit_test",
    "load_scenario",
    "new_state",
    "render",
    "replay",
]
