import copy
import json
import random

import pytest

from m2v.fonts import default_atlas
from m2v.sim import (
    Click,
    DoubleClick,
    Key,
    KeyNamed,
    RightClick,
    SchemaError,
    advance_clock,
    dispatch,
    hit_test,
    load_scenario,
    new_state,
    render,
    replay,
)
from m2v.vision import crop
from m2v.vision.boxes import BoundingBox


def write_scenario(tmp_path, data, name="scene.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


MINIMAL = {
    "screen_size": [320, 200],
    "initial": "main",
    "screens": [
        {
            "id": "main",
            "background": [250, 250, 250],
            "elements": [
                {"id": "next", "kind": "button", "label": "Next", "rect": [40, 60, 120, 36]}
            ],
        }
    ],
    "transitions": [],
}


def two_screen_scenario():
    return {
        "screen_size": [320, 200],
        "initial": "first",
        "goal": "second",
        "screens": [
            {
                "id": "first",
                "background": [250, 250, 250],
                "elements": [
                    {"id": "go", "kind": "button", "label": "Go", "rect": [40, 60, 90, 36]},
                    {"id": "entry", "kind": "textbox", "label": "", "rect": [40, 110, 200, 32]},
                    {"id": "agree", "kind": "checkbox", "label": "", "rect": [250, 60, 24, 24]},
                    {
                        "id": "done_lbl",
                        "kind": "label",
                        "label": "Done",
                        "rect": [40, 12, 80, 24],
                        "state": {"enabled": False},
                    },
                ],
            },
            {"id": "second", "background": [230, 240, 250], "elements": []},
        ],
        "transitions": [
            {"on": ["first", "go", "click"], "effects": [{"goto": "second"}]},
            {
                "on": ["first", "entry", "text_committed"],
                "effects": [
                    {"delay": 10},
                    {
                        "set_state": {
                            "screen": "first",
                            "element": "done_lbl",
                            "field": "enabled",
                            "value": True,
                        }
                    },
                ],
            },
        ],
    }


# --- loading / validation ---


def test_load_minimal(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, MINIMAL))
    assert scene.screen_size == (320, 200)
    assert list(scene.screens) == ["main"]
    assert scene.transitions == ()


def test_load_installer_style(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    assert len(scene.screens) == 2
    assert scene.goal_screen == "second"


@pytest.mark.parametrize(
    "mutate, pointer_bit",
    [
        (lambda d: d.pop("initial"), "initial"),
        (lambda d: d.update(initial="ghost"), "/initial"),
        (lambda d: d["screens"][0]["elements"][0].update(rect=[0, 0, 999, 10]), "/rect"),
        (
            lambda d: d.update(
                transitions=[{"on": ["main", "ghost", "click"], "effects": [{"goto": "main"}]}]
            ),
            "/transitions/0",
        ),
        (
            lambda d: d.update(
                transitions=[{"on": ["main", "next", "click"], "effects": []}]
            ),
            "/effects",
        ),
        (lambda d: d.update(goal="ghost"), "/goal"),
    ],
)
def test_schema_errors_carry_pointers(tmp_path, mutate, pointer_bit):
    data = copy.deepcopy(MINIMAL)
    mutate(data)
    with pytest.raises(SchemaError) as err:
        load_scenario(write_scenario(tmp_path, data))
    assert pointer_bit in str(err.value)


# --- rendering ---


def test_render_deterministic(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, MINIMAL))
    state = new_state(scene)
    assert render(state).tobytes() == render(state).tobytes()


def test_render_button_label_reads_back(tmp_path):
    from m2v.vision import ocr

    scene = load_scenario(write_scenario(tmp_path, MINIMAL))
    img = render(new_state(scene))
    region = crop(img, BoundingBox(40, 60, 120, 36))
    assert ocr(region, default_atlas()) == "Next"


def test_render_checkbox_toggle_changes_only_its_rect(tmp_path):
    import numpy as np

    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    before = render(state)
    dispatch(state, Click(250 + 12, 60 + 12))
    after = render(state)
    diff = np.argwhere((before.pixels != after.pixels).any(axis=2))
    assert diff.size > 0
    ys, xs = diff[:, 0], diff[:, 1]
    assert xs.min() >= 250 and xs.max() < 250 + 24
    assert ys.min() >= 60 and ys.max() < 60 + 24


def test_render_purity(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    clock_before = state.clock
    overrides_before = dict(state.element_states)
    render(state)
    assert state.clock == clock_before
    assert state.element_states == overrides_before
    assert state.event_log == []


# --- dispatch ---


def test_click_fires_goto(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    dispatch(state, Click(50, 70))
    assert state.current_screen == "second"
    assert state.last_handled


def test_click_background_is_noop(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    dispatch(state, Click(5, 5))
    assert state.current_screen == "first"
    assert not state.last_handled
    assert state.event_log[-1]["hit"] is None


def test_key_without_focus_is_noop(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    dispatch(state, Key("a"))
    assert not state.last_handled
    assert state.event_log[-1]["event"] == "key"


def test_textbox_typing_and_commit(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    dispatch(state, Click(50, 120))  # focus the textbox
    for ch in "hi":
        dispatch(state, Key(ch))
    from m2v.sim.state import element_state

    assert element_state(state, "first", "entry").text == "hi"
    dispatch(state, KeyNamed("Enter"))
    # commit scheduled the label reveal 10 ticks out
    assert element_state(state, "first", "done_lbl").enabled is False
    advance_clock(state, 10)
    assert element_state(state, "first", "done_lbl").enabled is True


def test_disabled_elements_ignore_hits(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    assert hit_test(state, 45, 15) is None  # done_lbl is disabled


def test_right_and_double_click_log(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    dispatch(state, RightClick(50, 70))
    dispatch(state, DoubleClick(50, 70))
    events = [e["event"] for e in state.event_log]
    assert events == ["right_click", "double_click"]
    # no right_click/double_click transitions defined: screen unchanged
    assert state.current_screen == "first"


# --- clock ---


def test_advance_zero_is_identity(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    snapshot = render(state).tobytes()
    advance_clock(state, 0)
    assert state.clock == 0
    assert render(state).tobytes() == snapshot


def test_advance_is_additive(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    a = new_state(scene)
    dispatch(a, Click(50, 120))
    dispatch(a, KeyNamed("Enter"))
    b = new_state(scene)
    dispatch(b, Click(50, 120))
    dispatch(b, KeyNamed("Enter"))
    advance_clock(a, 5)
    advance_clock(a, 5)
    advance_clock(b, 10)
    assert a.clock == b.clock
    assert render(a).tobytes() == render(b).tobytes()
    with pytest.raises(ValueError):
        advance_clock(a, -1)


# --- properties ---


def test_zorder_topmost_wins_random(tmp_path):
    rng = random.Random(17)
    for trial in range(25):
        n = rng.randrange(2, 6)
        elements = []
        for i in range(n):
            x, y = rng.randrange(0, 200), rng.randrange(0, 120)
            elements.append(
                {
                    "id": f"e{i}",
                    "kind": "button",
                    "label": "",
                    "rect": [x, y, rng.randrange(30, 80), rng.randrange(20, 60)],
                }
            )
        data = {
            "screen_size": [300, 200],
            "initial": "s",
            "screens": [{"id": "s", "background": [255, 255, 255], "elements": elements}],
            "transitions": [],
        }
        scene = load_scenario(write_scenario(tmp_path, data, name=f"z{trial}.json"))
        state = new_state(scene)
        px, py = rng.randrange(0, 300), rng.randrange(0, 200)
        hit = hit_test(state, px, py)
        covering = [
            e["id"]
            for e in elements
            if e["rect"][0] <= px < e["rect"][0] + e["rect"][2]
            and e["rect"][1] <= py < e["rect"][1] + e["rect"][3]
        ]
        assert hit == (covering[-1] if covering else None)


def test_event_log_replay_reproduces_state(tmp_path):
    scene = load_scenario(write_scenario(tmp_path, two_screen_scenario()))
    state = new_state(scene)
    dispatch(state, Click(260, 70))  # toggle checkbox
    dispatch(state, Click(50, 120))  # focus textbox
    for ch in "abc":
        dispatch(state, Key(ch))
    dispatch(state, KeyNamed("Enter"))
    advance_clock(state, 4)
    dispatch(state, Click(5, 5))  # noop
    advance_clock(state, 12)

    twin = replay(scene, state.event_log)
    assert twin.current_screen == state.current_screen
    assert twin.element_states == state.element_states
    assert twin.clock == state.clock
    assert render(twin).tobytes() == render(state).tobytes()
