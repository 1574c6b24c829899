import json
import random

import pytest

from m2v.extraction import ActionRecord
from m2v.lexicon import TargetType
from m2v.script import (
    ActionScript,
    CompileOptions,
    KnowledgeBase,
    KnowledgeBaseError,
    ScriptStep,
    ScriptSyntaxError,
    UnmappableKeywordError,
    UnresolvedParameterError,
    attach_paths,
    compile_records,
    expand_abstract,
    fill_parameters,
    insert_waits,
    load_kb,
    map_peripheral,
    parse_script,
    serialize_script,
)


def make_kb(tmp_path, elements=None, routines=None, defaults=None):
    kb_dir = tmp_path / "kb"
    kb_dir.mkdir(exist_ok=True)
    for rel in (elements or {}).values():
        (kb_dir / rel).write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
    data = {
        "elements": elements or {},
        "routines": routines or {},
        "defaults": defaults or {},
    }
    (kb_dir / "kb.json").write_text(json.dumps(data))
    return load_kb(kb_dir)


def rec(keyword="click", ttype=TargetType.BUTTON, target="Next", **kw):
    return ActionRecord(keyword, ttype, target, **kw)


# --- knowledge base ---


def test_kb_missing_element_image(tmp_path):
    kb_dir = tmp_path / "kb"
    kb_dir.mkdir()
    (kb_dir / "kb.json").write_text('{"elements": {"x": "gone.ppm"}}')
    with pytest.raises(KnowledgeBaseError):
        load_kb(kb_dir)


def test_kb_empty_routine_rejected(tmp_path):
    kb_dir = tmp_path / "kb"
    kb_dir.mkdir()
    (kb_dir / "kb.json").write_text('{"routines": {"open settings": []}}')
    with pytest.raises(KnowledgeBaseError):
        load_kb(kb_dir)


def test_kb_lookup_case_insensitive(tmp_path):
    kb = make_kb(tmp_path, elements={"Windows menu": "logo.ppm"})
    assert kb.image_for("windows MENU") is not None
    assert kb.image_for("missing") is None


# --- attach_paths ---


def test_attach_paths_fills_icon_from_kb(tmp_path):
    kb = make_kb(tmp_path, elements={"Windows menu": "logo.ppm"})
    records = [rec(ttype=TargetType.ICON, target="Windows menu")]
    out = attach_paths(records, kb)
    assert out[0].target_path.endswith("logo.ppm")


def test_attach_paths_never_overwrites(tmp_path):
    kb = make_kb(tmp_path, elements={"Next": "logo.ppm"})
    records = [rec(target="Next", target_path="elements/0_next.ppm")]
    assert attach_paths(records, kb)[0].target_path == "elements/0_next.ppm"


def test_attach_paths_absent_name_unchanged(tmp_path):
    kb = make_kb(tmp_path)
    records = [rec(ttype=TargetType.ICON, target="Ghost")]
    assert attach_paths(records, kb) == records


# --- expand_abstract ---


OPEN_SETTINGS = {
    "open settings": [
        {"keyword": "type", "target_type": "Text", "target_object": "settings"},
        {"keyword": "press", "target_object": "Enter"},
        {"keyword": "click", "target_type": "Icon", "target_object": "Settings"},
    ]
}


def test_expand_abstract_routine(tmp_path):
    kb = make_kb(tmp_path, routines=OPEN_SETTINGS)
    out = expand_abstract([rec("open", TargetType.UNKNOWN, "settings")], kb)
    assert [r.keyword for r in out] == ["type", "press", "click"]
    assert all(r.from_routine for r in out)


def test_expand_abstract_no_match_passthrough(tmp_path):
    kb = make_kb(tmp_path, routines=OPEN_SETTINGS)
    records = [rec("click", target="Apply")]
    assert expand_abstract(records, kb) == records


def test_expand_abstract_idempotent(tmp_path):
    kb = make_kb(
        tmp_path,
        routines={
            **OPEN_SETTINGS,
            "click settings": [
                {"keyword": "click", "target_object": "settings"}
            ],
        },
    )
    once = expand_abstract([rec("open", TargetType.UNKNOWN, "settings")], kb)
    assert expand_abstract(once, kb) == once


def test_expand_single_step_routine(tmp_path):
    kb = make_kb(
        tmp_path,
        routines={"press enter": [{"keyword": "press", "target_object": "Enter"}]},
    )
    out = expand_abstract([rec("press", TargetType.UNKNOWN, "enter")], kb)
    assert len(out) == 1 and out[0].target_object == "Enter" and out[0].from_routine


# --- fill_parameters ---


def test_fill_parameters_default_and_override(tmp_path):
    kb = make_kb(tmp_path, defaults={"ip_address": "192.0.2.10"})
    records = [rec("type", TargetType.TEXT, "${ip_address}")]
    out, bindings = fill_parameters(records, kb)
    assert out[0].target_object == "192.0.2.10"
    assert bindings == [("ip_address", "192.0.2.10")]
    out, bindings = fill_parameters(records, kb, {"ip_address": "10.0.0.2"})
    assert out[0].target_object == "10.0.0.2"


def test_fill_parameters_no_placeholder_unchanged(tmp_path):
    kb = make_kb(tmp_path)
    records = [rec()]
    assert fill_parameters(records, kb) == (records, [])


def test_fill_parameters_unresolved(tmp_path):
    kb = make_kb(tmp_path)
    with pytest.raises(UnresolvedParameterError):
        fill_parameters([rec("type", TargetType.TEXT, "${ghost}")], kb)


# --- map_peripheral ---


def test_map_peripheral_click_image_vs_text():
    with_path = rec(target_path="p.ppm")
    assert map_peripheral(with_path, 0) == ScriptStep(
        "click_image", ("p.ppm",), origin=0
    )
    assert map_peripheral(rec(), 1) == ScriptStep("click_text", ("Next",), origin=1)


def test_map_peripheral_keyboard():
    assert map_peripheral(rec("type", TargetType.TEXT, "ipconfig"), 0).keyword == "type_text"
    step = map_peripheral(rec("press", TargetType.UNKNOWN, "Enter"), 0)
    assert step == ScriptStep("press_key", ("Enter",), origin=0)


def test_map_peripheral_double_click_needs_image():
    assert (
        map_peripheral(rec("double-click", target_path="i.ppm"), 0).keyword
        == "double_click_image"
    )
    with pytest.raises(UnmappableKeywordError):
        map_peripheral(rec("right-click"), 0)


def test_map_peripheral_unknown_keyword():
    with pytest.raises(UnmappableKeywordError):
        map_peripheral(ActionRecord("toggle", TargetType.UNKNOWN, "x"), 0)


# --- insert_waits ---


def test_insert_waits_standard_pause():
    steps = [
        ScriptStep("click_text", ("A",), origin=0),
        ScriptStep("click_text", ("B",), origin=1),
    ]
    out = insert_waits(steps, CompileOptions())
    assert out[0].wait_after == 2.0 and out[1].wait_after == 2.0


def test_insert_waits_empty():
    assert insert_waits([], CompileOptions()) == []


def test_insert_waits_completion_indicator():
    steps = [
        ScriptStep("click_text", ("Install Now",), origin=0),
        ScriptStep("click_image", ("finish.ppm",), origin=1),
    ]
    out = insert_waits(steps, CompileOptions(), frozenset({0}))
    assert out[0].wait_for == ("image", "finish.ppm")
    assert out[0].wait_after == 0.0
    assert out[1].wait_after == 2.0


def test_insert_waits_recorder_steps_untouched():
    steps = [
        ScriptStep("start_recording"),
        ScriptStep("click_text", ("A",), origin=0),
        ScriptStep("stop_recording"),
    ]
    out = insert_waits(steps, CompileOptions())
    assert out[0].wait_after == 0.0 and out[2].wait_after == 0.0
    assert out[1].wait_after == 2.0


# --- compile_records ---


def teaser_records():
    return [
        rec("click", TargetType.ICON, "Windows"),
        rec("type", TargetType.TEXT, "environment variables"),
        rec("press", TargetType.UNKNOWN, "Enter"),
        rec("click", TargetType.BUTTON, "Environment Variables"),
    ]


def test_compile_four_records_gives_six_steps(tmp_path):
    kb = make_kb(tmp_path)
    script = compile_records(teaser_records(), kb)
    steps = script.steps()
    assert len(steps) == 6
    assert steps[0].keyword == "start_recording"
    assert steps[-1].keyword == "stop_recording"
    assert all(s.wait_after == 2.0 for s in steps[1:-1])


def test_compile_single_record_three_steps(tmp_path):
    kb = make_kb(tmp_path)
    script = compile_records([rec()], kb)
    assert [s.keyword for s in script.steps()] == [
        "start_recording",
        "click_text",
        "stop_recording",
    ]


def test_compile_routine_expansion_step_count(tmp_path):
    kb = make_kb(tmp_path, routines=OPEN_SETTINGS)
    script = compile_records([rec("open", TargetType.UNKNOWN, "settings")], kb)
    assert len(script.steps()) == 3 + 2


def test_compile_condition_adds_wait_for_step(tmp_path):
    kb = make_kb(tmp_path)
    script = compile_records(
        [rec("click", TargetType.BUTTON, "Yes", condition="a prompt appears")], kb
    )
    keywords = [s.keyword for s in script.steps()]
    assert keywords == ["start_recording", "wait_for_text", "click_text", "stop_recording"]


def test_compile_empty_records_rejected(tmp_path):
    kb = make_kb(tmp_path)
    with pytest.raises(ValueError):
        compile_records([], kb)


def test_compile_preserves_action_order(tmp_path):
    kb = make_kb(tmp_path)
    script = compile_records(teaser_records(), kb)
    origins = [s.origin for s in script.steps() if isinstance(s.origin, int)]
    assert origins == sorted(origins)


def test_compile_settings_section(tmp_path):
    kb = make_kb(tmp_path)
    options = CompileOptions(environment="installer", screen_size=(512, 320), fps=10)
    script = compile_records([rec()], kb, options)
    assert dict(script.settings) == {
        "environment": "installer",
        "screen_size": "512x320",
        "fps": "10",
    }


# --- text format ---


def sample_script():
    return ActionScript(
        settings=(("environment", "demo"), ("screen_size", "512x320"), ("fps", "10")),
        variables=(("ip_address", "192.0.2.10"),),
        test_cases=(
            (
                "Demo Case",
                (
                    ScriptStep("start_recording"),
                    ScriptStep("click_text", ("Install Now",), wait_for=("image", "f.ppm"), origin=0),
                    ScriptStep("type_text", ("total = 1 + 2",), wait_after=2.0, origin=1),
                    ScriptStep("press_key", ("Enter",), wait_after=0.5, origin=2),
                    ScriptStep("stop_recording"),
                ),
            ),
        ),
        keywords=(),
    )


def test_serialize_has_four_headers():
    text = serialize_script(sample_script())
    for name in ("Settings", "Variables", "Test Cases", "Keywords"):
        assert f"*** {name} ***" in text


def test_round_trip_identity():
    script = sample_script()
    assert parse_script(serialize_script(script)) == script


def test_parse_missing_test_cases_section():
    text = "*** Settings ***\nfps  10\n"
    with pytest.raises(ScriptSyntaxError):
        parse_script(text)


def test_parse_reports_line_numbers():
    text = serialize_script(sample_script())
    bad = text.replace("press_key  Enter", "press_key")
    expected_line = next(
        i
        for i, l in enumerate(bad.splitlines(), start=1)
        if l.strip().startswith("press_key")
    )
    with pytest.raises(ScriptSyntaxError) as err:
        parse_script(bad)
    assert err.value.line == expected_line


def test_parse_rejects_sections_out_of_order():
    text = "*** Variables ***\n"
    with pytest.raises(ScriptSyntaxError):
        parse_script(text)


def test_parse_comments_and_blanks():
    text = serialize_script(sample_script())
    commented = "# header comment\n" + text.replace(
        "Demo Case", "# comment\nDemo Case"
    )
    assert parse_script(commented) == sample_script()


def test_round_trip_randomized_scripts():
    rng = random.Random(99)
    arg_alphabet = "abcXYZ 0123./:${}_-"

    def rand_arg():
        while True:
            s = "".join(rng.choice(arg_alphabet) for _ in range(rng.randrange(1, 12)))
            s = " ".join(s.split())  # single internal spaces only
            if s and not s.startswith("#"):
                return s

    keywords = [
        ("click_image", 1), ("click_text", 1), ("right_click_image", 1),
        ("double_click_image", 1), ("type_text", 1), ("press_key", 1),
        ("wait", 1), ("wait_for_image", 1), ("wait_for_text", 1),
        ("start_recording", 0), ("stop_recording", 0),
    ]
    for _ in range(60):
        steps = []
        for _ in range(rng.randrange(1, 8)):
            kw, arity = rng.choice(keywords)
            steps.append(
                ScriptStep(
                    kw,
                    tuple(rand_arg() for _ in range(arity)),
                    wait_after=rng.choice([0.0, 2.0, 0.5]),
                    wait_for=rng.choice([None, ("text", "Done"), ("image", "x.ppm")]),
                    origin=rng.choice(["enrichment", 0, 3]),
                )
            )
        script = ActionScript(
            settings=(("fps", "10"),),
            variables=((f"v{rng.randrange(5)}", rand_arg()),),
            test_cases=(("Case", tuple(steps)),),
        )
        assert parse_script(serialize_script(script)) == script
