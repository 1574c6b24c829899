from m2v.lexicon import Lexicon, TargetType, load_lexicon, stem

# Reference root forms for the corpus vocabulary, verified by hand against
# the stemming rules before the implementation was written.
REFERENCE_STEMS = {
    "use": "use",
    "using": "use",
    "used": "use",
    "uses": "use",
    "click": "click",
    "clicks": "click",
    "clicked": "click",
    "clicking": "click",
    "Click": "click",
    "selects": "select",
    "selected": "select",
    "selecting": "select",
    "type": "type",
    "types": "type",
    "typed": "type",
    "typing": "type",
    "press": "press",
    "presses": "press",
    "pressed": "press",
    "pressing": "press",
    "choose": "choose",
    "chooses": "choose",
    "choosing": "choose",
    "open": "open",
    "opens": "open",
    "opened": "open",
    "opening": "open",
    "check": "check",
    "checked": "check",
    "checking": "check",
    "unchecked": "uncheck",
    "enter": "enter",
    "entered": "enter",
    "entering": "enter",
    "input": "input",
    "inputs": "input",
    "right-click": "right-click",
    "right-clicking": "right-click",
    "double-click": "double-click",
    "double-clicked": "double-click",
    "stopped": "stop",
    "stopping": "stop",
    "dragged": "drag",
    "scrolled": "scroll",
    "filled": "fill",
    "saved": "save",
    "saving": "save",
    "settings": "set",
    "windows": "window",
    "this": "this",
    "buttons": "button",
    "boxes": "boxe",  # outside the supported vocabulary, left as-is
}


def test_reference_stems():
    for word, expected in REFERENCE_STEMS.items():
        assert stem(word) == expected, f"stem({word!r})"


def test_stem_is_idempotent():
    for word in REFERENCE_STEMS:
        once = stem(word)
        assert stem(once) == once, f"stem not idempotent on {word!r}"


def test_stem_lowercases():
    assert stem("CLICK") == "click"
    assert stem("Using") == "use"


def test_default_lexicon_keys_are_stems():
    lex = Lexicon.default()
    for key in lex.keywords:
        assert stem(key) == key


def test_keyword_lookup_through_inflection():
    lex = Lexicon.default()
    assert lex.keyword_of("Clicking") == "click"
    assert lex.keyword_of("chooses") == "choose"
    assert lex.keyword_of("banana") is None


def test_hints_and_determiners():
    lex = Lexicon.default()
    assert lex.is_determiner("The")
    assert lex.hint_type("Button") is TargetType.BUTTON
    assert lex.hint_type("field") is TargetType.TEXTBOX
    assert lex.hint_type("plain") is None


def test_load_lexicon_merges_defaults(tmp_path):
    p = tmp_path / "lex.json"
    p.write_text(
        '{"keywords": {"toggle": {"peripheral": "mouse", "target_type": "Checkbox"}},'
        ' "noun_hints": ["switch"], "style": "emphasis"}'
    )
    lex, style = load_lexicon(p)
    assert style == "emphasis"
    assert lex.keyword_of("toggles") == "toggle"
    assert lex.keyword_of("click") == "click"
    assert lex.hint_type("switch") is TargetType.UNKNOWN
