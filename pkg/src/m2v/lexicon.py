"""Action keyword lexicon and the rule-based stemmer that keys it.

The stemmer strips the -ing/-ed/-es/-s suffix families with
doubled-consonant undoubling and final-e restoration, iterated to a
fixpoint so the function is idempotent. Lexicon keys are stored in
stemmed form; all lookups stem first, which makes keyword matching
insensitive to inflection ("click", "clicks", "clicked", "clicking").
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import M2VError

logger = logging.getLogger(__name__)


class LexiconError(M2VError):
    """Bad lexicon configuration."""


class TargetType(Enum):
    BUTTON = "Button"
    CHECKBOX = "Checkbox"
    MENU = "Menu"
    TEXTBOX = "Textbox"
    ICON = "Icon"
    TEXT = "Text"
    UNKNOWN = "Unknown"


# --- stemming ----------------------------------------------------------------

_VOWELS = "aeiou"

# Roots ending in a silent e that suffix stripping would otherwise lose.
# Final-e restoration consults this list first, then falls back to the
# one-syllable CVC heuristic for unlisted words.
_E_FINAL_ROOTS = frozenset(
    {
        "browse", "change", "choose", "close", "complete", "configure",
        "create", "delete", "disable", "double", "enable", "make", "manage",
        "move", "name", "navigate", "note", "page", "paste", "remove",
        "rename", "save", "type", "update", "use",
    }
)


def _is_vowel(word: str, i: int) -> bool:
    ch = word[i]
    return ch in _VOWELS or (ch == "y" and i > 0)


def _has_vowel(word: str) -> bool:
    return any(_is_vowel(word, i) for i in range(len(word)))


def _measure(word: str) -> int:
    """Number of vowel-group to consonant transitions (Porter's m)."""
    m = 0
    prev_vowel = False
    for i in range(len(word)):
        vowel = _is_vowel(word, i)
        if prev_vowel and not vowel:
            m += 1
        prev_vowel = vowel
    return m


def _restore(stemmed: str) -> str:
    if (
        len(stemmed) >= 2
        and stemmed[-1] == stemmed[-2]
        and not _is_vowel(stemmed, len(stemmed) - 1)
        and stemmed[-1] not in "lsz"
    ):
        return stemmed[:-1]
    if stemmed + "e" in _E_FINAL_ROOTS:
        return stemmed + "e"
    # One-syllable stem ending consonant-after-vowel wants its e back
    # ("us" -> "use", "typ" -> "type").
    if (
        len(stemmed) >= 2
        and _measure(stemmed) == 1
        and not _is_vowel(stemmed, len(stemmed) - 1)
        and stemmed[-1] not in "wxy"
        and _is_vowel(stemmed, len(stemmed) - 2)
        and (len(stemmed) == 2 or not _is_vowel(stemmed, len(stemmed) - 3))
    ):
        return stemmed + "e"
    return stemmed


def _strip_once(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies") and len(word) >= 5:
        return word[:-3] + "y"
    if word.endswith("ing") and len(word) >= 5 and _has_vowel(word[:-3]):
        return _restore(word[:-3])
    if word.endswith("ed") and len(word) >= 4 and _has_vowel(word[:-2]):
        return _restore(word[:-2])
    if (
        word.endswith("s")
        and len(word) >= 4
        and not word.endswith("ss")
        and not word.endswith("us")
        and not word.endswith("is")
    ):
        return word[:-1]
    return word


def stem(word: str) -> str:
    """Lowercase and reduce a word to its root form (idempotent)."""
    current = word.lower()
    while True:
        stripped = _strip_once(current)
        if stripped == current:
            return current
        current = stripped


# --- lexicon -----------------------------------------------------------------


@dataclass(frozen=True)
class KeywordInfo:
    peripheral: str  # "mouse" | "keyboard"
    target_type: TargetType


_DEFAULT_KEYWORDS: dict[str, KeywordInfo] = {
    "click": KeywordInfo("mouse", TargetType.BUTTON),
    "right-click": KeywordInfo("mouse", TargetType.BUTTON),
    "double-click": KeywordInfo("mouse", TargetType.BUTTON),
    "select": KeywordInfo("mouse", TargetType.UNKNOWN),
    "check": KeywordInfo("mouse", TargetType.CHECKBOX),
    "uncheck": KeywordInfo("mouse", TargetType.CHECKBOX),
    "type": KeywordInfo("keyboard", TargetType.TEXT),
    "input": KeywordInfo("keyboard", TargetType.TEXT),
    "open": KeywordInfo("mouse", TargetType.UNKNOWN),
    "press": KeywordInfo("keyboard", TargetType.UNKNOWN),
    "choose": KeywordInfo("mouse", TargetType.UNKNOWN),
    "enter": KeywordInfo("keyboard", TargetType.TEXT),
}

_DEFAULT_DETERMINERS = frozenset({"the", "a", "an"})

# GUI noun vocabulary and the element type each word implies.
_HINT_TYPES: dict[str, TargetType] = {
    "button": TargetType.BUTTON,
    "checkbox": TargetType.CHECKBOX,
    "menu": TargetType.MENU,
    "tab": TargetType.BUTTON,
    "field": TargetType.TEXTBOX,
    "icon": TargetType.ICON,
    "window": TargetType.UNKNOWN,
}


@dataclass(frozen=True)
class Lexicon:
    keywords: Mapping[str, KeywordInfo]
    determiners: frozenset[str]
    noun_hints: Mapping[str, TargetType]

    @classmethod
    def default(cls) -> "Lexicon":
        return cls(
            keywords=MappingProxyType({stem(k): v for k, v in _DEFAULT_KEYWORDS.items()}),
            determiners=_DEFAULT_DETERMINERS,
            noun_hints=MappingProxyType(dict(_HINT_TYPES)),
        )

    def keyword_of(self, word: str) -> str | None:
        """The lexicon key a word stems to, or None."""
        key = stem(word)
        return key if key in self.keywords else None

    def is_determiner(self, word: str) -> bool:
        return word.lower() in self.determiners

    def hint_type(self, word: str) -> TargetType | None:
        return self.noun_hints.get(word.lower())


def load_lexicon(path: str | Path) -> tuple[Lexicon, str]:
    """Load a lexicon JSON file; returns (lexicon, style).

    Schema: ``{"keywords": {word: {"peripheral": ..., "target_type": ...}},
    "noun_hints": [...], "style": "auto|emphasis|explicit-type"}``. All
    sections are optional and default to the built-ins.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LexiconError(f"cannot read lexicon {path}: {exc}") from exc
    keywords = dict(_DEFAULT_KEYWORDS)
    for word, info in data.get("keywords", {}).items():
        try:
            keywords[word] = KeywordInfo(
                peripheral=info["peripheral"],
                target_type=TargetType(info.get("target_type", "Unknown")),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise LexiconError(f"bad keyword entry {word!r}: {exc}") from exc
    hints = dict(_HINT_TYPES)
    for word in data.get("noun_hints", []):
        hints.setdefault(word.lower(), TargetType.UNKNOWN)
    style = data.get("style", "auto")
    if style not in ("auto", "emphasis", "explicit-type"):
        raise LexiconError(f"unknown style {style!r}")
    lexicon = Lexicon(
        keywords=MappingProxyType({stem(k): v for k, v in keywords.items()}),
        determiners=_DEFAULT_DETERMINERS,
        noun_hints=MappingProxyType(hints),
    )
    return lexicon, style
