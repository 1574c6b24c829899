"""Executable script model: steps with waits, grouped into named test cases."""

from __future__ import annotations

from dataclasses import dataclass, field

# keyword -> (min arity, max arity)
KEYWORD_ARITY: dict[str, tuple[int, int]] = {
    "click_image": (1, 1),
    "click_text": (1, 1),
    "right_click_image": (1, 1),
    "double_click_image": (1, 1),
    "type_text": (1, 2),  # payload [, "commit"]
    "press_key": (1, 1),
    "wait": (1, 1),
    "wait_for_image": (1, 1),
    "wait_for_text": (1, 1),
    "start_recording": (0, 0),
    "stop_recording": (0, 0),
}

WAIT_FOR_KINDS = ("image", "text")

ENRICHMENT = "enrichment"


@dataclass(frozen=True)
class ScriptStep:
    """One executable line: keyword, positional args, and wait behavior.

    ``wait_after`` is a pause in simulated seconds once the action lands;
    ``wait_for`` instead blocks until a target (kind, value) appears.
    ``origin`` is the index of the source action record, or "enrichment"
    for steps the compiler added on its own.
    """

    keyword: str
    args: tuple[str, ...] = ()
    wait_after: float = 0.0
    wait_for: tuple[str, str] | None = None
    origin: int | str = ENRICHMENT

    def __post_init__(self) -> None:
        if self.keyword not in KEYWORD_ARITY:
            raise ValueError(f"unknown script keyword {self.keyword!r}")
        lo, hi = KEYWORD_ARITY[self.keyword]
        if not lo <= len(self.args) <= hi:
            raise ValueError(
                f"{self.keyword} takes {lo}..{hi} args, got {len(self.args)}"
            )
        if self.wait_after < 0:
            raise ValueError("wait_after must be >= 0")
        if self.wait_for is not None and self.wait_for[0] not in WAIT_FOR_KINDS:
            raise ValueError(f"wait_for kind must be one of {WAIT_FOR_KINDS}")
        if not isinstance(self.origin, int) and self.origin != ENRICHMENT:
            raise ValueError(f"origin must be an int or {ENRICHMENT!r}")

    def target(self) -> tuple[str, str] | None:
        """The (kind, value) this step locates on screen, if any."""
        if self.keyword in ("click_image", "right_click_image",
                           "double_click_image", "wait_for_image"):
            return ("image", self.args[0])
        if self.keyword in ("click_text", "wait_for_text"):
            return ("text", self.args[0])
        return None


@dataclass(frozen=True)
class ActionScript:
    """The four fixed sections of a compiled script, in file order."""

    settings: tuple[tuple[str, str], ...]
    variables: tuple[tuple[str, str], ...]
    test_cases: tuple[tuple[str, tuple[ScriptStep, ...]], ...]
    keywords: tuple[tuple[str, tuple[ScriptStep, ...]], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.test_cases:
            raise ValueError("a script must define at least one test case")

    def steps(self) -> list[ScriptStep]:
        """All test-case steps in execution order."""
        return [step for _, case in self.test_cases for step in case]
