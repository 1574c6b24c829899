"""Execute action scripts against the simulated GUI.

Image targets resolve through zero-mean normalized cross-correlation
(ZNCC) template matching; when the native scale misses, a linear sweep
resizes the query image across a scale range and keeps the best-scoring
placement. Text targets resolve through the vision pipeline (edge boxes
plus OCR ranked by character error rate). Waits advance the virtual
clock one tick at a time, capturing one frame per tick.
"""

from __future__ import annotations

import logging
import zlib
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

from .errors import M2VError
from .fonts import GlyphAtlas, default_atlas
from .raster import Raster, read_image, resize_scale, to_gray
from .recorder import FrameRecorder, Manifest
from .script.model import ActionScript, ScriptStep
from .sim import (
    Click,
    DoubleClick,
    Key,
    KeyNamed,
    RightClick,
    Scene,
    SimState,
    advance_clock,
    dispatch,
    new_state,
    render,
)
from .vision import cer, crop, ocr
from .vision.boxes import BoundingBox
from .vision.elements import candidate_boxes

logger = logging.getLogger(__name__)

MATCH_THRESHOLD = 0.85
SCALE_SWEEP = (0.25, 2.0, 0.125)
CER_MAX = 0.5
WAIT_FOR_TIMEOUT_S = 30.0


class TemplateTooLargeError(M2VError):
    """The query image exceeds the screenshot in some dimension."""


@dataclass(frozen=True)
class MatchResult:
    similarity: float
    coordinate: tuple[int, int] | None
    scale: float
    found: bool


class StepStatus(Enum):
    SUCCESS = "Success"
    TARGET_NOT_FOUND = "TargetNotFound"
    TIMEOUT = "Timeout"
    DISPATCH_NOOP = "DispatchNoop"


@dataclass
class StepOutcome:
    index: int
    status: StepStatus
    match: MatchResult | None = None
    ticks_elapsed: int = 0
    frames_captured: int = 0


# --- template matching --------------------------------------------------------


def _window_sums(a: np.ndarray, th: int, tw: int) -> np.ndarray:
    h, w = a.shape
    ii = np.zeros((h + 1, w + 1), dtype=np.float64)
    ii[1:, 1:] = a.cumsum(axis=0).cumsum(axis=1)
    return (
        ii[th : h + 1, tw : w + 1]
        - ii[: h - th + 1, tw : w + 1]
        - ii[th : h + 1, : w - tw + 1]
        + ii[: h - th + 1, : w - tw + 1]
    )


def template_match(
    screenshot: Raster, template: Raster, threshold: float = MATCH_THRESHOLD
) -> MatchResult:
    """Best ZNCC placement of the template over the screenshot.

    Flat (zero-variance) templates carry no signal and report not-found.
    Ties at the maximum similarity break toward the smallest (y, x).
    """
    if template.height > screenshot.height or template.width > screenshot.width:
        raise TemplateTooLargeError(
            f"template {template.width}x{template.height} exceeds "
            f"screenshot {screenshot.width}x{screenshot.height}"
        )
    scr = to_gray(screenshot)
    tpl = to_gray(template)
    th, tw = tpl.shape
    tpl0 = tpl - tpl.mean()
    tpl_norm = np.sqrt((tpl0 * tpl0).sum())
    if tpl_norm < 1e-9:
        return MatchResult(0.0, None, 1.0, False)
    numerator = fftconvolve(scr, tpl0[::-1, ::-1], mode="valid")
    sums = _window_sums(scr, th, tw)
    squares = _window_sums(scr * scr, th, tw)
    variance = np.maximum(squares - sums * sums / (th * tw), 0.0)
    denominator = np.sqrt(variance) * tpl_norm
    with np.errstate(divide="ignore", invalid="ignore"):
        similarity = np.where(denominator > 1e-9, numerator / denominator, 0.0)
    similarity = np.clip(similarity, -1.0, 1.0)
    flat = int(np.argmax(similarity))  # row-major: smallest (y, x) wins ties
    y, x = divmod(flat, similarity.shape[1])
    best = float(similarity[y, x])
    coordinate = (x + tw // 2, y + th // 2)
    return MatchResult(best, coordinate, 1.0, best >= threshold)


def sweep_scales(scales: tuple[float, float, float]) -> list[float]:
    lo, hi, step = scales
    if lo <= 0 or step <= 0 or lo > hi:
        raise ValueError(f"bad scale sweep {scales}")
    out = []
    s = lo
    while s <= hi + 1e-9:
        out.append(round(s, 9))
        s += step
    return out


def scale_sweep_match(
    template: Raster,
    screenshot: Raster,
    scales: tuple[float, float, float] = SCALE_SWEEP,
    threshold: float = MATCH_THRESHOLD,
) -> MatchResult:
    """Resize the query across the scale range, keep the best placement.

    Earlier scales win ties (strict improvement only), and resized
    templates that no longer fit the screenshot are skipped.
    """
    best = MatchResult(0.0, None, 1.0, False)
    for scale in sweep_scales(scales):
        resized = resize_scale(template, scale)
        if resized.height > screenshot.height or resized.width > screenshot.width:
            continue
        result = template_match(screenshot, resized, threshold)
        if result.coordinate is not None and result.similarity > best.similarity:
            best = MatchResult(
                result.similarity, result.coordinate, scale, result.found
            )
    return best


def invariant_scale_match(
    template: Raster,
    screenshot: Raster,
    scales: tuple[float, float, float] = SCALE_SWEEP,
    threshold: float = MATCH_THRESHOLD,
) -> tuple[int, int] | None:
    """Coordinate of the best above-threshold placement, or None."""
    result = scale_sweep_match(template, screenshot, scales, threshold)
    return result.coordinate if result.found else None


# --- text location --------------------------------------------------------------


def locate_text(
    state: SimState,
    text: str,
    atlas: GlyphAtlas | None = None,
    cer_max: float = CER_MAX,
    **box_kwargs,
) -> tuple[int, int] | None:
    """Center of the screen region whose OCR best matches ``text``."""
    if not text:
        raise ValueError("text must be non-empty")
    atlas = atlas or default_atlas()
    screenshot = render(state)
    boxes = candidate_boxes(screenshot, **box_kwargs)
    best: tuple[float, int, int, BoundingBox] | None = None
    for box in boxes:
        rate = cer(ocr(crop(screenshot, box), atlas), text)
        key = (rate, box.y, box.x, box)
        if best is None or key[:3] < best[:3]:
            best = key
    if best is None or best[0] > cer_max:
        return None
    return best[3].center


# --- the runner ------------------------------------------------------------------

_POINTER_EVENTS = {
    "click_image": Click,
    "click_text": Click,
    "right_click_image": RightClick,
    "double_click_image": DoubleClick,
}

_RESOLUTION_NOTE = "resolution mismatch; scale sweep engaged"


@dataclass(frozen=True)
class RunnerOptions:
    fps: int = 10
    policy: str = "abort_on_failure"  # or "continue"
    match_threshold: float = MATCH_THRESHOLD
    scales: tuple[float, float, float] = SCALE_SWEEP
    cer_max: float = CER_MAX
    wait_for_timeout: float = WAIT_FOR_TIMEOUT_S


class ScriptRunner:
    """Owns one SimState and one recorder for the duration of a run."""

    def __init__(
        self,
        scene: Scene,
        recorder: FrameRecorder,
        options: RunnerOptions | None = None,
        base_dir: str | Path = ".",
        atlas: GlyphAtlas | None = None,
    ):
        self.scene = scene
        self.recorder = recorder
        self.options = options or RunnerOptions()
        self.base_dir = Path(base_dir)
        self.atlas = atlas or default_atlas()
        self.state = new_state(scene)
        self.outcomes: list[StepOutcome] = []
        self.manifest: Manifest | None = None
        self._images: dict[str, Raster] = {}
        self._locate_cache: dict[tuple[int, str, str], MatchResult | None] = {}

    # -- helpers --

    def _image(self, path: str) -> Raster:
        resolved = path if Path(path).is_absolute() else str(self.base_dir / path)
        if resolved not in self._images:
            self._images[resolved] = read_image(resolved)
        return self._images[resolved]

    def _capture(self, annotation: str | None = None, step_index: int | None = None) -> int:
        if not self.recorder.active:
            return 0
        self.recorder.capture(render(self.state), self.state.clock, annotation, step_index)
        return 1

    def _screen_key(self, screenshot: Raster) -> int:
        return zlib.crc32(screenshot.tobytes())

    def _find_image(self, path: str) -> MatchResult:
        """Two-branch image location: native scale first, then the sweep."""
        screenshot = render(self.state)
        key = (self._screen_key(screenshot), "image", path)
        if key in self._locate_cache:
            return self._locate_cache[key]
        template = self._image(path)
        result = MatchResult(0.0, None, 1.0, False)
        if (
            template.height <= screenshot.height
            and template.width <= screenshot.width
        ):
            result = template_match(screenshot, template, self.options.match_threshold)
        if not result.found:
            logger.debug("image %s: %s", path, _RESOLUTION_NOTE)
            result = scale_sweep_match(
                template, screenshot, self.options.scales, self.options.match_threshold
            )
        self._locate_cache[key] = result
        return result

    def _find_text(self, text: str) -> MatchResult:
        screenshot = render(self.state)
        key = (self._screen_key(screenshot), "text", text)
        if key in self._locate_cache:
            return self._locate_cache[key]
        coordinate = locate_text(self.state, text, self.atlas, self.options.cer_max)
        result = MatchResult(
            1.0 if coordinate else 0.0, coordinate, 1.0, coordinate is not None
        )
        self._locate_cache[key] = result
        return result

    def _find_target(self, kind: str, value: str) -> MatchResult:
        return self._find_image(value) if kind == "image" else self._find_text(value)

    # -- step execution --

    def _wait_ticks(self, ticks: int, step_index: int) -> int:
        frames = 0
        for _ in range(ticks):
            advance_clock(self.state, 1)
            frames += self._capture(step_index=step_index)
        return frames

    def _wait_for(
        self, target: tuple[str, str], step_index: int
    ) -> tuple[bool, int, int]:
        """Poll for a target each tick; returns (found, ticks, frames)."""
        timeout_ticks = int(round(self.options.wait_for_timeout * self.options.fps))
        if self._find_target(*target).found:
            return True, 0, 0
        frames = 0
        for tick in range(1, timeout_ticks + 1):
            advance_clock(self.state, 1)
            frames += self._capture(step_index=step_index)
            if self._find_target(*target).found:
                return True, tick, frames
        return False, timeout_ticks, frames

    def execute_step(self, index: int, step: ScriptStep) -> StepOutcome:
        start_clock = self.state.clock
        frames = 0
        match: MatchResult | None = None
        status = StepStatus.SUCCESS
        annotation = " ".join((step.keyword, *step.args))

        if step.keyword == "start_recording":
            self.recorder.start(self.state.clock)
            frames += self._capture(annotation, index)
        elif step.keyword == "stop_recording":
            frames += self._capture(annotation, index)
            self.manifest = self.recorder.stop(self.state.clock)
        elif step.keyword == "wait":
            frames += self._wait_ticks(
                int(round(float(step.args[0]) * self.options.fps)), index
            )
        elif step.keyword in ("wait_for_image", "wait_for_text"):
            kind = "image" if step.keyword.endswith("image") else "text"
            found, ticks, waited = self._wait_for((kind, step.args[0]), index)
            frames += waited
            match = self._find_target(kind, step.args[0])
            if not found:
                status = StepStatus.TIMEOUT
        elif step.keyword in _POINTER_EVENTS:
            kind, value = step.target()
            match = self._find_target(kind, value)
            if not match.found:
                status = StepStatus.TARGET_NOT_FOUND
            else:
                x, y = match.coordinate
                dispatch(self.state, _POINTER_EVENTS[step.keyword](x, y))
                frames += self._capture(annotation, index)
                if not self.state.last_handled:
                    status = StepStatus.DISPATCH_NOOP
        elif step.keyword == "type_text":
            payload = step.args[0]
            handled = bool(payload)
            for position, char in enumerate(payload):
                dispatch(self.state, Key(char))
                handled = handled and self.state.last_handled
                frames += self._capture(annotation if position == 0 else None, index)
            if len(step.args) > 1 and step.args[1] == "commit":
                dispatch(self.state, KeyNamed("Enter"))
                handled = handled and self.state.last_handled
                frames += self._capture(None, index)
            if not handled:
                status = StepStatus.DISPATCH_NOOP
        elif step.keyword == "press_key":
            dispatch(self.state, KeyNamed(step.args[0]))
            frames += self._capture(annotation, index)
            if not self.state.last_handled:
                status = StepStatus.DISPATCH_NOOP
        else:  # pragma: no cover - model validation forbids this
            raise ValueError(f"unexpected keyword {step.keyword!r}")

        if status is StepStatus.SUCCESS:
            if step.wait_for is not None:
                found, _, waited = self._wait_for(step.wait_for, index)
                frames += waited
                if not found:
                    status = StepStatus.TIMEOUT
            if step.wait_after:
                frames += self._wait_ticks(
                    int(round(step.wait_after * self.options.fps)), index
                )

        return StepOutcome(
            index=index,
            status=status,
            match=match,
            ticks_elapsed=self.state.clock - start_clock,
            frames_captured=frames,
        )

    # -- whole script --

    def run(self, script: ActionScript) -> dict:
        steps = script.steps()
        keywords = {step.keyword for step in steps}
        auto_bracket = "start_recording" not in keywords
        if auto_bracket:
            self.recorder.start(self.state.clock)
            self._capture("start_recording")
        aborted = False
        for index, step in enumerate(steps):
            outcome = self.execute_step(index, step)
            self.outcomes.append(outcome)
            if (
                outcome.status is not StepStatus.SUCCESS
                and self.options.policy == "abort_on_failure"
            ):
                aborted = True
                break
        if self.recorder.active:
            self._capture("stop_recording")
            self.manifest = self.recorder.stop(self.state.clock)
        if aborted:
            logger.warning(
                "run aborted at step %d (%s)",
                self.outcomes[-1].index,
                self.outcomes[-1].status.value,
            )
        return self.report()

    def report(self) -> dict:
        return {
            "steps": [
                {
                    "index": outcome.index,
                    "status": outcome.status.value,
                    "similarity": outcome.match.similarity if outcome.match else None,
                    "coordinate": list(outcome.match.coordinate)
                    if outcome.match and outcome.match.coordinate
                    else None,
                    "scale": outcome.match.scale if outcome.match else None,
                    "ticks": outcome.ticks_elapsed,
                }
                for outcome in self.outcomes
            ],
            "final_screen": self.state.current_screen,
            "total_ticks": self.state.clock,
            "frames": self.manifest.frame_count
            if self.manifest
            else self.recorder.frame_count,
        }


def robot_emulator(
    action: ScriptStep, image: Raster, state: SimState,
    threshold: float = MATCH_THRESHOLD, scales: tuple[float, float, float] = SCALE_SWEEP,
) -> StepOutcome:
    """Locate an image target on the current screen and act on it.

    Same-resolution queries resolve by direct template matching; anything
    else goes through the invariant-scale sweep. The event dispatches at
    the matched coordinate.
    """
    screenshot = render(state)
    result = MatchResult(0.0, None, 1.0, False)
    if image.height <= screenshot.height and image.width <= screenshot.width:
        result = template_match(screenshot, image, threshold)
    if not result.found:
        result = scale_sweep_match(image, screenshot, scales, threshold)
    if not result.found:
        return StepOutcome(0, StepStatus.TARGET_NOT_FOUND, result)
    x, y = result.coordinate
    dispatch(state, _POINTER_EVENTS.get(action.keyword, Click)(x, y))
    status = StepStatus.SUCCESS if state.last_handled else StepStatus.DISPATCH_NOOP
    return StepOutcome(0, status, result)


def run_script(
    script: ActionScript,
    scene: Scene,
    recorder: FrameRecorder,
    options: RunnerOptions | None = None,
    base_dir: str | Path = ".",
) -> dict:
    """Execute a whole script; returns the run report (see ScriptRunner)."""
    runner = ScriptRunner(scene, recorder, options, base_dir)
    return runner.run(script)
