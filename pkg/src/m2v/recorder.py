"""Frame recorder: writes numbered PPM frames plus a JSON manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import M2VError
from .raster import Raster, write_ppm


class AlreadyRecordingError(M2VError):
    pass


class NotRecordingError(M2VError):
    pass


class NonMonotonicTickError(M2VError):
    pass


@dataclass(frozen=True)
class Manifest:
    fps: int
    frame_count: int
    frames: tuple[str, ...]
    events: tuple[tuple[int, int | None, str], ...]  # (tick, step index, description)
    start_tick: int
    stop_tick: int

    def to_dict(self) -> dict:
        return {
            "fps": self.fps,
            "frame_count": self.frame_count,
            "frames": list(self.frames),
            "events": [
                {"tick": tick, "step": step, "description": description}
                for tick, step, description in self.events
            ],
            "start_tick": self.start_tick,
            "stop_tick": self.stop_tick,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Manifest":
        return cls(
            fps=data["fps"],
            frame_count=data["frame_count"],
            frames=tuple(data["frames"]),
            events=tuple(
                (e["tick"], e["step"], e["description"]) for e in data["events"]
            ),
            start_tick=data["start_tick"],
            stop_tick=data["stop_tick"],
        )


def load_manifest(path: str | Path) -> Manifest:
    return Manifest.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


class FrameRecorder:
    """Single-writer recorder for one emulation run.

    Frames land in ``<out>/frames/frame_%06d.ppm``; ``stop`` finalizes and
    writes ``<out>/manifest.json``. Ticks are simulated time and must
    never decrease between captures.
    """

    def __init__(self, out_dir: str | Path, fps: int):
        if fps < 1:
            raise ValueError("fps must be >= 1")
        self.out_dir = Path(out_dir)
        self.frames_dir = self.out_dir / "frames"
        self.fps = fps
        self._active = False
        self._frames: list[str] = []
        self._events: list[tuple[int, int | None, str]] = []
        self._start_tick = 0
        self._last_tick = 0

    @property
    def active(self) -> bool:
        return self._active

    @property
    def frame_count(self) -> int:
        return len(self._frames)

    def start(self, tick: int) -> None:
        if self._active:
            raise AlreadyRecordingError("recorder is already running")
        self.frames_dir.mkdir(parents=True, exist_ok=True)
        self._active = True
        self._start_tick = tick
        self._last_tick = tick

    def capture(
        self,
        frame: Raster,
        tick: int,
        annotation: str | None = None,
        step_index: int | None = None,
    ) -> None:
        if not self._active:
            raise NotRecordingError("capture outside start/stop")
        if tick < self._last_tick:
            raise NonMonotonicTickError(
                f"tick {tick} is earlier than the last capture at {self._last_tick}"
            )
        self._last_tick = tick
        name = f"frame_{len(self._frames) + 1:06d}.ppm"
        write_ppm(frame, self.frames_dir / name)
        self._frames.append(name)
        if annotation is not None:
            self._events.append((tick, step_index, annotation))

    def stop(self, tick: int) -> Manifest:
        if not self._active:
            raise NotRecordingError("stop without start")
        if tick < self._last_tick:
            raise NonMonotonicTickError(
                f"tick {tick} is earlier than the last capture at {self._last_tick}"
            )
        manifest = Manifest(
            fps=self.fps,
            frame_count=len(self._frames),
            frames=tuple(self._frames),
            events=tuple(self._events),
            start_tick=self._start_tick,
            stop_tick=tick,
        )
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / "manifest.json").write_text(
            json.dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        self._active = False
        return manifest
