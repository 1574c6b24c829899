import pytest

from m2v.raster import Raster, read_ppm
from m2v.recorder import (
    AlreadyRecordingError,
    FrameRecorder,
    Manifest,
    NonMonotonicTickError,
    NotRecordingError,
    load_manifest,
)


def frame(color):
    return Raster.filled(32, 24, color)


def test_start_stop_empty_manifest(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(0)
    manifest = rec.stop(5)
    assert manifest.frame_count == 0
    assert manifest.frames == ()
    assert manifest.start_tick == 0 and manifest.stop_tick == 5
    assert load_manifest(tmp_path / "manifest.json") == manifest


def test_start_tick_recorded(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(7)
    assert rec.stop(9).start_tick == 7


def test_double_start_rejected(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(0)
    with pytest.raises(AlreadyRecordingError):
        rec.start(1)


def test_capture_requires_recording(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    with pytest.raises(NotRecordingError):
        rec.capture(frame((0, 0, 0)), 0)


def test_double_stop_rejected(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(0)
    rec.stop(1)
    with pytest.raises(NotRecordingError):
        rec.stop(2)


def test_non_monotonic_tick_rejected(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(5)
    rec.capture(frame((1, 2, 3)), 6)
    with pytest.raises(NonMonotonicTickError):
        rec.capture(frame((1, 2, 3)), 4)


def test_frames_written_and_listed_in_order(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(0)
    for tick in range(3):
        rec.capture(frame((tick, tick, tick)), tick, annotation=f"t{tick}", step_index=tick)
    manifest = rec.stop(3)
    assert manifest.frame_count == 3
    assert list(manifest.frames) == [f"frame_{i:06d}.ppm" for i in (1, 2, 3)]
    for i, name in enumerate(manifest.frames):
        img = read_ppm(tmp_path / "frames" / name)
        assert (img.width, img.height) == (32, 24)
        assert tuple(img.pixels[0, 0]) == (i, i, i)
    assert manifest.events == ((0, 0, "t0"), (1, 1, "t1"), (2, 2, "t2"))


def test_identical_frames_not_deduplicated(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(0)
    rec.capture(frame((9, 9, 9)), 0)
    rec.capture(frame((9, 9, 9)), 0)
    manifest = rec.stop(0)
    assert manifest.frame_count == 2
    a = (tmp_path / "frames" / manifest.frames[0]).read_bytes()
    b = (tmp_path / "frames" / manifest.frames[1]).read_bytes()
    assert a == b


def test_event_ticks_within_bounds(tmp_path):
    rec = FrameRecorder(tmp_path, fps=10)
    rec.start(2)
    rec.capture(frame((0, 0, 0)), 4, annotation="x", step_index=0)
    manifest = rec.stop(8)
    for tick, _, _ in manifest.events:
        assert manifest.start_tick <= tick <= manifest.stop_tick
