"""Manual loading: a small Markdown document model with a lossless subset parser.

Supported constructs: ATX headings, ordered list items (steps), unordered
list items and plain lines (paragraphs), ``**bold**`` / ``*emphasis*``
spans, backtick code spans and ``![alt](path)`` images. Consecutive plain
lines merge into one paragraph; everything else is line-oriented. There
are no backslash escapes and no nested lists.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

from .errors import M2VError

logger = logging.getLogger(__name__)


class UnsupportedFormatError(M2VError):
    """Manual file extension is not .md/.html/.htm."""


class MalformedInputError(M2VError):
    """Input is not valid UTF-8 or contains unrecoverable markup."""


# --- document model ----------------------------------------------------------


@dataclass(frozen=True)
class PlainText:
    text: str


@dataclass(frozen=True)
class Emphasis:
    text: str


@dataclass(frozen=True)
class CodeSpan:
    text: str


@dataclass(frozen=True)
class InlineImage:
    path: str
    alt_text: str


Inline = Union[PlainText, Emphasis, CodeSpan, InlineImage]


@dataclass(frozen=True)
class Heading:
    level: int
    inlines: tuple[Inline, ...]


@dataclass(frozen=True)
class Step:
    ordinal: int
    inlines: tuple[Inline, ...]


@dataclass(frozen=True)
class Paragraph:
    inlines: tuple[Inline, ...]


@dataclass(frozen=True)
class ImageBlock:
    path: str
    alt_text: str


Block = Union[Heading, Step, Paragraph, ImageBlock]


class ManualKind(Enum):
    TEXT_ONLY = "text-only"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class ManualDocument:
    source_path: Path
    base_dir: Path
    blocks: tuple[Block, ...]
    kind: ManualKind


# --- inline parsing ----------------------------------------------------------

_IMAGE_RE = re.compile(r"!\[([^\]]*)\]\(([^)\s]+)\)")


def _flush_text(buf: list[str], out: list[Inline]) -> None:
    if buf:
        out.append(PlainText("".join(buf)))
        buf.clear()


def parse_inlines(text: str) -> tuple[Inline, ...]:
    """Parse one line of Markdown into inline runs.

    Recovery rules: a lone ``*`` next to whitespace is literal; empty
    emphasis/code markers are literal. Genuinely unclosed ``**``, ``*``
    or backtick spans raise :class:`MalformedInputError`.
    """
    out: list[Inline] = []
    buf: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "!" and text.startswith("![", i):
            m = _IMAGE_RE.match(text, i)
            if m:
                _flush_text(buf, out)
                out.append(InlineImage(path=m.group(2), alt_text=m.group(1)))
                i = m.end()
                continue
            buf.append(ch)
            i += 1
        elif ch == "`":
            j = text.find("`", i + 1)
            if j < 0:
                raise MalformedInputError(f"unclosed code span in line: {text!r}")
            inner = text[i + 1 : j]
            if inner:
                _flush_text(buf, out)
                out.append(CodeSpan(inner))
            i = j + 1
        elif text.startswith("**", i):
            j = text.find("**", i + 2)
            if j < 0:
                raise MalformedInputError(f"unclosed emphasis in line: {text!r}")
            inner = text[i + 2 : j]
            if inner.strip():
                _flush_text(buf, out)
                out.append(Emphasis(inner))
            else:
                buf.append(text[i : j + 2])
            i = j + 2
        elif ch == "*":
            # Lone asterisk next to whitespace stays literal.
            if i + 1 >= n or text[i + 1].isspace():
                buf.append(ch)
                i += 1
                continue
            j = i + 1
            close = -1
            while True:
                j = text.find("*", j)
                if j < 0:
                    break
                if not text[j - 1].isspace():
                    close = j
                    break
                j += 1
            if close < 0:
                raise MalformedInputError(f"unclosed emphasis in line: {text!r}")
            inner = text[i + 1 : close]
            if inner.strip():
                _flush_text(buf, out)
                out.append(Emphasis(inner))
            else:
                buf.append(text[i : close + 1])
            i = close + 1
        else:
            buf.append(ch)
            i += 1
    _flush_text(buf, out)
    return tuple(out)


# --- block parsing -----------------------------------------------------------

_HEADING_RE = re.compile(r"^(#{1,6})\s+(.*?)\s*$")
_ORDERED_RE = re.compile(r"^(\d+)\.\s+(.*?)\s*$")
_UNORDERED_RE = re.compile(r"^[-*+]\s+(.*?)\s*$")
_IMAGE_LINE_RE = re.compile(r"^\s*!\[([^\]]*)\]\(([^)\s]+)\)\s*$")


def parse_markdown(text: str) -> tuple[Block, ...]:
    blocks: list[Block] = []
    para_lines: list[str] = []
    step_counter: int | None = None

    def flush_paragraph() -> None:
        nonlocal step_counter
        if para_lines:
            blocks.append(Paragraph(parse_inlines(" ".join(para_lines))))
            para_lines.clear()
            step_counter = None

    for raw in text.splitlines():
        line = raw.rstrip("\n")
        if not line.strip():
            flush_paragraph()
            continue
        m = _IMAGE_LINE_RE.match(line)
        if m:
            # Image-only lines become standalone blocks; they do not break
            # a step list, so screenshots can sit between numbered steps.
            flush_paragraph()
            blocks.append(ImageBlock(path=m.group(2), alt_text=m.group(1)))
            continue
        m = _HEADING_RE.match(line)
        if m:
            flush_paragraph()
            blocks.append(Heading(len(m.group(1)), parse_inlines(m.group(2))))
            step_counter = None
            continue
        m = _ORDERED_RE.match(line)
        if m:
            flush_paragraph()
            # Ordinals are normalized: the first item keeps its literal
            # number, later items continue the sequence.
            if step_counter is None:
                step_counter = int(m.group(1))
            else:
                step_counter += 1
            blocks.append(Step(step_counter, parse_inlines(m.group(2))))
            continue
        m = _UNORDERED_RE.match(line)
        if m:
            flush_paragraph()
            blocks.append(Paragraph(parse_inlines(m.group(1))))
            step_counter = None
            continue
        para_lines.append(line.strip())
    flush_paragraph()
    return tuple(blocks)


# --- serialization -----------------------------------------------------------


def serialize_inlines(inlines: tuple[Inline, ...]) -> str:
    parts: list[str] = []
    for inline in inlines:
        if isinstance(inline, PlainText):
            parts.append(inline.text)
        elif isinstance(inline, Emphasis):
            parts.append(f"**{inline.text}**")
        elif isinstance(inline, CodeSpan):
            parts.append(f"`{inline.text}`")
        else:
            parts.append(f"![{inline.alt_text}]({inline.path})")
    return "".join(parts)


def serialize_document(blocks: tuple[Block, ...]) -> str:
    lines: list[str] = []
    for block in blocks:
        if isinstance(block, Heading):
            lines.append("#" * block.level + " " + serialize_inlines(block.inlines))
        elif isinstance(block, Step):
            lines.append(f"{block.ordinal}. " + serialize_inlines(block.inlines))
        elif isinstance(block, Paragraph):
            lines.append(serialize_inlines(block.inlines))
        else:
            lines.append(f"![{block.alt_text}]({block.path})")
        lines.append("")
    return "\n".join(lines)


# --- loading -----------------------------------------------------------------


def classify_manual(blocks: tuple[Block, ...]) -> ManualKind:
    """Hybrid iff any image reference exists anywhere in the block tree."""
    for block in blocks:
        if isinstance(block, ImageBlock):
            return ManualKind.HYBRID
        if isinstance(block, (Heading, Step, Paragraph)):
            if any(isinstance(i, InlineImage) for i in block.inlines):
                return ManualKind.HYBRID
    return ManualKind.TEXT_ONLY


def _iter_image_paths(blocks: tuple[Block, ...]):
    for block in blocks:
        if isinstance(block, ImageBlock):
            yield block.path
        elif isinstance(block, (Heading, Step, Paragraph)):
            for inline in block.inlines:
                if isinstance(inline, InlineImage):
                    yield inline.path


def load_manual(path: str | Path) -> ManualDocument:
    """Load a ``.md`` or ``.html``/``.htm`` manual into the document model.

    Image references are checked eagerly so that a broken manual fails
    here rather than halfway through emulation.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"manual not found: {path}")
    suffix = path.suffix.lower()
    if suffix not in (".md", ".html", ".htm"):
        raise UnsupportedFormatError(f"unsupported manual format {suffix!r}: {path}")
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid UTF-8: {exc}") from exc
    base_dir = path.parent
    if suffix in (".html", ".htm"):
        from .htmlnorm import normalize_html

        text = normalize_html(text, base_dir)
    blocks = parse_markdown(text)
    for ref in _iter_image_paths(blocks):
        resolved = base_dir / ref
        if not resolved.is_file():
            raise FileNotFoundError(f"manual image not found: {resolved}")
    return ManualDocument(
        source_path=path,
        base_dir=base_dir,
        blocks=blocks,
        kind=classify_manual(blocks),
    )
