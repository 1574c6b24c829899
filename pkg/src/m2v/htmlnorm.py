"""HTML-to-Markdown normalization for the supported tag subset.

Maps {p, ol, ul, li, b, strong, em, i, code, img, h1-h6} onto the
Markdown constructs the manual parser understands. Every other tag is
stripped with its text content preserved (script/style content is
dropped). Stray ``<`` in text is emitted as ``&lt;`` so the output never
contains raw angle brackets outside code spans.
"""

from __future__ import annotations

import logging
from html.parser import HTMLParser
from pathlib import Path

logger = logging.getLogger(__name__)

_HEADINGS = {f"h{n}": n for n in range(1, 7)}
_EMPHASIS_TAGS = {"b", "strong", "em", "i"}
_DROP_CONTENT_TAGS = {"script", "style"}


class _MarkdownBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.blocks: list[str] = []
        self._inline: list[str] = []
        self._list_stack: list[dict] = []  # {"ordered": bool, "counter": int}
        self._emphasis_depth = 0
        self._code_depth = 0
        self._drop_depth = 0
        self._heading_level = 0
        self._stripped_tags: set[str] = set()

    # -- block assembly --

    def _flush_block(self) -> None:
        text = "".join(self._inline).strip()
        self._inline = []
        if not text:
            return
        if self._heading_level:
            self.blocks.append("#" * self._heading_level + " " + text)
        elif self._list_stack:
            frame = self._list_stack[-1]
            if frame["ordered"]:
                frame["counter"] += 1
                self.blocks.append(f"{frame['counter']}. {text}")
            else:
                self.blocks.append(f"- {text}")
        else:
            self.blocks.append(text)

    # -- parser callbacks --

    def handle_starttag(self, tag, attrs):
        if tag in _DROP_CONTENT_TAGS:
            self._drop_depth += 1
            return
        if self._drop_depth:
            return
        if tag in _HEADINGS:
            self._flush_block()
            self._heading_level = _HEADINGS[tag]
        elif tag == "p":
            self._flush_block()
        elif tag == "ol":
            self._flush_block()
            self._list_stack.append({"ordered": True, "counter": 0})
        elif tag == "ul":
            self._flush_block()
            self._list_stack.append({"ordered": False, "counter": 0})
        elif tag == "li":
            self._flush_block()
        elif tag in _EMPHASIS_TAGS:
            if self._emphasis_depth == 0 and not self._code_depth:
                self._inline.append("**")
            self._emphasis_depth += 1
        elif tag == "code":
            if self._code_depth == 0:
                self._inline.append("`")
            self._code_depth += 1
        elif tag == "img":
            attr_map = dict(attrs)
            src = attr_map.get("src")
            if src:
                alt = attr_map.get("alt") or ""
                self._inline.append(f"![{alt}]({src})")
        elif tag == "br":
            self._inline.append(" ")
        else:
            self._stripped_tags.add(tag)

    def handle_endtag(self, tag):
        if tag in _DROP_CONTENT_TAGS:
            self._drop_depth = max(0, self._drop_depth - 1)
            return
        if self._drop_depth:
            return
        if tag in _HEADINGS:
            self._flush_block()
            self._heading_level = 0
        elif tag in ("p", "li"):
            self._flush_block()
        elif tag in ("ol", "ul"):
            self._flush_block()
            if self._list_stack:
                self._list_stack.pop()
        elif tag in _EMPHASIS_TAGS:
            self._emphasis_depth = max(0, self._emphasis_depth - 1)
            if self._emphasis_depth == 0 and not self._code_depth:
                self._inline.append("**")
        elif tag == "code":
            self._code_depth = max(0, self._code_depth - 1)
            if self._code_depth == 0:
                self._inline.append("`")

    def handle_data(self, data):
        if self._drop_depth:
            return
        data = data.replace("\n", " ")
        if not self._code_depth:
            data = data.replace("<", "&lt;")
        self._inline.append(data)

    def result(self) -> str:
        self._flush_block()
        if self._stripped_tags:
            logger.info("stripped unsupported HTML tags: %s", sorted(self._stripped_tags))
        return "\n\n".join(self.blocks) + ("\n" if self.blocks else "")


def normalize_html(html_text: str, base_dir: str | Path | None = None) -> str:
    """Convert the supported HTML subset to Markdown text.

    ``base_dir`` is accepted for interface symmetry with manual loading;
    image ``src`` values are passed through untouched and resolved later
    against the manual's directory.
    """
    builder = _MarkdownBuilder()
    builder.feed(html_text)
    builder.close()
    return builder.result()
