"""Extract ordered action records from a manual's instructional text.

The pipeline is deterministic rule tagging rather than a statistical
tagger: tokenize, tag lexical categories, fix keyword tags around
emphasis markers, then walk each clause collecting one record per verb
keyword. Emphasis and code spans name targets directly; otherwise a
bounded forward search picks up the following noun phrase.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import M2VError
from .lexicon import Lexicon, TargetType, stem
from .manual import (
    CodeSpan,
    Emphasis,
    Heading,
    ImageBlock,
    Inline,
    InlineImage,
    ManualDocument,
    ManualKind,
    Paragraph,
    PlainText,
    Step,
)

logger = logging.getLogger(__name__)

STYLES = ("auto", "emphasis", "explicit-type")


class NoActionsFoundError(M2VError):
    """The document produced zero action records (unsupported style)."""


class Tag(Enum):
    VERB = "Verb"
    NOUN = "Noun"
    DETERMINER = "Determiner"
    SYMBOL = "Symbol"
    OTHER = "Other"


@dataclass(frozen=True)
class Token:
    text: str
    tag: Tag = Tag.OTHER
    emphasis: bool = False
    code_span: bool = False
    position: int = 0

    def __post_init__(self) -> None:
        if self.emphasis and self.code_span:
            raise ValueError("token cannot be both emphasis and code span")


@dataclass(frozen=True)
class ActionRecord:
    """One manual instruction in uniform form.

    ``source_block`` and ``image`` are pipeline bookkeeping: the index of
    the block the instruction came from and the manual image associated
    with it (hybrid manuals only). ``from_routine`` marks records that
    were produced by expanding an abstract action.
    """

    keyword: str
    target_type: TargetType
    target_object: str
    target_path: str | None = None
    condition: str | None = None
    source_block: int = -1
    image: str | None = None
    from_routine: bool = False

    def to_dict(self) -> dict:
        return {
            "keyword": self.keyword,
            "target_type": self.target_type.value,
            "target_object": self.target_object,
            "target_path": self.target_path,
            "condition": self.condition,
            "source_block": self.source_block,
            "image": self.image,
            "from_routine": self.from_routine,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ActionRecord":
        return cls(
            keyword=data["keyword"],
            target_type=TargetType(data.get("target_type", "Unknown")),
            target_object=data.get("target_object", ""),
            target_path=data.get("target_path"),
            condition=data.get("condition"),
            source_block=data.get("source_block", -1),
            image=data.get("image"),
            from_routine=data.get("from_routine", False),
        )

    def core(self) -> tuple:
        """The five contract fields, for gold-corpus comparison."""
        return (
            self.keyword,
            self.target_type.value,
            self.target_object,
            self.target_path,
            self.condition,
        )


def save_actions(records: list[ActionRecord], path: str | Path) -> None:
    payload = {"records": [r.to_dict() for r in records]}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_actions(path: str | Path) -> list[ActionRecord]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [ActionRecord.from_dict(entry) for entry in data["records"]]


# --- tokenization --------------------------------------------------------------

_WORD_OR_SYMBOL = re.compile(r"[A-Za-z0-9][A-Za-z0-9'\-]*|[^\sA-Za-z0-9]")


def tokenize(inlines: tuple[Inline, ...] | list[Inline]) -> list[Token]:
    """Split inline runs into word/punctuation tokens.

    Code spans stay atomic (one token, verbatim text); emphasis runs are
    word-split with the emphasis flag carried on every resulting token.
    """
    tokens: list[Token] = []
    for inline in inlines:
        if isinstance(inline, PlainText):
            for match in _WORD_OR_SYMBOL.finditer(inline.text):
                tokens.append(Token(match.group(0), position=len(tokens)))
        elif isinstance(inline, Emphasis):
            for match in _WORD_OR_SYMBOL.finditer(inline.text):
                tokens.append(
                    Token(match.group(0), emphasis=True, position=len(tokens))
                )
        elif isinstance(inline, CodeSpan):
            tokens.append(Token(inline.text, code_span=True, position=len(tokens)))
        # inline images carry no text
    return tokens


def _is_symbol(text: str) -> bool:
    return len(text) == 1 and not text.isalnum()


_CLAUSE_BOUNDARIES = {";"}
_CLAUSE_WORDS = {"then", "and"}


def tag_tokens(tokens: list[Token], lexicon: Lexicon) -> list[Token]:
    """Rule-based lexical tagging.

    A lexicon keyword is a verb when clause-initial, after a clause
    boundary (";", "then", "and") or after "to"; elsewhere it reads as a
    noun ("the input field"). Emphasis/code tokens and GUI nouns tag as
    nouns, and capitalized mid-sentence words are treated as names.
    """
    tagged: list[Token] = []
    for i, tok in enumerate(tokens):
        if tok.code_span or tok.emphasis:
            tag = Tag.NOUN
        elif _is_symbol(tok.text):
            tag = Tag.SYMBOL
        elif lexicon.is_determiner(tok.text):
            tag = Tag.DETERMINER
        elif lexicon.keyword_of(tok.text) is not None:
            prev = tokens[i - 1] if i > 0 else None
            verb_position = (
                i == 0
                or prev.text in _CLAUSE_BOUNDARIES
                or prev.text.lower() in _CLAUSE_WORDS
                or prev.text.lower() == "to"
            )
            tag = Tag.VERB if verb_position else Tag.NOUN
        elif lexicon.hint_type(tok.text) is not None:
            tag = Tag.NOUN
        elif tok.text[0].isupper() and i > 0:
            tag = Tag.NOUN
        else:
            tag = Tag.OTHER
        tagged.append(dataclasses.replace(tok, tag=tag))
    return tagged


def correct_tags(tokens: list[Token], lexicon: Lexicon) -> list[Token]:
    """Re-tag lexicon keywords that sit directly before an emphasis or
    code-span token as verbs; nothing else changes."""
    corrected = list(tokens)
    for i, tok in enumerate(corrected[:-1]):
        nxt = corrected[i + 1]
        if (
            tok.tag is not Tag.VERB
            and not tok.emphasis
            and not tok.code_span
            and lexicon.keyword_of(tok.text) is not None
            and (nxt.emphasis or nxt.code_span)
        ):
            corrected[i] = dataclasses.replace(tok, tag=Tag.VERB)
    return corrected


# --- record extraction ---------------------------------------------------------

_SENTENCE_ENDS = {".", "!", "?"}
_PHRASE_LIMIT = 6


def _split_sentences(tokens: list[Token]) -> list[list[Token]]:
    sentences: list[list[Token]] = []
    current: list[Token] = []
    for tok in tokens:
        if tok.text in _SENTENCE_ENDS and not tok.code_span:
            if current:
                sentences.append(current)
                current = []
        else:
            current.append(tok)
    if current:
        sentences.append(current)
    return sentences


def _split_condition(tokens: list[Token]) -> tuple[str | None, list[Token]]:
    """Split a leading "If ...,"/"When ...," clause off a sentence."""
    if not tokens or tokens[0].text.lower() not in ("if", "when"):
        return None, tokens
    for i, tok in enumerate(tokens):
        if tok.text == "," and not tok.code_span:
            clause = " ".join(t.text for t in tokens[1:i])
            return (clause or None), tokens[i + 1 :]
    return None, tokens


def _emphasis_run(tokens: list[Token], index: int) -> tuple[int, int]:
    """Expand ``index`` to the maximal adjacent run of emphasis tokens."""
    if tokens[index].code_span:
        return index, index + 1
    start = index
    while start > 0 and tokens[start - 1].emphasis:
        start -= 1
    end = index + 1
    while end < len(tokens) and tokens[end].emphasis:
        end += 1
    return start, end


def _type_from_neighbors(
    tokens: list[Token], start: int, end: int, lexicon: Lexicon
) -> TargetType | None:
    """Noun-hint type from the token adjacent to a target run, if any."""
    if end < len(tokens):
        hint = lexicon.hint_type(tokens[end].text)
        if hint is not None:
            return hint
    before = start - 1
    while before >= 0 and tokens[before].tag is Tag.DETERMINER:
        before -= 1
    if before >= 0:
        hint = lexicon.hint_type(tokens[before].text)
        if hint is not None:
            return hint
    return None


def _forward_phrase(
    tokens: list[Token], start: int, lexicon: Lexicon
) -> tuple[list[Token], TargetType | None]:
    """Collect the noun phrase following a keyword.

    The search skips determiners and stops at the next verb keyword, any
    punctuation, a clause word, or after six collected tokens. Leading or
    trailing noun-hint words define the target type and are stripped from
    the phrase unless they are all it contains.
    """
    phrase: list[Token] = []
    for tok in tokens[start:]:
        if tok.tag is Tag.VERB or tok.tag is Tag.SYMBOL:
            break
        if tok.text.lower() in _CLAUSE_WORDS:
            break
        if tok.tag is Tag.DETERMINER:
            continue
        phrase.append(tok)
        if len(phrase) >= _PHRASE_LIMIT:
            break
    if not phrase:
        return [], None
    hint_type: TargetType | None = None
    lead = 0
    while lead < len(phrase) and lexicon.hint_type(phrase[lead].text) is not None:
        lead += 1
    trail = len(phrase)
    while trail > lead and lexicon.hint_type(phrase[trail - 1].text) is not None:
        trail -= 1
    if lead > 0 or trail < len(phrase):
        if lead < trail:
            hint_type = lexicon.hint_type(
                phrase[0].text if lead > 0 else phrase[-1].text
            )
            phrase = phrase[lead:trail]
        else:
            # The phrase was nothing but hint words; keep it as the target.
            hint_type = lexicon.hint_type(phrase[-1].text)
    return phrase, hint_type


def resolve_style(doc: ManualDocument, style: str) -> str:
    if style not in STYLES:
        raise ValueError(f"unknown style profile {style!r}")
    if style != "auto":
        return style
    for block in doc.blocks:
        if isinstance(block, (Heading, Step, Paragraph)):
            if any(isinstance(i, Emphasis) for i in block.inlines):
                return "emphasis"
    return "explicit-type"


def _extract_from_sentence(
    tokens: list[Token],
    lexicon: Lexicon,
    style: str,
    block_index: int,
) -> list[ActionRecord]:
    condition, body = _split_condition(tokens)
    body = correct_tags(tag_tokens(body, lexicon), lexicon)
    records: list[ActionRecord] = []
    verb_positions = [
        i
        for i, tok in enumerate(body)
        if tok.tag is Tag.VERB and lexicon.keyword_of(tok.text) is not None
    ]
    for n, vi in enumerate(verb_positions):
        window_end = verb_positions[n + 1] if n + 1 < len(verb_positions) else len(body)
        window = body[vi + 1 : window_end]
        keyword = lexicon.keyword_of(body[vi].text)
        info = lexicon.keywords[keyword]
        target = ""
        target_type: TargetType | None = None
        # Code spans are verbatim payloads and always win; emphasis wins
        # only under the emphasis style profile.
        marked = next(
            (
                j
                for j, tok in enumerate(window)
                if tok.code_span or (tok.emphasis and style == "emphasis")
            ),
            None,
        )
        if marked is not None:
            run_start, run_end = _emphasis_run(window, marked)
            target = " ".join(t.text for t in window[run_start:run_end])
            target_type = _type_from_neighbors(window, run_start, run_end, lexicon)
        else:
            phrase, hint = _forward_phrase(body, vi + 1, lexicon)
            target = " ".join(t.text for t in phrase)
            target_type = hint
        if target_type is None:
            target_type = info.target_type
        if not target:
            logger.warning(
                "keyword %r at block %d has no target object", keyword, block_index
            )
        records.append(
            ActionRecord(
                keyword=keyword,
                target_type=target_type,
                target_object=target,
                condition=condition,
                source_block=block_index,
            )
        )
    return records


def extract_actions(
    doc: ManualDocument, lexicon: Lexicon, style: str = "auto"
) -> list[ActionRecord]:
    """One record per verb keyword, in document order.

    Headings are titles, not instructions, so they are skipped. Raises
    :class:`NoActionsFoundError` when the document yields no records.
    """
    style = resolve_style(doc, style)
    records: list[ActionRecord] = []
    for index, block in enumerate(doc.blocks):
        if not isinstance(block, (Step, Paragraph)):
            continue
        tokens = tokenize(block.inlines)
        for sentence in _split_sentences(tokens):
            records.extend(_extract_from_sentence(sentence, lexicon, style, index))
    if not records:
        raise NoActionsFoundError(
            f"no action records extracted from {doc.source_path} "
            f"(style profile {style!r}); the manual's writing style may be unsupported"
        )
    return records


def attach_manual_images(
    records: list[ActionRecord], doc: ManualDocument
) -> list[ActionRecord]:
    """Associate each record with the manual image its step shows, if any.

    A record's candidate image is an inline image inside its own block,
    or the first image block following it before the next textual block.
    Text-only documents pass through unchanged.
    """
    if doc.kind is ManualKind.TEXT_ONLY:
        return list(records)
    candidates: dict[int, str] = {}
    for index, block in enumerate(doc.blocks):
        if isinstance(block, (Step, Paragraph)):
            inline = next(
                (i for i in block.inlines if isinstance(i, InlineImage)), None
            )
            if inline is not None:
                candidates[index] = inline.path
                continue
            for later in doc.blocks[index + 1 :]:
                if isinstance(later, ImageBlock):
                    candidates[index] = later.path
                    break
                if isinstance(later, (Step, Paragraph, Heading)):
                    break
    out: list[ActionRecord] = []
    for record in records:
        path = candidates.get(record.source_block)
        if path is not None:
            resolved = str(doc.base_dir / path)
            out.append(dataclasses.replace(record, image=resolved))
        else:
            out.append(record)
    return out
