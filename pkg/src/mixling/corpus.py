"""Corpus ingestion: line-per-paragraph loading, tokenization, sampling.

A corpus file is UTF-8 text with one paragraph per line.  Tokens are
whitespace-delimited words (optionally produced by an external pre-tokenizer
first); sentence boundaries fall after any token ending in ``. ! ? …``.
Loaded corpora are immutable and safe to share across worker processes.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from .errors import CorpusError, PretokenizerError
from .rng import derive_stream

SENTENCE_TERMINALS = frozenset(".!?…")

# Fixed stream id separating paragraph sampling from per-record streams.
SAMPLE_STREAM_ID = 0x53414D504C45  # "SAMPLE"


@dataclass(frozen=True, slots=True)
class Token:
    """One whitespace-delimited word and its 0-based paragraph position."""

    surface: str
    index: int

    def __post_init__(self) -> None:
        if not self.surface or self.surface.split() != [self.surface]:
            raise ValueError(f"token surface must be non-empty and whitespace-free: {self.surface!r}")
        if self.index < 0:
            raise ValueError("token index must be >= 0")


@dataclass(frozen=True, slots=True)
class Sentence:
    """A contiguous run of paragraph tokens; span is end-exclusive."""

    tokens: tuple[Token, ...]
    span: tuple[int, int]

    def __post_init__(self) -> None:
        if not self.tokens or self.span[1] - self.span[0] != len(self.tokens):
            raise ValueError(f"sentence span {self.span} does not match its {len(self.tokens)} tokens")


@dataclass(frozen=True, slots=True)
class Paragraph:
    """One corpus line; doc_id is the 1-based line number in the source file."""

    sentences: tuple[Sentence, ...]
    doc_id: int

    def __post_init__(self) -> None:
        if not self.sentences:
            raise ValueError("paragraph must contain at least one sentence")
        expected = 0
        for sentence in self.sentences:
            if sentence.span[0] != expected:
                raise ValueError("sentence spans must partition the paragraph tokens")
            expected = sentence.span[1]

    def tokens(self) -> list[Token]:
        return [token for sentence in self.sentences for token in sentence.tokens]

    @property
    def token_count(self) -> int:
        return sum(len(sentence.tokens) for sentence in self.sentences)

    def text(self) -> str:
        return " ".join(token.surface for token in self.tokens())


@dataclass(frozen=True, slots=True)
class Corpus:
    paragraphs: tuple[Paragraph, ...]
    language_tag: str = ""
    skipped_lines: int = 0

    def __len__(self) -> int:
        return len(self.paragraphs)

    def __iter__(self) -> Iterator[Paragraph]:
        return iter(self.paragraphs)

    @property
    def token_count(self) -> int:
        return sum(paragraph.token_count for paragraph in self.paragraphs)


def split_sentences(tokens: Sequence[Token]) -> tuple[Sentence, ...]:
    """Partition tokens into sentences at terminal punctuation.

    A boundary falls after any token whose surface ends in one of
    ``SENTENCE_TERMINALS``; a tail without a terminal forms a final sentence.
    """
    if not tokens:
        raise ValueError("cannot split an empty token list")
    sentences: list[Sentence] = []
    start = 0
    for i, token in enumerate(tokens):
        if token.surface[-1] in SENTENCE_TERMINALS:
            sentences.append(Sentence(tuple(tokens[start : i + 1]), (start, i + 1)))
            start = i + 1
    if start < len(tokens):
        sentences.append(Sentence(tuple(tokens[start:]), (start, len(tokens))))
    return tuple(sentences)


def paragraph_from_text(text: str, doc_id: int) -> Paragraph | None:
    """Tokenize one line into a Paragraph; None for blank lines."""
    surfaces = text.split()
    if not surfaces:
        return None
    tokens = tuple(Token(surface, i) for i, surface in enumerate(surfaces))
    return Paragraph(split_sentences(tokens), doc_id)


def corpus_from_lines(lines: Sequence[str], language_tag: str = "") -> Corpus:
    """Build a corpus from in-memory lines, numbering them like file lines."""
    paragraphs = []
    for lineno, line in enumerate(lines, start=1):
        paragraph = paragraph_from_text(line, lineno)
        if paragraph is not None:
            paragraphs.append(paragraph)
    return Corpus(tuple(paragraphs), language_tag)


def _run_pretokenizer(lines: list[str], command: str | Sequence[str]) -> list[str]:
    # Line-per-line protocol: line i of stdout pre-tokenizes line i of stdin.
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    try:
        proc = subprocess.run(
            argv,
            input="".join(line + "\n" for line in lines),
            capture_output=True,
            text=True,
            encoding="utf-8",
        )
    except OSError as exc:
        raise PretokenizerError(f"failed to run pre-tokenizer {argv!r}: {exc}") from exc
    if proc.returncode != 0:
        raise PretokenizerError(
            f"pre-tokenizer {argv!r} exited with status {proc.returncode}: {proc.stderr.strip()}"
        )
    output = proc.stdout.splitlines()
    if len(output) != len(lines):
        raise PretokenizerError(
            f"pre-tokenizer {argv!r} returned {len(output)} lines for {len(lines)} input lines"
        )
    return output


def load_corpus(
    path: str | Path,
    pretokenizer: str | Sequence[str] | None = None,
    language_tag: str = "",
    on_decode_error: str = "abort",
) -> Corpus:
    """Load a one-paragraph-per-line UTF-8 corpus file.

    Blank lines are skipped; surviving paragraphs keep their 1-based source
    line number as ``doc_id``.  ``on_decode_error`` selects between aborting
    on the first invalid UTF-8 line (``"abort"``) and skipping such lines
    while counting them (``"skip"``, reported via ``Corpus.skipped_lines``).
    """
    if on_decode_error not in ("abort", "skip"):
        raise ValueError(f"on_decode_error must be 'abort' or 'skip', got {on_decode_error!r}")
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    raw_lines = data.split(b"\n")
    if raw_lines and raw_lines[-1] == b"":
        raw_lines.pop()

    numbered: list[tuple[int, str]] = []
    skipped = 0
    for lineno, raw in enumerate(raw_lines, start=1):
        try:
            numbered.append((lineno, raw.rstrip(b"\r").decode("utf-8")))
        except UnicodeDecodeError as exc:
            if on_decode_error == "skip":
                skipped += 1
                continue
            raise CorpusError(f"{path}:{lineno}: invalid UTF-8 ({exc.reason})") from exc

    if pretokenizer is not None and numbered:
        texts = _run_pretokenizer([text for _, text in numbered], pretokenizer)
        numbered = [(lineno, text) for (lineno, _), text in zip(numbered, texts)]

    paragraphs = []
    for lineno, text in numbered:
        paragraph = paragraph_from_text(text, lineno)
        if paragraph is not None:
            paragraphs.append(paragraph)
    return Corpus(tuple(paragraphs), language_tag, skipped)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to one-paragraph-per-line text."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for paragraph in corpus:
            handle.write(paragraph.text() + "\n")


def sample_paragraphs(corpus: Corpus, n: int, seed: int) -> Corpus:
    """Uniform sample of n paragraphs without replacement, original order.

    A pure function of (corpus, n, seed); n >= len(corpus) returns the
    corpus unchanged.
    """
    if n < 0:
        raise ValueError("sample size must be >= 0")
    total = len(corpus)
    if n >= total:
        return corpus
    stream = derive_stream(seed, SAMPLE_STREAM_ID)
    indices = list(range(total))
    for i in range(n):
        j = i + stream.randbelow(total - i)
        indices[i], indices[j] = indices[j], indices[i]
    chosen = sorted(indices[:n])
    return Corpus(tuple(corpus.paragraphs[k] for k in chosen), corpus.language_tag)
