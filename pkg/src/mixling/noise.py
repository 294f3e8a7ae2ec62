"""Paragraph corruption: sentence permutation plus span masking.

Corruption permutes sentence order first, then replaces whole token spans
with single mask items inside the permuted stream.  Span lengths follow a
Poisson law (zero draws clamped to one); spans never cross sentence
boundaries, and placement continues until exactly ``round(mask_fraction *
token_count)`` tokens are covered.  Every surviving token keeps its original
paragraph index, so downstream stages can attribute each output item to its
source token.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Paragraph, Token
from .rng import RandomStream
from .validation import check_bool, check_positive, check_unit_interval, check_word

DEFAULT_MASK_TOKEN = "<mask>"


@dataclass(frozen=True)
class NoiseConfig:
    """Knobs for the corruption stage.

    ``mask_fraction`` is the target fraction of tokens to cover with masks;
    ``span_lambda`` the Poisson mean of span lengths.  ``enabled=False``
    turns the whole stage into the identity.
    """

    mask_fraction: float = 0.35
    span_lambda: float = 3.5
    permute_sentences: bool = True
    mask_token: str = DEFAULT_MASK_TOKEN
    enabled: bool = True

    def __post_init__(self) -> None:
        check_unit_interval("mask_fraction", self.mask_fraction)
        check_positive("span_lambda", self.span_lambda)
        check_word("mask_token", self.mask_token)
        check_bool("permute_sentences", self.permute_sentences)
        check_bool("enabled", self.enabled)


@dataclass(frozen=True, slots=True)
class MaskSpan:
    """A masked run of original token indices; end-exclusive."""

    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class NoisyParagraph:
    """Corruption output: surviving tokens and mask spans, permuted order."""

    paragraph: Paragraph
    items: tuple[Token | MaskSpan, ...]
    sentence_order: tuple[int, ...]
    mask_token: str

    @property
    def masked_token_count(self) -> int:
        return sum(item.length for item in self.items if isinstance(item, MaskSpan))


def _free_runs(owner: list[int], sentence_of: list[int]) -> list[tuple[int, int]]:
    """Maximal unmasked runs that stay inside one sentence: (start, length)."""
    runs: list[tuple[int, int]] = []
    start = -1
    for pos in range(len(owner)):
        free = owner[pos] < 0
        if free and start >= 0 and sentence_of[pos] != sentence_of[start]:
            runs.append((start, pos - start))
            start = pos
        elif free and start < 0:
            start = pos
        elif not free and start >= 0:
            runs.append((start, pos - start))
            start = -1
    if start >= 0:
        runs.append((start, len(owner) - start))
    return runs


def corrupt(paragraph: Paragraph, config: NoiseConfig, stream: RandomStream) -> NoisyParagraph:
    """Apply sentence permutation and span masking to one paragraph."""
    order = list(range(len(paragraph.sentences)))
    if config.enabled and config.permute_sentences:
        stream.shuffle(order)

    slots: list[Token] = []
    sentence_of: list[int] = []
    for rank, sentence_index in enumerate(order):
        for token in paragraph.sentences[sentence_index].tokens:
            slots.append(token)
            sentence_of.append(rank)

    total = len(slots)
    owner = [-1] * total
    if config.enabled and config.mask_fraction > 0.0:
        # Round half up; the loop below covers exactly this many tokens.
        budget = int(config.mask_fraction * total + 0.5)
        placement = 0
        while budget > 0:
            runs = _free_runs(owner, sentence_of)
            if not runs:
                break
            longest = max(length for _, length in runs)
            length = stream.poisson(config.span_lambda)
            # Clamp to [1, budget] and to the longest placeable run so a
            # placement always exists while budget remains.
            length = max(1, min(length, budget, longest))
            starts = [
                run_start + offset
                for run_start, run_length in runs
                for offset in range(run_length - length + 1)
            ]
            start = starts[stream.randbelow(len(starts))]
            for pos in range(start, start + length):
                owner[pos] = placement
            placement += 1
            budget -= length

    items: list[Token | MaskSpan] = []
    pos = 0
    while pos < total:
        if owner[pos] < 0:
            items.append(slots[pos])
            pos += 1
            continue
        placement = owner[pos]
        end = pos
        while end < total and owner[end] == placement:
            end += 1
        items.append(MaskSpan(slots[pos].index, slots[end - 1].index + 1))
        pos = end

    return NoisyParagraph(paragraph, tuple(items), tuple(order), config.mask_token)


def masked_fraction(noisy: NoisyParagraph) -> float:
    """Fraction of original tokens covered by mask spans."""
    total = noisy.paragraph.token_count
    return noisy.masked_token_count / total if total else 0.0
