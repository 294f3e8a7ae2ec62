"""Dictionary mixing: probabilistic replacement and deletion of tokens.

Operates on the non-masked tokens of a corrupted paragraph, in stream order.
A token with a dictionary entry is replaced by one of its translations with
probability ``replace_prob``; a covered token that survives replacement is
deleted with probability ``delete_prob``; everything else is kept verbatim.
Tokens without an entry are always kept.

Every covered token consumes exactly three uniform draws (replace, delete,
translation choice) regardless of the outcome, so for a fixed stream the set
of replaced tokens grows monotonically with ``replace_prob``.  Calibration
relies on this coupling.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Paragraph, Token
from .dictionary import BilingualDictionary, split_trailing_punctuation
from .noise import MaskSpan, NoisyParagraph
from .rng import RandomStream
from .validation import check_bool, check_unit_interval

KIND_MASKED = "masked"
KIND_KEPT = "kept"
KIND_REPLACED = "replaced"
KIND_DELETED = "deleted"


@dataclass(frozen=True)
class MixConfig:
    """Knobs for the mixing stage; probabilities apply per token occurrence."""

    replace_prob: float = 0.3
    delete_prob: float = 0.5
    replacement_enabled: bool = True
    deletion_enabled: bool = True

    def __post_init__(self) -> None:
        check_unit_interval("replace_prob", self.replace_prob)
        check_unit_interval("delete_prob", self.delete_prob)
        check_bool("replacement_enabled", self.replacement_enabled)
        check_bool("deletion_enabled", self.deletion_enabled)


@dataclass(frozen=True, slots=True)
class MixedItem:
    """One output item; surface is the emitted text (None for deleted)."""

    kind: str
    surface: str | None
    token: Token | None = None
    span: tuple[int, int] | None = None


@dataclass(frozen=True, slots=True)
class MixSummary:
    """Per-paragraph action tallies; masked counts covered tokens."""

    masked: int
    kept: int
    replaced: int
    deleted: int
    covered: int

    @property
    def non_masked(self) -> int:
        return self.kept + self.replaced + self.deleted

    @property
    def total(self) -> int:
        return self.masked + self.non_masked


@dataclass(frozen=True)
class MixedParagraph:
    paragraph: Paragraph
    items: tuple[MixedItem, ...]
    summary: MixSummary


def mix(
    noisy: NoisyParagraph,
    dictionary: BilingualDictionary,
    config: MixConfig,
    stream: RandomStream,
) -> MixedParagraph:
    """Apply replacement/deletion to the non-masked tokens of a paragraph."""
    items: list[MixedItem] = []
    masked = kept = replaced = deleted = covered = 0

    for item in noisy.items:
        if isinstance(item, MaskSpan):
            masked += item.length
            items.append(MixedItem(KIND_MASKED, noisy.mask_token, span=(item.start, item.end)))
            continue

        translations = dictionary.lookup(item.surface)
        if translations is None:
            kept += 1
            items.append(MixedItem(KIND_KEPT, item.surface, token=item))
            continue

        covered += 1
        u_replace = stream.random()
        u_delete = stream.random()
        u_choice = stream.random()
        if config.replacement_enabled and u_replace < config.replace_prob:
            choice = int(u_choice * len(translations))
            if choice >= len(translations):
                choice = len(translations) - 1
            suffix = split_trailing_punctuation(item.surface)[1]
            replaced += 1
            items.append(MixedItem(KIND_REPLACED, translations[choice] + suffix, token=item))
        elif config.deletion_enabled and u_delete < config.delete_prob:
            deleted += 1
            items.append(MixedItem(KIND_DELETED, None, token=item))
        else:
            kept += 1
            items.append(MixedItem(KIND_KEPT, item.surface, token=item))

    summary = MixSummary(masked, kept, replaced, deleted, covered)
    if summary.total != noisy.paragraph.token_count:
        raise AssertionError("mixing lost track of tokens; this is a bug")
    return MixedParagraph(noisy.paragraph, tuple(items), summary)


def mixing_ratio(mixed: MixedParagraph) -> float:
    """Replaced tokens over non-masked input tokens; 0.0 when none."""
    non_masked = mixed.summary.non_masked
    return mixed.summary.replaced / non_masked if non_masked else 0.0
