"""Run-level statistics: exact integer counts, rates derived at render time.

Reports are value objects; merging adds counts, so a report assembled from
parallel chunks is exactly equal to one computed sequentially.  ``covered``
and ``oov_tokens`` are optional because they cannot be recovered from a
serialized dataset alone (the record schema carries only replaced / deleted /
masked / tokens); reports rebuilt from disk leave them as None.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus


def _merge_optional(name: str, a: int | None, b: int | None) -> int | None:
    if a is None and b is None:
        return None
    if a is None or b is None:
        raise ValueError(f"cannot merge reports where only one side tracks {name}")
    return a + b


@dataclass(frozen=True)
class GenerationReport:
    paragraphs: int = 0
    tokens: int = 0
    masked: int = 0
    kept: int = 0
    replaced: int = 0
    deleted: int = 0
    covered: int | None = 0
    oov_tokens: int | None = None
    output_lengths: dict[int, int] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> "GenerationReport":
        return cls()

    @property
    def non_masked(self) -> int:
        return self.tokens - self.masked

    @property
    def masked_fraction(self) -> float:
        return self.masked / self.tokens if self.tokens else 0.0

    @property
    def mixing_ratio(self) -> float:
        """Replaced over non-masked input tokens."""
        return self.replaced / self.non_masked if self.non_masked else 0.0

    @property
    def mixing_ratio_surviving(self) -> float | None:
        """Replaced over kept output tokens; None when nothing was kept."""
        return self.replaced / self.kept if self.kept else None

    @property
    def deletion_rate(self) -> float | None:
        """Deleted over covered non-replaced tokens; None without coverage."""
        if self.covered is None:
            return None
        at_risk = self.covered - self.replaced
        return self.deleted / at_risk if at_risk else 0.0

    @property
    def coverage(self) -> float | None:
        """Covered over non-masked tokens; None without coverage counts."""
        if self.covered is None:
            return None
        return self.covered / self.non_masked if self.non_masked else 0.0

    @property
    def oov_rate(self) -> float | None:
        if self.oov_tokens is None:
            return None
        return self.oov_tokens / self.tokens if self.tokens else 0.0

    def validate(self) -> None:
        """Check count consistency, including replaced <= covered."""
        counts = (self.paragraphs, self.tokens, self.masked, self.kept, self.replaced, self.deleted)
        if any(value < 0 for value in counts):
            raise ValueError("report counts must be non-negative")
        if self.masked + self.kept + self.replaced + self.deleted != self.tokens:
            raise ValueError("report counts do not add up to the token total")
        if self.covered is not None:
            if self.replaced + self.deleted > self.covered:
                raise ValueError("replaced+deleted exceed covered tokens")
            if self.covered > self.non_masked:
                raise ValueError("covered tokens exceed non-masked tokens")
        if self.oov_tokens is not None and self.oov_tokens > self.tokens:
            raise ValueError("out-of-vocabulary count exceeds token total")

    def merge(self, other: "GenerationReport") -> "GenerationReport":
        lengths = dict(self.output_lengths)
        for length, count in other.output_lengths.items():
            lengths[length] = lengths.get(length, 0) + count
        return GenerationReport(
            paragraphs=self.paragraphs + other.paragraphs,
            tokens=self.tokens + other.tokens,
            masked=self.masked + other.masked,
            kept=self.kept + other.kept,
            replaced=self.replaced + other.replaced,
            deleted=self.deleted + other.deleted,
            covered=_merge_optional("covered", self.covered, other.covered),
            oov_tokens=_merge_optional("oov_tokens", self.oov_tokens, other.oov_tokens),
            output_lengths=lengths,
        )

    def to_dict(self) -> dict:
        return {
            "paragraphs": self.paragraphs,
            "tokens": self.tokens,
            "masked": self.masked,
            "kept": self.kept,
            "replaced": self.replaced,
            "deleted": self.deleted,
            "covered": self.covered,
            "oov_tokens": self.oov_tokens,
            "masked_fraction": self.masked_fraction,
            "mixing_ratio": self.mixing_ratio,
            "mixing_ratio_surviving": self.mixing_ratio_surviving,
            "deletion_rate": self.deletion_rate,
            "coverage": self.coverage,
            "oov_rate": self.oov_rate,
            "output_lengths": {str(k): self.output_lengths[k] for k in sorted(self.output_lengths)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GenerationReport":
        return cls(
            paragraphs=data["paragraphs"],
            tokens=data["tokens"],
            masked=data["masked"],
            kept=data["kept"],
            replaced=data["replaced"],
            deleted=data["deleted"],
            covered=data.get("covered"),
            oov_tokens=data.get("oov_tokens"),
            output_lengths={int(k): v for k, v in data.get("output_lengths", {}).items()},
        )

    def render_table(self) -> str:
        def fmt(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.4f}"

        rows = [
            ("paragraphs", str(self.paragraphs)),
            ("tokens", str(self.tokens)),
            ("masked tokens", str(self.masked)),
            ("kept tokens", str(self.kept)),
            ("replaced tokens", str(self.replaced)),
            ("deleted tokens", str(self.deleted)),
            ("covered tokens", "n/a" if self.covered is None else str(self.covered)),
            ("masked fraction", fmt(self.masked_fraction)),
            ("mixing ratio", fmt(self.mixing_ratio)),
            ("mixing ratio (surviving)", fmt(self.mixing_ratio_surviving)),
            ("deletion rate", fmt(self.deletion_rate)),
            ("coverage", fmt(self.coverage)),
            ("oov rate", fmt(self.oov_rate)),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


def merge(a: GenerationReport, b: GenerationReport) -> GenerationReport:
    """Associative, commutative report merge."""
    return a.merge(b)


def load_vocab(path: str | Path) -> frozenset[str]:
    """Load a one-word-per-line vocabulary file."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word:
            words.add(word)
    return frozenset(words)


def oov_rate(corpus: Corpus, vocab: frozenset[str]) -> float:
    """Fraction of token occurrences absent from the vocabulary."""
    total = 0
    missing = 0
    for paragraph in corpus:
        for token in paragraph.tokens():
            total += 1
            if token.surface not in vocab:
                missing += 1
    return missing / total if total else 0.0


def report_from_dataset(path: str | Path, vocab: frozenset[str] | None = None) -> GenerationReport:
    """Recompute a report from a serialized dataset.

    Coverage-dependent statistics (covered, deletion_rate, coverage) are not
    recoverable from the record schema and stay None.
    """
    paragraphs = tokens = masked = replaced = deleted = kept = 0
    oov: int | None = 0 if vocab is not None else None
    lengths: dict[int, int] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                meta = record["meta"]
                rec_tokens = meta["tokens"]
                rec_masked = meta["masked"]
                rec_replaced = meta["replaced"]
                rec_deleted = meta["deleted"]
                input_text = record["input"]
                target_text = record["target"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed dataset record ({exc})") from exc
            rec_kept = rec_tokens - rec_masked - rec_replaced - rec_deleted
            if rec_kept < 0:
                raise ValueError(f"{path}:{lineno}: inconsistent record counts")
            paragraphs += 1
            tokens += rec_tokens
            masked += rec_masked
            replaced += rec_replaced
            deleted += rec_deleted
            kept += rec_kept
            length = len(input_text.split())
            lengths[length] = lengths.get(length, 0) + 1
            if vocab is not None:
                oov += sum(1 for word in target_text.split() if word not in vocab)
    return GenerationReport(
        paragraphs=paragraphs,
        tokens=tokens,
        masked=masked,
        kept=kept,
        replaced=replaced,
        deleted=deleted,
        covered=None,
        oov_tokens=oov,
        output_lengths=lengths,
    )
