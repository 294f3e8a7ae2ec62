"""End-to-end pair generation: corruption, mixing, rendering, serialization.

Each paragraph is processed with a random stream derived solely from
``(config.seed, paragraph.doc_id)``, so output is a pure function of
(corpus, dictionary, config) — independent of worker count, chunking, and
platform.  Records are serialized as JSON lines::

    {"id": <doc_id>, "input": "...", "target": "...",
     "meta": {"replaced": n, "deleted": n, "masked": n, "tokens": n}}

with this exact key order and compact separators, so equal runs produce
byte-identical files.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .corpus import Corpus, Paragraph, paragraph_from_text
from .dictionary import BilingualDictionary
from .mixing import KIND_MASKED, MixConfig, MixedParagraph, MixSummary, mix
from .noise import NoiseConfig, corrupt
from .rng import RandomStream, derive_stream
from .stats import GenerationReport
from .validation import check_int

_CHUNK_SIZE = 512

__all__ = [
    "PipelineConfig",
    "PseudoPair",
    "derive_stream",
    "generate_pair",
    "generate_dataset",
    "record_line",
]


@dataclass(frozen=True)
class PipelineConfig:
    """Full configuration of a generation run."""

    noise: NoiseConfig = NoiseConfig()
    mix: MixConfig = MixConfig()
    seed: int = 0
    direction_label: str = ""

    def __post_init__(self) -> None:
        check_int("seed", self.seed)
        if not isinstance(self.direction_label, str):
            raise ValueError("direction_label must be a string")

    def to_dict(self) -> dict:
        return {
            "noise": {
                "mask_fraction": self.noise.mask_fraction,
                "span_lambda": self.noise.span_lambda,
                "permute_sentences": self.noise.permute_sentences,
                "mask_token": self.noise.mask_token,
                "enabled": self.noise.enabled,
            },
            "mix": {
                "replace_prob": self.mix.replace_prob,
                "delete_prob": self.mix.delete_prob,
                "replacement_enabled": self.mix.replacement_enabled,
                "deletion_enabled": self.mix.deletion_enabled,
            },
            "seed": self.seed,
            "direction_label": self.direction_label,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        """Build a config from a plain dict; unknown keys are errors."""
        defaults = cls().to_dict()
        unknown = set(data) - set(defaults)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged = {**defaults, **data}
        for section in ("noise", "mix"):
            section_data = merged[section]
            if not isinstance(section_data, dict):
                raise ValueError(f"config section {section!r} must be an object")
            section_unknown = set(section_data) - set(defaults[section])
            if section_unknown:
                raise ValueError(f"unknown config keys: {sorted(f'{section}.{k}' for k in section_unknown)}")
            merged[section] = {**defaults[section], **section_data}
        return cls(
            noise=NoiseConfig(**merged["noise"]),
            mix=MixConfig(**merged["mix"]),
            seed=merged["seed"],
            direction_label=merged["direction_label"],
        )


@dataclass(frozen=True)
class PseudoPair:
    """One training example: corrupted mixed input and clean target."""

    doc_id: int
    input_text: str
    target_text: str
    summary: MixSummary | None = None
    actions: tuple[str, ...] | None = None


def _render(mixed: MixedParagraph, include_actions: bool) -> PseudoPair:
    surfaces = [item.surface for item in mixed.items if item.surface is not None]
    actions: tuple[str, ...] | None = None
    if include_actions:
        labels = [""] * mixed.paragraph.token_count
        for item in mixed.items:
            if item.kind == KIND_MASKED:
                for index in range(item.span[0], item.span[1]):
                    labels[index] = KIND_MASKED
            else:
                labels[item.token.index] = item.kind
        actions = tuple(labels)
    return PseudoPair(
        doc_id=mixed.paragraph.doc_id,
        input_text=" ".join(surfaces),
        target_text=mixed.paragraph.text(),
        summary=mixed.summary,
        actions=actions,
    )


def paragraph_stream(config: PipelineConfig, paragraph: Paragraph) -> RandomStream:
    """The random stream a paragraph's corruption draws from."""
    return derive_stream(config.seed, paragraph.doc_id)


def generate_pair(
    paragraph: Paragraph,
    dictionary: BilingualDictionary,
    config: PipelineConfig,
    include_actions: bool = False,
) -> PseudoPair:
    """Corrupt and mix one paragraph deterministically."""
    stream = paragraph_stream(config, paragraph)
    noisy = corrupt(paragraph, config.noise, stream)
    mixed = mix(noisy, dictionary, config.mix, stream)
    return _render(mixed, include_actions)


def record_line(pair: PseudoPair) -> str:
    """Serialize one pair as its canonical JSON line (without newline)."""
    summary = pair.summary
    if summary is None:
        raise ValueError("cannot serialize a pair without summary counts")
    record = {
        "id": pair.doc_id,
        "input": pair.input_text,
        "target": pair.target_text,
        "meta": {
            "replaced": summary.replaced,
            "deleted": summary.deleted,
            "masked": summary.masked,
            "tokens": summary.total,
        },
    }
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def _process_chunk(
    paragraphs: Sequence[Paragraph],
    dictionary: BilingualDictionary,
    config: PipelineConfig,
    vocab: frozenset[str] | None,
) -> tuple[list[str], GenerationReport]:
    lines: list[str] = []
    masked = kept = replaced = deleted = covered = tokens = 0
    oov = 0
    lengths: dict[int, int] = {}
    for paragraph in paragraphs:
        pair = generate_pair(paragraph, dictionary, config)
        lines.append(record_line(pair) + "\n")
        summary = pair.summary
        masked += summary.masked
        kept += summary.kept
        replaced += summary.replaced
        deleted += summary.deleted
        covered += summary.covered
        tokens += summary.total
        length = len(pair.input_text.split())
        lengths[length] = lengths.get(length, 0) + 1
        if vocab is not None:
            oov += sum(1 for token in paragraph.tokens() if token.surface not in vocab)
    report = GenerationReport(
        paragraphs=len(paragraphs),
        tokens=tokens,
        masked=masked,
        kept=kept,
        replaced=replaced,
        deleted=deleted,
        covered=covered,
        oov_tokens=oov if vocab is not None else None,
        output_lengths=lengths,
    )
    return lines, report


_WORKER_STATE: dict = {}


def _init_worker(dictionary: BilingualDictionary, config: PipelineConfig, vocab) -> None:
    _WORKER_STATE["dictionary"] = dictionary
    _WORKER_STATE["config"] = config
    _WORKER_STATE["vocab"] = vocab


def _process_chunk_pooled(chunk: Sequence[tuple[int, str]]) -> tuple[list[str], GenerationReport]:
    # Workers receive (doc_id, text) and re-tokenize: cheaper to ship than
    # token objects, and the corpus round-trip invariant makes it lossless.
    paragraphs = [paragraph_from_text(text, doc_id) for doc_id, text in chunk]
    return _process_chunk(
        paragraphs, _WORKER_STATE["dictionary"], _WORKER_STATE["config"], _WORKER_STATE["vocab"]
    )


def _chunks(paragraphs: Sequence[Paragraph]) -> Iterable[Sequence[Paragraph]]:
    for start in range(0, len(paragraphs), _CHUNK_SIZE):
        yield paragraphs[start : start + _CHUNK_SIZE]


def _text_chunks(paragraphs: Sequence[Paragraph]) -> Iterable[list[tuple[int, str]]]:
    for chunk in _chunks(paragraphs):
        yield [(paragraph.doc_id, paragraph.text()) for paragraph in chunk]


def generate_dataset(
    corpus: Corpus,
    dictionary: BilingualDictionary,
    config: PipelineConfig,
    out: str | Path | IO[str],
    workers: int = 1,
    vocab: frozenset[str] | None = None,
) -> GenerationReport:
    """Generate one record per paragraph, in doc_id order, and report counts.

    ``out`` may be a path or a writable text sink.  When a path is given and
    generation aborts, a ``<out>.partial`` marker is left next to the
    incomplete file before the error propagates.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")

    if isinstance(out, (str, Path)):
        out_path = Path(out)
        try:
            with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
                return generate_dataset(corpus, dictionary, config, handle, workers, vocab)
        except BaseException as exc:
            marker = out_path.with_name(out_path.name + ".partial")
            try:
                marker.write_text(f"generation aborted: {exc}\n", encoding="utf-8")
            except OSError:
                pass
            raise

    # The accumulator must track the same optional fields as chunk reports.
    report = GenerationReport(oov_tokens=0 if vocab is not None else None)
    if workers == 1 or len(corpus) <= _CHUNK_SIZE:
        for chunk in _chunks(corpus.paragraphs):
            lines, chunk_report = _process_chunk(chunk, dictionary, config, vocab)
            out.writelines(lines)
            report = report.merge(chunk_report)
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(dictionary, config, vocab)
        ) as executor:
            for lines, chunk_report in executor.map(
                _process_chunk_pooled, _text_chunks(corpus.paragraphs)
            ):
                out.writelines(lines)
                report = report.merge(chunk_report)
    report.validate()
    return report
