"""Synthetic corpora with planted lexicons, for end-to-end verification.

Generates single-sentence paragraphs of Zipf-distributed words from a
synthetic vocabulary, plus a planted one-to-one dictionary into a disjoint
second vocabulary.  Because the ground-truth lexicon is known, an alignment
probe can measure how much translation signal a generated dataset carries.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .corpus import Corpus, paragraph_from_text
from .dictionary import BilingualDictionary
from .rng import derive_stream
from .validation import check_non_negative_int

# Fixed stream id separating corpus synthesis from per-record streams.
SYNTH_STREAM_ID = 0x53594E5448  # "SYNTH"


@dataclass(frozen=True)
class SynthSpec:
    """Shape of a synthetic corpus; word frequencies follow rank**-exponent."""

    vocab_size: int
    n_sentences: int
    min_length: int = 5
    max_length: int = 15
    zipf_exponent: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        check_non_negative_int("n_sentences", self.n_sentences)
        if self.vocab_size < 2:
            raise ValueError("vocab_size must be >= 2")
        if self.min_length < 1 or self.max_length < self.min_length:
            raise ValueError("sentence length range must satisfy 1 <= min <= max")
        if self.zipf_exponent < 0:
            raise ValueError("zipf_exponent must be >= 0")


def synth_corpus(spec: SynthSpec) -> tuple[Corpus, BilingualDictionary]:
    """Generate (corpus, planted dictionary) deterministically from the spec.

    The dictionary is a bijection from the corpus vocabulary onto a second
    vocabulary; an exponent of 0 yields uniform word frequencies.
    """
    stream = derive_stream(spec.seed, SYNTH_STREAM_ID)
    width = max(4, len(str(spec.vocab_size - 1)))
    source_words = [f"a{i:0{width}d}" for i in range(spec.vocab_size)]
    target_words = [f"b{i:0{width}d}" for i in range(spec.vocab_size)]

    mapping = list(range(spec.vocab_size))
    stream.shuffle(mapping)
    planted = BilingualDictionary(src_lang="lang-a", tgt_lang="lang-b")
    for i, word in enumerate(source_words):
        planted.add(word, target_words[mapping[i]])

    weights = [(rank + 1) ** -spec.zipf_exponent for rank in range(spec.vocab_size)]
    total = sum(weights)
    cumulative = []
    acc = 0.0
    for weight in weights:
        acc += weight / total
        cumulative.append(acc)
    cumulative[-1] = 1.0

    paragraphs = []
    length_range = spec.max_length - spec.min_length + 1
    for doc_id in range(1, spec.n_sentences + 1):
        length = spec.min_length + stream.randbelow(length_range)
        words = []
        for _ in range(length):
            rank = bisect.bisect_right(cumulative, stream.random())
            if rank >= spec.vocab_size:
                rank = spec.vocab_size - 1
            words.append(source_words[rank])
        paragraph = paragraph_from_text(" ".join(words), doc_id)
        assert paragraph is not None
        paragraphs.append(paragraph)

    return Corpus(tuple(paragraphs), language_tag="lang-a"), planted
