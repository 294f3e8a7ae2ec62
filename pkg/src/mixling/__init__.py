"""mixling: deterministic noisy mixed-language pair generation.

Turns a monolingual corpus and a bilingual dictionary into (corrupted mixed
input, clean target) training pairs for denoising seq2seq pretraining, with
calibration of the mixing ratio, run statistics, and a Model-1 alignment
probe for verifying the translation signal in generated data.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .calibration import CalibrationResult, calibrate_replace_prob
from .corpus import (
    Corpus,
    Paragraph,
    Sentence,
    Token,
    corpus_from_lines,
    load_corpus,
    paragraph_from_text,
    sample_paragraphs,
    save_corpus,
    split_sentences,
)
from .dictionary import (
    BilingualDictionary,
    compose_pivot,
    normalize_word,
    parse_muse,
    serialize_muse,
)
from .errors import (
    AlignmentError,
    CalibrationError,
    CorpusError,
    DictionaryError,
    MixlingError,
    PretokenizerError,
)
from .mixing import MixConfig, MixedParagraph, mix, mixing_ratio
from .noise import MaskSpan, NoiseConfig, NoisyParagraph, corrupt, masked_fraction
from .pipeline import (
    PipelineConfig,
    PseudoPair,
    derive_stream,
    generate_dataset,
    generate_pair,
    record_line,
)
from .alignment import TranslationTable, precision_at_1, train_model1
from .stats import GenerationReport, load_vocab, merge, oov_rate, report_from_dataset
from .synthesis import SynthSpec, synth_corpus

_LAZY_ESTIMATORS = ("PairGenerator", "Model1Aligner")


def __getattr__(name: str):
    # Defer the sklearn import until an estimator is actually requested.
    if name in _LAZY_ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "AlignmentError",
    "BilingualDictionary",
    "CalibrationError",
    "CalibrationResult",
    "Corpus",
    "CorpusError",
    "DictionaryError",
    "GenerationReport",
    "MaskSpan",
    "MixConfig",
    "MixedParagraph",
    "MixlingError",
    "Model1Aligner",
    "NoiseConfig",
    "NoisyParagraph",
    "PairGenerator",
    "Paragraph",
    "PipelineConfig",
    "PretokenizerError",
    "PseudoPair",
    "Sentence",
    "SynthSpec",
    "Token",
    "TranslationTable",
    "calibrate_replace_prob",
    "compose_pivot",
    "corpus_from_lines",
    "corrupt",
    "derive_stream",
    "generate_dataset",
    "generate_pair",
    "load_corpus",
    "load_vocab",
    "masked_fraction",
    "merge",
    "mix",
    "mixing_ratio",
    "normalize_word",
    "oov_rate",
    "paragraph_from_text",
    "parse_muse",
    "precision_at_1",
    "record_line",
    "report_from_dataset",
    "sample_paragraphs",
    "save_corpus",
    "serialize_muse",
    "split_sentences",
    "synth_corpus",
    "train_model1",
]
