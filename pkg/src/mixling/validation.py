"""Input validation helpers shared by configs, estimators, and the CLI."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import Corpus, corpus_from_lines, load_corpus
from .dictionary import BilingualDictionary, parse_muse


def check_unit_interval(name: str, value: float) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError(f"{name} must be a number in [0, 1], got {value!r}")
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return float(value)


def check_positive(name: str, value: float) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError(f"{name} must be a positive number, got {value!r}")
    if value <= 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return float(value)


def check_non_negative_int(name: str, value: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")
    return value


def check_int(name: str, value: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return value


def check_bool(name: str, value: bool) -> bool:
    if not isinstance(value, bool):
        raise ValueError(f"{name} must be a boolean, got {value!r}")
    return value


def check_word(name: str, value: str) -> str:
    if not isinstance(value, str) or not value or value.split() != [value]:
        raise ValueError(f"{name} must be a non-empty whitespace-free string, got {value!r}")
    return value


def as_corpus(data, language_tag: str = "") -> Corpus:
    """Coerce estimator input to a Corpus.

    Accepts a Corpus (returned unchanged), a path to a corpus file, or an
    iterable of paragraph strings.
    """
    if isinstance(data, Corpus):
        return data
    if isinstance(data, (str, Path, os.PathLike)):
        return load_corpus(data, language_tag=language_tag)
    if isinstance(data, Iterable):
        lines = list(data)
        if not all(isinstance(line, str) for line in lines):
            raise ValueError("corpus iterable must contain strings, one paragraph each")
        return corpus_from_lines(lines, language_tag)
    raise ValueError(f"cannot interpret {type(data).__name__} as a corpus")


def as_dictionary(data) -> BilingualDictionary:
    """Coerce estimator input to a BilingualDictionary.

    Accepts a BilingualDictionary, a path to a MUSE-format file, a mapping
    from word to translation(s), or None (empty dictionary).
    """
    if data is None:
        return BilingualDictionary()
    if isinstance(data, BilingualDictionary):
        return data
    if isinstance(data, (str, Path, os.PathLike)):
        return parse_muse(data)
    if isinstance(data, Mapping):
        return BilingualDictionary(data)
    raise ValueError(f"cannot interpret {type(data).__name__} as a dictionary")
