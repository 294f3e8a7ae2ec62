"""Bilingual dictionaries: MUSE-format parsing, pivot composition, lookup.

The on-disk format is UTF-8 text with two whitespace-separated columns per
line (source word, translation).  Keys are case-folded at construction;
lookups strip trailing punctuation (``. , ! ? …``) from the query token and
case-fold it, so corpus tokens like ``Dog.`` match the entry for ``dog``.
Dictionaries are immutable after construction by convention and safe to
share across workers.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator, Mapping, Sequence

from .corpus import Corpus
from .errors import DictionaryError

TRAILING_PUNCTUATION = frozenset(".,!?…")


def split_trailing_punctuation(word: str) -> tuple[str, str]:
    """Split a token into (core, trailing punctuation suffix)."""
    end = len(word)
    while end > 0 and word[end - 1] in TRAILING_PUNCTUATION:
        end -= 1
    return word[:end], word[end:]


def normalize_word(word: str) -> str:
    """Lookup normalization: strip trailing punctuation, fold case."""
    return split_trailing_punctuation(word)[0].lower()


class BilingualDictionary:
    """Source word -> ordered, duplicate-free list of translations.

    Iteration follows insertion order, so parsing and composition are
    deterministic.  Translation lists returned by :meth:`lookup` are the
    live internal lists and must not be mutated.
    """

    __slots__ = ("src_lang", "tgt_lang", "_entries")

    def __init__(
        self,
        entries: Mapping[str, Sequence[str] | str] | None = None,
        src_lang: str = "",
        tgt_lang: str = "",
    ) -> None:
        self.src_lang = src_lang
        self.tgt_lang = tgt_lang
        self._entries: dict[str, list[str]] = {}
        if entries:
            for source, translations in entries.items():
                if isinstance(translations, str):
                    translations = [translations]
                for translation in translations:
                    self.add(source, translation)

    def add(self, source: str, translation: str) -> None:
        """Record one (source, translation) pair; duplicates collapse."""
        key = source.lower()
        if not key or key.split() != [key]:
            raise DictionaryError(f"invalid source word: {source!r}")
        if not translation or translation.split() != [translation]:
            raise DictionaryError(f"invalid translation for {source!r}: {translation!r}")
        existing = self._entries.get(key)
        if existing is None:
            self._entries[key] = [translation]
        elif translation not in existing:
            existing.append(translation)

    def lookup(self, word: str) -> list[str] | None:
        """Translations for a token after normalization, or None."""
        return self._entries.get(normalize_word(word))

    def items(self) -> Iterator[tuple[str, list[str]]]:
        return iter(self._entries.items())

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, word: str) -> bool:
        return normalize_word(word) in self._entries

    @property
    def pair_count(self) -> int:
        return sum(len(translations) for translations in self._entries.values())

    def coverage(self, corpus: Corpus) -> float:
        """Fraction of token occurrences with an entry; 0.0 on empty corpus."""
        total = 0
        covered = 0
        for paragraph in corpus:
            for token in paragraph.tokens():
                total += 1
                if self.lookup(token.surface) is not None:
                    covered += 1
        return covered / total if total else 0.0


def parse_muse(path: str | Path, src_lang: str = "", tgt_lang: str = "") -> BilingualDictionary:
    """Parse a two-column MUSE-format dictionary file.

    Lines with a field count other than two (which includes multi-word
    sources or translations) abort with the offending line number.
    """
    path = Path(path)
    dictionary = BilingualDictionary(src_lang=src_lang, tgt_lang=tgt_lang)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DictionaryError(f"cannot read dictionary file {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise DictionaryError(f"dictionary file {path} is not valid UTF-8: {exc.reason}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 2:
            raise DictionaryError(f"{path}:{lineno}: expected 2 fields, got {len(fields)}")
        dictionary.add(fields[0], fields[1])
    return dictionary


def serialize_muse(dictionary: BilingualDictionary, path: str | Path) -> None:
    """Write a dictionary in the same two-column format parse_muse reads."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for source, translations in dictionary.items():
            for translation in translations:
                handle.write(f"{source} {translation}\n")


def compose_pivot(
    x_to_mid: BilingualDictionary, mid_to_y: BilingualDictionary
) -> BilingualDictionary:
    """Relational composition: x -> y iff x -> e and e -> y for some pivot e.

    Translation order is first-derivation order; sources whose composition is
    empty are omitted.
    """
    if x_to_mid.tgt_lang != mid_to_y.src_lang:
        raise DictionaryError(
            f"pivot language mismatch: {x_to_mid.tgt_lang!r} vs {mid_to_y.src_lang!r}"
        )
    composed = BilingualDictionary(src_lang=x_to_mid.src_lang, tgt_lang=mid_to_y.tgt_lang)
    for source, mids in x_to_mid.items():
        for mid in mids:
            targets = mid_to_y.lookup(mid)
            if targets is None:
                continue
            for target in targets:
                composed.add(source, target)
    return composed
