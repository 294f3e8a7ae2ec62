"""Lexical alignment probe: IBM-style Model 1 EM over generated pairs.

Trains translation probabilities t(f|e) where e ranges over the clean
target-side words (plus a null word) and f over the corrupted input-side
words.  Training is plain EM with uniform initialization and no smoothing:

* E-step: each input token f distributes a unit of expected count across the
  candidate e words of its pair, proportionally to t(f|e);
* M-step: t(f|e) renormalizes the expected counts per e.

EM never decreases the data log-likelihood; training asserts this every
iteration and fails loudly if it breaks.  Given a planted ground-truth
lexicon, :func:`precision_at_1` measures how often the best-scoring planted
candidate for a word is its true translation — the degree to which the
generated data alone teaches the lexicon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dictionary import BilingualDictionary
from .errors import AlignmentError
from .pipeline import PseudoPair

# Relative slack for the monotone log-likelihood assertion.
_LL_SLACK = 1e-9


@dataclass(frozen=True)
class TranslationTable:
    """t(f|e) as nested maps; the null word is the ``None`` key."""

    probs: dict[str | None, dict[str, float]]

    def prob(self, target_word: str | None, input_word: str) -> float:
        return self.probs.get(target_word, {}).get(input_word, 0.0)

    def best_translation(
        self, target_word: str, candidates: Sequence[str] | None = None
    ) -> str | None:
        """Highest-scoring input word; ties break lexicographically.

        With ``candidates`` given, all of them compete (at score 0.0 when
        absent from the table); otherwise only the table row's support does.
        """
        row = self.probs.get(target_word)
        if candidates is None:
            if not row:
                return None
            pool: Iterable[str] = sorted(row)
        else:
            pool = sorted(candidates)
        best = None
        best_prob = -1.0
        for word in pool:
            p = row.get(word, 0.0) if row else 0.0
            if p > best_prob:
                best, best_prob = word, p
        return best

    def validate(self, tolerance: float = 1e-9) -> None:
        for target_word, row in self.probs.items():
            mass = sum(row.values())
            if row and abs(mass - 1.0) > tolerance:
                raise AlignmentError(
                    f"translation probabilities for {target_word!r} sum to {mass!r}"
                )


def _tokenized(pairs: Sequence[PseudoPair]) -> list[tuple[list[str], list[str]]]:
    corpus = []
    for pair in pairs:
        corpus.append((pair.input_text.split(), pair.target_text.split()))
    return corpus


def train_model1(
    pairs: Sequence[PseudoPair], iterations: int
) -> tuple[TranslationTable, list[float]]:
    """Run EM for the given number of iterations.

    Returns the final table and the per-iteration data log-likelihoods
    (computed under the parameters entering each iteration, so the first
    entry reflects the uniform initialization).  Deterministic: EM has no
    randomness and iteration order follows the input order.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not pairs:
        raise AlignmentError("cannot train on an empty pair set")
    corpus = _tokenized(pairs)
    input_vocab = {f for f_tokens, _ in corpus for f in f_tokens}
    if not input_vocab:
        raise AlignmentError("cannot train: no input-side tokens")
    uniform = 1.0 / len(input_vocab)

    table: dict[str | None, dict[str, float]] = {}
    log_likelihoods: list[float] = []
    for iteration in range(iterations):
        counts: dict[str | None, dict[str, float]] = {}
        log_likelihood = 0.0
        first = iteration == 0
        for f_tokens, e_tokens in corpus:
            if not f_tokens:
                continue
            candidates: list[str | None] = list(e_tokens)
            candidates.append(None)
            log_candidates = math.log(len(candidates))
            rows = [table.get(e) for e in candidates] if not first else None
            for f in f_tokens:
                if first:
                    values = [uniform] * len(candidates)
                else:
                    values = [(row.get(f, 0.0) if row else 0.0) for row in rows]
                denominator = sum(values)
                log_likelihood += math.log(denominator) - log_candidates
                for e, value in zip(candidates, values):
                    if value == 0.0:
                        continue
                    share = value / denominator
                    row_counts = counts.get(e)
                    if row_counts is None:
                        counts[e] = {f: share}
                    else:
                        row_counts[f] = row_counts.get(f, 0.0) + share
        if log_likelihoods and log_likelihood < log_likelihoods[-1] - _LL_SLACK * max(
            1.0, abs(log_likelihoods[-1])
        ):
            raise AlignmentError(
                "EM log-likelihood decreased "
                f"({log_likelihoods[-1]} -> {log_likelihood}); this is a bug"
            )
        log_likelihoods.append(log_likelihood)
        table = {}
        for e, row_counts in counts.items():
            total = sum(row_counts.values())
            table[e] = {f: count / total for f, count in row_counts.items()}

    return TranslationTable(table), log_likelihoods


def perplexity_per_iteration(log_likelihoods: Sequence[float], token_count: int) -> list[float]:
    """Per-input-token perplexities for the recorded log-likelihoods."""
    if token_count <= 0:
        raise ValueError("token_count must be >= 1")
    return [math.exp(-ll / token_count) for ll in log_likelihoods]


def input_token_count(pairs: Sequence[PseudoPair]) -> int:
    return sum(len(pair.input_text.split()) for pair in pairs)


def precision_at_1(table: TranslationTable, planted: BilingualDictionary) -> float:
    """Fraction of planted entries recovered as the best-scoring candidate.

    For each planted source word, the argmax of t(f|e) is taken over the
    planted dictionary's translation vocabulary (ties break lexicographically)
    and counts as a hit when it is one of the word's planted translations.
    Defined as 0.0 for an empty planted dictionary.
    """
    entries = list(planted.items())
    if not entries:
        return 0.0
    candidates = sorted({t for _, translations in entries for t in translations})
    hits = 0
    for source, translations in entries:
        best = table.best_translation(source, candidates)
        if best is not None and best in translations:
            hits += 1
    return hits / len(entries)
