"""Empirical calibration of the replacement probability.

Given a corpus sample and a dictionary, find the ``replace_prob`` whose
simulated mixing ratio (replaced / non-masked input tokens) hits a target.
The search simulates the actual corruption+mixing pipeline with a fixed seed
rather than trusting the analytic approximation ``ratio = coverage * p``,
which only seeds the first guess.  Because replacement decisions are coupled
across probabilities (see :mod:`mixling.mixing`), the measured ratio is
exactly non-decreasing in p on a fixed sample and seed; a violation aborts,
since it would mean the stream coupling is broken.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .corpus import Corpus
from .dictionary import BilingualDictionary
from .errors import CalibrationError
from .mixing import MixConfig, mix
from .noise import NoiseConfig, corrupt
from .rng import derive_stream
from .validation import check_unit_interval

DEFAULT_TOLERANCE = 0.005
DEFAULT_MAX_ITERATIONS = 25
DEFAULT_INFEASIBILITY_MARGIN = 0.01


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of a calibration search.

    ``feasible`` is False when the target exceeds what the dictionary can
    reach (roughly its coverage of the non-masked sample); in that case
    ``replace_prob`` is 1.0 and ``achieved_ratio`` the ratio at that limit.
    """

    replace_prob: float
    achieved_ratio: float
    coverage: float
    feasible: bool
    iterations: int

    def to_dict(self) -> dict:
        return {
            "replace_prob": self.replace_prob,
            "achieved_ratio": self.achieved_ratio,
            "coverage": self.coverage,
            "feasible": self.feasible,
            "iterations": self.iterations,
        }


def _measure(
    sample: Corpus,
    dictionary: BilingualDictionary,
    noise_config: NoiseConfig,
    mix_config: MixConfig,
    seed: int,
) -> tuple[float, float]:
    """Simulated (mixing_ratio, coverage) over the noised sample."""
    replaced = 0
    covered = 0
    non_masked = 0
    for paragraph in sample:
        stream = derive_stream(seed, paragraph.doc_id)
        noisy = corrupt(paragraph, noise_config, stream)
        mixed = mix(noisy, dictionary, mix_config, stream)
        replaced += mixed.summary.replaced
        covered += mixed.summary.covered
        non_masked += mixed.summary.non_masked
    if non_masked == 0:
        return 0.0, 0.0
    return replaced / non_masked, covered / non_masked


def calibrate_replace_prob(
    corpus_sample: Corpus,
    dictionary: BilingualDictionary,
    noise_config: NoiseConfig,
    target_ratio: float,
    seed: int,
    mix_template: MixConfig | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> CalibrationResult:
    """Bisect replace_prob until the simulated ratio is within tolerance.

    The first guess is ``target_ratio / coverage``; bisection then narrows
    [0, 1] for at most ``max_iterations`` ratio evaluations, returning the
    closest probe if the tolerance was never reached.
    """
    check_unit_interval("target_ratio", target_ratio)
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    if len(corpus_sample) == 0:
        raise CalibrationError("calibration requires a non-empty corpus sample")
    template = mix_template if mix_template is not None else MixConfig()

    def evaluate(p: float) -> float:
        ratio, _ = _measure(
            corpus_sample,
            dictionary,
            noise_config,
            replace(template, replace_prob=p, replacement_enabled=True),
            seed,
        )
        return ratio

    _, coverage = _measure(
        corpus_sample,
        dictionary,
        noise_config,
        replace(template, replace_prob=0.0, replacement_enabled=True),
        seed,
    )

    if target_ratio > coverage - DEFAULT_INFEASIBILITY_MARGIN:
        achieved = evaluate(1.0)
        return CalibrationResult(1.0, achieved, coverage, False, 0)

    evaluated: list[tuple[float, float]] = []

    def check_monotone(p: float, ratio: float) -> None:
        for prev_p, prev_ratio in evaluated:
            if (p > prev_p and ratio < prev_ratio) or (p < prev_p and ratio > prev_ratio):
                raise CalibrationError(
                    "measured ratio is not monotone in replace_prob; "
                    "the random-stream coupling is broken"
                )
        evaluated.append((p, ratio))

    lo, hi = 0.0, 1.0
    p = min(1.0, target_ratio / coverage)
    best_p, best_ratio = p, float("inf")
    iterations = 0
    while iterations < max_iterations:
        iterations += 1
        ratio = evaluate(p)
        check_monotone(p, ratio)
        if abs(ratio - target_ratio) < abs(best_ratio - target_ratio):
            best_p, best_ratio = p, ratio
        if abs(ratio - target_ratio) <= tolerance:
            return CalibrationResult(p, ratio, coverage, True, iterations)
        if ratio < target_ratio:
            lo = p
        else:
            hi = p
        p = (lo + hi) / 2.0
    return CalibrationResult(best_p, best_ratio, coverage, True, iterations)
