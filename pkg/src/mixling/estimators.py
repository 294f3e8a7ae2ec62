"""Scikit-learn style front ends for the generation and probing algorithms.

These estimators make the toolkit compose with the wider ecosystem
(``get_params``/``set_params``, cloning, pipelines) while delegating all real
work to the functional modules.  Corpus inputs may be :class:`mixling.Corpus`
objects, paths, or iterables of paragraph strings; dictionaries may be
:class:`BilingualDictionary` objects, MUSE-format paths, or plain mappings.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .alignment import (
    input_token_count,
    perplexity_per_iteration,
    precision_at_1,
    train_model1,
)
from .calibration import calibrate_replace_prob
from .mixing import MixConfig
from .noise import NoiseConfig
from .pipeline import PipelineConfig, PseudoPair, generate_pair
from .validation import as_corpus, as_dictionary


class PairGenerator(TransformerMixin, BaseEstimator):
    """Generate noisy mixed-language (input, target) pairs from monolingual text.

    Parameters
    ----------
    dictionary : BilingualDictionary, path, mapping, or None
        Word translations used for replacement; None disables mixing.
    mask_fraction : float, default=0.35
        Target fraction of tokens covered by mask spans.
    span_lambda : float, default=3.5
        Poisson mean of masked span lengths.
    permute_sentences : bool, default=True
        Shuffle sentence order inside each paragraph.
    mask_token : str, default="<mask>"
        Surface form emitted for a masked span.
    noise_enabled : bool, default=True
        Master switch for masking and permutation.
    replace_prob : float, default=0.3
        Per-occurrence replacement probability; ignored when ``target_ratio``
        is set.
    delete_prob : float, default=0.5
        Deletion probability for covered tokens that were not replaced.
    replacement_enabled, deletion_enabled : bool, default=True
        Ablation switches for the two mixing actions.
    target_ratio : float or None, default=None
        When set, ``fit`` calibrates ``replace_prob_`` so the generated
        mixing ratio hits this value on the fitted corpus.
    seed : int, default=0
        Single 64-bit seed behind all randomness.
    direction_label : str, default=""
        Free-form label recorded in the pipeline config.

    Attributes
    ----------
    replace_prob_ : float
        Effective replacement probability used by ``transform``.
    coverage_ : float
        Dictionary coverage measured on the fitted corpus.
    feasible_ : bool
        False when a requested ``target_ratio`` exceeds the coverage bound.
    calibration_ : CalibrationResult or None
        Full calibration outcome when ``target_ratio`` was set.
    """

    def __init__(
        self,
        dictionary=None,
        *,
        mask_fraction: float = 0.35,
        span_lambda: float = 3.5,
        permute_sentences: bool = True,
        mask_token: str = "<mask>",
        noise_enabled: bool = True,
        replace_prob: float = 0.3,
        delete_prob: float = 0.5,
        replacement_enabled: bool = True,
        deletion_enabled: bool = True,
        target_ratio: float | None = None,
        seed: int = 0,
        direction_label: str = "",
    ) -> None:
        self.dictionary = dictionary
        self.mask_fraction = mask_fraction
        self.span_lambda = span_lambda
        self.permute_sentences = permute_sentences
        self.mask_token = mask_token
        self.noise_enabled = noise_enabled
        self.replace_prob = replace_prob
        self.delete_prob = delete_prob
        self.replacement_enabled = replacement_enabled
        self.deletion_enabled = deletion_enabled
        self.target_ratio = target_ratio
        self.seed = seed
        self.direction_label = direction_label

    def _noise_config(self) -> NoiseConfig:
        return NoiseConfig(
            mask_fraction=self.mask_fraction,
            span_lambda=self.span_lambda,
            permute_sentences=self.permute_sentences,
            mask_token=self.mask_token,
            enabled=self.noise_enabled,
        )

    def _mix_config(self, replace_prob: float) -> MixConfig:
        return MixConfig(
            replace_prob=replace_prob,
            delete_prob=self.delete_prob,
            replacement_enabled=self.replacement_enabled,
            deletion_enabled=self.deletion_enabled,
        )

    def fit(self, X, y=None):
        """Resolve the dictionary and, if requested, calibrate replacement."""
        corpus = as_corpus(X)
        self.dictionary_ = as_dictionary(self.dictionary)
        noise_config = self._noise_config()
        self._mix_config(self.replace_prob)  # validates the probabilities
        if self.target_ratio is None:
            self.replace_prob_ = float(self.replace_prob)
            self.coverage_ = self.dictionary_.coverage(corpus)
            self.calibration_ = None
            self.feasible_ = True
        else:
            result = calibrate_replace_prob(
                corpus,
                self.dictionary_,
                noise_config,
                self.target_ratio,
                self.seed,
                mix_template=self._mix_config(self.replace_prob),
            )
            self.replace_prob_ = result.replace_prob
            self.coverage_ = result.coverage
            self.calibration_ = result
            self.feasible_ = result.feasible
        return self

    def pipeline_config(self) -> PipelineConfig:
        """The fitted configuration, reusable with the streaming pipeline."""
        self._check_fitted()
        return PipelineConfig(
            noise=self._noise_config(),
            mix=self._mix_config(self.replace_prob_),
            seed=self.seed,
            direction_label=self.direction_label,
        )

    def transform(self, X) -> list[PseudoPair]:
        """Generate one pair per paragraph, deterministically."""
        self._check_fitted()
        corpus = as_corpus(X)
        config = self.pipeline_config()
        return [generate_pair(paragraph, self.dictionary_, config) for paragraph in corpus]

    def _check_fitted(self) -> None:
        if not hasattr(self, "replace_prob_"):
            raise NotFittedError("this PairGenerator is not fitted; call fit first")


class Model1Aligner(BaseEstimator):
    """Lexical translation model fitted on generated pairs.

    Parameters
    ----------
    iterations : int, default=10
        Number of EM iterations.

    Attributes
    ----------
    table_ : TranslationTable
        Learned t(f|e) probabilities.
    log_likelihoods_ : list of float
        Data log-likelihood entering each iteration (non-decreasing).
    perplexities_ : list of float
        Equivalent per-token perplexities (non-increasing).
    """

    def __init__(self, iterations: int = 10) -> None:
        self.iterations = iterations

    def fit(self, X, y=None):
        pairs = list(X)
        self.table_, self.log_likelihoods_ = train_model1(pairs, self.iterations)
        self.perplexities_ = perplexity_per_iteration(
            self.log_likelihoods_, input_token_count(pairs)
        )
        self.n_pairs_ = len(pairs)
        return self

    def predict(self, X) -> list[str | None]:
        """Best input-side translation for each target-side word."""
        self._check_fitted()
        return [self.table_.best_translation(word) for word in X]

    def lexicon_precision(self, planted) -> float:
        """Precision@1 of the learned table against a planted lexicon."""
        self._check_fitted()
        return precision_at_1(self.table_, as_dictionary(planted))

    def _check_fitted(self) -> None:
        if not hasattr(self, "table_"):
            raise NotFittedError("this Model1Aligner is not fitted; call fit first")
