import pytest

from mixling.calibration import calibrate_replace_prob
from mixling.corpus import corpus_from_lines
from mixling.dictionary import BilingualDictionary
from mixling.errors import CalibrationError
from mixling.mixing import MixConfig, mix
from mixling.noise import NoiseConfig, corrupt
from mixling.rng import derive_stream
from mixling.synthesis import SynthSpec, synth_corpus

NO_NOISE = NoiseConfig(enabled=False)


def full_coverage_sample(n=3000):
    words = [f"w{i}" for i in range(40)]
    dictionary = BilingualDictionary({w: [w.upper()] for w in words})
    lines = [" ".join(words[(i + j) % 40] for j in range(12)) for i in range(n)]
    return corpus_from_lines(lines), dictionary


def measured_ratio(corpus, dictionary, noise, p, seed):
    replaced = non_masked = 0
    config = MixConfig(replace_prob=p)
    for paragraph in corpus:
        stream = derive_stream(seed, paragraph.doc_id)
        mixed = mix(corrupt(paragraph, noise, stream), dictionary, config, stream)
        replaced += mixed.summary.replaced
        non_masked += mixed.summary.non_masked
    return replaced / non_masked


def test_full_coverage_target_030():
    # Analytic oracle: with coverage 1.0 the expected ratio is exactly p.
    corpus, dictionary = full_coverage_sample()
    result = calibrate_replace_prob(corpus, dictionary, NO_NOISE, 0.30, seed=17)
    assert result.feasible
    assert result.coverage == pytest.approx(1.0)
    assert abs(result.achieved_ratio - 0.30) <= 0.005
    assert abs(result.replace_prob - 0.30) <= 0.02


def test_infeasible_target_reports_bound():
    # Half the token mass is covered; a 0.9 target cannot be reached.
    words = [f"c{i}" for i in range(5)] + [f"u{i}" for i in range(5)]
    dictionary = BilingualDictionary({f"c{i}": ["x"] for i in range(5)})
    corpus = corpus_from_lines([" ".join(words)] * 500)
    result = calibrate_replace_prob(corpus, dictionary, NO_NOISE, 0.9, seed=3)
    assert not result.feasible
    assert result.replace_prob == 1.0
    assert result.achieved_ratio == pytest.approx(0.5, abs=0.02)
    assert result.coverage == pytest.approx(0.5, abs=0.01)


def test_feasible_results_meet_tolerance_across_targets():
    corpus, dictionary = full_coverage_sample()
    for target in (0.0, 0.1, 0.25, 0.4, 0.6):
        result = calibrate_replace_prob(corpus, dictionary, NO_NOISE, target, seed=11)
        assert result.feasible
        assert abs(result.achieved_ratio - target) <= 0.005
        assert result.iterations <= 25


def test_calibrated_probability_generalizes_to_fresh_seed():
    corpus, dictionary = full_coverage_sample()
    result = calibrate_replace_prob(corpus, dictionary, NO_NOISE, 0.30, seed=17)
    fresh = measured_ratio(corpus, dictionary, NO_NOISE, result.replace_prob, seed=9001)
    assert abs(fresh - 0.30) <= 0.01


def test_calibration_with_masking_noise():
    spec = SynthSpec(vocab_size=50, n_sentences=2500, min_length=8, max_length=14, zipf_exponent=1.0, seed=2)
    corpus, planted = synth_corpus(spec)
    noise = NoiseConfig(mask_fraction=0.35)
    result = calibrate_replace_prob(corpus, planted, noise, 0.30, seed=5)
    assert result.feasible
    assert abs(result.achieved_ratio - 0.30) <= 0.005


def test_ratio_is_monotone_in_p_on_fixed_seed():
    corpus, dictionary = full_coverage_sample(800)
    ratios = [
        measured_ratio(corpus, dictionary, NoiseConfig(), p / 10, seed=13) for p in range(11)
    ]
    assert ratios == sorted(ratios)
    assert ratios[0] == 0.0
    assert ratios[-1] > 0.9


def test_empty_sample_is_an_error():
    with pytest.raises(CalibrationError):
        calibrate_replace_prob(corpus_from_lines([]), BilingualDictionary(), NO_NOISE, 0.3, seed=0)


def test_target_validation():
    corpus, dictionary = full_coverage_sample(10)
    with pytest.raises(ValueError):
        calibrate_replace_prob(corpus, dictionary, NO_NOISE, 1.5, seed=0)
    with pytest.raises(ValueError):
        calibrate_replace_prob(corpus, dictionary, NO_NOISE, 0.3, seed=0, max_iterations=0)
