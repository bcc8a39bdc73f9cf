import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from capeval.detector import DetectorConfig, DetectorModel, TrainConfig
from capeval.detector.model import OVERALL, predict_error_prob
from capeval.embedding import HashedStemEmbedder, sbert_score
from capeval.fense import fense_score, penalize, penalized_metric
from capeval.ngram_metrics import bleu
from capeval.textproc import tokenize

from synthcorpus import make_clean_captions


def _constant_detector(p_large: bool) -> DetectorModel:
    """A detector whose Overall head always (or never) fires."""
    weights = np.zeros((6, 1 << 16))
    bias = 20.0 if p_large else -20.0
    biases = np.full(6, bias)
    return DetectorModel(weights=weights, biases=biases, train_config=TrainConfig())


class TestPenalize:
    def test_fires_above_threshold(self):
        assert penalize(0.8, 0.95) == pytest.approx(0.08)

    def test_threshold_is_strict(self):
        assert penalize(0.8, 0.90) == 0.8

    def test_zero_fixed_point(self):
        assert penalize(0.0, 0.99) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            penalize(-0.1, 0.99)

    def test_custom_config(self):
        config = DetectorConfig(threshold=0.5, penalty_factor=4.0)
        assert penalize(0.8, 0.6, config) == pytest.approx(0.2)

    @given(st.floats(0, 1), st.floats(0, 0.999))
    def test_monotone_and_exact_ratio(self, score, p):
        out = penalize(score, p)
        if p > 0.9:
            assert out == score / 10.0
        else:
            assert out == score


class TestFenseScore:
    def test_identity_without_penalty(self, detector_model):
        provider = HashedStemEmbedder(dim=128, seed=1)
        caption = "a dog barks loudly"
        assert predict_error_prob(detector_model, caption)[OVERALL] <= 0.9
        assert fense_score(caption, [caption], provider, detector_model).value == 1.0

    def test_exact_division_when_firing(self, detector_model):
        provider = HashedStemEmbedder(dim=128, seed=1)
        caption = "a woman is giving a speech and a"
        refs = ["a woman speaks to a crowd", "a woman is giving a speech"]
        assert predict_error_prob(detector_model, caption)[OVERALL] > 0.9
        base = sbert_score(caption, refs, provider).value
        assert fense_score(caption, refs, provider, detector_model).value == base / 10.0

    def test_clean_beats_its_corruption(self, detector_model, corruptor):
        provider = HashedStemEmbedder(dim=128, seed=2)
        rng = random.Random(13)
        checked = 0
        for caption in make_clean_captions(60, seed=300):
            types = corruptor.applicable_types(caption)
            corrupted, _ = corruptor.corrupt(caption, rng.sample(types, 1), rng)
            fires_corrupt = predict_error_prob(detector_model, corrupted)[OVERALL] > 0.9
            fires_clean = predict_error_prob(detector_model, caption)[OVERALL] > 0.9
            if fires_corrupt and not fires_clean:
                clean = fense_score(caption, [caption], provider, detector_model).value
                bad = fense_score(corrupted, [caption], provider, detector_model).value
                assert clean == 1.0
                assert bad <= 0.1
                checked += 1
        assert checked >= 30  # the detector fires on most corruptions

    def test_range_with_test_embedder(self, detector_model):
        provider = HashedStemEmbedder(dim=128, seed=3)
        for caption in make_clean_captions(20, seed=301):
            value = fense_score(
                caption, ["a dog barks", "rain falls outside"], provider, detector_model
            ).value
            assert 0.0 <= value <= 1.0


class TestPenalizedMetric:
    def test_never_firing_detector_is_identity(self):
        detector = _constant_detector(p_large=False)
        base = lambda cand, refs: bleu(cand, refs, 1).value
        wrapped = penalized_metric(base, detector)
        cand = tokenize("a dog barks")
        refs = [tokenize("a dog barks loudly")]
        assert wrapped(cand, refs) == base(cand, refs)

    def test_firing_detector_divides_by_ten(self):
        detector = _constant_detector(p_large=True)
        base = lambda cand, refs: bleu(cand, refs, 1).value
        wrapped = penalized_metric(base, detector)
        cand = tokenize("a woman is giving a speech and a")
        refs = [tokenize("a woman is giving a speech")]
        assert wrapped(cand, refs) == base(cand, refs) / 10.0

    def test_wrapping_sbert_reproduces_fense(self, detector_model):
        provider = HashedStemEmbedder(dim=128, seed=4)
        base = lambda cand, refs: sbert_score(cand, refs, provider).value
        wrapped = penalized_metric(base, detector_model)
        refs = ["a dog barks loudly", "a dog barks in the distance"]
        for cand in ("a dog barks", "a dog barks and a", "rain falls outside"):
            assert wrapped(cand, refs) == fense_score(
                cand, refs, provider, detector_model
            ).value

    def test_argmax_invariance_same_detector_outcome(self, detector_model):
        # when neither candidate fires, fense ordering equals sbert ordering
        provider = HashedStemEmbedder(dim=128, seed=5)
        refs = ["a dog barks loudly and a cat meows"]
        c1, c2 = "a dog barks loudly", "a cat meows nearby"
        s1 = sbert_score(c1, refs, provider).value
        s2 = sbert_score(c2, refs, provider).value
        f1 = fense_score(c1, refs, provider, detector_model).value
        f2 = fense_score(c2, refs, provider, detector_model).value
        assert (s1 > s2) == (f1 > f2)
