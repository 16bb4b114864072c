import pytest

from commaclf.knn import knn_accuracy, knn_fit
from commaclf.synth import SyntheticSpec, generate_synthetic, separated_spec
from commaclf.vsm import select_features


class TestSpecValidation:
    def test_noise_range(self):
        with pytest.raises(ValueError):
            separated_spec(10, noise=1.0)
        with pytest.raises(ValueError):
            separated_spec(10, noise=-0.1)

    def test_distributions_must_cover_classes_and_normalize(self):
        spec = separated_spec(10, vocab_size=30)
        broken = dict(spec.class_token_dists)
        broken["gender"] = {"GEN": broken["gender"]["GEN"]}
        with pytest.raises(ValueError):
            SyntheticSpec(10, 30, broken, 0.0, 1)
        unnormalized = {
            task: {cls: tuple(2 * p for p in dist) for cls, dist in dists.items()}
            for task, dists in spec.class_token_dists.items()
        }
        with pytest.raises(ValueError):
            SyntheticSpec(10, 30, unnormalized, 0.0, 1)

    def test_vocab_too_small(self):
        with pytest.raises(ValueError):
            separated_spec(10, vocab_size=12)


class TestGeneration:
    def test_same_seed_identical_corpus(self):
        a = generate_synthetic(separated_spec(50, seed=9))
        b = generate_synthetic(separated_spec(50, seed=9))
        assert a == b

    def test_different_seed_differs(self):
        a = generate_synthetic(separated_spec(50, seed=9))
        b = generate_synthetic(separated_spec(50, seed=10))
        assert a != b

    def test_size_and_labels(self):
        corpus = generate_synthetic(separated_spec(25, seed=1))
        assert len(corpus) == 25
        assert corpus.labeled
        assert len({inst.id for inst in corpus}) == 25

    def test_texts_survive_tokenisation(self):
        from commaclf.text import tokenize

        corpus = generate_synthetic(separated_spec(10, seed=2))
        for inst in corpus:
            tokens = tokenize(inst.text)
            assert all(t.startswith("tok") for t in tokens)


class TestNoiseBounds:
    def test_heavy_noise_caps_binary_accuracy(self):
        # At noise 0.5 the observed binary label agrees with the true one
        # with probability 0.75, so no classifier can beat that in
        # expectation; 0.85 leaves generous sampling slack.
        train = generate_synthetic(separated_spec(600, noise=0.5, seed=21), "train")
        dev = generate_synthetic(separated_spec(400, noise=0.5, seed=22), "dev")
        fs = select_features(train, "gender", 30_000)
        model = knn_fit(train, "gender", fs, 5)
        acc = knn_accuracy(model, dev)
        assert acc <= 0.85

    def test_zero_noise_is_learnable(self):
        train = generate_synthetic(separated_spec(400, noise=0.0, seed=31), "train")
        dev = generate_synthetic(separated_spec(200, noise=0.0, seed=32), "dev")
        fs = select_features(train, "gender", 30_000)
        model = knn_fit(train, "gender", fs, 1)
        assert knn_accuracy(model, dev) >= 0.9
