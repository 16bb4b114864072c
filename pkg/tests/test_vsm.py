import math

import pytest

from commaclf.corpus import Corpus, Instance
from commaclf.vsm import (
    FeatureSet,
    SparseVector,
    build_vocabulary,
    chi2_score,
    cosine,
    extract_features,
    select_features,
    vectorize,
)
from conftest import make_labeled_corpus, random_labeled_corpus
from oracles import chi2_brute


def unlabeled(texts):
    return Corpus("u", tuple(Instance(f"d{i}", t) for i, t in enumerate(texts)), labeled=False)


class TestExtractFeatures:
    def test_token_unit_is_tokenizer(self):
        assert extract_features("Hello, world", "token") == ["Hello", ",", "world"]

    def test_char_unit_ngrams(self):
        assert extract_features("abc", "char") == ["ab", "bc", "abc"]

    def test_char_unit_includes_spaces(self):
        assert "a b" in extract_features("a bc", "char")

    def test_unknown_unit(self):
        with pytest.raises(ValueError):
            extract_features("x", "word_piece")


class TestBuildVocabulary:
    def test_counts_and_tie_order(self):
        vocab = build_vocabulary(unlabeled(["a a b", "b c"]), cap=10)
        assert list(zip(vocab.features, vocab.frequencies)) == [("a", 2), ("b", 2), ("c", 1)]

    def test_cap_is_prefix(self):
        vocab = build_vocabulary(unlabeled(["a a b", "b c"]), cap=1)
        assert list(zip(vocab.features, vocab.frequencies)) == [("a", 2)]

    def test_empty_corpus_error(self):
        with pytest.raises(ValueError):
            build_vocabulary(Corpus("e", (), labeled=False), cap=5)

    def test_zero_cap_error(self):
        with pytest.raises(ValueError):
            build_vocabulary(unlabeled(["a"]), cap=0)


class TestChi2:
    def test_class_perfect_feature(self, four_doc_gender_corpus):
        assert chi2_score("feat", four_doc_gender_corpus, "gender") == pytest.approx(4.0, abs=1e-12)

    def test_constant_feature_scores_zero(self):
        corpus = make_labeled_corpus(
            [("x a", ("NAG", "GEN", "NCOM")), ("x b", ("NAG", "NGEN", "NCOM"))]
        )
        assert chi2_score("x", corpus, "gender") == 0.0

    def test_unknown_task(self, four_doc_gender_corpus):
        with pytest.raises(ValueError):
            chi2_score("feat", four_doc_gender_corpus, "topic")

    def test_unlabeled_corpus(self):
        with pytest.raises(ValueError):
            chi2_score("x", unlabeled(["x"]), "gender")

    def test_zero_iff_independent(self):
        # Feature present in half of each class: AD = BC, so exactly zero.
        corpus = make_labeled_corpus(
            [
                ("f a", ("NAG", "GEN", "NCOM")),
                ("g b", ("NAG", "GEN", "NCOM")),
                ("f c", ("NAG", "NGEN", "NCOM")),
                ("g d", ("NAG", "NGEN", "NCOM")),
            ]
        )
        assert chi2_score("f", corpus, "gender") == 0.0

    def test_invariant_under_class_relabeling(self, rng):
        # Scores depend on the partition only: swapping which gender class is
        # which must not change any feature's score.
        vocab = [f"w{i}" for i in range(8)]
        corpus = random_labeled_corpus(rng, 20, vocab)
        swapped_instances = []
        for inst in corpus:
            labels = inst.labels
            flipped = "GEN" if labels.gender == "NGEN" else "NGEN"
            swapped_instances.append(
                Instance(inst.id, inst.text, type(labels)(labels.aggression, flipped, labels.communal))
            )
        swapped = Corpus("swap", tuple(swapped_instances), labeled=True)
        for feat in vocab:
            assert chi2_score(feat, corpus, "gender") == chi2_score(feat, swapped, "gender")

    def test_matches_brute_force_oracle(self, rng):
        vocab = [f"w{i}" for i in range(10)]
        for _ in range(60):
            corpus = random_labeled_corpus(rng, int(rng.integers(2, 30)), vocab)
            doc_feats = [set(extract_features(inst.text)) for inst in corpus]
            task = ("aggression", "gender", "communal")[int(rng.integers(3))]
            labels = corpus.labels_for(task)
            for feat in vocab:
                expected = chi2_brute(feat, doc_feats, labels)
                assert chi2_score(feat, corpus, task) == pytest.approx(expected, abs=1e-9)


class TestSelectFeatures:
    def test_returns_all_when_n_exceeds_vocabulary(self, four_doc_gender_corpus):
        fs = select_features(four_doc_gender_corpus, "gender", 10_000)
        assert len(fs) == 6  # feat, other, alpha..delta
        assert fs.task == "gender"

    def test_class_perfect_feature_ranks_first(self, four_doc_gender_corpus):
        fs = select_features(four_doc_gender_corpus, "gender", 1)
        # "feat" and "other" are both class-perfect with equal frequency;
        # the lexicographically smaller one wins the tie.
        assert fs.features == ("feat",)

    def test_tie_break_frequency_then_lexicographic(self):
        corpus = make_labeled_corpus(
            [
                ("common rare_a x", ("NAG", "GEN", "NCOM")),
                ("common y", ("NAG", "NGEN", "NCOM")),
            ]
        )
        fs = select_features(corpus, "gender", 10)
        scores = dict(zip(fs.features, fs.scores))
        freqs = dict(zip(fs.features, fs.frequencies))
        order = list(fs.features)
        for earlier, later in zip(order, order[1:]):
            key_earlier = (-scores[earlier], -freqs[earlier], earlier)
            key_later = (-scores[later], -freqs[later], later)
            assert key_earlier <= key_later

    def test_prefix_property(self, rng):
        vocab = [f"w{i}" for i in range(12)]
        corpus = random_labeled_corpus(rng, 25, vocab)
        full = select_features(corpus, "aggression", 12)
        for n in range(1, 12):
            assert select_features(corpus, "aggression", n).features == full.features[:n]

    def test_unlabeled_error(self):
        with pytest.raises(ValueError):
            select_features(unlabeled(["a b"]), "gender", 2)

    def test_n_zero_error(self, four_doc_gender_corpus):
        with pytest.raises(ValueError):
            select_features(four_doc_gender_corpus, "gender", 0)

    def test_tsv_round_trip(self, tmp_path, four_doc_gender_corpus):
        fs = select_features(four_doc_gender_corpus, "gender", 4)
        path = fs.save_tsv(tmp_path / "fs.tsv")
        assert FeatureSet.load_tsv(path) == fs

    def test_tsv_round_trip_escapes_whitespace_features(self, tmp_path):
        fs = FeatureSet("gender", ("a\tb", "c\nd"), (2.0, 1.0), (3, 2), unit="char")
        path = fs.save_tsv(tmp_path / "fs.tsv")
        assert FeatureSet.load_tsv(path) == fs


class TestVectorize:
    FS = FeatureSet("gender", ("a", "b"), (1.0, 1.0), (2, 1))

    def test_tf_then_l2(self):
        vec = vectorize(["a", "a", "b"], self.FS)
        assert vec.indices == (0, 1)
        assert vec.values == pytest.approx((2 / math.sqrt(5), 1 / math.sqrt(5)), abs=1e-12)

    def test_no_matching_features_gives_zero_vector(self):
        vec = vectorize(["z"], self.FS)
        assert vec.is_zero
        assert vec.dim == 2

    def test_norm_is_zero_or_one(self, rng):
        for _ in range(50):
            tokens = [("a", "b", "z")[int(j)] for j in rng.integers(0, 3, size=int(rng.integers(0, 6)))]
            vec = vectorize(tokens, self.FS)
            assert vec.norm() == pytest.approx(0.0, abs=1e-12) or vec.norm() == pytest.approx(1.0, abs=1e-12)

    def test_depends_on_multiset_not_order(self):
        assert vectorize(["a", "b", "a"], self.FS) == vectorize(["a", "a", "b"], self.FS)

    def test_accepts_raw_text(self):
        assert vectorize("a a b", self.FS) == vectorize(["a", "a", "b"], self.FS)

    def test_strictly_increasing_indices_enforced(self):
        with pytest.raises(ValueError):
            SparseVector((1, 1), (0.5, 0.5), 3)
        with pytest.raises(ValueError):
            SparseVector((0, 4), (0.5, 0.5), 3)


class TestCosine:
    def test_self_similarity_is_one(self):
        vec = vectorize(["a", "b", "b"], TestVectorize.FS)
        assert cosine(vec, vec) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_supports(self):
        a = SparseVector((0,), (1.0,), 2)
        b = SparseVector((1,), (1.0,), 2)
        assert cosine(a, b) == 0.0

    def test_worked_example(self):
        a = SparseVector((0,), (1.0,), 2)
        b = SparseVector((0, 1), (1 / math.sqrt(2), 1 / math.sqrt(2)), 2)
        assert cosine(a, b) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_zero_vector_similarity_is_zero(self):
        zero = SparseVector((), (), 2)
        other = SparseVector((0,), (1.0,), 2)
        assert cosine(zero, other) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            cosine(SparseVector((0,), (1.0,), 2), SparseVector((0,), (1.0,), 3))

    def test_symmetric_and_scale_invariant(self):
        a = SparseVector((0, 2), (3.0, 4.0), 4)
        b = SparseVector((0, 1, 2), (1.0, 5.0, 2.0), 4)
        scaled = SparseVector((0, 2), (6.0, 8.0), 4)
        assert cosine(a, b) == cosine(b, a)
        assert cosine(scaled, b) == pytest.approx(cosine(a, b), abs=1e-12)
