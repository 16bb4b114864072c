import unicodedata

from hypothesis import given, settings
from hypothesis import strategies as st

from commaclf.text import SurfaceFeatures, surface_features, tokenize, tokenize_doc

texts = st.text(max_size=60)


class TestTokenize:
    def test_empty(self):
        assert tokenize("") == []

    def test_word_and_punct_split(self):
        assert tokenize("Hello, world!!") == ["Hello", ",", "world", "!", "!"]

    def test_hashtag(self):
        assert tokenize("abc123 #tag") == ["abc123", "#", "tag"]

    def test_devanagari_with_danda(self):
        assert tokenize("कल आओ।") == ["कल", "आओ", "।"]

    def test_emoji_are_single_tokens(self):
        assert tokenize("ok \U0001f436\U0001f436") == ["ok", "\U0001f436", "\U0001f436"]

    @given(texts)
    @settings(max_examples=200)
    def test_reconstruction(self, text):
        joined = "".join(tokenize(text))
        stripped = "".join(ch for ch in text if not ch.isspace())
        assert joined == stripped

    @given(texts)
    @settings(max_examples=200)
    def test_word_tokens_are_idempotent(self, text):
        for token in tokenize(text):
            assert tokenize(token) == [token]

    @given(texts, texts)
    @settings(max_examples=200)
    def test_word_count_additivity(self, a, b):
        combined = surface_features(a + " " + b).words
        assert combined == surface_features(a).words + surface_features(b).words


class TestSurfaceFeatures:
    def test_empty(self):
        assert surface_features("") == SurfaceFeatures(0, 0, 0, 0, 0)

    def test_worked_example(self):
        feats = surface_features("I won 2 games. Really!")
        assert feats == SurfaceFeatures(words=5, sentences=2, punctuation=2, numbers=1, emoji=0)

    def test_emoji_counted(self):
        feats = surface_features("ok \U0001f436\U0001f436")
        assert feats.emoji == 2
        assert feats.words == 1

    def test_sentence_terminators_include_danda_and_ellipsis(self):
        assert surface_features("एक। दो।").sentences == 2
        assert surface_features("wait… what?").sentences == 2

    def test_trailing_text_counts_as_sentence(self):
        assert surface_features("no terminator").sentences == 1

    def test_terminator_only_text_has_no_sentences(self):
        assert surface_features("...!!!").sentences == 0

    def test_number_runs(self):
        assert surface_features("12 34a5").numbers == 3

    @given(texts)
    @settings(max_examples=200)
    def test_counts_non_negative(self, text):
        feats = surface_features(text)
        assert min(feats.as_tuple()) >= 0

    @given(texts)
    @settings(max_examples=200)
    def test_words_equals_word_token_count(self, text):
        word_tokens = [t for t in tokenize(text) if _is_word_token(t)]
        assert surface_features(text).words == len(word_tokens)


def _is_word_token(token: str) -> bool:
    cat = unicodedata.category(token[0])
    return cat[0] in "LM" or cat == "Nd"


def test_tokenize_doc_bundles_id_tokens_surface():
    doc = tokenize_doc("x1", "a b.")
    assert doc.doc_id == "x1"
    assert doc.tokens == ("a", "b", ".")
    assert doc.surface.words == 2
    assert all(doc.tokens)
