"""Language-agnostic tokenization and surface text statistics.

Every rule here is defined purely in terms of Unicode character categories,
so the same code applies unchanged to code-mixed Hindi/Bangla/Meitei/English
social-media text. Deliberately absent: stemming, stopword lists,
lemmatization, transliteration.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

__all__ = [
    "SENTENCE_TERMINATORS",
    "SurfaceFeatures",
    "TokenizedDoc",
    "surface_features",
    "tokenize",
    "tokenize_doc",
]

# Scalars that end a sentence segment. Includes the Devanagari danda, since
# much of the target material is Hindi/Bangla.
SENTENCE_TERMINATORS = frozenset({".", "!", "?", "…", "।"})


def _is_word_char(ch: str) -> bool:
    # Letters, combining marks and decimal digits form word tokens.
    cat = unicodedata.category(ch)
    return cat[0] in "LM" or cat == "Nd"


def _is_emoji(ch: str, cat: str) -> bool:
    # The "unrecognizable character" bucket: anything that is not a word
    # character, not punctuation, not whitespace and not a plain ASCII
    # symbol. Catches emoji, pictographs and stray control bytes.
    if cat[0] in "LM" or cat == "Nd":
        return False
    if cat[0] == "P" or ch.isspace():
        return False
    if ord(ch) < 128 and cat[0] == "S":
        return False
    return True


@dataclass(frozen=True)
class SurfaceFeatures:
    """The five surface counts extracted from every message."""

    words: int
    sentences: int
    punctuation: int
    numbers: int
    emoji: int

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.words, self.sentences, self.punctuation, self.numbers, self.emoji)


@dataclass(frozen=True)
class TokenizedDoc:
    """A document after tokenization, keyed by its instance id."""

    doc_id: str
    tokens: tuple[str, ...]
    surface: SurfaceFeatures


def tokenize(text: str) -> list[str]:
    """Split text into tokens without any linguistic processing.

    Maximal runs of letters/marks/digits become word tokens; every other
    non-whitespace scalar becomes its own single-character token; whitespace
    only separates. Concatenating the tokens reproduces the input minus its
    whitespace.
    """
    tokens: list[str] = []
    run: list[str] = []
    for ch in text:
        if _is_word_char(ch):
            run.append(ch)
            continue
        if run:
            tokens.append("".join(run))
            run.clear()
        if not ch.isspace():
            tokens.append(ch)
    if run:
        tokens.append("".join(run))
    return tokens


def surface_features(text: str) -> SurfaceFeatures:
    """Count words, sentences, punctuation marks, numbers and emoji.

    Sentences are maximal segments closed by ``.``/``!``/``?``/ellipsis/danda
    or end of text; a segment only counts if it contains at least one
    non-whitespace scalar. Numbers are maximal decimal-digit runs in the raw
    text, independent of tokenization.
    """
    words = sentences = punctuation = numbers = emoji = 0
    in_word = in_digits = False
    segment_content = False
    for ch in text:
        cat = unicodedata.category(ch)
        if cat[0] in "LM" or cat == "Nd":
            if not in_word:
                words += 1
            in_word = True
        else:
            in_word = False
        if cat == "Nd":
            if not in_digits:
                numbers += 1
            in_digits = True
        else:
            in_digits = False
        if cat[0] == "P":
            punctuation += 1
        if _is_emoji(ch, cat):
            emoji += 1
        if ch in SENTENCE_TERMINATORS:
            if segment_content:
                sentences += 1
            segment_content = False
        elif not ch.isspace():
            segment_content = True
    if segment_content:
        sentences += 1
    return SurfaceFeatures(words, sentences, punctuation, numbers, emoji)


def tokenize_doc(doc_id: str, text: str) -> TokenizedDoc:
    """Tokenize one message and attach its surface counts."""
    return TokenizedDoc(doc_id, tuple(tokenize(text)), surface_features(text))
