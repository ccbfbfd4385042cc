"""Answer normalization and question perturbations for invariance tests.

Both are published, deterministic rules: users should be able to predict
exactly which answers compare equal and exactly how a seeded generator will
modify a question.
"""

import random
import string

from ..errors import NoEligibleWord, ValidationFailed
from ..text import STOPWORDS, tokenize_with_offsets

_EDGE_CHARS = string.punctuation + string.whitespace
_ARTICLES = ("a", "an", "the")

MIN_TYPO_WORD_LEN = 4


def normalize(answer: str) -> str:
    """Canonical answer form: lowercase, no edge punctuation, single spaces, no leading article.

    Stripping punctuation can expose another leading article and vice versa,
    so the two steps repeat until the string stops changing; the result is a
    fixed point, which makes normalize idempotent.
    """
    s = " ".join(answer.lower().split())
    while True:
        t = s.strip(_EDGE_CHARS)
        words = t.split(" ")
        while words and words[0] in _ARTICLES:
            words = words[1:]
        t = " ".join(words)
        if t == s:
            return s
        s = t


def apply_perturbation(question: str, generator: dict) -> tuple[str, list[tuple[str, str]]]:
    """Apply a seeded generator to a question; returns (perturbed, highlight pairs)."""
    kind = generator.get("kind")
    seed = generator.get("seed")
    params = generator.get("params") or {}
    if kind == "typo":
        return _typo(question, seed)
    if kind == "replace":
        lexicon = params.get("lexicon")
        if not isinstance(lexicon, dict) or not lexicon:
            raise ValidationFailed("replace generator needs params['lexicon']")
        return _replace(question, lexicon)
    raise ValidationFailed(f"unknown generator kind {kind!r}")


def _typo(question: str, seed: int) -> tuple[str, list[tuple[str, str]]]:
    """Transpose two adjacent characters inside one eligible word.

    Eligible words are tokens of length >= 4 outside the stopword list. The
    word and the transposition position are both drawn from a generator
    seeded with the case's seed, so the same seed always yields the same typo.
    """
    tokens = tokenize_with_offsets(question)
    eligible = [t for t in tokens if len(t.text) >= MIN_TYPO_WORD_LEN and t.text not in STOPWORDS]
    if not eligible:
        raise NoEligibleWord("no word of length >= 4 outside the stopword list")
    rng = random.Random(seed)
    target = eligible[rng.randrange(len(eligible))]
    original = question[target.start:target.end]
    i = rng.randrange(len(original) - 1)
    mutated = original[:i] + original[i + 1] + original[i] + original[i + 2:]
    perturbed = question[: target.start] + mutated + question[target.end:]
    return perturbed, [(original, mutated)]


def _replace(question: str, lexicon: dict[str, str]) -> tuple[str, list[tuple[str, str]]]:
    """Substitute every whole-word occurrence of each lexicon key by its value.

    Keys apply in sorted order; the highlight lists only the pairs that
    actually replaced something.
    """
    highlight = []
    for key in sorted(lexicon):
        value = lexicon[key]
        out = []
        cursor = 0
        replaced = False
        while True:
            idx = question.find(key, cursor)
            if idx < 0:
                break
            before_ok = idx == 0 or not question[idx - 1].isalnum()
            after = idx + len(key)
            after_ok = after >= len(question) or not question[after].isalnum()
            if before_ok and after_ok:
                out.append(question[cursor:idx])
                out.append(value)
                cursor = after
                replaced = True
            else:
                out.append(question[cursor:after])
                cursor = after
        out.append(question[cursor:])
        question = "".join(out)
        if replaced:
            highlight.append((key, value))
    return question, highlight
