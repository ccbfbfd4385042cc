"""Deterministic reader stubs for the four answer formats.

These are rule-based stand-ins for trained readers. They share the platform
tokenizer and stopword list, are pure functions of their inputs, and their
scoring rules are simple enough to re-derive by hand, which is what the
behavioural tests and the acceptance oracles rely on.
"""

import math
import re
from dataclasses import dataclass

from ..errors import TooFewOptions, ValidationFailed
from ..text import STOPWORDS, content_tokens, split_sentences, tokenize, tokenize_with_offsets

MAX_SPAN_TOKENS = 5

# Distance decay for span scoring: a question token d context-tokens away
# from the span contributes exp(-d / DECAY).
DECAY = 5.0

_NEGATION_WORD_RE = re.compile(r"\b(?:not|no|never|cannot|none)\b")


@dataclass(frozen=True)
class Span:
    """An answer span anchored in its context: context[start_char:end_char] == text."""

    text: str
    start_char: int
    end_char: int
    score: float


def _require_nonempty(value: str, name: str) -> None:
    if not value or not value.strip():
        raise ValidationFailed(f"{name} must be non-empty")


def read_extractive(question: str, context: str, topk: int) -> list[Span]:
    """Rank candidate spans by proximity to question content tokens.

    Candidates are runs of 1..5 context tokens that begin and end on
    non-stopword tokens and contain no question content token. Each distinct
    question content token q occurring in the context adds exp(-d/5), with d
    the token distance from q's closest occurrence to the nearer span
    boundary. Ties go to the shorter span, then the earlier start. Returns []
    when the context offers no candidate (all stopwords or question tokens).
    """
    _require_nonempty(question, "question")
    _require_nonempty(context, "context")
    if topk < 1:
        raise ValidationFailed(f"topk must be >= 1, got {topk}")

    ctx = tokenize_with_offsets(context)
    q_content = set(content_tokens(question))

    occurrences: dict[str, list[int]] = {}
    for i, tok in enumerate(ctx):
        if tok.text in q_content:
            occurrences.setdefault(tok.text, []).append(i)
    scored_terms = sorted(occurrences)  # fixed order keeps float sums reproducible

    candidates = []
    for s, start_tok in enumerate(ctx):
        if start_tok.text in STOPWORDS or start_tok.text in q_content:
            continue
        for e in range(s, min(s + MAX_SPAN_TOKENS, len(ctx))):
            if ctx[e].text in q_content:
                break
            if ctx[e].text in STOPWORDS:
                continue
            score = 0.0
            for term in scored_terms:
                d = min(s - i if i < s else i - e for i in occurrences[term])
                score += math.exp(-d / DECAY)
            candidates.append((score, e - s + 1, s, e))

    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    spans = []
    for score, _, s, e in candidates[:topk]:
        start_char = ctx[s].start
        end_char = ctx[e].end
        spans.append(Span(context[start_char:end_char], start_char, end_char, score))
    return spans


def _count_negation_cues(sentence: str) -> int:
    lowered = sentence.lower()
    return len(_NEGATION_WORD_RE.findall(lowered)) + lowered.count("n't")


def _best_sentence(question: str, sentences: list[str]) -> tuple[int, int]:
    """Index and overlap of the sentence sharing most question content tokens (ties: earliest)."""
    q_content = set(content_tokens(question))
    best_idx, best_overlap = 0, -1
    for i, sentence in enumerate(sentences):
        overlap = len(q_content & set(tokenize(sentence)))
        if overlap > best_overlap:
            best_idx, best_overlap = i, overlap
    return best_idx, best_overlap


def read_categorical(question: str, context: str) -> tuple[str, dict[str, float]]:
    """Yes/no decision from negation-cue parity in the best-matching sentence.

    An odd number of cues from {not, no, never, n't, cannot, none} flips the
    answer to "no". The chosen label scores 0.5 + 0.5 * overlap / |question
    content tokens| and the other label the complement, so scores sum to 1.
    """
    _require_nonempty(question, "question")
    _require_nonempty(context, "context")
    sentences = split_sentences(context)
    idx, overlap = _best_sentence(question, sentences)
    label = "no" if _count_negation_cues(sentences[idx]) % 2 == 1 else "yes"

    n_content = len(set(content_tokens(question)))
    confidence = 0.5 + 0.5 * (overlap / n_content) if n_content else 0.5
    other = 1.0 - confidence
    scores = {label: confidence, "no" if label == "yes" else "yes": other}
    return label, scores


def read_multichoice(question: str, context: str, options: list[str]) -> list[tuple[str, float]]:
    """Score each option by the fraction of its content tokens found in question+context."""
    if len(options) < 2:
        raise TooFewOptions(f"need at least 2 options, got {len(options)}")
    pool = set(tokenize(question)) | set(tokenize(context))
    scored = []
    for i, option in enumerate(options):
        tokens = set(content_tokens(option))
        score = len(tokens & pool) / len(tokens) if tokens else 0.0
        scored.append((score, i, option))
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [(option, score) for score, _, option in scored]


def read_abstractive(question: str, contexts: list[str]) -> tuple[str, float]:
    """Return the single sentence, across all contexts, closest to the question.

    Closeness is the count of distinct question content tokens appearing in
    the sentence; ties resolve to the earliest context, then the earliest
    sentence. The score is that overlap divided by the number of question
    content tokens.
    """
    _require_nonempty(question, "question")
    if not any(c and c.strip() for c in contexts):
        raise ValidationFailed("need at least one non-empty context")

    q_content = set(content_tokens(question))
    best: tuple[str, int] | None = None
    for ctx in contexts:
        for sentence in split_sentences(ctx):
            overlap = len(q_content & set(tokenize(sentence)))
            if best is None or overlap > best[1]:
                best = (sentence, overlap)
    assert best is not None
    sentence, overlap = best
    score = overlap / len(q_content) if q_content else 0.0
    return sentence, score
