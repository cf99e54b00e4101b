"""Opinion-lexicon sentiment matching and the rolling keyword bar."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

from .transcripts import TranscriptSegment

log = logging.getLogger(__name__)

BAR_CAPACITY = 5
POLARITY_WINDOW_MS = 30_000

_EDGE_TRIM = re.compile(r"^[\W_]+|[\W_]+$", re.UNICODE)


@dataclass(frozen=True)
class Lexicon:
    positive: frozenset[str]
    negative: frozenset[str]

    def polarity_of(self, word: str) -> int | None:
        if word in self.positive:
            return 1
        if word in self.negative:
            return -1
        return None


@dataclass(frozen=True)
class SentimentHit:
    word: str
    polarity: int  # +1 or -1
    segment_index: int
    position: int  # token index within the segment
    time_ms: float  # segment start


@dataclass(frozen=True)
class KeywordBar:
    """At most 5 entries, newest first, one entry per word."""

    entries: tuple[SentimentHit, ...] = ()

    def words(self) -> list[str]:
        return [hit.word for hit in self.entries]


def _read_word_list(path) -> list[str]:
    # Liu-format lists are mostly ASCII with a handful of Latin-1 bytes;
    # decode permissively and normalize to lowercase UTF-8.
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        text = raw.decode("latin-1")
    words = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        words.append(line.lower())
    return words


def load_lexicon(pos_path, neg_path) -> Lexicon:
    """Load positive/negative word lists in the Liu opinion-lexicon format.

    Words are lowercased and deduplicated within each list. A word present
    in both lists is dropped from both (and logged) so every remaining
    entry has an unambiguous polarity.
    """
    positive = set(_read_word_list(pos_path))
    negative = set(_read_word_list(neg_path))
    collisions = positive & negative
    if collisions:
        log.warning(
            "dropping %d word(s) present in both lists: %s",
            len(collisions),
            ", ".join(sorted(collisions)[:10]),
        )
        positive -= collisions
        negative -= collisions
    lex = Lexicon(positive=frozenset(positive), negative=frozenset(negative))
    log.info("lexicon loaded: %d positive, %d negative", len(lex.positive), len(lex.negative))
    return lex


def bundled_lexicon_paths() -> tuple[str, str]:
    data = resources.files("tonescope").joinpath("data")
    return str(data / "positive-words.txt"), str(data / "negative-words.txt")


def load_bundled_lexicon() -> Lexicon:
    pos, neg = bundled_lexicon_paths()
    return load_lexicon(pos, neg)


def tokenize(text: str) -> list[str]:
    """Lowercase whitespace tokens with edge punctuation stripped.

    Internal hyphens and apostrophes survive ("self-aware", "can't") since
    the word lists contain such entries; curly apostrophes are normalized.
    """
    tokens = []
    for raw in text.lower().replace("’", "'").split():
        word = _EDGE_TRIM.sub("", raw)
        if word:
            tokens.append(word)
    return tokens


def match_segment(segment: TranscriptSegment, lexicon: Lexicon) -> list[SentimentHit]:
    """One hit per token found in either word list, in token order."""
    hits = []
    for position, word in enumerate(tokenize(segment.text)):
        polarity = lexicon.polarity_of(word)
        if polarity is not None:
            hits.append(
                SentimentHit(
                    word=word,
                    polarity=polarity,
                    segment_index=segment.segment_index,
                    position=position,
                    time_ms=segment.start_ms,
                )
            )
    return hits


def update_bar(bar: KeywordBar, hits: Sequence[SentimentHit]) -> KeywordBar:
    """Fold new hits into the bar: newest first, dedup by word, cap at 5."""
    merged = sorted(
        list(hits) + list(bar.entries),
        key=lambda h: (h.time_ms, h.position),
        reverse=True,
    )
    seen = set()
    entries = []
    for hit in merged:
        if hit.word in seen:
            continue
        seen.add(hit.word)
        entries.append(hit)
        if len(entries) == BAR_CAPACITY:
            break
    return KeywordBar(entries=tuple(entries))


def polarity_score(window: Iterable[SentimentHit]) -> float:
    """(P - N) / max(1, P + N) over the hit window, in [-1, +1]."""
    pos = neg = 0
    for hit in window:
        if hit.polarity > 0:
            pos += 1
        else:
            neg += 1
    return (pos - neg) / max(1, pos + neg)


class PolarityWindow:
    """Rolling window of hits from the last 30 s of transcript time."""

    def __init__(self, span_ms: float = POLARITY_WINDOW_MS):
        self.span_ms = span_ms
        self._hits: list[SentimentHit] = []

    def add(self, hits: Iterable[SentimentHit]):
        self._hits.extend(hits)

    def hits_at(self, now_ms: float) -> list[SentimentHit]:
        cutoff = now_ms - self.span_ms
        self._hits = [h for h in self._hits if h.time_ms >= cutoff]
        return list(self._hits)

    def score_at(self, now_ms: float) -> float:
        return polarity_score(self.hits_at(now_ms))
