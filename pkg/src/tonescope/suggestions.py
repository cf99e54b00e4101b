"""On-demand coaching suggestions from an external text provider.

Strictly pull-based: nothing here runs unless the user asks. Repeated
contexts are answered from a bounded LRU cache so a flaky or slow provider
is hit as rarely as possible.
"""
from __future__ import annotations

import hashlib
import os
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field

import requests

from .fusion import EmotionSnapshot
from .sentiment import KeywordBar
from .transcripts import TranscriptSegment

PROMPT_CHAR_CAP = 4000
CACHE_CAPACITY = 256
DEFAULT_TIMEOUT_S = 10.0
API_KEY_ENV = "EGI_LLM_KEY"

_LABEL_PREFIX = "Current fused state: "


class ContextlessRequest(ValueError):
    """Raised when a request carries neither transcript nor keywords."""


class ProviderBusy(RuntimeError):
    """Raised when a session already has a provider call in flight."""


class SuggestionError(RuntimeError):
    """Raised when the provider call fails or times out."""


@dataclass(frozen=True)
class SuggestionRequest:
    session_id: str
    window: tuple[TranscriptSegment, ...]  # most recent last
    bar: KeywordBar
    snapshot: EmotionSnapshot | None
    requested_at_ms: float

    def __post_init__(self):
        if not self.window and not self.bar.entries:
            raise ContextlessRequest("request carries no transcript and no keywords")


@dataclass(frozen=True)
class Suggestion:
    text: str
    source: str  # live | cache
    latency_ms: int
    provider: str


def _label_of(snapshot: EmotionSnapshot | None) -> str:
    return snapshot.fused_label.value if snapshot else "none"


def cache_key(request: SuggestionRequest) -> str:
    """Digest of the normalized context. Timestamps are deliberately
    excluded so the same words and state reuse the same answer."""
    window_text = "\n".join(seg.text.strip().lower() for seg in request.window)
    bar_words = ",".join(sorted(hit.word for hit in request.bar.entries))
    material = "\x1e".join([window_text, bar_words, _label_of(request.snapshot)])
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def build_prompt(request: SuggestionRequest) -> str:
    """Deterministic prompt: framing, transcript window, keywords, state.

    Capped at PROMPT_CHAR_CAP characters by dropping the oldest transcript
    lines first; the keyword bar and state always survive.
    """
    head = (
        "You assist a meeting facilitator with real-time emotional "
        "self-awareness. Given what they just said, the sentiment keywords "
        "detected, and the fused tone/text state, reply with one short, "
        "actionable suggestion.\n"
    )
    bar_line = "Keywords: " + (
        ", ".join(
            f"{hit.word}({'+' if hit.polarity > 0 else '-'})" for hit in request.bar.entries
        )
        or "(none)"
    )
    state_line = _LABEL_PREFIX + _label_of(request.snapshot)
    transcript_lines = [f"> {seg.text}" for seg in request.window]

    while True:
        body = "\n".join(["Transcript:"] + (transcript_lines or ["(none)"]))
        prompt = "\n".join([head, body, bar_line, state_line])
        if len(prompt) <= PROMPT_CHAR_CAP or not transcript_lines:
            return prompt[:PROMPT_CHAR_CAP]
        transcript_lines.pop(0)  # oldest first


class EchoProvider:
    """Offline provider: answers from the prompt itself, instantly."""

    name = "echo"

    def complete(self, prompt: str) -> str:
        label = "none"
        for line in prompt.splitlines():
            if line.startswith(_LABEL_PREFIX):
                label = line[len(_LABEL_PREFIX):]
        return (
            f"[echo] Observed state '{label}'. Take a breath, acknowledge the "
            "room, and restate your last point in a steady register."
        )


class HttpSuggestionProvider:
    """POST {"prompt": ...} -> {"text": ...} with a bearer credential."""

    name = "http"

    def __init__(self, endpoint: str, timeout_s: float = DEFAULT_TIMEOUT_S):
        self.endpoint = endpoint
        self.timeout_s = timeout_s

    def complete(self, prompt: str) -> str:
        headers = {}
        key = os.environ.get(API_KEY_ENV)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = requests.post(
                self.endpoint, json={"prompt": prompt}, headers=headers, timeout=self.timeout_s
            )
            resp.raise_for_status()
            return str(resp.json()["text"])
        except (requests.RequestException, KeyError, ValueError) as exc:
            raise SuggestionError(f"suggestion provider failed: {exc}") from exc


class LruCache:
    def __init__(self, capacity: int = CACHE_CAPACITY):
        self.capacity = capacity
        self._items: OrderedDict[str, str] = OrderedDict()

    def get(self, key: str) -> str | None:
        if key not in self._items:
            return None
        self._items.move_to_end(key)
        return self._items[key]

    def put(self, key: str, value: str):
        self._items[key] = value
        self._items.move_to_end(key)
        while len(self._items) > self.capacity:
            self._items.popitem(last=False)

    def __len__(self) -> int:
        return len(self._items)


@dataclass
class SuggestionService:
    """Per-session suggestion plumbing: cache in front, one call in flight."""

    provider: object = field(default_factory=EchoProvider)
    cache: LruCache = field(default_factory=LruCache)

    def __post_init__(self):
        self._in_flight = threading.Lock()

    def request(self, request: SuggestionRequest) -> Suggestion:
        """Answer from cache when possible; otherwise one live call.

        Raises ProviderBusy if a live call is already running for this
        session, and SuggestionError on provider failure (the cache is
        left untouched either way).
        """
        started = time.monotonic()
        key = cache_key(request)
        cached = self.cache.get(key)
        if cached is not None:
            return Suggestion(
                text=cached,
                source="cache",
                latency_ms=int((time.monotonic() - started) * 1000),
                provider=getattr(self.provider, "name", "unknown"),
            )
        if not self._in_flight.acquire(blocking=False):
            raise ProviderBusy("a suggestion request is already in flight")
        try:
            prompt = build_prompt(request)
            try:
                text = self.provider.complete(prompt)
            except SuggestionError:
                raise
            except Exception as exc:
                raise SuggestionError(f"suggestion provider failed: {exc}") from exc
            self.cache.put(key, text)
            return Suggestion(
                text=text,
                source="live",
                latency_ms=int((time.monotonic() - started) * 1000),
                provider=getattr(self.provider, "name", "unknown"),
            )
        finally:
            self._in_flight.release()
