"""Session wiring: both pipeline flavors plus their shared stage logic.

run_batch() is the deterministic single-threaded runner behind `analyze`,
corpus replay, and the demo scenario: segments are delivered by stream
time and snapshots fire on stream-time boundaries, so identical inputs
produce byte-identical reports.

Session is the live runner behind the server: the acoustic path owns the
producer thread and is never blocked by transcription, suggestions, or
subscribers (bounded drop-oldest handoff, bounded subscriber queues).
"""
from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass
import numpy as np

from . import audio
from .audio import FrameConfig, SessionClock, open_source, replay_paced
from .evaluation import LatencyRecorder
from .events import DropOldestQueue, EventBus
from .fusion import SNAPSHOT_INTERVAL_MS, EmotionSnapshot, FusedLabel, fuse, summarize_band
from .prosody import PitchBand, ProsodyFrame, ProsodyTracker
from .sentiment import (
    KeywordBar,
    Lexicon,
    PolarityWindow,
    load_bundled_lexicon,
    load_lexicon,
    match_segment,
    update_bar,
)
from .suggestions import (
    ContextlessRequest,
    EchoProvider,
    HttpSuggestionProvider,
    ProviderBusy,
    SuggestionError,
    SuggestionRequest,
    SuggestionService,
)
from .transcripts import AsrProviderSpec, FixtureProvider, SegmentFeed, TranscriptSegment

SUGGESTION_WINDOW_SEGMENTS = 5


@dataclass
class SessionConfig:
    source: str
    transcript_fixture: str | None = None
    reference_transcript: str | None = None
    asr_kind: str | None = None  # external_process | http_service
    asr_locator: str | None = None
    asr_timeout_ms: int = 5000
    suggestion_provider: object = "echo"  # "echo" | "http:<url>" | object with .complete()
    lexicon_positive: str | None = None
    lexicon_negative: str | None = None
    frame_size: int = audio.DEFAULT_FRAME_SIZE
    hop_size: int = audio.DEFAULT_HOP_SIZE
    sample_rate: int = audio.CANONICAL_RATE
    snapshot_interval_ms: int = SNAPSHOT_INTERVAL_MS
    speed: float = 1.0
    asr_queue_frames: int = 64
    subscriber_queue: int = 1024

    def frame_config(self) -> FrameConfig:
        return FrameConfig(self.frame_size, self.hop_size, self.sample_rate)

    def validate(self):
        self.frame_config()  # range checks
        if self.speed <= 0:
            raise ValueError("speed must be > 0")
        if self.snapshot_interval_ms <= 0:
            raise ValueError("snapshot_interval_ms must be > 0")
        if self.asr_queue_frames <= 0 or self.subscriber_queue <= 0:
            raise ValueError("queue sizes must be > 0")
        if self.asr_kind is not None:
            if self.asr_kind not in ("external_process", "http_service"):
                raise ValueError(f"unknown asr_kind: {self.asr_kind!r}")
            if not self.asr_locator:
                raise ValueError("asr_kind set without asr_locator")

    def load_lexicon(self) -> Lexicon:
        if self.lexicon_positive and self.lexicon_negative:
            return load_lexicon(self.lexicon_positive, self.lexicon_negative)
        return load_bundled_lexicon()

    def build_suggestion_provider(self):
        prov = self.suggestion_provider
        if prov == "echo" or prov is None:
            return EchoProvider()
        if isinstance(prov, str) and prov.startswith("http:"):
            return HttpSuggestionProvider(prov.split(":", 1)[1])
        if hasattr(prov, "complete"):
            return prov
        raise ValueError(f"unusable suggestion provider: {prov!r}")


def resolve_segment_source(
    config: SessionConfig, duration_ms: float | None
) -> AsrProviderSpec | FixtureProvider | None:
    """Pick the linguistic-path source, by priority: explicit provider,
    fixture file, inline reference text. None disables the path."""
    if config.asr_kind:
        return AsrProviderSpec(config.asr_kind, config.asr_locator, config.asr_timeout_ms)
    if config.transcript_fixture:
        return AsrProviderSpec("fixture", config.transcript_fixture, config.asr_timeout_ms)
    if config.reference_transcript is not None:
        return FixtureProvider.from_reference(
            config.reference_transcript, 0.0, duration_ms or 0.0
        )
    return None


class SnapshotScheduler:
    """Assigns released prosody frames to fixed stream-time windows and
    says when a window is complete.

    Frames arrive in time order (the smoother preserves order), so a frame
    at or past a boundary proves the window before it is complete.
    """

    def __init__(self, interval_ms: float):
        self.interval_ms = interval_ms
        self._next = interval_ms
        self._window: list[ProsodyFrame] = []

    def add(self, frame: ProsodyFrame) -> list[tuple[float, list[ProsodyFrame]]]:
        due = []
        while frame.time_ms >= self._next:
            due.append((self._next, self._window))
            self._window = []
            self._next += self.interval_ms
        self._window.append(frame)
        return due

    def finish(self, duration_ms: float) -> list[tuple[float, list[ProsodyFrame]]]:
        """Close out remaining full windows plus a final partial one."""
        due = []
        while self._next <= duration_ms:
            due.append((self._next, self._window))
            self._window = []
            self._next += self.interval_ms
        if self._window and duration_ms > self._next - self.interval_ms:
            due.append((duration_ms, self._window))
            self._window = []
        return due


class FusionState:
    """Linguistic-path state shared across threads in the live session."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon
        self.lock = threading.Lock()
        self.bar = KeywordBar()
        self.window = PolarityWindow()
        self.segments: list[TranscriptSegment] = []
        self.stale = False
        self.last_snapshot: EmotionSnapshot | None = None
        self.hit_count = 0

    def ingest(self, segment: TranscriptSegment):
        """Returns the new bar if the segment produced hits, else None."""
        hits = match_segment(segment, self.lexicon)
        with self.lock:
            self.segments.append(segment)
            if hits:
                self.window.add(hits)
                self.bar = update_bar(self.bar, hits)
                self.hit_count += len(hits)
                return self.bar
        return None

    def snapshot(self, boundary_ms: float, frames: list[ProsodyFrame]) -> EmotionSnapshot:
        band, fraction = summarize_band(frames)
        with self.lock:
            polarity = self.window.score_at(boundary_ms)
            stale = self.stale
            newest = self.bar.entries[0].polarity if self.bar.entries else None
        snap = fuse(
            band,
            fraction,
            polarity,
            stale,
            time_ms=boundary_ms,
            newest_hit_polarity=newest,
        )
        with self.lock:
            self.last_snapshot = snap
        return snap

    def mark_stale(self):
        with self.lock:
            self.stale = True


# ---------------------------------------------------------------------------
# wire payloads (schema consumed verbatim by the dashboard)
# ---------------------------------------------------------------------------

def prosody_payload(pf: ProsodyFrame) -> dict:
    return {
        "t_ms": int(round(pf.time_ms)),
        "f0_hz": round(pf.f0_hz, 2) if pf.f0_hz is not None else None,
        "rms": round(pf.rms, 4),
        "band": pf.band.value,
    }


def bar_payload(bar: KeywordBar) -> dict:
    return {"words": [{"w": h.word, "pol": h.polarity} for h in bar.entries]}


def snapshot_payload(snap: EmotionSnapshot) -> dict:
    return {
        "t_ms": int(round(snap.time_ms)),
        "label": snap.fused_label.value,
        "polarity": round(snap.polarity, 3),
        "band": snap.band.value,
        "discrepancy": snap.discrepancy,
    }


def transcript_payload(seg: TranscriptSegment) -> dict:
    return {
        "start_ms": int(round(seg.start_ms)),
        "end_ms": int(round(seg.end_ms)),
        "text": seg.text,
    }


# ---------------------------------------------------------------------------
# deterministic batch runner
# ---------------------------------------------------------------------------

@dataclass
class BatchResult:
    config: SessionConfig
    duration_ms: float
    frame_count: int
    prosody: list[ProsodyFrame]
    segments: list[TranscriptSegment]
    keyword_bar: KeywordBar
    snapshots: list[EmotionSnapshot]
    hit_count: int
    degraded: bool

    def transcript_text(self) -> str:
        return " ".join(seg.text for seg in self.segments if seg.text)

    def final_label(self) -> FusedLabel:
        if not self.snapshots:
            return FusedLabel.INSUFFICIENT
        return self.snapshots[-1].fused_label

    def dominant_band(self) -> PitchBand:
        """Band summary of the most recent interval."""
        if not self.snapshots:
            return PitchBand.UNVOICED
        return self.snapshots[-1].band

    def to_report_dict(self) -> dict:
        voiced = [pf for pf in self.prosody if pf.voiced]
        band_counts: dict[str, int] = {}
        for pf in self.prosody:
            band_counts[pf.band.value] = band_counts.get(pf.band.value, 0) + 1
        f0_values = sorted(pf.f0_hz for pf in voiced if pf.f0_hz is not None)
        f0_median = f0_values[len(f0_values) // 2] if f0_values else None
        final = self.snapshots[-1] if self.snapshots else None
        return {
            "source": self.config.source,
            "config": {
                "frame_size": self.config.frame_size,
                "hop_size": self.config.hop_size,
                "sample_rate": self.config.sample_rate,
                "snapshot_interval_ms": self.config.snapshot_interval_ms,
            },
            "duration_ms": round(self.duration_ms, 3),
            "frames": self.frame_count,
            "prosody": {
                "voiced_frames": len(voiced),
                "voiced_fraction": round(len(voiced) / max(1, len(self.prosody)), 3),
                "f0_median_hz": round(f0_median, 2) if f0_median is not None else None,
                "band_counts": band_counts,
            },
            "transcript": [transcript_payload(seg) for seg in self.segments],
            "keyword_bar": bar_payload(self.keyword_bar)["words"],
            "hit_count": self.hit_count,
            "snapshots": [snapshot_payload(s) for s in self.snapshots],
            "final": snapshot_payload(final) if final else None,
            "degraded": self.degraded,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_report_dict(), sort_keys=True, indent=2) + "\n"


def load_source_samples(config: SessionConfig) -> np.ndarray:
    """Eagerly load a finite source (batch mode decodes up front)."""
    uri = config.source
    if uri.startswith("raw:") or uri.startswith("capture:"):
        samples = [frame for frame in open_source(uri, config.frame_config())]
        if not samples:
            return np.zeros(0, dtype=np.float64)
        # reassemble from frames: hop-new samples plus the final tail
        hop = config.hop_size
        parts = [f.samples[:hop] for f in samples[:-1]]
        last = samples[-1]
        parts.append(last.samples[: len(last.samples) - last.pad_samples])
        return np.concatenate(parts) if parts else np.zeros(0)
    return audio.decode_wav(uri, config.sample_rate)


def run_batch(config: SessionConfig) -> BatchResult:
    """One-shot deterministic pipeline run over a finite source."""
    config.validate()
    samples = load_source_samples(config)
    duration_ms = samples.size / config.sample_rate * 1000.0
    lexicon = config.load_lexicon()

    provider = resolve_segment_source(config, duration_ms)
    fusion = FusionState(lexicon)
    feed = SegmentFeed(provider, on_status=lambda s, d: fusion.mark_stale()) if provider else None

    tracker = ProsodyTracker()
    scheduler = SnapshotScheduler(config.snapshot_interval_ms)
    prosody_out: list[ProsodyFrame] = []
    segments_out: list[TranscriptSegment] = []
    snapshots: list[EmotionSnapshot] = []
    frame_count = 0

    def take(boundary_ms, frames):
        snapshots.append(fusion.snapshot(boundary_ms, frames))

    try:
        for frame in audio.frame_signal(samples, config.frame_config()):
            frame_count += 1
            if feed is not None:
                for seg in feed.feed(frame):
                    segments_out.append(seg)
                    fusion.ingest(seg)
            for pf in tracker.process(frame):
                prosody_out.append(pf)
                for boundary_ms, frames in scheduler.add(pf):
                    take(boundary_ms, frames)
        if feed is not None:
            for seg in feed.finish():
                segments_out.append(seg)
                fusion.ingest(seg)
        for pf in tracker.flush():
            prosody_out.append(pf)
            for boundary_ms, frames in scheduler.add(pf):
                take(boundary_ms, frames)
        for boundary_ms, frames in scheduler.finish(duration_ms):
            take(boundary_ms, frames)
    finally:
        if feed is not None:
            feed.close()

    return BatchResult(
        config=config,
        duration_ms=duration_ms,
        frame_count=frame_count,
        prosody=prosody_out,
        segments=segments_out,
        keyword_bar=fusion.bar,
        snapshots=snapshots,
        hit_count=fusion.hit_count,
        degraded=fusion.stale or (feed.degraded if feed else False),
    )


# ---------------------------------------------------------------------------
# live threaded session
# ---------------------------------------------------------------------------

def _monotonic_ms() -> float:
    return time.monotonic() * 1000.0


class Session:
    """A running analysis session: producer thread (acoustic path), ASR
    thread (linguistic path), on-demand suggestion workers, one event bus.
    """

    def __init__(self, config: SessionConfig, recorder: LatencyRecorder | None = None):
        config.validate()
        self.config = config
        self.clock = SessionClock(session_id=uuid.uuid4().hex[:12], speed=config.speed)
        self.id = self.clock.session_id
        self.bus = EventBus(self.id, subscriber_queue=config.subscriber_queue)
        self.recorder = recorder
        self.state = "created"

        # everything that can fail does so here, before any event exists
        self._lexicon = config.load_lexicon()
        self._source = open_source(config.source, config.frame_config())
        provider = resolve_segment_source(config, None)
        self._fusion = FusionState(self._lexicon)
        self._feed = (
            SegmentFeed(provider, on_status=self._on_asr_status) if provider else None
        )
        self._suggestions = SuggestionService(provider=config.build_suggestion_provider())

        self._tracker = ProsodyTracker()
        self._scheduler = SnapshotScheduler(config.snapshot_interval_ms)
        self._asr_queue = DropOldestQueue(config.asr_queue_frames)
        self._producer = threading.Thread(target=self._produce, daemon=True, name=f"audio-{self.id}")
        self._asr_thread = threading.Thread(target=self._consume_asr, daemon=True, name=f"asr-{self.id}")
        self._arrivals: dict[int, float] = {}
        self._boundary_marks: dict[float, float] = {}
        self._next_mark = float(config.snapshot_interval_ms)
        self._last_frame_end = 0.0

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> "Session":
        self.state = "running"
        self.bus.emit("status", {"state": "started", "detail": f"session {self.id}"})
        self._asr_thread.start()
        self._producer.start()
        return self

    def subscribe(self, maxsize: int | None = None):
        return self.bus.subscribe(maxsize)

    def join(self, timeout: float | None = None):
        self._producer.join(timeout=timeout)

    # -- acoustic path -----------------------------------------------------

    def _produce(self):
        try:
            for frame in replay_paced(iter(self._source), self.config.speed):
                now = _monotonic_ms()
                self._arrivals[frame.frame_index] = now
                self._last_frame_end = frame.end_ms
                while frame.end_ms >= self._next_mark:
                    self._boundary_marks[self._next_mark] = now
                    self._next_mark += self.config.snapshot_interval_ms
                if self._feed is not None:
                    self._asr_queue.put(frame)
                for pf in self._tracker.process(frame):
                    self._emit_prosody(pf)
            for pf in self._tracker.flush():
                self._emit_prosody(pf)
            for boundary_ms, frames in self._scheduler.finish(self._last_frame_end):
                self._emit_snapshot(boundary_ms, frames)
            self._asr_queue.close()
            self._asr_thread.join(timeout=2.0)
            self.state = "ended"
            self.bus.emit("status", {"state": "ended", "detail": "source exhausted"})
        except Exception as exc:  # surface the failure to subscribers
            self.state = "ended"
            self._asr_queue.close()
            self.bus.emit("status", {"state": "ended", "detail": f"error: {exc}"})
        finally:
            self.bus.close()

    def _emit_prosody(self, pf: ProsodyFrame):
        self.bus.emit("prosody", prosody_payload(pf))
        arrived = self._arrivals.pop(pf.frame_index, None)  # always pop: bounded state
        if self.recorder is not None and arrived is not None:
            self.recorder.record("frame_to_prosody", _monotonic_ms() - arrived)
        for boundary_ms, frames in self._scheduler.add(pf):
            self._emit_snapshot(boundary_ms, frames)

    def _emit_snapshot(self, boundary_ms: float, frames: list[ProsodyFrame]):
        snap = self._fusion.snapshot(boundary_ms, frames)
        self.bus.emit("snapshot", snapshot_payload(snap))
        mark = self._boundary_marks.pop(boundary_ms, None)
        if self.recorder is not None and mark is not None:
            self.recorder.record("interval_to_snapshot", _monotonic_ms() - mark)

    # -- linguistic path ---------------------------------------------------

    def _consume_asr(self):
        if self._feed is None:
            return
        try:
            for frame in self._asr_queue:
                for seg in self._feed.feed(frame):
                    self._handle_segment(seg)
            for seg in self._feed.finish():
                self._handle_segment(seg)
        finally:
            self._feed.close()

    def _handle_segment(self, seg: TranscriptSegment):
        arrived = _monotonic_ms()
        self.bus.emit("transcript", transcript_payload(seg))
        new_bar = self._fusion.ingest(seg)
        if new_bar is not None:
            self.bus.emit("keyword_bar", bar_payload(new_bar))
            if self.recorder is not None:
                self.recorder.record("segment_to_keyword", _monotonic_ms() - arrived)

    def _on_asr_status(self, state: str, detail: str):
        self._fusion.mark_stale()
        self.bus.emit("status", {"state": state, "detail": detail})

    # -- suggestions -------------------------------------------------------

    def request_suggestion(self):
        """Fire-and-forget: the outcome arrives as a suggestion event."""
        worker = threading.Thread(target=self._suggest, daemon=True)
        worker.start()
        return worker

    def _suggest(self):
        with self._fusion.lock:
            window = tuple(self._fusion.segments[-SUGGESTION_WINDOW_SEGMENTS:])
            bar = self._fusion.bar
            snap = self._fusion.last_snapshot
        try:
            request = SuggestionRequest(
                session_id=self.id,
                window=window,
                bar=bar,
                snapshot=snap,
                requested_at_ms=time.time() * 1000.0,
            )
            result = self._suggestions.request(request)
            self.bus.emit(
                "suggestion",
                {
                    "text": result.text,
                    "source": result.source,
                    "latency_ms": result.latency_ms,
                },
            )
        except (ContextlessRequest, ProviderBusy, SuggestionError) as exc:
            self.bus.emit(
                "suggestion",
                {"text": "", "source": "live", "latency_ms": 0, "error": str(exc)},
            )

    # -- introspection ------------------------------------------------------

    def report(self) -> dict:
        with self._fusion.lock:
            snap = self._fusion.last_snapshot
            bar = self._fusion.bar
            stale = self._fusion.stale
            segment_count = len(self._fusion.segments)
        return {
            "session_id": self.id,
            "state": self.state,
            "source": self.config.source,
            "keyword_bar": bar_payload(bar)["words"],
            "last_snapshot": snapshot_payload(snap) if snap else None,
            "segments": segment_count,
            "lexical_stale": stale,
            "dropped_asr_frames": self._asr_queue.dropped,
        }


class SessionManager:
    """Owns live sessions for the server process."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, config: SessionConfig, recorder: LatencyRecorder | None = None) -> Session:
        session = Session(config, recorder=recorder)
        with self._lock:
            self._sessions[session.id] = session
        session.start()
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            if session_id not in self._sessions:
                raise KeyError(f"unknown session: {session_id}")
            return self._sessions[session_id]

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._sessions)
