"""Transcript acquisition from pluggable ASR providers.

The linguistic path never blocks the acoustic one: providers run behind
timeouts and retries, and when a provider is gone for good the session
drops to degraded mode instead of stalling.

Provider kinds:
  fixture          — a TSV file of timestamped segments, replayed
                     deterministically (tests, offline corpus runs)
  external_process — subprocess fed raw 16 kHz s16le PCM on stdin,
                     emitting fixture-format lines on stdout
  http_service     — POST per audio chunk, JSON response
"""
from __future__ import annotations

import logging
import shlex
import subprocess
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np
import requests

from .audio import AudioFrame, RAW_PCM_DTYPE

log = logging.getLogger(__name__)

CHUNK_MS = 1000
CHUNK_OVERLAP_MS = 200
PROVIDER_RETRIES = 2  # retries after the first failed attempt


class FixtureError(Exception):
    """Raised for unreadable or malformed fixture files."""


class ProviderError(Exception):
    """Raised when a provider call fails (timeouts included)."""


@dataclass(frozen=True)
class TranscriptSegment:
    text: str
    start_ms: float
    end_ms: float
    provider: str
    segment_index: int
    confidence: float | None = None


@dataclass(frozen=True)
class AsrProviderSpec:
    kind: str  # fixture | external_process | http_service
    locator: str
    timeout_ms: int = 5000

    def __post_init__(self):
        if self.kind not in ("fixture", "external_process", "http_service"):
            raise ValueError(f"unknown ASR provider kind: {self.kind!r}")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be > 0")


def parse_fixture_line(line: str, lineno: int) -> tuple[float, float, str]:
    parts = line.split("\t")
    if len(parts) != 3:
        raise FixtureError(f"line {lineno}: expected start_ms<TAB>end_ms<TAB>text")
    try:
        start, end = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise FixtureError(f"line {lineno}: non-numeric timestamp") from exc
    if start > end:
        raise FixtureError(f"line {lineno}: start_ms {start:g} exceeds end_ms {end:g}")
    return start, end, parts[2]


class FixtureProvider:
    """Deterministic replay of a fixed segment list."""

    name = "fixture"

    def __init__(self, segments: list[TranscriptSegment]):
        self.segments = segments

    @classmethod
    def from_reference(cls, text: str, start_ms: float, end_ms: float) -> "FixtureProvider":
        return cls([TranscriptSegment(text, start_ms, end_ms, cls.name, 0)])

    def segments_through(self, t_ms: float, cursor: int) -> tuple[list[TranscriptSegment], int]:
        """Segments whose start time has been reached, from cursor onward."""
        out = []
        while cursor < len(self.segments) and self.segments[cursor].start_ms <= t_ms:
            out.append(self.segments[cursor])
            cursor += 1
        return out, cursor


def load_fixture(path: str) -> FixtureProvider:
    """Parse a fixture file, enforcing ordering and non-overlap at load."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise FixtureError(f"cannot read fixture {path}: {exc}") from exc
    segments: list[TranscriptSegment] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        start, end, text = parse_fixture_line(line, lineno)
        if segments and start < segments[-1].end_ms:
            raise FixtureError(
                f"line {lineno}: segment at {start:g} ms overlaps or precedes "
                f"the previous segment (ends {segments[-1].end_ms:g} ms)"
            )
        segments.append(
            TranscriptSegment(text, start, end, FixtureProvider.name, len(segments))
        )
    return FixtureProvider(segments)


def merge_overlap(previous_text: str, new_text: str) -> str:
    """Drop the longest word prefix of new_text that suffixes previous_text.

    Chunks overlap by 200 ms, so a provider usually re-emits the tail of the
    previous chunk; this strips the duplicate.
    """
    prev = previous_text.split()
    new = new_text.split()
    limit = min(len(prev), len(new))
    for k in range(limit, 0, -1):
        if [w.casefold() for w in prev[-k:]] == [w.casefold() for w in new[:k]]:
            return " ".join(new[k:])
    return new_text


def pcm_bytes(samples: np.ndarray) -> bytes:
    clipped = np.clip(samples, -1.0, 1.0)
    return (clipped * 32767.0).astype(RAW_PCM_DTYPE).tobytes()


class ChunkAssembler:
    """Rebuild contiguous audio from hop-overlapped frames and cut >=1 s
    chunks, each with a 200 ms lead-in of already-sent audio.

    Frames carry absolute positions (start_ms), so reconstruction needs no
    knowledge of the frame/hop geometry.
    """

    def __init__(self, sample_rate: int):
        self.sample_rate = sample_rate
        self._chunk = int(sample_rate * CHUNK_MS / 1000)
        self._overlap = int(sample_rate * CHUNK_OVERLAP_MS / 1000)
        self._buffer = np.zeros(0, dtype=np.float64)
        self._buffer_start = 0  # absolute sample position of buffer[0]
        self._covered = 0  # absolute end of reconstructed audio
        self._consumed = 0  # absolute end of the last emitted chunk

    def feed(self, frame: AudioFrame) -> list[tuple[np.ndarray, float, float]]:
        real = frame.samples
        if frame.pad_samples > 0:
            real = real[: len(real) - frame.pad_samples]
        pos = int(round(frame.start_ms * self.sample_rate / 1000.0))
        skip = self._covered - pos
        if skip < 0:
            # gap between frames (dropped upstream); keep the timeline aligned
            self._buffer = np.concatenate([self._buffer, np.zeros(-skip), real])
            self._covered = pos + real.size
        elif skip < real.size:
            self._buffer = np.concatenate([self._buffer, real[skip:]])
            self._covered = pos + real.size
        return self._cut(final=False)

    def flush(self) -> list[tuple[np.ndarray, float, float]]:
        return self._cut(final=True)

    def _cut(self, final: bool) -> list[tuple[np.ndarray, float, float]]:
        chunks = []
        while self._covered - self._consumed >= self._chunk:
            chunks.append(self._emit(self._consumed + self._chunk))
        if final and self._covered > self._consumed:
            chunks.append(self._emit(self._covered))
        return chunks

    def _emit(self, end: int) -> tuple[np.ndarray, float, float]:
        lead = max(self._buffer_start, self._consumed - self._overlap)
        chunk = self._buffer[lead - self._buffer_start : end - self._buffer_start]
        out = (chunk, self._to_ms(lead), self._to_ms(end))
        self._consumed = end
        keep = max(self._buffer_start, self._consumed - self._overlap)
        self._buffer = self._buffer[keep - self._buffer_start :]
        self._buffer_start = keep
        return out

    def _to_ms(self, sample_pos: int) -> float:
        return sample_pos / self.sample_rate * 1000.0


class HttpAsrProvider:
    """POSTs each audio chunk; expects {"text", "start_ms", "end_ms"}."""

    name = "http"

    def __init__(self, endpoint: str, timeout_ms: int):
        self.endpoint = endpoint
        self.timeout_s = timeout_ms / 1000.0

    def transcribe_chunk(self, chunk: np.ndarray, start_ms: float, end_ms: float) -> list[dict]:
        try:
            resp = requests.post(
                self.endpoint,
                data=pcm_bytes(chunk),
                headers={
                    "Content-Type": "application/octet-stream",
                    "X-Chunk-Start-Ms": str(int(start_ms)),
                    "X-Chunk-End-Ms": str(int(end_ms)),
                },
                timeout=self.timeout_s,
            )
            resp.raise_for_status()
            return [resp.json()]
        except requests.RequestException as exc:
            raise ProviderError(f"ASR HTTP call failed: {exc}") from exc

    def finish(self) -> list[dict]:
        return []

    def close(self):
        pass


class ExternalProcessProvider:
    """Streams PCM into a subprocess and reads fixture-format lines back."""

    name = "external_process"

    def __init__(self, command: str, timeout_ms: int):
        self.timeout_s = timeout_ms / 1000.0
        try:
            self._proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
            )
        except OSError as exc:
            raise ProviderError(f"cannot start ASR process {command!r}: {exc}") from exc
        self._lines: list[str] = []
        self._lock = threading.Lock()
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _read_loop(self):
        assert self._proc.stdout is not None
        for raw in self._proc.stdout:
            with self._lock:
                self._lines.append(raw.decode("utf-8", errors="replace"))

    def transcribe_chunk(self, chunk: np.ndarray, start_ms: float, end_ms: float) -> list[dict]:
        if self._proc.poll() is not None:
            raise ProviderError("ASR process exited")
        try:
            self._proc.stdin.write(pcm_bytes(chunk))
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProviderError(f"ASR process pipe failed: {exc}") from exc
        return self._drain()

    def _drain(self) -> list[dict]:
        with self._lock:
            lines, self._lines = self._lines, []
        out = []
        for lineno, line in enumerate(lines, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            start, end, text = parse_fixture_line(line, lineno)
            out.append({"text": text, "start_ms": start, "end_ms": end})
        return out

    def finish(self) -> list[dict]:
        """Close the input pipe and collect whatever the process still emits."""
        try:
            if self._proc.stdin:
                self._proc.stdin.close()
            self._proc.wait(timeout=self.timeout_s)
        except (OSError, subprocess.TimeoutExpired):
            self._proc.kill()
        self._reader.join(timeout=self.timeout_s)
        return self._drain()

    def close(self):
        if self._proc.poll() is None:
            self._proc.kill()


StatusCallback = Callable[[str, str], None]


class SegmentFeed:
    """Frame-driven segment production shared by batch and live pipelines.

    Feed frames in order; collect finished TranscriptSegments. Fixture
    providers replay their segments as stream time passes them. Chunked
    providers (process/HTTP) get >=1 s chunks with 200 ms overlap and
    duplicated overlap text merged away. After PROVIDER_RETRIES failed
    retries the feed goes degraded: the status callback fires once and
    remaining audio is swallowed without further provider calls.
    """

    def __init__(
        self,
        provider: AsrProviderSpec | FixtureProvider,
        on_status: StatusCallback | None = None,
    ):
        self._notify = on_status or (lambda state, detail: None)
        self.degraded = False
        self._fixture: FixtureProvider | None = None
        self._backend = None
        self._cursor = 0
        self._assembler: ChunkAssembler | None = None
        self._segment_index = 0
        self._previous_text = ""
        self._last_end = 0.0
        if isinstance(provider, FixtureProvider):
            self._fixture = provider
        elif provider.kind == "fixture":
            self._fixture = load_fixture(provider.locator)  # fails at start
        elif provider.kind == "http_service":
            self._backend = HttpAsrProvider(provider.locator, provider.timeout_ms)
        else:
            self._backend = ExternalProcessProvider(provider.locator, provider.timeout_ms)

    def feed(self, frame: AudioFrame) -> list[TranscriptSegment]:
        if self._fixture is not None:
            due, self._cursor = self._fixture.segments_through(frame.end_ms, self._cursor)
            return due
        if self._assembler is None:
            self._assembler = ChunkAssembler(frame.sample_rate)
        if self.degraded:
            return []
        out = []
        for chunk, start_ms, end_ms in self._assembler.feed(frame):
            records = self._call_with_retries(chunk, start_ms, end_ms)
            if records is None:
                break
            out.extend(self._to_segments(records, start_ms, end_ms))
        return out

    def finish(self) -> list[TranscriptSegment]:
        """Flush trailing audio / remaining fixture segments at stream end."""
        if self._fixture is not None:
            rest = self._fixture.segments[self._cursor :]
            self._cursor = len(self._fixture.segments)
            return list(rest)
        out = []
        if self._assembler is not None and not self.degraded:
            for chunk, start_ms, end_ms in self._assembler.flush():
                records = self._call_with_retries(chunk, start_ms, end_ms)
                if records is not None:
                    out.extend(self._to_segments(records, start_ms, end_ms))
        if self._backend is not None and not self.degraded:
            out.extend(self._to_segments(self._backend.finish(), self._last_end, self._last_end))
        return out

    def close(self):
        if self._backend is not None:
            self._backend.close()

    def _call_with_retries(self, chunk, start_ms, end_ms):
        for attempt in range(1 + PROVIDER_RETRIES):
            try:
                return self._backend.transcribe_chunk(chunk, start_ms, end_ms)
            except ProviderError as exc:
                log.warning("ASR attempt %d failed: %s", attempt + 1, exc)
                if attempt == PROVIDER_RETRIES:
                    self.degraded = True
                    self._notify("degraded", f"ASR provider failed after retries: {exc}")
        return None

    def _to_segments(self, records, chunk_start, chunk_end):
        out = []
        for rec in records:
            raw_text = str(rec.get("text", "")).strip()
            text = merge_overlap(self._previous_text, raw_text)
            if not text:
                continue
            start = float(rec.get("start_ms", chunk_start))
            end = float(rec.get("end_ms", chunk_end))
            start = max(start, self._last_end)  # keep segments non-overlapping
            end = max(end, start)
            seg = TranscriptSegment(text, start, end, self._backend.name, self._segment_index)
            self._segment_index += 1
            self._previous_text = raw_text or self._previous_text
            self._last_end = end
            out.append(seg)
        return out


def transcribe_stream(
    frames: Iterable[AudioFrame],
    provider: AsrProviderSpec | FixtureProvider,
    on_status: StatusCallback | None = None,
) -> Iterator[TranscriptSegment]:
    """Turn a frame stream into an ordered segment stream.

    Transcript-path failures degrade this stream only; they can never
    stall or reorder the frames being consumed.
    """
    feed = SegmentFeed(provider, on_status)
    try:
        for frame in frames:
            yield from feed.feed(frame)
        yield from feed.finish()
    finally:
        feed.close()
