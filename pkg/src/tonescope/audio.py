"""Audio sources: WAV/raw-PCM decoding, mono framing, and real-time pacing.

Every source is reduced to the same thing: an ordered stream of fixed-size
float frames at the canonical 16 kHz rate. Downstream stages never see
channels, bit depths, or foreign sample rates.
"""
from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np
from scipy.io import wavfile

CANONICAL_RATE = 16000
DEFAULT_FRAME_SIZE = 2048
DEFAULT_HOP_SIZE = 512

# Raw little-endian 16-bit PCM, the live-capture pipe contract.
RAW_PCM_DTYPE = "<i2"


class SourceError(Exception):
    """Raised when an audio source cannot be opened or decoded."""


@dataclass(frozen=True)
class FrameConfig:
    frame_size: int = DEFAULT_FRAME_SIZE
    hop_size: int = DEFAULT_HOP_SIZE
    sample_rate: int = CANONICAL_RATE

    def __post_init__(self):
        if self.frame_size <= 0 or self.hop_size <= 0:
            raise ValueError("frame_size and hop_size must be positive")
        if self.hop_size > self.frame_size:
            raise ValueError("hop_size must not exceed frame_size")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    @property
    def hop_ms(self) -> float:
        return self.hop_size / self.sample_rate * 1000.0


@dataclass(frozen=True)
class AudioFrame:
    """One fixed-size window of mono samples in [-1, 1].

    ``pad_samples`` counts trailing zeros appended to the final frame of a
    finite source; it is 0 for every other frame.
    """

    samples: np.ndarray
    sample_rate: int
    start_ms: float
    frame_index: int
    pad_samples: int = 0

    @property
    def duration_ms(self) -> float:
        return len(self.samples) / self.sample_rate * 1000.0

    @property
    def end_ms(self) -> float:
        return self.start_ms + self.duration_ms


@dataclass
class SessionClock:
    """Wall-clock anchor for a replayed or live session."""

    session_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    origin_epoch_ms: float = field(default_factory=lambda: time.time() * 1000.0)
    speed: float = 1.0

    def __post_init__(self):
        if self.speed <= 0:
            raise ValueError("replay speed must be > 0")


def _normalize_pcm(data: np.ndarray) -> np.ndarray:
    """Map integer/float PCM to float64 in [-1, 1]."""
    if data.dtype == np.uint8:
        out = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype == np.int16:
        out = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        # scipy returns 24-bit PCM as int32 with the low byte zeroed
        out = data.astype(np.float64) / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        out = data.astype(np.float64)
    else:
        raise SourceError(f"unsupported PCM sample type: {data.dtype}")
    return np.clip(out, -1.0, 1.0)


def downmix(samples: np.ndarray) -> np.ndarray:
    """Average channels to mono. 1-D input passes through."""
    if samples.ndim == 1:
        return samples
    return samples.mean(axis=1)


def resample_linear(samples: np.ndarray, src_rate: int, dst_rate: int) -> np.ndarray:
    """Linear-interpolation resampling. Lossy above dst_rate/2; fine for prosody."""
    if src_rate == dst_rate or samples.size == 0:
        return samples
    duration = samples.size / src_rate
    n_out = int(round(duration * dst_rate))
    t_out = np.arange(n_out) / dst_rate
    t_in = np.arange(samples.size) / src_rate
    return np.interp(t_out, t_in, samples)


def decode_wav(path: str, target_rate: int = CANONICAL_RATE) -> np.ndarray:
    """Decode a RIFF PCM WAV file to mono float64 at target_rate."""
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError as exc:
        raise SourceError(f"cannot open audio source: {path}") from exc
    except ValueError as exc:
        raise SourceError(f"unsupported WAV encoding in {path}: {exc}") from exc
    if data.size == 0:
        return np.zeros(0, dtype=np.float64)
    mono = downmix(_normalize_pcm(data))
    return resample_linear(mono, rate, target_rate)


def frame_signal(samples: np.ndarray, config: FrameConfig) -> Iterator[AudioFrame]:
    """Cut a finite signal into hop-spaced frames.

    Full frames are emitted for every window that fits; if a tail remains,
    exactly one final frame is emitted zero-padded to full size with
    ``pad_samples`` set.
    """
    n = samples.size
    frame, hop = config.frame_size, config.hop_size
    index = 0
    start = 0
    while start + frame <= n:
        yield AudioFrame(
            samples=samples[start : start + frame],
            sample_rate=config.sample_rate,
            start_ms=index * config.hop_ms,
            frame_index=index,
        )
        index += 1
        start = index * hop
    if start < n:
        tail = samples[start:]
        padded = np.zeros(frame, dtype=samples.dtype)
        padded[: tail.size] = tail
        yield AudioFrame(
            samples=padded,
            sample_rate=config.sample_rate,
            start_ms=index * config.hop_ms,
            frame_index=index,
            pad_samples=frame - tail.size,
        )


class StreamFramer:
    """Incremental framer for non-seekable byte/sample streams.

    Feed sample blocks as they arrive; overlapping frames are emitted as
    soon as they complete. ``flush()`` emits the final padded frame.
    """

    def __init__(self, config: FrameConfig):
        self.config = config
        self._buffer = np.zeros(0, dtype=np.float64)
        self._index = 0

    def feed(self, samples: np.ndarray) -> Iterator[AudioFrame]:
        self._buffer = np.concatenate([self._buffer, samples])
        frame, hop = self.config.frame_size, self.config.hop_size
        while self._buffer.size >= frame:
            yield AudioFrame(
                samples=self._buffer[:frame].copy(),
                sample_rate=self.config.sample_rate,
                start_ms=self._index * self.config.hop_ms,
                frame_index=self._index,
            )
            self._buffer = self._buffer[hop:]
            self._index += 1

    def flush(self) -> Iterator[AudioFrame]:
        if self._buffer.size > 0:
            frame = self.config.frame_size
            padded = np.zeros(frame, dtype=np.float64)
            padded[: self._buffer.size] = self._buffer
            yield AudioFrame(
                samples=padded,
                sample_rate=self.config.sample_rate,
                start_ms=self._index * self.config.hop_ms,
                frame_index=self._index,
                pad_samples=frame - self._buffer.size,
            )
            self._buffer = np.zeros(0, dtype=np.float64)
            self._index += 1


# Registry of live-capture adapters: name -> callable yielding raw PCM byte
# blocks (little-endian int16, 16 kHz, mono), e.g. reads from a pipe.
_capture_adapters: dict[str, Callable[[], Iterable[bytes]]] = {}


def register_capture_adapter(name: str, reader: Callable[[], Iterable[bytes]]):
    _capture_adapters[name] = reader


def _raw_block_stream(path: str, block_bytes: int = 4096) -> Iterator[bytes]:
    # open eagerly so a bad path fails at open_source(), not mid-stream
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise SourceError(f"cannot open raw PCM source: {path}") from exc

    def blocks() -> Iterator[bytes]:
        with fh:
            while True:
                block = fh.read(block_bytes)
                if not block:
                    return
                yield block

    return blocks()


def _frames_from_byte_stream(blocks: Iterable[bytes], config: FrameConfig) -> Iterator[AudioFrame]:
    framer = StreamFramer(config)
    pending = b""
    for block in blocks:
        pending += block
        usable = len(pending) - (len(pending) % 2)
        if usable == 0:
            continue
        samples = np.frombuffer(pending[:usable], dtype=RAW_PCM_DTYPE).astype(np.float64) / 32768.0
        pending = pending[usable:]
        yield from framer.feed(samples)
    yield from framer.flush()


class FrameSource:
    """Handle over an opened source: an ordered, single-pass frame stream."""

    def __init__(self, uri: str, config: FrameConfig, frames: Iterator[AudioFrame]):
        self.uri = uri
        self.config = config
        self._frames = frames

    def __iter__(self) -> Iterator[AudioFrame]:
        return self._frames


def open_source(uri: str, config: FrameConfig | None = None) -> FrameSource:
    """Open a WAV file, raw-PCM pipe (``raw:/path``), or registered
    live-capture adapter (``capture:name``) as a frame stream.
    """
    config = config or FrameConfig()
    if uri.startswith("capture:"):
        name = uri.split(":", 1)[1]
        if name not in _capture_adapters:
            raise SourceError(f"no capture adapter registered under {name!r}")
        frames = _frames_from_byte_stream(_capture_adapters[name](), config)
    elif uri.startswith("raw:"):
        frames = _frames_from_byte_stream(_raw_block_stream(uri.split(":", 1)[1]), config)
    else:
        samples = decode_wav(uri, config.sample_rate)
        frames = frame_signal(samples, config)
    return FrameSource(uri, config, frames)


def replay_paced(
    frames: Iterable[AudioFrame],
    speed: float = 1.0,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
) -> Iterator[AudioFrame]:
    """Re-emit frames with wall-clock spacing of hop/speed.

    Pacing follows an absolute schedule anchored at the first frame, so
    sleep jitter does not accumulate. Content and order are untouched.
    """
    if speed <= 0:
        raise ValueError("replay speed must be > 0")
    origin = None
    for frame in frames:
        if origin is None:
            origin = clock()
        else:
            due = origin + (frame.start_ms / 1000.0) / speed
            delay = due - clock()
            if delay > 0:
                sleep(delay)
        yield frame
