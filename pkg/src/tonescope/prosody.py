"""Local prosody extraction: per-frame F0, RMS energy, and pitch bands.

This is the acoustic path. Everything here is pure local computation on
one frame plus a small per-speaker state — by construction it performs no
network access, so tone cues keep flowing whatever happens to transcription.
"""
from __future__ import annotations

import statistics
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

from .audio import AudioFrame

F0_MIN_HZ = 60.0
F0_MAX_HZ = 400.0
YIN_THRESHOLD = 0.15
SILENCE_RMS = 0.01

# Speaker-relative band thresholds: ratios against the running median, so
# the same rule works for any voice register.
HIGH_BAND_RATIO = 1.15
LOW_BAND_RATIO = 0.90

CALIBRATION_VOICED_FRAMES = 50
BASELINE_HISTORY = 600
SMOOTH_WINDOW = 5


class PitchBand(str, Enum):
    LOW = "low"
    MID = "mid"
    HIGH = "high"
    UNVOICED = "unvoiced"


@dataclass(frozen=True)
class ProsodyFrame:
    frame_index: int
    time_ms: float
    f0_hz: float | None
    rms: float
    voiced: bool
    band: PitchBand


def compute_rms(samples: np.ndarray) -> float:
    """Root-mean-square energy, in [0, 1] for samples in [-1, 1]."""
    if samples.size == 0:
        raise ValueError("cannot compute RMS of an empty frame")
    return float(np.sqrt(np.mean(np.square(samples, dtype=np.float64))))


def _difference_function(x: np.ndarray, max_tau: int) -> np.ndarray:
    """d[tau] = sum_{j<W} (x[j] - x[j+tau])^2 for tau in [0, max_tau].

    The window W = len(x) - max_tau is fixed across lags (a shrinking
    window biases the dip location and hence the pitch), and the
    correlation term is computed via FFT.
    """
    n = x.size
    w = n - max_tau
    fft_size = 1 << (n - 1).bit_length()
    spectrum = np.fft.rfft(x, fft_size)
    window_spectrum = np.fft.rfft(x[:w], fft_size)
    corr = np.fft.irfft(spectrum * np.conj(window_spectrum))[: max_tau + 1]
    energy = np.cumsum(np.square(x, dtype=np.float64))
    taus = np.arange(max_tau + 1)
    window_energy = energy[w - 1]
    shifted = energy[taus + w - 1] - np.concatenate(([0.0], energy[: max_tau]))
    d = window_energy + shifted - 2.0 * corr
    d[0] = 0.0
    return np.maximum(d, 0.0)


def _cumulative_mean_normalized(d: np.ndarray) -> np.ndarray:
    out = np.ones_like(d)
    running = np.cumsum(d[1:])
    nonzero = running > 0
    out[1:][nonzero] = d[1:][nonzero] * np.arange(1, d.size)[nonzero] / running[nonzero]
    out[1:][~nonzero] = 1.0
    return out


def _parabolic_interpolate(values: np.ndarray, idx: int) -> float:
    if idx <= 0 or idx >= values.size - 1:
        return float(idx)
    left, mid, right = values[idx - 1], values[idx], values[idx + 1]
    denom = left - 2.0 * mid + right
    if denom == 0.0:
        return float(idx)
    return idx + 0.5 * (left - right) / denom


def estimate_f0(
    samples: np.ndarray,
    sample_rate: int,
    f0_min: float = F0_MIN_HZ,
    f0_max: float = F0_MAX_HZ,
    threshold: float = YIN_THRESHOLD,
) -> tuple[float | None, bool]:
    """Difference-function (YIN-style) pitch estimate over [f0_min, f0_max].

    Returns (f0_hz, voiced). A frame is unvoiced when its RMS is under the
    silence gate or no normalized-difference dip falls below the threshold
    (aperiodic content). The chosen lag is refined by parabolic
    interpolation for sub-sample accuracy.
    """
    min_len = int(2 * sample_rate / f0_min)
    if samples.size < min_len:
        raise ValueError(
            f"frame of {samples.size} samples is too short for F0 down to "
            f"{f0_min:g} Hz (need >= {min_len})"
        )
    if compute_rms(samples) < SILENCE_RMS:
        return None, False

    tau_min = int(sample_rate / f0_max)
    tau_max = int(np.ceil(sample_rate / f0_min))
    d = _difference_function(samples, tau_max + 1)
    cmndf = _cumulative_mean_normalized(d)

    tau = None
    t = tau_min
    while t <= tau_max:
        if cmndf[t] < threshold:
            # descend to the bottom of this dip
            while t + 1 <= tau_max and cmndf[t + 1] < cmndf[t]:
                t += 1
            tau = t
            break
        t += 1
    if tau is None:
        return None, False

    # interpolate on the raw difference function: the cumulative-mean ramp
    # in the normalized curve skews the parabola
    refined = _parabolic_interpolate(d, tau)
    f0 = sample_rate / refined
    return float(np.clip(f0, f0_min, f0_max)), True


class SpeakerBaseline:
    """Running median of voiced F0 over a bounded history.

    Calibration completes after CALIBRATION_VOICED_FRAMES voiced frames;
    until then the median is reported but the speaker is not "calibrated"
    and band classification stays neutral.
    """

    def __init__(
        self,
        calibration_frames: int = CALIBRATION_VOICED_FRAMES,
        history: int = BASELINE_HISTORY,
    ):
        self._history: deque[float] = deque(maxlen=history)
        self._calibration_frames = calibration_frames
        self.voiced_seen = 0

    @property
    def window_frames(self) -> int:
        return len(self._history)

    @property
    def calibrated(self) -> bool:
        return self.voiced_seen >= self._calibration_frames

    @property
    def median_f0_hz(self) -> float | None:
        if not self._history:
            return None
        return float(statistics.median(self._history))


def update_baseline(baseline: SpeakerBaseline, frame: ProsodyFrame) -> SpeakerBaseline:
    """Fold one prosody frame into the baseline. Unvoiced frames are no-ops."""
    if frame.voiced and frame.f0_hz is not None:
        baseline._history.append(frame.f0_hz)
        baseline.voiced_seen += 1
    return baseline


def classify_band(f0_hz: float, baseline: SpeakerBaseline) -> PitchBand:
    """Speaker-relative band: High above +15% of the median, Low below -10%.

    Before calibration every voiced frame is Mid — a neutral default beats
    banding against a median built from a handful of frames.
    """
    if not baseline.calibrated:
        return PitchBand.MID
    median = baseline.median_f0_hz
    if f0_hz > HIGH_BAND_RATIO * median:
        return PitchBand.HIGH
    if f0_hz < LOW_BAND_RATIO * median:
        return PitchBand.LOW
    return PitchBand.MID


def smooth(frames: Iterable[ProsodyFrame], window: int = SMOOTH_WINDOW) -> Iterator[ProsodyFrame]:
    """Median-filter F0 over voiced neighbors in a centered window.

    Voicing, RMS, and band are untouched; unvoiced frames pass through.
    Output lags input by at most window//2 frames.
    """
    half = window // 2
    buffer: deque[ProsodyFrame] = deque()

    def released(center: int) -> ProsodyFrame:
        frame = buffer[center]
        if not frame.voiced:
            return frame
        lo = max(0, center - half)
        neighbors = [
            f.f0_hz
            for f in list(buffer)[lo : center + half + 1]
            if f.voiced and f.f0_hz is not None
        ]
        return replace(frame, f0_hz=float(statistics.median(neighbors)))

    for frame in frames:
        buffer.append(frame)
        if len(buffer) > window:
            buffer.popleft()
        if len(buffer) > half:
            yield released(len(buffer) - 1 - half)
    # flush the trailing half-window with shrinking right context
    for center in range(max(0, len(buffer) - half), len(buffer)):
        yield released(center)


class ProsodyTracker:
    """Per-session acoustic chain: estimate -> smooth -> baseline -> band.

    ``process`` returns zero or more finished ProsodyFrames (the median
    smoother holds back up to 2 frames); call ``flush`` at stream end.
    """

    def __init__(self, baseline: SpeakerBaseline | None = None):
        self.baseline = baseline or SpeakerBaseline()
        self._pending: deque[ProsodyFrame] = deque()
        self._half = SMOOTH_WINDOW // 2

    def _finalize(self, frame: ProsodyFrame) -> ProsodyFrame:
        update_baseline(self.baseline, frame)
        if frame.voiced and frame.f0_hz is not None:
            band = classify_band(frame.f0_hz, self.baseline)
        else:
            band = PitchBand.UNVOICED
        return replace(frame, band=band)

    def _smoothed(self, center: int) -> ProsodyFrame:
        frame = self._pending[center]
        if not frame.voiced:
            return frame
        lo = max(0, center - self._half)
        neighbors = [
            f.f0_hz
            for f in list(self._pending)[lo : center + self._half + 1]
            if f.voiced and f.f0_hz is not None
        ]
        return replace(frame, f0_hz=float(statistics.median(neighbors)))

    def process(self, frame: AudioFrame) -> list[ProsodyFrame]:
        rms = compute_rms(frame.samples)
        f0, voiced = estimate_f0(frame.samples, frame.sample_rate)
        raw = ProsodyFrame(
            frame_index=frame.frame_index,
            time_ms=frame.start_ms,
            f0_hz=f0,
            rms=rms,
            voiced=voiced,
            band=PitchBand.UNVOICED,
        )
        self._pending.append(raw)
        out = []
        if len(self._pending) > 2 * self._half + 1:
            self._pending.popleft()
        if len(self._pending) > self._half:
            out.append(self._finalize(self._smoothed(len(self._pending) - 1 - self._half)))
        return out

    def flush(self) -> list[ProsodyFrame]:
        out = []
        for center in range(max(0, len(self._pending) - self._half), len(self._pending)):
            out.append(self._finalize(self._smoothed(center)))
        self._pending.clear()
        return out
