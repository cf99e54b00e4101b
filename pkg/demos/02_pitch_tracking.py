"""Track pitch and loudness through a tone that rises, falls, and pauses.

The prosody chain runs entirely locally: YIN-style F0 per frame, RMS
energy, a median smoother, and a per-speaker baseline that turns absolute
Hz into speaker-relative Low/Mid/High bands. Saves a two-strip plot
(amplitude above pitch, band color-coded) next to this script.
"""
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tonescope.audio import FrameConfig, frame_signal
from tonescope.prosody import PitchBand, ProsodyTracker

sr = 16000

# 8 s story: 3 s steady (calibration), 1 s silence, 2 s high, 2 s low
def tone(f0, seconds):
    return np.cumsum(np.full(int(seconds * sr), f0))

phases = np.concatenate([tone(150, 3.0), np.zeros(sr), tone(195, 2.0), tone(120, 2.0)])
signal = 0.35 * np.sin(2 * np.pi * phases / sr)
signal[3 * sr : 4 * sr] = 0.0  # true silence for the pause

tracker = ProsodyTracker()
frames = []
for frame in frame_signal(signal, FrameConfig(2048, 512, sr)):
    frames.extend(tracker.process(frame))
frames.extend(tracker.flush())

print(f"{len(frames)} prosody frames; baseline median "
      f"{tracker.baseline.median_f0_hz:.1f} Hz (calibrated={tracker.baseline.calibrated})")
for mark in (1.0, 3.5, 5.0, 7.5):
    frame = min(frames, key=lambda f: abs(f.time_ms - mark * 1000))
    f0 = f"{frame.f0_hz:6.1f} Hz" if frame.f0_hz else "   --   "
    print(f"  t={mark:3.1f}s  f0={f0}  rms={frame.rms:.3f}  band={frame.band.value}")

band_colors = {
    PitchBand.HIGH: "tab:red",
    PitchBand.MID: "tab:gray",
    PitchBand.LOW: "tab:blue",
    PitchBand.UNVOICED: "none",
}
times = [f.time_ms / 1000 for f in frames]
fig, (ax_amp, ax_pitch) = plt.subplots(2, 1, sharex=True, figsize=(9, 5))
ax_amp.fill_between(times, [f.rms for f in frames], color="tab:green", alpha=0.6)
ax_amp.set_ylabel("RMS")
ax_pitch.scatter(
    times,
    [f.f0_hz if f.f0_hz else np.nan for f in frames],
    c=[band_colors[f.band] for f in frames],
    s=8,
)
ax_pitch.set_ylabel("F0 (Hz)")
ax_pitch.set_xlabel("time (s)")
out = Path(__file__).with_name("pitch_tracking.png")
fig.savefig(out, dpi=110, bbox_inches="tight")
print(f"saved {out}")
