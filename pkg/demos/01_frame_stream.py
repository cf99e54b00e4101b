"""Feed a WAV file through the frame stream and watch the pacing.

Every source (WAV file, raw PCM pipe, live-capture adapter) becomes the
same thing: fixed 2048-sample frames at 16 kHz, hopping every 512 samples
(32 ms). Here we synthesize one second of tone, write it to disk, then
replay it twice: once as fast as possible, once paced like live audio.
"""
import tempfile
import time
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from tonescope.audio import open_source, replay_paced

workdir = Path(tempfile.mkdtemp(prefix="tonescope_demo_"))
sr = 16000
t = np.arange(sr) / sr
tone = 0.4 * np.sin(2 * np.pi * 220 * t)
wav = workdir / "tone.wav"
wavfile.write(wav, sr, (tone * 32767).astype(np.int16))

print(f"wrote {wav}")

# batch: all frames immediately
frames = list(open_source(str(wav)))
print(f"{len(frames)} frames ({sum(1 for f in frames if f.pad_samples == 0)} full, "
      f"{sum(1 for f in frames if f.pad_samples)} zero-padded tail)")
print(f"frame 0: start={frames[0].start_ms:.0f} ms, {len(frames[0].samples)} samples")
print(f"frame 5: start={frames[5].start_ms:.0f} ms  (index x 32 ms)")

# paced: wall-clock spacing equals the hop duration
print("\nreplaying first 10 frames at speed 1.0 (expect ~32 ms spacing):")
t0 = time.monotonic()
for frame in replay_paced(iter(open_source(str(wav))), speed=1.0):
    if frame.frame_index >= 10:
        break
    print(f"  frame {frame.frame_index:2d} arrived at {1000 * (time.monotonic() - t0):6.1f} ms")
