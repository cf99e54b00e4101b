import numpy as np
import pytest
from scipy.io import wavfile

SR = 16000


def sine(freq, duration_s, sr=SR, amplitude=0.5, phase=0.0):
    t = np.arange(int(duration_s * sr)) / sr
    return amplitude * np.sin(2 * np.pi * freq * t + phase)


def pitched_tone(f0_curve, sr=SR, amplitude=0.3):
    """Phase-continuous tone following a per-sample F0 curve."""
    phase = 2.0 * np.pi * np.cumsum(f0_curve) / sr
    return amplitude * np.sin(phase)


def write_wav(path, samples, sr=SR):
    wavfile.write(str(path), sr, (np.clip(samples, -1, 1) * 32767).astype(np.int16))
    return str(path)


@pytest.fixture
def wav_factory(tmp_path):
    counter = {"n": 0}

    def make(samples, sr=SR, name=None):
        counter["n"] += 1
        name = name or f"clip_{counter['n']}.wav"
        return write_wav(tmp_path / name, samples, sr)

    return make


@pytest.fixture
def lexicon_paths(tmp_path):
    """Small custom lexicon for tests that need controlled contents."""

    def make(positive, negative, pos_name="pos.txt", neg_name="neg.txt"):
        pos = tmp_path / pos_name
        neg = tmp_path / neg_name
        pos.write_text("; positive\n" + "\n".join(positive) + "\n")
        neg.write_text("; negative\n" + "\n".join(negative) + "\n")
        return str(pos), str(neg)

    return make
