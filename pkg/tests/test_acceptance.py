"""Acceptance suite: one test per release criterion, at stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion. The real-time isolation criterion replays 60 s of audio at
speed 1.0, so the suite takes a bit over a minute end to end.
"""
import http.server
import json
import random
import subprocess
import sys
import threading
import time
from functools import lru_cache

import numpy as np
import pytest

from tonescope.corpus import build_corpus, build_two_tone_demo
from tonescope.evaluation import align_words, compute_wer, run_corpus
from tonescope.fusion import FusedLabel, demo_scenario
from tonescope.prosody import estimate_f0
from tonescope.sentiment import BAR_CAPACITY, KeywordBar, SentimentHit, load_bundled_lexicon, update_bar
from tonescope.session import Session, SessionConfig
from conftest import SR, pitched_tone, sine, write_wav

PASS = "ACCEPTANCE PASS"


def report(name, detail=""):
    print(f"{PASS}: {name}" + (f" ({detail})" if detail else ""))


# -- 1. WER oracle equivalence ------------------------------------------------

def brute_distance(ref, hyp):
    ref, hyp = tuple(ref), tuple(hyp)

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j - 1) + (ref[i - 1] != hyp[j - 1]),
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
        )

    return d(len(ref), len(hyp))


def test_wer_oracle_equivalence():
    started = time.monotonic()
    vocab = ["ga", "bu", "zo"]
    rng = random.Random(1789)
    checked = 0
    for _ in range(10_000):
        ref = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
        hyp = [rng.choice(vocab) for _ in range(rng.randint(0, 6))]
        distance, ops = align_words(ref, hyp)
        expected = brute_distance(ref, hyp)
        assert distance == expected, (ref, hyp)
        wer = compute_wer(" ".join(ref), " ".join(hyp))
        assert wer.wer == expected / len(ref)
        assert wer.substitutions + wer.deletions + wer.insertions == expected
        checked += 1
    # the one-in-ten example: 100 reference words, 10 substituted
    ref = [f"w{i}" for i in range(100)]
    hyp = ["SUB" if i % 10 == 0 else w for i, w in enumerate(ref)]
    assert compute_wer(" ".join(ref), " ".join(hyp)).wer == 0.10
    elapsed = time.monotonic() - started
    assert elapsed < 60.0
    report("WER oracle equivalence", f"{checked} random pairs + 10/100 case, {elapsed:.1f}s")


# -- 2. F0 accuracy -----------------------------------------------------------

def test_f0_accuracy():
    started = time.monotonic()
    frame_len = 2048
    # steady tones
    for freq in (80, 120, 180, 250, 350):
        signal = sine(freq, 1.0, amplitude=0.5, phase=0.4)
        for start in range(0, signal.size - frame_len + 1, 512):
            f0, voiced = estimate_f0(signal[start : start + frame_len], SR)
            assert voiced, freq
            assert abs(f0 - freq) / freq < 0.02, (freq, f0)
            for wrong in (freq / 2, freq * 2):
                assert abs(f0 - wrong) / wrong > 0.02, (freq, f0)
    # linear 100 -> 300 Hz sweep, per-frame error vs frame-center truth
    duration = 10.0
    slope = (300.0 - 100.0) / duration
    t = np.arange(int(duration * SR)) / SR
    sweep = 0.4 * np.sin(2 * np.pi * (100.0 * t + 0.5 * slope * t * t))
    frames = 0
    for start in range(0, sweep.size - frame_len + 1, 512):
        truth = 100.0 + slope * ((start + frame_len / 2) / SR)
        f0, voiced = estimate_f0(sweep[start : start + frame_len], SR)
        assert voiced
        assert abs(f0 - truth) / truth < 0.02, (truth, f0)
        for wrong in (truth / 2, truth * 2):
            assert abs(f0 - wrong) / wrong > 0.02
        frames += 1
    # silence and white noise classify unvoiced
    assert estimate_f0(np.zeros(frame_len), SR) == (None, False)
    rng = np.random.default_rng(99)
    for _ in range(20):
        noise = rng.standard_normal(frame_len)
        noise = 0.3 * noise / np.max(np.abs(noise))
        _, voiced = estimate_f0(noise, SR)
        assert not voiced
    elapsed = time.monotonic() - started
    assert elapsed < 10.0
    report("F0 accuracy", f"5 tones + {frames}-frame sweep, <2% error, {elapsed:.1f}s")


# -- 3. lexicon fidelity ------------------------------------------------------

def test_lexicon_fidelity():
    lexicon = load_bundled_lexicon()
    assert len(lexicon.positive) == 2006
    assert len(lexicon.negative) == 4783
    rng = random.Random(4)
    vocab = [f"word{i}" for i in range(40)]
    bar = KeywordBar()
    for event in range(100_000):
        hit = SentimentHit(
            word=rng.choice(vocab),
            polarity=rng.choice((1, -1)),
            segment_index=event,
            position=0,
            time_ms=float(event),
        )
        bar = update_bar(bar, [hit])
        assert len(bar.entries) <= BAR_CAPACITY
    report("Lexicon fidelity", "2006/4783 entries; bar <= 5 over 100k events")


# -- 4. demo-scenario reproduction ---------------------------------------------

def test_demo_scenario_reproduction(tmp_path):
    wav_high, wav_low, fixture = build_two_tone_demo(str(tmp_path))
    snaps_high, snaps_low = demo_scenario(wav_high, wav_low, fixture)  # bars checked inside
    labels_high = [s.fused_label for s in snaps_high]
    labels_low = [s.fused_label for s in snaps_low]
    assert FusedLabel.ACTIVE_POSITIVE in labels_high
    assert FusedLabel.MIXED_CALM_POSITIVE in labels_low
    low_hits = [s for s in snaps_low if s.fused_label == FusedLabel.MIXED_CALM_POSITIVE]
    assert all(s.discrepancy for s in low_hits)
    assert labels_high != labels_low
    report(
        "Demo-scenario reproduction",
        "identical bars; active_positive vs mixed_calm_positive+discrepancy",
    )


# -- 5. real-time isolation -----------------------------------------------------

class _NeverRespondingAsr(http.server.BaseHTTPRequestHandler):
    def do_POST(self):
        time.sleep(30)  # longer than any client timeout

    def log_message(self, *args):
        pass


class _SleepingSuggestionProvider:
    name = "sleeper"

    def complete(self, prompt):
        time.sleep(10)
        return "eventually"


@pytest.mark.slow
def test_realtime_isolation(tmp_path):
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _NeverRespondingAsr)
    server.daemon_threads = True
    threading.Thread(target=server.serve_forever, daemon=True).start()

    # 60 s of fully voiced audio with gentle vibrato
    duration = 60.0
    t = np.arange(int(duration * SR)) / SR
    f0_curve = 155.0 + 10.0 * np.sin(2 * np.pi * 0.4 * t)
    path = write_wav(tmp_path / "minute.wav", pitched_tone(f0_curve))

    config = SessionConfig(
        source=path,
        asr_kind="http_service",
        asr_locator=f"http://127.0.0.1:{server.server_port}/asr",
        asr_timeout_ms=5000,
        suggestion_provider=_SleepingSuggestionProvider(),
        speed=1.0,
    )
    session = Session(config)
    subscription = session.subscribe()
    session.start()

    stop_requesting = threading.Event()

    def keep_requesting():
        while not stop_requesting.wait(5.0):
            session.request_suggestion()

    requester = threading.Thread(target=keep_requesting, daemon=True)
    requester.start()

    arrivals = []
    kinds = {}
    for event in subscription:
        kinds[event.kind] = kinds.get(event.kind, 0) + 1
        if event.kind == "prosody":
            arrivals.append(time.monotonic())
    stop_requesting.set()
    session.join(timeout=30)
    server.shutdown()

    gaps = np.diff(arrivals) * 1000.0
    hop_ms = 32.0
    within = float(np.mean(gaps <= 2 * hop_ms))
    assert len(arrivals) > 1500
    assert kinds.get("status", 0) >= 2  # started + degraded + ended
    assert within >= 0.95, f"only {within:.1%} of gaps within {2 * hop_ms} ms"
    report(
        "Real-time isolation",
        f"{within:.2%} of {len(gaps)} prosody gaps <= 64 ms under provider stalls",
    )


# -- 6. controlled-WER harness ---------------------------------------------------

@pytest.mark.slow
def test_controlled_wer_harness(tmp_path):
    corpus = str(tmp_path / "corpus")
    build_corpus(corpus)  # full 68 items
    perfect = run_corpus(corpus)
    assert len(perfect.items) == 68
    assert all(item.wer == 0.0 for item in perfect.items)
    assert perfect.mean_wer() == 0.0
    injected = run_corpus(corpus, substitution_rate=0.10)
    mean = injected.mean_wer()
    assert abs(mean - 0.10) <= 0.01, mean
    report(
        "Controlled-WER harness",
        f"fixture mean 0.0 exactly; 10% injection -> {mean:.4f}",
    )


# -- 7. analyze determinism -----------------------------------------------------

def test_analyze_determinism(tmp_path):
    wav_high, _, fixture = build_two_tone_demo(str(tmp_path / "demo"))
    outputs = []
    for run in range(2):
        out = tmp_path / f"report_{run}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "tonescope.cli", "analyze", wav_high,
             "--transcript", fixture, "--out", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    parsed = json.loads(outputs[0])
    assert parsed["snapshots"], "report should carry snapshots"
    report("Analyze determinism", f"{len(outputs[0])} bytes, byte-identical across runs")
