"""Synthetic replay corpus: 68 labeled items across four emotion tags.

Stands in for a recorded emotional-speech dataset so the evaluation
harness, replay, and bench commands run offline. Each item is a pitched
tone with a neutral calibration lead-in followed by an emotion-shaped
shift (high for euphoric/joyful, low for sad, rising sweep for surprised)
and a 10-word reference sentence whose sentiment matches the tag.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .audio import CANONICAL_RATE

ITEMS_PER_TAG = 17
CALIBRATION_S = 3.5
EMOTION_S = 2.5
BASE_F0 = 150.0
AMPLITUDE = 0.3

# pitch-shift ratios per tag; High band needs > 1.15x, Low band < 0.90x
TAG_PROFILES = {
    "euphoric": ("ratio", 1.35),
    "joyfully": ("ratio", 1.25),
    "sad": ("ratio", 0.78),
    "surprised": ("sweep", 1.5),
}

# 10-word reference sentences; positive-tag texts carry only positive
# lexicon words and negative-tag texts only negative ones, so lexical
# polarity matches the tag by construction.
_TEXTS = {
    "euphoric": [
        "what a fantastic win the whole team is thrilled today",
        "this is the best sprint we have ever delivered together",
        "i am absolutely delighted with how smoothly everything went today",
        "our brilliant demo earned a standing ovation from the stakeholders",
        "the release succeeded and everyone is celebrating the amazing outcome",
        "we smashed every goal and the metrics look absolutely wonderful",
        "such an incredible result the customers love the new feature",
        "the whole room cheered when the superb numbers came in",
        "i could not be happier with this outstanding team effort",
        "every single reviewer praised the elegant design we shipped today",
        "the launch was a triumph and morale is sky high",
        "we won the award and the team is truly ecstatic",
        "that was a spectacular finish to a remarkable quarter overall",
        "the board applauded our exceptional progress during the review meeting",
        "our users adore the update and engagement numbers look magnificent",
        "the pilot exceeded expectations and the client is genuinely impressed",
        "finishing early feels glorious and the quality is absolutely superb",
    ],
    "joyfully": [
        "we are so happy the release went out on time",
        "i enjoy working with this team every single sprint honestly",
        "the customers are pleased and the feedback has been lovely",
        "it feels good to close the milestone ahead of schedule",
        "our standup was cheerful because the build is finally green",
        "i am glad the refactor landed and everything still works",
        "the new hire settled in nicely and everyone feels welcome",
        "we had a pleasant retro and agreed on clear improvements",
        "the fix worked perfectly and the dashboard looks clean again",
        "thanks to your support the migration finished without any drama",
        "i love how smooth the deployment pipeline has become now",
        "the pairing session was fun and we learned useful patterns",
        "a calm and productive week left everyone smiling on friday",
        "the stakeholders were satisfied with the roadmap we presented yesterday",
        "great collaboration made this the easiest release in recent memory",
        "our velocity improved and the backlog finally looks manageable again",
        "the demo delighted the client and the contract was renewed",
    ],
    "sad": [
        "i feel sad because the deadline slipped again this week",
        "we missed the release date and the client is disappointed",
        "the outage hurt our reputation and morale is quite low",
        "losing that contract was a painful blow to the team",
        "the bug caused serious damage before anyone noticed it yesterday",
        "another regression broke the build and everyone feels quite gloomy",
        "our numbers declined and the forecast looks bleak this quarter",
        "the postmortem revealed sloppy mistakes that embarrassed the whole team",
        "i regret that the migration failed after so much work",
        "the layoffs left the office quiet and everyone feels anxious",
        "we wasted two sprints on a feature nobody actually wanted",
        "the demo crashed twice and the silence afterwards was awful",
        "critical feedback overwhelmed the team and spirits are very low",
        "the budget cut killed the project we cared about most",
        "a dreadful review shook our confidence in the new architecture",
        "the data loss was devastating and recovery will be slow",
        "morale suffered after the painful reorganization was announced on monday",
    ],
    "surprised": [
        "nobody expected the metrics to double overnight like that honestly",
        "the sudden announcement caught the entire team completely off guard",
        "i did not see that architecture decision coming at all",
        "out of nowhere the client requested a totally different scope",
        "the test suite passed first try which startled everyone here",
        "suddenly the legacy system started working better than the rewrite",
        "an unexpected visitor joined the standup and changed our plans",
        "the vendor reversed their pricing overnight without warning anyone first",
        "we opened the logs and found something nobody could explain",
        "the intern solved in an hour what stumped us all",
        "traffic spiked tenfold during the night and nobody knows why",
        "the feature flag flipped itself and nobody admits touching it",
        "that dependency update changed behavior in ways nobody had predicted",
        "the oldest bug in the tracker closed itself this morning",
        "our slowest query became the fastest after the routine upgrade",
        "the demo hardware arrived a full month earlier than promised",
        "half the metrics vanished then reappeared before anyone touched anything",
    ],
}


def _tone(f0_curve: np.ndarray, rate: int, amplitude: float) -> np.ndarray:
    phase = 2.0 * np.pi * np.cumsum(f0_curve) / rate
    return amplitude * np.sin(phase)


def synthesize_item(tag: str, index: int, rate: int = CANONICAL_RATE) -> np.ndarray:
    """Calibration tone at a per-item base pitch, then the tag's shift."""
    kind, value = TAG_PROFILES[tag]
    base = BASE_F0 + (index % 5) * 3.0  # small per-item variation
    n_cal = int(CALIBRATION_S * rate)
    n_emo = int(EMOTION_S * rate)
    cal = np.full(n_cal, base)
    if kind == "ratio":
        emo = np.full(n_emo, base * value)
    else:
        emo = np.linspace(base, base * value, n_emo)
    return _tone(np.concatenate([cal, emo]), rate, AMPLITUDE)


def reference_text(tag: str, index: int) -> str:
    return _TEXTS[tag][index % len(_TEXTS[tag])]


def emotion_onset_ms() -> float:
    return CALIBRATION_S * 1000.0


def build_corpus(directory: str, items_per_tag: int = ITEMS_PER_TAG) -> list[str]:
    """Write WAV files plus manifest.tsv; returns the written audio paths."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    lines = []
    written = []
    for tag in TAG_PROFILES:
        for index in range(items_per_tag):
            name = f"{tag}_{index:02d}.wav"
            samples = synthesize_item(tag, index)
            wavfile.write(root / name, CANONICAL_RATE, (samples * 32767).astype(np.int16))
            lines.append(f"{name}\t{reference_text(tag, index)}\t{tag}")
            written.append(name)
    (root / "manifest.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return written


DEMO_SENTENCE = "I enjoy taking leisurely strolls through the quiet countryside."
DEMO_CALIBRATION_S = 4.0
DEMO_UTTERANCE_S = 3.0
DEMO_BASE_F0 = 160.0


def build_two_tone_demo(directory: str) -> tuple[str, str, str]:
    """Two renditions of the same sentence: bright (+30% pitch) and flat
    (-20% pitch), sharing one fixture transcript. Returns (wav_a, wav_b,
    fixture_path)."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    rate = CANONICAL_RATE
    n_cal = int(DEMO_CALIBRATION_S * rate)
    n_utt = int(DEMO_UTTERANCE_S * rate)
    paths = []
    for name, ratio in (("rendition_high.wav", 1.30), ("rendition_low.wav", 0.80)):
        curve = np.concatenate(
            [np.full(n_cal, DEMO_BASE_F0), np.full(n_utt, DEMO_BASE_F0 * ratio)]
        )
        samples = _tone(curve, rate, AMPLITUDE)
        wavfile.write(root / name, rate, (samples * 32767).astype(np.int16))
        paths.append(str(root / name))
    fixture = root / "demo_transcript.tsv"
    start = int(DEMO_CALIBRATION_S * 1000)
    end = int((DEMO_CALIBRATION_S + DEMO_UTTERANCE_S) * 1000)
    fixture.write_text(f"{start}\t{end}\t{DEMO_SENTENCE}\n", encoding="utf-8")
    return paths[0], paths[1], str(fixture)
