"""Fusing pitch bands with lexical polarity into emotion snapshots.

The interesting output is the discrepancy flag: positive words delivered
in a low or agitated tone mean the words and the voice disagree, which is
exactly what a speaker watching the dashboard wants surfaced.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .prosody import PitchBand, ProsodyFrame

SNAPSHOT_INTERVAL_MS = 2000
POLARITY_DEADZONE = 0.2
MIN_VOICED_FRACTION = 0.25

# Tie-break priority when bands are equally frequent: toward neutral, then
# sober, then active — the tool should err toward not alarming the speaker.
_BAND_PRIORITY = {PitchBand.MID: 0, PitchBand.LOW: 1, PitchBand.HIGH: 2}


class FusedLabel(str, Enum):
    ACTIVE_POSITIVE = "active_positive"
    ACTIVE_NEGATIVE = "active_negative"
    NEUTRAL = "neutral"
    SOBER_NEGATIVE = "sober_negative"
    MIXED_CALM_POSITIVE = "mixed_calm_positive"
    INSUFFICIENT = "insufficient"


@dataclass(frozen=True)
class EmotionSnapshot:
    time_ms: float
    band: PitchBand
    band_fraction: float
    polarity: float
    fused_label: FusedLabel
    discrepancy: bool
    lexical_stale: bool = False


def summarize_band(frames: Sequence[ProsodyFrame]) -> tuple[PitchBand, float]:
    """Modal band among voiced frames and its fraction of voiced frames.

    Windows that are mostly unvoiced (< 25% voiced) summarize as Unvoiced
    with the voiced fraction, so downstream knows there was no real signal.
    """
    if not frames:
        return PitchBand.UNVOICED, 0.0
    voiced = [f for f in frames if f.voiced]
    voiced_fraction = len(voiced) / len(frames)
    if voiced_fraction < MIN_VOICED_FRACTION:
        return PitchBand.UNVOICED, voiced_fraction
    counts = Counter(f.band for f in voiced)
    best = max(counts.items(), key=lambda kv: (kv[1], -_BAND_PRIORITY.get(kv[0], 3)))
    return best[0], best[1] / len(voiced)


def fuse(
    band: PitchBand,
    band_fraction: float,
    polarity: float,
    stale: bool,
    time_ms: float = 0.0,
    newest_hit_polarity: int | None = None,
) -> EmotionSnapshot:
    """Apply the band x polarity decision table.

    ``newest_hit_polarity`` is the polarity of the keyword bar's newest
    entry; it decides whether an agitated-negative window is also a
    words/tone discrepancy (positive words said in an agitated tone).
    """
    if not -1.0 <= polarity <= 1.0:
        raise ValueError(f"polarity {polarity} outside [-1, 1]")

    discrepancy = False
    if stale or band == PitchBand.UNVOICED:
        label = FusedLabel.INSUFFICIENT
    elif band == PitchBand.HIGH and polarity >= POLARITY_DEADZONE:
        label = FusedLabel.ACTIVE_POSITIVE
    elif band == PitchBand.HIGH and polarity <= -POLARITY_DEADZONE:
        label = FusedLabel.ACTIVE_NEGATIVE
        discrepancy = newest_hit_polarity == 1
    elif band == PitchBand.LOW and polarity <= -POLARITY_DEADZONE:
        label = FusedLabel.SOBER_NEGATIVE
    elif band == PitchBand.LOW and polarity >= POLARITY_DEADZONE:
        label = FusedLabel.MIXED_CALM_POSITIVE
        discrepancy = True
    else:
        label = FusedLabel.NEUTRAL

    return EmotionSnapshot(
        time_ms=time_ms,
        band=band,
        band_fraction=band_fraction,
        polarity=polarity,
        fused_label=label,
        discrepancy=discrepancy,
        lexical_stale=stale,
    )


def demo_scenario(
    audio_a: str,
    audio_b: str,
    fixture_path: str,
) -> tuple[list[EmotionSnapshot], list[EmotionSnapshot]]:
    """Run two renditions of the same transcript through full sessions.

    Both sessions share one fixture transcript, so their keyword bars must
    come out identical (enforced here); the fused labels are free to differ
    with the delivery. Returns both snapshot streams.
    """
    from .session import SessionConfig, run_batch

    reports = []
    for source in (audio_a, audio_b):
        config = SessionConfig(source=source, transcript_fixture=fixture_path)
        reports.append(run_batch(config))
    bar_a = [(h.word, h.polarity) for h in reports[0].keyword_bar.entries]
    bar_b = [(h.word, h.polarity) for h in reports[1].keyword_bar.entries]
    if bar_a != bar_b:
        raise ValueError(f"keyword bars diverged on a shared transcript: {bar_a} vs {bar_b}")
    return reports[0].snapshots, reports[1].snapshots
