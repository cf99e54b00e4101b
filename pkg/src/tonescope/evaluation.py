"""Offline evaluation: word error rate, corpus replay, latency percentiles."""
from __future__ import annotations

import logging
import math
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from .fusion import FusedLabel

log = logging.getLogger(__name__)

MIN_LATENCY_FRAMES = 100

# Dataset emotion tags -> fused taxonomy. "surprised" has no fused
# counterpart and stays unmapped (excluded from agreement scoring).
EMOTION_LABEL_MAP = {
    "euphoric": FusedLabel.ACTIVE_POSITIVE,
    "joyfully": FusedLabel.ACTIVE_POSITIVE,
    "sad": FusedLabel.SOBER_NEGATIVE,
}

_APOSTROPHES = ("’", "ʼ")
_NON_WORD = re.compile(r"[^a-z0-9' ]+")


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class WerReport:
    substitutions: int
    deletions: int
    insertions: int
    ref_words: int
    wer: float
    alignment: tuple[str, ...]  # per-op: match | sub | del | ins

    def to_dict(self) -> dict:
        return {
            "S": self.substitutions,
            "D": self.deletions,
            "I": self.insertions,
            "N": self.ref_words,
            "wer": self.wer,
        }


def normalize_words(text: str) -> list[str]:
    """Lowercase, strip punctuation except intra-word apostrophes, split.

    Punctuation acts as a word separator ("well-known" scores as two
    words). Applying it twice equals applying it once, so scoring
    already-normalized text is safe.
    """
    s = text.lower()
    for ch in _APOSTROPHES:
        s = s.replace(ch, "'")
    s = _NON_WORD.sub(" ", s)
    words = []
    for token in s.split():
        token = token.strip("'")
        # apostrophes survive only between characters ("don't"), not as
        # stray quotes
        if token:
            words.append(token)
    return words


def align_words(ref: list[str], hyp: list[str]) -> tuple[int, list[str]]:
    """Unit-cost Levenshtein alignment with deterministic backtrace.

    Ties resolve match > substitution > deletion > insertion so the S/D/I
    decomposition is stable even when several alignments share the cost.
    """
    n, m = len(ref), len(hyp)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        row, prev = dp[i], dp[i - 1]
        for j in range(1, m + 1):
            cost = 0 if ref[i - 1] == hyp[j - 1] else 1
            row[j] = min(prev[j - 1] + cost, prev[j] + 1, row[j - 1] + 1)

    ops: list[str] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and dp[i][j] == dp[i - 1][j - 1]:
            ops.append("match")
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + 1:
            ops.append("sub")
            i, j = i - 1, j - 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            ops.append("del")
            i -= 1
        else:
            ops.append("ins")
            j -= 1
    ops.reverse()
    return dp[n][m], ops


def compute_wer(reference: str, hypothesis: str) -> WerReport:
    """WER = (S + D + I) / N over a minimum-cost word alignment."""
    ref = normalize_words(reference)
    hyp = normalize_words(hypothesis)
    if not ref:
        raise EvaluationError("reference is empty after normalization (N would be 0)")
    distance, ops = align_words(ref, hyp)
    s = ops.count("sub")
    d = ops.count("del")
    ins = ops.count("ins")
    assert s + d + ins == distance
    return WerReport(
        substitutions=s,
        deletions=d,
        insertions=ins,
        ref_words=len(ref),
        wer=distance / len(ref),
        alignment=tuple(ops),
    )


@dataclass(frozen=True)
class CorpusItem:
    audio_path: str
    reference: str
    emotion_tag: str


def load_manifest(corpus_dir: str) -> list[CorpusItem]:
    """Read manifest.tsv: audio_path<TAB>reference_text<TAB>emotion_tag."""
    manifest = Path(corpus_dir) / "manifest.tsv"
    if not manifest.is_file():
        raise EvaluationError(f"no manifest.tsv in {corpus_dir}")
    items = []
    for lineno, line in enumerate(manifest.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise EvaluationError(f"manifest line {lineno}: expected 3 tab-separated fields")
        items.append(CorpusItem(audio_path=parts[0], reference=parts[1], emotion_tag=parts[2]))
    return items


class SubstitutionInjector:
    """Corrupts reference transcripts at a fixed substitution rate.

    A rate accumulator (not random sampling) decides which words to
    replace, so an injection run is exactly reproducible and the realized
    rate tracks the nominal one as closely as word counts allow.
    """

    def __init__(self, rate: float):
        if not 0 <= rate <= 1:
            raise ValueError("substitution rate must be in [0, 1]")
        self.rate = rate
        self._counter = 0

    def corrupt(self, text: str) -> str:
        out = []
        for i, word in enumerate(text.split()):
            # integer-exact accumulator: word i is substituted when the
            # cumulative quota crosses a whole number (no float drift)
            if int((i + 1) * self.rate + 1e-9) > int(i * self.rate + 1e-9):
                self._counter += 1
                out.append(f"xsub{self._counter}x")
            else:
                out.append(word)
        return " ".join(out)


@dataclass
class ItemResult:
    audio_path: str
    emotion_tag: str
    wer: float | None
    dominant_band: str
    fused_label: str
    mapped_label: str | None
    agrees: bool | None


@dataclass
class CorpusReport:
    items: list[ItemResult] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def items_total(self) -> int:
        return len(self.items) + len(self.skipped)

    def mean_wer(self) -> float | None:
        scored = [r.wer for r in self.items if r.wer is not None]
        if not scored:
            return None
        return sum(scored) / len(scored)

    def band_distribution(self) -> dict[str, dict[str, int]]:
        dist: dict[str, dict[str, int]] = {}
        for r in self.items:
            dist.setdefault(r.emotion_tag, {})
            dist[r.emotion_tag][r.dominant_band] = dist[r.emotion_tag].get(r.dominant_band, 0) + 1
        return dist

    def label_agreement(self) -> float | None:
        mapped = [r for r in self.items if r.agrees is not None]
        if not mapped:
            return None
        return sum(1 for r in mapped if r.agrees) / len(mapped)

    def to_dict(self) -> dict:
        return {
            "items": [
                {
                    "audio": r.audio_path,
                    "emotion_tag": r.emotion_tag,
                    "wer": r.wer,
                    "dominant_band": r.dominant_band,
                    "fused_label": r.fused_label,
                    "agrees": r.agrees,
                }
                for r in self.items
            ],
            "skipped": list(self.skipped),
            "coverage": {"total": self.items_total, "run": len(self.items)},
            "mean_wer": self.mean_wer(),
            "band_distribution": self.band_distribution(),
            "label_agreement": self.label_agreement(),
        }


def run_corpus(
    corpus_dir: str,
    substitution_rate: float = 0.0,
    config_overrides: dict | None = None,
) -> CorpusReport:
    """Replay every manifest item through the full pipeline.

    The reference transcript doubles as the ASR provider (perfect ASR),
    optionally corrupted at ``substitution_rate`` to exercise the WER
    machinery with a known ground truth.
    """
    from .session import SessionConfig, run_batch

    items = load_manifest(corpus_dir)
    report = CorpusReport()
    injector = SubstitutionInjector(substitution_rate) if substitution_rate > 0 else None
    base = Path(corpus_dir)

    for item in items:
        audio = base / item.audio_path
        if not audio.is_file():
            log.warning("skipping missing corpus audio: %s", audio)
            report.skipped.append(item.audio_path)
            continue
        hypothesis = item.reference if injector is None else injector.corrupt(item.reference)
        overrides = dict(config_overrides or {})
        config = SessionConfig(
            source=str(audio),
            reference_transcript=hypothesis,
            **overrides,
        )
        result = run_batch(config)
        wer = compute_wer(item.reference, result.transcript_text()).wer
        mapped = EMOTION_LABEL_MAP.get(item.emotion_tag)
        final_label = result.final_label()
        report.items.append(
            ItemResult(
                audio_path=item.audio_path,
                emotion_tag=item.emotion_tag,
                wer=wer,
                dominant_band=result.dominant_band().value,
                fused_label=final_label.value,
                mapped_label=mapped.value if mapped else None,
                agrees=(final_label == mapped) if mapped else None,
            )
        )
    return report


def percentile_nearest_rank(values: list[float], pct: float) -> float:
    """Exact nearest-rank percentile (no interpolation)."""
    if not values:
        raise EvaluationError("no samples")
    ordered = sorted(values)
    rank = max(1, math.ceil(pct / 100.0 * len(ordered)))
    return ordered[rank - 1]


@dataclass
class LatencyReport:
    stages: dict[str, dict[str, float]]  # stage -> {p50, p95, p99} in ms

    def to_dict(self) -> dict:
        return {"stages": self.stages}


class LatencyRecorder:
    """Collects wall-clock deltas per pipeline stage during a session."""

    STAGES = ("frame_to_prosody", "segment_to_keyword", "interval_to_snapshot")

    def __init__(self):
        self.samples: dict[str, list[float]] = {s: [] for s in self.STAGES}

    def record(self, stage: str, delta_ms: float):
        self.samples[stage].append(delta_ms)

    def now_ms(self) -> float:
        return time.monotonic() * 1000.0


def measure_latency(recorder: LatencyRecorder) -> LatencyReport:
    """Percentile summary of an instrumented run (needs >= 100 frames)."""
    frames = len(recorder.samples["frame_to_prosody"])
    if frames < MIN_LATENCY_FRAMES:
        raise EvaluationError(
            f"latency run too short: {frames} frames < {MIN_LATENCY_FRAMES}"
        )
    stages = {}
    for stage, values in recorder.samples.items():
        if not values:
            continue
        stages[stage] = {
            "p50": percentile_nearest_rank(values, 50),
            "p95": percentile_nearest_rank(values, 95),
            "p99": percentile_nearest_rank(values, 99),
        }
    return LatencyReport(stages=stages)
