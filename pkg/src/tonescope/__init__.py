"""tonescope: real-time speech tone analytics.

Two parallel paths over one audio stream — local pitch/energy extraction
and transcript-based lexicon sentiment — fused into emotion snapshots with
tone/text discrepancy detection, streamed to a live dashboard, plus an
offline WER/latency evaluation harness.
"""

from .audio import AudioFrame, FrameConfig, SessionClock, open_source, replay_paced
from .evaluation import WerReport, compute_wer, measure_latency, run_corpus
from .fusion import EmotionSnapshot, FusedLabel, demo_scenario, fuse, summarize_band
from .prosody import (
    PitchBand,
    ProsodyFrame,
    SpeakerBaseline,
    classify_band,
    compute_rms,
    estimate_f0,
    smooth,
    update_baseline,
)
from .sentiment import (
    KeywordBar,
    Lexicon,
    SentimentHit,
    load_bundled_lexicon,
    load_lexicon,
    match_segment,
    polarity_score,
    update_bar,
)
from .session import BatchResult, Session, SessionConfig, SessionManager, run_batch
from .suggestions import Suggestion, SuggestionRequest, SuggestionService, build_prompt
from .transcripts import (
    AsrProviderSpec,
    TranscriptSegment,
    load_fixture,
    transcribe_stream,
)

__version__ = "0.1.0"
