"""Build the 68-item labeled replay corpus and run the evaluation harness.

Each item: a calibration tone, then an emotion-shaped pitch shift (high
for euphoric/joyful, low for sad, a rising sweep for surprised), plus a
10-word reference sentence whose sentiment matches the tag. With the
reference replayed as a perfect ASR provider the mean WER is exactly 0;
injecting a 10% substitution rate moves it to 0.10, validating the
measurement machinery against a known ground truth.
"""
import json
import tempfile

from tonescope.corpus import build_corpus
from tonescope.evaluation import run_corpus

corpus = tempfile.mkdtemp(prefix="tonescope_corpus_")
written = build_corpus(corpus)
print(f"built {len(written)} items in {corpus}\n")

perfect = run_corpus(corpus)
print(f"perfect ASR : mean WER {perfect.mean_wer():.3f}, "
      f"label agreement {perfect.label_agreement():.0%}")
print("band distribution by emotion tag:")
print(json.dumps(perfect.band_distribution(), indent=2, sort_keys=True))

injected = run_corpus(corpus, substitution_rate=0.10)
print(f"\n10% injected: mean WER {injected.mean_wer():.4f}")
