"""Same words, different voice: the tone/text discrepancy in action.

Two synthetic renditions of one sentence share a transcript fixture. The
bright rendition (pitch 30% above the speaker baseline) fuses to
active_positive; the flat rendition (20% below) carries positive words in
a low register and fuses to mixed_calm_positive with the discrepancy flag
raised — the words and the voice disagree.
"""
import tempfile

from tonescope.corpus import DEMO_SENTENCE, build_two_tone_demo
from tonescope.fusion import demo_scenario
from tonescope.session import SessionConfig, run_batch

workdir = tempfile.mkdtemp(prefix="tonescope_two_tone_")
wav_high, wav_low, fixture = build_two_tone_demo(workdir)
print(f'sentence: "{DEMO_SENTENCE}"')
print(f"renditions: {wav_high}\n            {wav_low}\n")

snaps_high, snaps_low = demo_scenario(wav_high, wav_low, fixture)

bar = run_batch(SessionConfig(source=wav_high, transcript_fixture=fixture)).keyword_bar
print(f"shared keyword bar: {[h.word for h in bar.entries]}\n")

print(f"{'t (ms)':>8}  {'bright rendition':<28}  flat rendition")
for high, low in zip(snaps_high, snaps_low):
    flag = "  << discrepancy" if low.discrepancy else ""
    print(
        f"{high.time_ms:8.0f}  {high.fused_label.value:<28}  {low.fused_label.value}{flag}"
    )
