"""Watch the keyword bar track sentiment words through a conversation.

The bundled opinion lexicon (2006 positive / 4783 negative entries) is
matched token-by-token against each transcript segment; the bar keeps the
five most recent distinct sentiment words, and a 30-second rolling window
yields the polarity score the fusion stage consumes.
"""
from tonescope.sentiment import (
    KeywordBar,
    PolarityWindow,
    load_bundled_lexicon,
    match_segment,
    update_bar,
)
from tonescope.transcripts import TranscriptSegment

lexicon = load_bundled_lexicon()
print(f"lexicon: {len(lexicon.positive)} positive, {len(lexicon.negative)} negative\n")

utterances = [
    "the demo went great and the client was really happy",
    "but we missed the follow-up deadline which was bad",
    "the fix was painful and the outage made everyone anxious",
    "still i love how the team pulled together in the end",
]

bar = KeywordBar()
window = PolarityWindow()
for i, text in enumerate(utterances):
    segment = TranscriptSegment(text, i * 4000.0, i * 4000.0 + 3000.0, "demo", i)
    hits = match_segment(segment, lexicon)
    window.add(hits)
    bar = update_bar(bar, hits)
    chips = "  ".join(f"{h.word}{'+' if h.polarity > 0 else '-'}" for h in bar.entries)
    score = window.score_at(segment.end_ms)
    print(f'segment {i}: "{text}"')
    print(f"  hits: {[h.word for h in hits]}")
    print(f"  bar : [{chips}]   polarity={score:+.2f}\n")
