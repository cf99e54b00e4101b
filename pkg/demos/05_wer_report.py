"""Score a hypothesis transcript against its reference, with alignment.

WER = (S + D + I) / N over a minimum-cost word alignment. The backtrace
prefers match > substitution > deletion > insertion on ties, so the
decomposition is deterministic. A 10% WER means 10 of every 100 reference
words were substituted, deleted, or inserted around.
"""
from tonescope.evaluation import compute_wer, normalize_words

reference = "We shipped the release on time and the customers were happy."
hypothesis = "we shipped the released on time and customers were really happy"

report = compute_wer(reference, hypothesis)
print(f"reference : {reference}")
print(f"hypothesis: {hypothesis}\n")
print(f"S={report.substitutions} D={report.deletions} I={report.insertions} "
      f"N={report.ref_words}  WER={report.wer:.3f}\n")

ref_words = iter(normalize_words(reference))
hyp_words = iter(normalize_words(hypothesis))
rows = []
for op in report.alignment:
    r = next(ref_words) if op in ("match", "sub", "del") else ""
    h = next(hyp_words) if op in ("match", "sub", "ins") else ""
    rows.append((op, r, h))
width = max(len(r) for _, r, _ in rows) + 2
for op, r, h in rows:
    marker = {"match": " ", "sub": "S", "del": "D", "ins": "I"}[op]
    print(f"  {marker}  {r:<{width}} {h}")

# the classic example: exactly 10 substitutions in 100 words
ref100 = " ".join(f"w{i}" for i in range(100))
hyp100 = " ".join("sub" if i % 10 == 0 else f"w{i}" for i in range(100))
print(f"\n100-word reference with 10 substitutions -> WER "
      f"{compute_wer(ref100, hyp100).wer:.2f}")
