"""Command-line entry points.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .audio import SourceError
from .evaluation import (
    EvaluationError,
    LatencyRecorder,
    compute_wer,
    load_manifest,
    measure_latency,
    run_corpus,
)
from .session import Session, SessionConfig, run_batch
from .transcripts import FixtureError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tonescope")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the session server")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--config", help="JSON file with default session settings")
    serve.add_argument("--dashboard", help="directory of built dashboard assets to serve")

    analyze = sub.add_parser("analyze", help="one-shot batch analysis of an audio file")
    analyze.add_argument("file")
    analyze.add_argument("--transcript", help="fixture transcript (TSV) to replay as ASR")
    analyze.add_argument("--out", help="write the full JSON report here")

    replay = sub.add_parser("replay", help="replay a labeled corpus through the pipeline")
    replay.add_argument("--corpus", required=True)
    replay.add_argument("--speed", type=float, default=1.0)
    replay.add_argument(
        "--format",
        choices=("live", "json", "tsv"),
        default="live",
        help="live: paced sessions with per-item lines; json/tsv: full batch corpus report",
    )
    replay.add_argument("--out", help="write the report here instead of stdout")

    wer = sub.add_parser("wer", help="word error rate between two transcripts")
    wer.add_argument("--ref", required=True)
    wer.add_argument("--hyp", required=True)
    wer.add_argument("--format", choices=("json", "tsv"), default="json")

    bench = sub.add_parser("bench", help="latency percentiles over a corpus run")
    bench.add_argument("--corpus", required=True)

    return parser


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import SessionRequest, create_app

    defaults = {}
    if args.config:
        defaults = json.loads(Path(args.config).read_text())
        SessionRequest(**{"source": "probe.wav", **defaults})  # validates types
    dashboard = args.dashboard
    if dashboard is None and Path("frontend/dist").is_dir():
        dashboard = "frontend/dist"
    app = create_app(dashboard_dir=dashboard, session_defaults=defaults)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_analyze(args) -> int:
    config = SessionConfig(source=args.file, transcript_fixture=args.transcript)
    result = run_batch(config)
    report = result.to_json()
    if args.out:
        Path(args.out).write_text(report)
    final = result.to_report_dict()["final"]
    if final is None:
        print("no snapshots (source shorter than one interval and empty)")
    else:
        print(
            f"final snapshot @ {final['t_ms']} ms: label={final['label']} "
            f"band={final['band']} polarity={final['polarity']} "
            f"discrepancy={final['discrepancy']}"
        )
    print(f"frames={result.frame_count} segments={len(result.segments)} hits={result.hit_count}")
    return 0


def _corpus_report_tsv(report) -> str:
    lines = ["audio\temotion_tag\twer\tdominant_band\tfused_label\tagrees"]
    for item in report.items:
        wer = "" if item.wer is None else f"{item.wer:.6f}"
        agrees = "" if item.agrees is None else str(item.agrees).lower()
        lines.append(
            f"{item.audio_path}\t{item.emotion_tag}\t{wer}\t"
            f"{item.dominant_band}\t{item.fused_label}\t{agrees}"
        )
    mean = report.mean_wer()
    agreement = report.label_agreement()
    lines.append(f"# coverage\t{len(report.items)}/{report.items_total}")
    lines.append(f"# mean_wer\t{'' if mean is None else f'{mean:.6f}'}")
    lines.append(f"# label_agreement\t{'' if agreement is None else f'{agreement:.6f}'}")
    return "\n".join(lines) + "\n"


def _cmd_replay(args) -> int:
    items = load_manifest(args.corpus)
    if not items:
        print("corpus manifest is empty", file=sys.stderr)
        return 2
    if args.format in ("json", "tsv"):
        report = run_corpus(args.corpus)
        if args.format == "json":
            text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
        else:
            text = _corpus_report_tsv(report)
        if args.out:
            Path(args.out).write_text(text)
        else:
            print(text, end="")
        return 0
    base = Path(args.corpus)
    for item in items:
        audio_path = base / item.audio_path
        if not audio_path.is_file():
            print(f"{item.audio_path}\tMISSING", file=sys.stderr)
            continue
        config = SessionConfig(
            source=str(audio_path),
            reference_transcript=item.reference,
            speed=args.speed,
        )
        session = Session(config).start()
        counts: dict[str, int] = {}
        last_snapshot = None
        for event in session.subscribe():
            counts[event.kind] = counts.get(event.kind, 0) + 1
            if event.kind == "snapshot":
                last_snapshot = event.payload
        session.join()
        label = last_snapshot["label"] if last_snapshot else "none"
        band = last_snapshot["band"] if last_snapshot else "none"
        print(
            f"{item.audio_path}\t{item.emotion_tag}\tlabel={label}\tband={band}\t"
            f"prosody={counts.get('prosody', 0)}\tsnapshots={counts.get('snapshot', 0)}"
        )
    return 0


def _cmd_wer(args) -> int:
    ref = Path(args.ref).read_text(encoding="utf-8")
    hyp = Path(args.hyp).read_text(encoding="utf-8")
    report = compute_wer(ref, hyp)
    if args.format == "json":
        print(json.dumps(report.to_dict(), sort_keys=True))
    else:
        print("S\tD\tI\tN\twer")
        print(f"{report.substitutions}\t{report.deletions}\t{report.insertions}\t"
              f"{report.ref_words}\t{report.wer:.6f}")
    return 0


def _cmd_bench(args) -> int:
    items = load_manifest(args.corpus)
    if not items:
        print("corpus manifest is empty", file=sys.stderr)
        return 2
    base = Path(args.corpus)
    recorder = LatencyRecorder()
    for item in items:
        audio_path = base / item.audio_path
        if not audio_path.is_file():
            continue
        config = SessionConfig(
            source=str(audio_path),
            reference_transcript=item.reference,
            speed=1e6,  # batch-speed replay
        )
        session = Session(config, recorder=recorder).start()
        for _ in session.subscribe():
            pass
        session.join()
    report = measure_latency(recorder)
    print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "analyze": _cmd_analyze,
    "replay": _cmd_replay,
    "wer": _cmd_wer,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except (SourceError, FixtureError, EvaluationError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
