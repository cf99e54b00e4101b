import json
import subprocess
import sys

import pytest

from tonescope.cli import main
from tonescope.corpus import build_corpus, build_two_tone_demo


@pytest.fixture(scope="module")
def demo_files(tmp_path_factory):
    return build_two_tone_demo(str(tmp_path_factory.mktemp("cli_demo")))


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    directory = str(tmp_path_factory.mktemp("cli_corpus"))
    build_corpus(directory, items_per_tag=1)
    return directory


def test_wer_identity_exit_zero(tmp_path, capsys):
    ref = tmp_path / "ref.txt"
    ref.write_text("hello world this is fine\n")
    code = main(["wer", "--ref", str(ref), "--hyp", str(ref)])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    assert payload["wer"] == 0.0
    assert payload["S"] == payload["D"] == payload["I"] == 0


def test_wer_tsv_format(tmp_path, capsys):
    ref = tmp_path / "ref.txt"
    hyp = tmp_path / "hyp.txt"
    ref.write_text("one two three four five six seven eight nine ten")
    hyp.write_text("one two three four five six seven eight nine zzz")
    code = main(["wer", "--ref", str(ref), "--hyp", str(hyp), "--format", "tsv"])
    out = capsys.readouterr().out.splitlines()
    assert code == 0
    assert out[0] == "S\tD\tI\tN\twer"
    assert out[1].startswith("1\t0\t0\t10\t0.1")


def test_unknown_subcommand_usage_exit_one(capsys):
    assert main(["frobnicate"]) == 1


def test_no_args_usage_exit_one():
    assert main([]) == 1


def test_analyze_missing_file_exit_two(capsys):
    code = main(["analyze", "/definitely/missing.wav"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_analyze_writes_report(demo_files, tmp_path, capsys):
    wav_high, _, fixture = demo_files
    out = tmp_path / "report.json"
    code = main(["analyze", wav_high, "--transcript", fixture, "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    assert "final snapshot" in stdout
    assert "active_positive" in stdout
    report = json.loads(out.read_text())
    assert report["keyword_bar"] == [{"w": "enjoy", "pol": 1}]


def test_analyze_byte_identical_reports(demo_files, tmp_path):
    wav_high, _, fixture = demo_files
    out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
    env_cmd = [sys.executable, "-m", "tonescope.cli"]
    for out in (out_a, out_b):
        proc = subprocess.run(
            env_cmd + ["analyze", wav_high, "--transcript", fixture, "--out", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr
    assert out_a.read_bytes() == out_b.read_bytes()


def test_replay_prints_per_item(corpus_dir, capsys):
    code = main(["replay", "--corpus", corpus_dir, "--speed", "1000000"])
    out = capsys.readouterr().out
    assert code == 0
    lines = [l for l in out.splitlines() if l]
    assert len(lines) == 4
    assert any("euphoric" in l and "label=active_positive" in l for l in lines)
    assert any("sad" in l and "label=sober_negative" in l for l in lines)


def test_replay_empty_corpus_exit_two(tmp_path, capsys):
    (tmp_path / "manifest.tsv").write_text("")
    assert main(["replay", "--corpus", str(tmp_path)]) == 2


def test_replay_missing_manifest_exit_two(tmp_path):
    assert main(["replay", "--corpus", str(tmp_path)]) == 2


def test_bench_reports_percentiles(corpus_dir, capsys):
    code = main(["bench", "--corpus", corpus_dir])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    stages = payload["stages"]
    assert "frame_to_prosody" in stages
    assert stages["frame_to_prosody"]["p50"] <= stages["frame_to_prosody"]["p99"]


def test_replay_json_report(corpus_dir, capsys):
    code = main(["replay", "--corpus", corpus_dir, "--format", "json"])
    out = capsys.readouterr().out
    assert code == 0
    report = json.loads(out)
    assert report["mean_wer"] == 0.0
    assert report["coverage"] == {"total": 4, "run": 4}
    assert report["label_agreement"] == 1.0


def test_replay_tsv_report(corpus_dir, tmp_path):
    out = tmp_path / "report.tsv"
    code = main(["replay", "--corpus", corpus_dir, "--format", "tsv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "audio\temotion_tag\twer\tdominant_band\tfused_label\tagrees"
    assert len([l for l in lines if not l.startswith("#")]) == 5  # header + 4 items
    assert any(l.startswith("# mean_wer\t0.000000") for l in lines)


def test_serve_config_defaults_applied(tmp_path, demo_files):
    from fastapi.testclient import TestClient

    from tonescope.server import create_app

    wav_high, _, fixture = demo_files
    app = create_app(session_defaults={"transcript_fixture": fixture, "speed": 1e6})
    client = TestClient(app)
    response = client.post("/session", json={"source": wav_high})
    assert response.status_code == 200
    sid = response.json()["session_id"]
    import time as _time

    _time.sleep(1.0)
    report = client.get(f"/session/{sid}/report").json()
    assert report["keyword_bar"] == [{"w": "enjoy", "pol": 1}]  # fixture default applied
