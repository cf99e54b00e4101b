import http.server
import json
import sys
import threading
import time

import numpy as np
import pytest

from tonescope.audio import FrameConfig, frame_signal
from tonescope.transcripts import (
    AsrProviderSpec,
    ChunkAssembler,
    FixtureError,
    FixtureProvider,
    SegmentFeed,
    load_fixture,
    merge_overlap,
    transcribe_stream,
)
from conftest import SR, sine


def frames_for(duration_s=2.0):
    return list(frame_signal(sine(200, duration_s), FrameConfig(2048, 512, SR)))


# -- fixtures ----------------------------------------------------------------

def write_fixture(tmp_path, lines, name="fx.tsv"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def test_fixture_replay_in_order(tmp_path):
    path = write_fixture(tmp_path, [
        "0\t400\thello there",
        "500\t900\tsecond part",
        "1000\t1500\tthird bit",
    ])
    spec = AsrProviderSpec("fixture", path)
    segments = list(transcribe_stream(iter(frames_for(2.0)), spec))
    assert [s.text for s in segments] == ["hello there", "second part", "third bit"]
    assert [s.segment_index for s in segments] == [0, 1, 2]
    assert all(s.provider == "fixture" for s in segments)


def test_fixture_segments_delivered_by_stream_time(tmp_path):
    path = write_fixture(tmp_path, ["0\t100\tearly", "1500\t1800\tlate"])
    feed = SegmentFeed(AsrProviderSpec("fixture", path))
    frames = frames_for(2.0)
    first = feed.feed(frames[0])  # stream time ~128 ms
    assert [s.text for s in first] == ["early"]
    mid = []
    for frame in frames[1:30]:  # through ~1 s
        mid.extend(feed.feed(frame))
    assert mid == []
    late = []
    for frame in frames[30:]:
        late.extend(feed.feed(frame))
    assert [s.text for s in late] == ["late"]


def test_fixture_comments_and_blanks_skipped(tmp_path):
    path = write_fixture(tmp_path, ["# comment", "", "0\t100\tok"])
    assert [s.text for s in load_fixture(path).segments] == ["ok"]


def test_fixture_malformed_line_names_lineno(tmp_path):
    path = write_fixture(tmp_path, ["0\t100\tok", "not a fixture line"])
    with pytest.raises(FixtureError, match="line 2"):
        load_fixture(path)


def test_fixture_nonnumeric_timestamp(tmp_path):
    path = write_fixture(tmp_path, ["zero\t100\tok"])
    with pytest.raises(FixtureError, match="line 1"):
        load_fixture(path)


def test_fixture_start_after_end_rejected(tmp_path):
    path = write_fixture(tmp_path, ["500\t100\tbackwards"])
    with pytest.raises(FixtureError):
        load_fixture(path)


def test_fixture_out_of_order_rejected(tmp_path):
    path = write_fixture(tmp_path, ["1000\t1500\tlater", "0\t500\tearlier"])
    with pytest.raises(FixtureError, match="line 2"):
        load_fixture(path)


def test_fixture_missing_fails_at_start(tmp_path):
    with pytest.raises(FixtureError):
        SegmentFeed(AsrProviderSpec("fixture", str(tmp_path / "absent.tsv")))


def test_empty_fixture_emits_nothing(tmp_path):
    path = write_fixture(tmp_path, ["# nothing here"])
    assert list(transcribe_stream(iter(frames_for(1.0)), AsrProviderSpec("fixture", path))) == []


def test_fixture_replay_deterministic(tmp_path):
    path = write_fixture(tmp_path, ["0\t400\talpha", "600\t900\tbeta"])
    spec = AsrProviderSpec("fixture", path)
    a = list(transcribe_stream(iter(frames_for(1.5)), spec))
    b = list(transcribe_stream(iter(frames_for(1.5)), spec))
    assert a == b


# -- overlap merging ---------------------------------------------------------

def test_merge_overlap_strips_duplicate_prefix():
    assert merge_overlap("we shipped the release", "the release went well") == "went well"
    assert merge_overlap("hello world", "Hello World again") == "again"


def test_merge_overlap_no_common_part():
    assert merge_overlap("completely different", "new words here") == "new words here"
    assert merge_overlap("", "first chunk") == "first chunk"


def test_merge_overlap_full_duplicate():
    assert merge_overlap("say it again", "say it again") == ""


# -- chunk assembly ----------------------------------------------------------

def test_chunk_assembler_boundaries_and_overlap():
    signal = np.random.default_rng(1).uniform(-1, 1, int(3.3 * SR))
    assembler = ChunkAssembler(SR)
    chunks = []
    for frame in frame_signal(signal, FrameConfig(2048, 512, SR)):
        chunks.extend(assembler.feed(frame))
    chunks.extend(assembler.flush())
    # first chunk covers [0, 1000] ms with no lead-in
    chunk, start, end = chunks[0]
    assert (start, end) == (0.0, 1000.0)
    assert np.array_equal(chunk, signal[:SR])
    # later chunks carry a 200 ms lead-in of already-sent audio
    chunk2, start2, end2 = chunks[1]
    assert (start2, end2) == (800.0, 2000.0)
    assert np.array_equal(chunk2, signal[int(0.8 * SR) : 2 * SR])
    # final flush covers the tail
    tail_start = chunks[-1][1]
    assert chunks[-1][2] == pytest.approx(3300.0, abs=1.0)


def test_chunk_assembler_reconstructs_exactly():
    signal = np.random.default_rng(2).uniform(-1, 1, int(2.5 * SR))
    assembler = ChunkAssembler(SR)
    pieces = []
    for frame in frame_signal(signal, FrameConfig(2048, 512, SR)):
        for chunk, start, end in assembler.feed(frame):
            lead = int(round(start * SR / 1000))
            sent = int(round(end * SR / 1000))
            assert np.array_equal(chunk, signal[lead:sent])
            pieces.append((lead, sent))
    for chunk, start, end in assembler.flush():
        lead = int(round(start * SR / 1000))
        sent = int(round(end * SR / 1000))
        assert np.array_equal(chunk, signal[lead:sent])
        pieces.append((lead, sent))
    # every sample was sent at least once, in order
    covered = 0
    for lead, sent in pieces:
        assert lead <= covered
        covered = max(covered, sent)
    assert covered == signal.size


# -- external process provider ------------------------------------------------

FAKE_ASR = r"""
import sys
rate = 16000
bytes_per_second = rate * 2
total = 0
emitted = 0
stdin = sys.stdin.buffer
while True:
    block = stdin.read(4096)
    if not block:
        break
    total += len(block)
    while total >= (emitted + 1) * bytes_per_second:
        start = emitted * 1000
        end = start + 1000
        print(f"{start}\t{end}\tchunk {emitted} text", flush=True)
        emitted += 1
"""


def test_external_process_provider(tmp_path):
    script = tmp_path / "fake_asr.py"
    script.write_text(FAKE_ASR)
    spec = AsrProviderSpec("external_process", f"{sys.executable} {script}", timeout_ms=5000)
    segments = list(transcribe_stream(iter(frames_for(3.0)), spec))
    texts = [s.text for s in segments]
    assert "chunk 0 text" in texts and "chunk 1 text" in texts
    assert [s.segment_index for s in segments] == list(range(len(segments)))
    starts = [s.start_ms for s in segments]
    assert starts == sorted(starts)


def test_external_process_death_goes_degraded(tmp_path):
    script = tmp_path / "dies.py"
    script.write_text("import sys; sys.exit(3)\n")
    spec = AsrProviderSpec("external_process", f"{sys.executable} {script}", timeout_ms=1000)
    statuses = []
    segments = list(
        transcribe_stream(iter(frames_for(2.0)), spec, on_status=lambda s, d: statuses.append(s))
    )
    assert segments == []
    assert statuses == ["degraded"]


# -- HTTP provider -----------------------------------------------------------

class _AsrHandler(http.server.BaseHTTPRequestHandler):
    behavior = "ok"
    calls = 0

    def do_POST(self):
        cls = type(self)
        cls.calls += 1
        length = int(self.headers.get("Content-Length", 0))
        self.rfile.read(length)
        if cls.behavior == "hang":
            time.sleep(5)
            return
        if cls.behavior == "silent":
            body = json.dumps({"text": "", "start_ms": 0, "end_ms": 0}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        start = int(self.headers.get("X-Chunk-Start-Ms", 0))
        end = int(self.headers.get("X-Chunk-End-Ms", 0))
        body = json.dumps({"text": f"heard {start}", "start_ms": start, "end_ms": end}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def asr_server():
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _AsrHandler)
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _AsrHandler.behavior = "ok"
    _AsrHandler.calls = 0
    yield f"http://127.0.0.1:{server.server_port}/asr"
    server.shutdown()


def test_http_provider_segments(asr_server):
    spec = AsrProviderSpec("http_service", asr_server, timeout_ms=3000)
    segments = list(transcribe_stream(iter(frames_for(2.5)), spec))
    assert [s.text for s in segments][:2] == ["heard 0", "heard 800"]
    assert all(s.provider == "http" for s in segments)


def test_http_provider_timeout_degrades(asr_server):
    _AsrHandler.behavior = "hang"
    spec = AsrProviderSpec("http_service", asr_server, timeout_ms=300)
    statuses = []
    t0 = time.monotonic()
    segments = list(
        transcribe_stream(iter(frames_for(2.0)), spec, on_status=lambda s, d: statuses.append((s, d)))
    )
    elapsed = time.monotonic() - t0
    assert segments == []
    assert [s for s, _ in statuses] == ["degraded"]
    assert "retries" in statuses[0][1]
    assert _AsrHandler.calls == 3  # first attempt + 2 retries
    assert elapsed < 5.0  # degraded quickly, no endless retrying


def test_provider_spec_validation():
    with pytest.raises(ValueError):
        AsrProviderSpec("magic", "x")
    with pytest.raises(ValueError):
        AsrProviderSpec("fixture", "x", timeout_ms=0)


def test_provider_empty_text_yields_no_segments(asr_server):
    # a provider hearing silence returns empty text; no segments emitted
    _AsrHandler.behavior = "silent"
    spec = AsrProviderSpec("http_service", asr_server, timeout_ms=3000)
    segments = list(transcribe_stream(iter(frames_for(2.0)), spec))
    assert segments == []
