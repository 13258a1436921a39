"""Session loading, query dispatch, CLI commands, and the HTTP service."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from emofuse import (
    IOFailure,
    LabelError,
    ParamError,
    QueryError,
    QueryRequest,
    SessionConfig,
    dominant_summary,
    export_frames,
    export_fused,
    load_fused_session,
    load_session,
    make_server,
    run_query,
    save_mapping,
    EmotionMapping,
    fuse,
)
from emofuse.cli import main
from emofuse.session import resolve_mapping
from conftest import FUSED_EXCERPT_ROWS, write_excerpt_files


@pytest.fixture
def excerpt_files(tmp_path):
    return write_excerpt_files(tmp_path)


@pytest.fixture
def excerpt_session(excerpt_files):
    frames_path, speech_path = excerpt_files
    return load_session(frames_path, speech_path, SessionConfig(min_run_s=0.0))


class TestLoadSession:
    def test_record_count_matches_segments(self, excerpt_session):
        assert len(excerpt_session.fused) == len(FUSED_EXCERPT_ROWS)
        assert excerpt_session.frame_dominants is not None
        assert len(excerpt_session.timeline) > 0

    def test_dominants_survive_probability_reconstruction(self, excerpt_session):
        got = [r.dominant_fer_emotion for r in excerpt_session.fused]
        want = [row[6] for row in FUSED_EXCERPT_ROWS]
        assert got == want

    def test_missing_file_names_path(self, tmp_path):
        with pytest.raises(IOFailure, match="absent.csv"):
            load_session(tmp_path / "absent.csv", tmp_path / "speech.csv")

    def test_bad_header_names_column(self, tmp_path, excerpt_files):
        _, speech_path = excerpt_files
        bad = tmp_path / "bad_frames.csv"
        bad.write_text("timestamp,angry,disgust,fear,happy,sad,surprise\n", encoding="utf-8")
        with pytest.raises(Exception, match="neutral"):
            load_session(bad, speech_path)

    def test_metadata_shape(self, excerpt_session):
        meta = excerpt_session.metadata()
        assert meta["schema_version"] == 1
        assert meta["record_count"] == 27
        assert meta["duration_s"] == pytest.approx(126.4)

    def test_fused_only_session(self, tmp_path, fused_excerpt):
        path = tmp_path / "fused.csv"
        export_fused(fused_excerpt, path)
        session = load_fused_session(path)
        assert session.frame_dominants is None
        assert len(session.fused) == 27


class TestRunQuery:
    def test_dominant_summary_matches_insights(self, excerpt_session):
        result = run_query(excerpt_session, QueryRequest("dominant-summary"))
        got = {row["label"]: row["count"] for row in result.rows}
        assert got == dominant_summary(list(excerpt_session.fused))

    def test_peak_happy(self, excerpt_session):
        result = run_query(excerpt_session, QueryRequest("peak", {"label": "happy"}))
        (row,) = result.rows
        assert row["text"] == "Sorry."
        assert row["start"] == 49.0

    def test_peak_requires_label(self, excerpt_session):
        with pytest.raises(ParamError):
            run_query(excerpt_session, QueryRequest("peak"))

    def test_peak_rejects_non_basic_label(self, excerpt_session):
        with pytest.raises(LabelError):
            run_query(excerpt_session, QueryRequest("peak", {"label": "curiosity"}))

    def test_unknown_query_name(self, excerpt_session):
        with pytest.raises(QueryError):
            run_query(excerpt_session, QueryRequest("sentiment"))

    def test_unknown_parameter_rejected(self, excerpt_session):
        with pytest.raises(ParamError):
            run_query(excerpt_session, QueryRequest("no-face", {"label": "happy"}))

    def test_filter_speech(self, excerpt_session):
        result = run_query(excerpt_session, QueryRequest("filter-speech", {"labels": "curiosity,remorse"}))
        assert [row["text"] for row in result.rows] == [
            "Sorry.",
            "Where will people pick it up from you?",
            "What's this?",
        ]

    def test_keyword(self, excerpt_session):
        result = run_query(excerpt_session, QueryRequest("keyword", {"pattern": "price"}))
        assert [row["text"] for row in result.rows] == ["And I'm going to set my price."]

    def test_raw_and_mapped_anomaly_queries(self, excerpt_session):
        raw = run_query(excerpt_session, QueryRequest("raw-anomalies"))
        mapped = run_query(excerpt_session, QueryRequest("mapped-anomalies"))
        assert [r["index"] for r in raw.rows] == [2, 6, 7, 8, 11, 13, 14, 17, 18, 19, 20, 24, 26]
        assert [r["index"] for r in mapped.rows] == [7, 11, 13, 18, 20, 24]

    def test_mapped_include_neutral_flag_parsing(self, excerpt_session):
        widened = run_query(
            excerpt_session, QueryRequest("mapped-anomalies", {"include_neutral": "1"})
        )
        assert len(widened.rows) == 13
        with pytest.raises(ParamError):
            run_query(excerpt_session, QueryRequest("mapped-anomalies", {"include_neutral": "maybe"}))

    def test_timeline_query(self, excerpt_session):
        result = run_query(excerpt_session, QueryRequest("timeline"))
        assert result.rows[0]["start_s"] == excerpt_session.timeline[0].start_s
        rebuilt = run_query(excerpt_session, QueryRequest("timeline", {"min_run": "50"}))
        assert len(rebuilt.rows) <= len(result.rows)

    def test_timeline_unavailable_without_frames(self, tmp_path, fused_excerpt):
        path = tmp_path / "fused.csv"
        export_fused(fused_excerpt, path)
        session = load_fused_session(path)
        with pytest.raises(QueryError):
            run_query(session, QueryRequest("timeline"))

    def test_hotspots_default_and_custom(self, excerpt_session):
        default = run_query(excerpt_session, QueryRequest("hotspots"))
        assert default.rows == ()  # the listing excerpt has no friction labels
        custom = run_query(excerpt_session, QueryRequest("hotspots", {"labels": "curiosity"}))
        assert len(custom.rows) == 2


class TestMappingResolution:
    def test_env_var_override(self, tmp_path, monkeypatch):
        path = tmp_path / "custom.csv"
        save_mapping(EmotionMapping("custom", {"curiosity": "happy"}), path)
        monkeypatch.setenv("EMOFUSE_MAPPING", str(path))
        mapping = resolve_mapping()
        assert mapping["curiosity"] == "happy"
        assert "remorse" not in mapping

    def test_explicit_path_beats_env(self, tmp_path, monkeypatch):
        env_path = tmp_path / "env.csv"
        save_mapping(EmotionMapping("env", {"joy": "sad"}), env_path)
        arg_path = tmp_path / "arg.csv"
        save_mapping(EmotionMapping("arg", {"joy": "happy"}), arg_path)
        monkeypatch.setenv("EMOFUSE_MAPPING", str(env_path))
        assert resolve_mapping(str(arg_path))["joy"] == "happy"

    def test_default_when_unset(self, monkeypatch):
        monkeypatch.delenv("EMOFUSE_MAPPING", raising=False)
        assert len(resolve_mapping()) == 28


class TestCli:
    def test_fuse_file_equals_memory(self, tmp_path, excerpt_files, excerpt_session, capsys):
        frames_path, speech_path = excerpt_files
        out = tmp_path / "fused.csv"
        assert main(["fuse", "--frames", str(frames_path), "--speech", str(speech_path), "-o", str(out)]) == 0
        from emofuse import parse_fused

        parsed = parse_fused(out)
        assert len(parsed) == 27
        assert [r.dominant_fer_emotion for r in parsed] == [
            r.dominant_fer_emotion for r in excerpt_session.fused
        ]

    def test_dominants_command(self, tmp_path, excerpt_files):
        frames_path, _ = excerpt_files
        out = tmp_path / "doms.csv"
        assert main(["dominants", "--frames", str(frames_path), "-o", str(out)]) == 0
        header = out.read_text().splitlines()[0]
        assert header == "Timestamp,Highest Score,Facial Emotion"

    def test_analyze_outputs_json(self, tmp_path, excerpt_files, capsys):
        frames_path, speech_path = excerpt_files
        fused_path = tmp_path / "fused.csv"
        main(["fuse", "--frames", str(frames_path), "--speech", str(speech_path), "-o", str(fused_path)])
        capsys.readouterr()
        assert main(["analyze", "--fused", str(fused_path), "--query", "dominant-summary"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["schema_version"] == 1
        counts = {row["label"]: row["count"] for row in body["rows"]}
        assert counts == {"neutral": 18, "angry": 4, "happy": 3, "sad": 2}

    def test_analyze_error_path(self, tmp_path, excerpt_files, capsys):
        frames_path, speech_path = excerpt_files
        fused_path = tmp_path / "fused.csv"
        main(["fuse", "--frames", str(frames_path), "--speech", str(speech_path), "-o", str(fused_path)])
        capsys.readouterr()
        code = main(["analyze", "--fused", str(fused_path), "--query", "nonsense"])
        captured = capsys.readouterr()
        assert code == 1
        assert captured.err.startswith("E_QUERY:")
        assert "\n" not in captured.err.strip()

    def test_missing_file_error_is_coded(self, capsys):
        code = main(["analyze", "--fused", "/nonexistent/f.csv", "--query", "no-face"])
        captured = capsys.readouterr()
        assert code == 1
        assert captured.err.startswith("E_IO:")

    def test_report_deterministic(self, tmp_path, excerpt_files, capsys):
        frames_path, speech_path = excerpt_files
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert main(["report", "--frames", str(frames_path), "--speech", str(speech_path), "-o", str(out1)]) == 0
        assert main(["report", "--frames", str(frames_path), "--speech", str(speech_path), "-o", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        body = json.loads(out1.read_text())
        assert body["dominant_summary"]["neutral"] == 18

    def test_eval_command(self, tmp_path, capsys):
        path = tmp_path / "preds.csv"
        path.write_text("truth,predicted\na,a\na,b\nb,b\nb,b\n", encoding="utf-8")
        assert main(["eval", "--pred", str(path)]) == 0
        out = capsys.readouterr().out
        assert "accuracy  0.7500" in out
        assert main(["eval", "--pred", str(path), "--weighted"]) == 0
        assert "weighted" in capsys.readouterr().out

    def test_rank_command(self, grid_path, capsys):
        assert main(["rank", "--grid", str(grid_path)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1].endswith("trpakov/vit-face-expression")
        assert "0.4480" in lines[1]


class ServiceFixture:
    def __init__(self, session):
        self.server = make_server(session, port=0)
        self.port = self.server.server_address[1]
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    def get(self, path):
        try:
            with urllib.request.urlopen(f"http://127.0.0.1:{self.port}{path}") as resp:
                return resp.status, resp.read()
        except urllib.error.HTTPError as exc:
            return exc.code, exc.read()

    def get_json(self, path):
        status, body = self.get(path)
        return status, json.loads(body)

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def service(excerpt_session):
    svc = ServiceFixture(excerpt_session)
    yield svc
    svc.close()


class TestService:
    def test_session_metadata(self, service):
        status, body = service.get_json("/api/session")
        assert status == 200
        assert body["record_count"] == 27

    def test_records_paging(self, service):
        status, body = service.get_json("/api/records?offset=25&limit=10")
        assert status == 200
        assert body["total"] == 27
        assert [row["index"] for row in body["rows"]] == [25, 26]

    def test_records_rejects_bad_offset(self, service):
        status, body = service.get_json("/api/records?offset=x")
        assert status == 400
        assert body["error"]["code"] == "E_PARAM"

    def test_timeline_endpoint(self, service):
        status, body = service.get_json("/api/timeline")
        assert status == 200
        assert body["schema_version"] == 1
        assert body["segments"][0]["start_s"] == pytest.approx(2.92 + (5.96 - 2.92) / 6)
        status, rebuilt = service.get_json("/api/timeline?min_run=1000")
        assert status == 200
        assert len(rebuilt["segments"]) == 1

    def test_anomalies_modes(self, service):
        _, raw = service.get_json("/api/anomalies?mode=raw")
        assert len(raw["rows"]) == 13
        _, mapped = service.get_json("/api/anomalies?mode=mapped")
        assert len(mapped["rows"]) == 6
        _, widened = service.get_json("/api/anomalies?mode=mapped&include_neutral=1")
        assert len(widened["rows"]) == 13
        status, bad = service.get_json("/api/anomalies?mode=psychic")
        assert status == 400
        assert bad["error"]["code"] == "E_PARAM"

    def test_query_endpoint_matches_run_query(self, service, excerpt_session):
        status, body = service.get_json("/api/query?name=dominant-summary")
        assert status == 200
        got = {row["label"]: row["count"] for row in body["rows"]}
        assert got == dominant_summary(list(excerpt_session.fused))

    def test_invalid_query_name_is_400_with_code(self, service):
        status, body = service.get_json("/api/query?name=oracle")
        assert status == 400
        assert body["error"]["code"].startswith("E_")
        assert body["error"]["code"] == "E_QUERY"

    def test_unknown_route_404_with_code(self, service):
        status, body = service.get_json("/api/anything")
        assert status == 404
        assert body["error"]["code"] == "E_ROUTE"

    def test_post_is_method_not_allowed(self, service):
        req = urllib.request.Request(
            f"http://127.0.0.1:{service.port}/api/session", data=b"{}", method="POST"
        )
        try:
            urllib.request.urlopen(req)
            status, body = 200, b"{}"
        except urllib.error.HTTPError as exc:
            status, body = exc.code, exc.read()
        assert status == 405
        assert json.loads(body)["error"]["code"] == "E_METHOD"

    def test_identical_requests_are_byte_identical(self, service):
        _, first = service.get("/api/query?name=raw-anomalies")
        _, second = service.get("/api/query?name=raw-anomalies")
        assert first == second
