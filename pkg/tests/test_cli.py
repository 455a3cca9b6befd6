import json
from pathlib import Path

import pytest

from lexkit.cli import main

DATA = Path(__file__).parent / "data"


def write_config(tmp_path: Path, transcript: Path | None = None, mode="replay") -> Path:
    lines = ["providers:", "  fixture:", f"    mode: {mode}", "    model: scripted-v1",
             "    default: true"]
    if transcript is not None:
        lines.append(f"    transcript: {transcript}")
    lines += [
        "kb:",
        "  store_dir: kb_store",
        "eval:",
        "  seed: 7",
        "  k: 3",
    ]
    path = tmp_path / "lexkit.yaml"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def kb_config(tmp_path):
    config = write_config(tmp_path, transcript=DATA / "mcq_transcripts.jsonl")
    assert main(["--config", str(config), "kb", "ingest", "--in", str(DATA / "toy_corpus.jsonl")]) == 0
    return config


class TestKbCommands:
    def test_ingest_then_search(self, kb_config, tmp_path, capsys):
        out = tmp_path / "hits.json"
        code = main(
            ["--config", str(kb_config), "kb", "search", "--q", "抚养费", "--k", "3",
             "--out", str(out)]
        )
        assert code == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("[")]
        assert len(lines) == 3
        assert lines[0].startswith("[1]")
        hits = json.loads(out.read_text(encoding="utf-8"))["hits"]
        assert hits[0]["title"] == "婚姻家事条例"
        assert "抚养费" in hits[0]["text"]

    def test_search_matches_engine_ranking(self, kb_config, tmp_path):
        from lexkit.kb import KnowledgeBase, RetrievalConfig

        out = tmp_path / "hits.json"
        main(["--config", str(kb_config), "kb", "search", "--q", "抚养费", "--k", "3",
              "--out", str(out)])
        cli_hits = json.loads(out.read_text(encoding="utf-8"))["hits"]
        kb = KnowledgeBase.load(Path(kb_config).parent / "kb_store")
        engine_hits = kb.search("抚养费", RetrievalConfig(k=3))
        assert [h["chunk_id"] for h in cli_hits] == [h.chunk_id for h in engine_hits]

    def test_rebuild(self, kb_config, capsys):
        assert main(["--config", str(kb_config), "kb", "rebuild"]) == 0
        assert "rebuilt index" in capsys.readouterr().out

    def test_search_empty_query_exit_1(self, kb_config):
        assert main(["--config", str(kb_config), "kb", "search", "--q", "  "]) == 1


class TestForgeCommands:
    def test_clean_then_stats(self, tmp_path, capsys):
        config = write_config(tmp_path, transcript=DATA / "forge_transcripts.jsonl")
        pairs_out = tmp_path / "pairs.jsonl"
        code = main(
            ["--config", str(config), "forge", "clean",
             "--in", str(DATA / "forge_records.jsonl"),
             "--schema", str(DATA / "forge_schema.json"),
             "--out", str(pairs_out), "--stats-out", str(tmp_path / "clean_stats.json")]
        )
        assert code == 0
        stats = json.loads((tmp_path / "clean_stats.json").read_text())
        assert stats["kept"] == 192 and stats["dropped"] == 8

        capsys.readouterr()
        assert main(["--config", str(config), "forge", "stats", "--in", str(pairs_out)]) == 0
        table = capsys.readouterr().out
        assert table.splitlines()[0].split("|")[0].strip() == "Dataset"
        assert "192" in table

    def test_lcot_and_triplet(self, tmp_path):
        config = write_config(tmp_path, transcript=DATA / "forge_transcripts.jsonl")
        pairs_out = tmp_path / "pairs.jsonl"
        main(["--config", str(config), "forge", "clean",
              "--in", str(DATA / "forge_records.jsonl"),
              "--schema", str(DATA / "forge_schema.json"), "--out", str(pairs_out)])
        wrapped_out = tmp_path / "wrapped.jsonl"
        assert main(["--config", str(config), "forge", "lcot", "--in", str(pairs_out),
                     "--out", str(wrapped_out)]) == 0
        triplets_out = tmp_path / "triplets.jsonl"
        assert main(["--config", str(config), "forge", "triplet",
                     "--pairs", str(wrapped_out),
                     "--records", str(DATA / "forge_records.jsonl"),
                     "--out", str(triplets_out)]) == 0
        triplet_lines = triplets_out.read_text(encoding="utf-8").strip().splitlines()
        assert len(triplet_lines) == 48
        assert all("references" in json.loads(l) for l in triplet_lines)


class TestEvalObj:
    def test_deterministic_report_files(self, tmp_path):
        config = write_config(tmp_path, transcript=DATA / "mcq_transcripts.jsonl")
        outs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            code = main(
                ["--config", str(config), "eval", "obj",
                 "--dataset", str(DATA / "mcq_fixture.jsonl"),
                 "--pool", str(DATA / "mcq_exemplars.jsonl"),
                 "--seed", "7", "--out", str(out)]
            )
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        summary = json.loads(outs[0])
        assert summary["micro_average"] == pytest.approx(100 * 16 / 24, abs=1e-6)

    def test_missing_dataset_exit_1(self, tmp_path):
        config = write_config(tmp_path, transcript=DATA / "mcq_transcripts.jsonl")
        code = main(["--config", str(config), "eval", "obj",
                     "--dataset", "nope.jsonl", "--pool", "nope.jsonl"])
        assert code == 1


class TestEvalSubj:
    def test_fixture_run(self, tmp_path, capsys):
        config = write_config(tmp_path, transcript=DATA / "subjective_transcripts.jsonl")
        out = tmp_path / "subj.json"
        code = main(
            ["--config", str(config), "eval", "subj",
             "--dataset", str(DATA / "subjective_fixture.jsonl"),
             "--judge-model", "judge-v1", "--repeats", "3", "--out", str(out)]
        )
        assert code == 0
        summary = json.loads(out.read_text(encoding="utf-8"))
        assert summary["mean_acc"] == pytest.approx(3.4, abs=1e-9)
        assert summary["n_invalid"] == 1
        assert "excluded: 1" in capsys.readouterr().out


class TestGatewayCommands:
    def test_record_then_replay_verify(self, tmp_path, monkeypatch):
        requests = tmp_path / "requests.jsonl"
        requests.write_text('{"text": "你好"}\n{"text": "再见"}\n', encoding="utf-8")
        transcript = tmp_path / "t.jsonl"
        transcript.write_text("", encoding="utf-8")
        config = write_config(tmp_path, transcript=transcript, mode="record")

        import lexkit.gateway as gw_mod

        monkeypatch.setattr(
            gw_mod, "http_transport", lambda r, p, k: (f"echo:{r.messages[0].content}", "stop")
        )
        assert main(["--config", str(config), "gateway", "record",
                     "--requests", str(requests)]) == 0
        assert len(transcript.read_text().strip().splitlines()) == 2

        replay_config = write_config(tmp_path, transcript=transcript, mode="replay")
        assert main(["--config", str(replay_config), "gateway", "replay-verify",
                     "--requests", str(requests)]) == 0

    def test_replay_verify_missing_exit_1(self, tmp_path):
        requests = tmp_path / "requests.jsonl"
        requests.write_text('{"text": "未录制"}\n', encoding="utf-8")
        transcript = tmp_path / "t.jsonl"
        transcript.write_text("", encoding="utf-8")
        config = write_config(tmp_path, transcript=transcript)
        assert main(["--config", str(config), "gateway", "replay-verify",
                     "--requests", str(requests)]) == 1


class TestThinAdapter:
    def test_identical_inputs_identical_module_calls(self, tmp_path, monkeypatch):
        """Subcommands only adapt flags to module calls: two invocations with
        the same inputs produce identical call traces."""
        import lexkit.cli as cli_mod

        config = write_config(tmp_path, transcript=DATA / "mcq_transcripts.jsonl")
        traces: list[tuple] = []
        real_evaluate = cli_mod.mcq_evaluate

        def tracing_evaluate(dataset, pool, cfg, profile, gateway, model_id, concurrency=4):
            traces.append(
                (
                    tuple(i.id for i in dataset),
                    tuple(p.id for p in pool),
                    cfg,
                    profile,
                    model_id,
                    concurrency,
                )
            )
            return real_evaluate(
                dataset, pool, cfg, profile, gateway, model_id, concurrency=concurrency
            )

        monkeypatch.setattr(cli_mod, "mcq_evaluate", tracing_evaluate)
        argv = ["--config", str(config), "eval", "obj",
                "--dataset", str(DATA / "mcq_fixture.jsonl"),
                "--pool", str(DATA / "mcq_exemplars.jsonl"), "--seed", "7"]
        assert main(argv) == 0
        assert main(argv) == 0
        assert len(traces) == 2
        assert traces[0] == traces[1]


class TestConfigValidation:
    def test_replay_without_transcript_rejected(self, tmp_path):
        config = tmp_path / "bad.yaml"
        config.write_text(
            "providers:\n  p:\n    mode: replay\n    default: true\n", encoding="utf-8"
        )
        assert main(["--config", str(config), "kb", "rebuild"]) == 1

    def test_two_defaults_rejected(self, tmp_path):
        t = tmp_path / "t.jsonl"
        t.write_text("", encoding="utf-8")
        config = tmp_path / "bad.yaml"
        config.write_text(
            f"providers:\n"
            f"  a:\n    mode: replay\n    transcript: {t}\n    default: true\n"
            f"  b:\n    mode: replay\n    transcript: {t}\n    default: true\n",
            encoding="utf-8",
        )
        assert main(["--config", str(config), "kb", "rebuild"]) == 1

    def test_usage_error_exit_1(self):
        assert main(["kb", "search"]) == 1  # missing required --q
