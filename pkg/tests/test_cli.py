"""Command-line workflows and exit codes."""

import json
import subprocess
import sys

import pytest

from tracekit import codec
from tracekit.cli import main
from tracekit.store import trace_id
from tracekit.traces import FullTrace, MinimalTrace


def run_cli(*argv, capsys):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def recorded(tmp_path, capsys):
    out = tmp_path / "run.mintrace"
    code, stdout, _ = run_cli(
        "record", "--env", "CartPole-det-v1", "--policy", "random",
        "--episodes", "10", "--master-seed", "42", "--label", "demo",
        "--out", str(out), capsys=capsys,
    )
    assert code == 0
    return out, stdout


class TestRecord:
    def test_record_prints_id_and_counts(self, recorded):
        out, stdout = recorded
        lines = stdout.splitlines()
        assert lines[0] == trace_id(out.read_bytes())
        assert lines[1].startswith("episodes: 10")
        assert lines[2].startswith("steps: ")

    def test_record_twice_is_byte_identical(self, tmp_path, capsys):
        args = [
            "record", "--env", "TaxiGrid-det-v1", "--episodes", "4",
            "--master-seed", "7", "--label", "twin",
        ]
        a, b = tmp_path / "a.mintrace", tmp_path / "b.mintrace"
        assert run_cli(*args, "--out", str(a), capsys=capsys)[0] == 0
        assert run_cli(*args, "--out", str(b), capsys=capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_env_exits_2(self, tmp_path, capsys):
        code, _, err = run_cli(
            "record", "--env", "Pong-v0", "--episodes", "1",
            "--out", str(tmp_path / "x"), capsys=capsys,
        )
        assert code == 2
        assert "unknown environment" in err

    def test_scripted_cartpole_episodes_all_short(self, tmp_path, capsys):
        out = tmp_path / "scripted.mintrace"
        code, _, _ = run_cli(
            "record", "--env", "CartPole-det-v1", "--policy", "scripted",
            "--episodes", "8", "--master-seed", "1", "--out", str(out),
            capsys=capsys,
        )
        assert code == 0
        trace = codec.decode(out.read_bytes())
        assert all(len(ep.actions) < 200 for ep in trace.episodes)
        assert all(ep.terminated for ep in trace.episodes)


class TestResimulate:
    def test_writes_full_trace_and_reports(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        out = tmp_path / "run.fulltrace"
        code, stdout, _ = run_cli(
            "resimulate", str(mintrace), "--out", str(out), "--json",
            capsys=capsys,
        )
        assert code == 0
        report = json.loads(stdout)
        assert report["env_name"] == "CartPole-det-v1"
        assert report["ratio"] == report["full_bytes"] / report["minimal_bytes"]
        assert report["episodes"] == 10
        assert report["pct_resim_to_training"] is None
        assert isinstance(codec.decode(out.read_bytes()), FullTrace)

    def test_verify_runs_prints_zero_failures(self, recorded, capsys):
        mintrace, _ = recorded
        code, stdout, _ = run_cli(
            "resimulate", str(mintrace), "--verify-runs", "5", capsys=capsys,
        )
        assert code == 0
        assert "failed: 0/5" in stdout

    def test_workers_produce_identical_files(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        one, many = tmp_path / "w1.fulltrace", tmp_path / "w3.fulltrace"
        assert run_cli("resimulate", str(mintrace), "--out", str(one), capsys=capsys)[0] == 0
        assert run_cli(
            "resimulate", str(mintrace), "--out", str(many), "--workers", "3",
            capsys=capsys,
        )[0] == 0
        assert one.read_bytes() == many.read_bytes()

    def test_corrupt_input_exits_3(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        data = bytearray(mintrace.read_bytes())
        data[-1] ^= 0xFF
        bad = tmp_path / "bad.mintrace"
        bad.write_bytes(bytes(data))
        code, _, err = run_cli("resimulate", str(bad), capsys=capsys)
        assert code == 3

    def test_text_report_table(self, recorded, capsys):
        mintrace, _ = recorded
        code, stdout, _ = run_cli(
            "resimulate", str(mintrace), "--training-seconds", "100", capsys=capsys,
        )
        assert code == 0
        assert "Compression Ratio" in stdout
        assert "% Re-Simulation to Training" in stdout


class TestGraph:
    def test_graph_description_field(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        out = tmp_path / "graph.json"
        code, _, _ = run_cli("graph", str(mintrace), "--out", str(out), capsys=capsys)
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["description"] == "Reward per Episode"
        assert doc["data"]["values"][0]["env"] == "demo"

    def test_duplicate_labels_exit_2(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        out = tmp_path / "graph.json"
        code, _, err = run_cli(
            "graph", str(mintrace), str(mintrace), "--out", str(out), capsys=capsys,
        )
        assert code == 2
        assert "duplicate" in err

    def test_graph_values_match_resimulated_sums(self, recorded, tmp_path, capsys):
        from tracekit.resim import resimulate
        from tracekit.traces import episode_reward_sum

        mintrace, _ = recorded
        out = tmp_path / "graph.json"
        assert run_cli("graph", str(mintrace), "--out", str(out), capsys=capsys)[0] == 0
        doc = json.loads(out.read_text())
        trace = codec.decode(mintrace.read_bytes())
        sums = [episode_reward_sum(ep) for ep in resimulate(trace).episodes]
        assert [v["Reward"] for v in doc["data"]["values"]] == sums


class TestStore:
    def test_add_get_round_trip(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        root = str(tmp_path / "cas")
        code, stdout, _ = run_cli(
            "store", "--store", root, "add", str(mintrace), capsys=capsys,
        )
        assert code == 0
        tid = stdout.strip()
        fetched = tmp_path / "fetched.mintrace"
        assert run_cli("store", "--store", root, "get", tid, str(fetched), capsys=capsys)[0] == 0
        assert fetched.read_bytes() == mintrace.read_bytes()

    def test_ls_and_pin(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        root = str(tmp_path / "cas")
        _, stdout, _ = run_cli("store", "--store", root, "add", str(mintrace), capsys=capsys)
        tid = stdout.strip()
        assert run_cli("store", "--store", root, "pin", tid, capsys=capsys)[0] == 0
        code, stdout, _ = run_cli("store", "--store", root, "ls", capsys=capsys)
        assert code == 0 and tid in stdout.splitlines()
        code, stdout, _ = run_cli("store", "--store", root, "ls", "--pins", capsys=capsys)
        assert code == 0 and tid in stdout.splitlines()
        code, stdout, _ = run_cli("store", "--store", root, "gc", capsys=capsys)
        assert code == 0 and stdout.strip() == ""

    def test_tamper_then_verify_exits_5(self, recorded, tmp_path, capsys):
        mintrace, _ = recorded
        root = tmp_path / "cas"
        _, stdout, _ = run_cli("store", "--store", str(root), "add", str(mintrace), capsys=capsys)
        tid = stdout.strip()
        blob = root / "content" / tid
        raw = bytearray(blob.read_bytes())
        raw[0] ^= 0x01
        blob.write_bytes(bytes(raw))
        code, stdout, _ = run_cli("store", "--store", str(root), "verify", capsys=capsys)
        assert code == 5
        assert tid in stdout.splitlines()
        code, _, _ = run_cli("store", "--store", str(root), "get", tid, str(tmp_path / "o"), capsys=capsys)
        assert code == 5

    def test_missing_content_exits_4(self, tmp_path, capsys):
        root = str(tmp_path / "cas")
        code, _, _ = run_cli(
            "store", "--store", root, "get", trace_id(b"nothing"), str(tmp_path / "o"),
            capsys=capsys,
        )
        assert code == 4

    def test_store_root_from_env(self, recorded, tmp_path, capsys, monkeypatch):
        mintrace, _ = recorded
        monkeypatch.setenv("TRACEKIT_STORE", str(tmp_path / "envcas"))
        code, stdout, _ = run_cli("store", "add", str(mintrace), capsys=capsys)
        assert code == 0 and stdout.startswith("mt1")

    def test_no_store_root_exits_2(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("TRACEKIT_STORE", raising=False)
        code, _, err = run_cli("store", "ls", capsys=capsys)
        assert code == 2


class TestEnvs:
    def test_envs_json_lists_bundled(self, capsys):
        code, stdout, _ = run_cli("envs", "--json", capsys=capsys)
        assert code == 0
        doc = json.loads(stdout)
        names = [env["name"] for env in doc["environments"]]
        for bundled in ("CartPole-det-v1", "TaxiGrid-det-v1", "PointMass4-det-v1"):
            assert bundled in names
        cartpole = next(e for e in doc["environments"] if e["name"] == "CartPole-det-v1")
        assert {"name": "gravity", "type": "float", "default": 9.8} in cartpole["parameters"]
        assert cartpole["observation_space"] == {"kind": "vector", "dim": 4}
        assert cartpole["action_space"] == {"kind": "discrete", "n": 2}

    def test_envs_human_output(self, capsys):
        code, stdout, _ = run_cli("envs", capsys=capsys)
        assert code == 0
        assert "CartPole-det-v1" in stdout


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.mintrace"
    proc = subprocess.run(
        [sys.executable, "-m", "tracekit", "record", "--env", "CartPole-det-v1",
         "--episodes", "2", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert isinstance(codec.decode(out.read_bytes()), MinimalTrace)
