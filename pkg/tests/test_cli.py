import json
import subprocess
import sys

import pytest

from posetcorr import __version__
from posetcorr.cli import main
from posetcorr.poset import antichain, chain, linear_sum

ANTICHAIN3 = '{"n":3,"relations":[]}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestExamples:
    def test_count_antichain(self, capsys):
        code, doc = run_json(capsys, "count", "--poset", ANTICHAIN3)
        assert code == 0 and doc["result"] == "6"

    def test_count_pretty(self, capsys):
        assert run(capsys, "count", "--poset", ANTICHAIN3, "--format", "pretty")[1] == "6\n"

    def test_euler_csv(self, capsys):
        code, out, _ = run(capsys, "euler", "--upto", "7", "--format", "csv")
        assert code == 0 and "1,1,1,2,5,16,61,272" in out.splitlines()

    def test_corr_del_upper_from_file(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(linear_sum(antichain(2), chain(2)).to_dict()))
        code, doc = run_json(capsys, "check", "--id", "corr-del-upper", "--poset", str(path), "--x", "0", "--y", "1")
        assert code == 0
        assert doc["result"]["status"] == "Equality" and doc["result"]["lhs"] == "2/1"

    def test_poset_from_stdin(self, capsys, monkeypatch):
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(ANTICHAIN3))
        assert run_json(capsys, "count", "--poset", "-")[1]["result"] == "6"

    def test_value_counts(self, capsys):
        assert run_json(capsys, "count", "--poset", ANTICHAIN3, "--x", "0")[1]["result"] == ["2", "2", "2"]

    def test_stats(self, capsys):
        code, doc = run_json(capsys, "stats", "--poset", ANTICHAIN3, "--x", "0")
        assert code == 0 and isinstance(doc["result"], dict)

    def test_syt(self, capsys):
        code, doc = run_json(capsys, "syt", "--shape", "2,2/1", "--verify")
        assert code == 0 and "2" in json.dumps(doc["result"])

    def test_atlas(self, capsys):
        code, doc = run_json(capsys, "atlas", "--poset", ANTICHAIN3, "--a", "0", "--k", "2")
        assert code == 0 and doc["result"]

    def test_hookwalk(self, capsys):
        code, doc = run_json(capsys, "hookwalk", "--shape", "2,1", "--samples", "2000", "--seed", "4")
        assert code == 0 and doc["result"]["samples"] == 2000 and doc["result"]["tv"] < 0.05


class TestEnvelope:
    @pytest.mark.parametrize("argv", [
        ["count", "--poset", ANTICHAIN3],
        ["euler", "--upto", "5"],
        ["sweep", "--poset", ANTICHAIN3],
        ["syt", "--shape", "3,2"],
    ])
    def test_schema(self, capsys, argv):
        code, doc = run_json(capsys, *argv)
        assert code == 0
        assert set(doc) == {"result", "meta"}
        assert doc["meta"] == {"command": argv[0], "seed": 0, "version": __version__}


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        [],
        ["count"],
        ["count", "--poset", "{not json"],
        ["count", "--poset", '{"n":2,"relations":[[0,1],[1,0]]}'],
        ["check", "--id", "no-such", "--poset", ANTICHAIN3],
        ["check", "--id", "corr-del-lower", "--poset", ANTICHAIN3, "--x", "0"],
        ["frobnicate"],
    ])
    def test_usage(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 1 and out == "" and err

    def test_discovery(self, capsys):
        poset = '{"n":4,"relations":[[0,3],[1,3]]}'
        code, doc = run_json(capsys, "check", "--id", "ext-stanley-conj", "--poset", poset, "--A", "2,3", "--k", "2")
        assert code == 3 and doc["result"]["status"] == "Fails"

    def test_hunt_discovery(self, capsys, tmp_path):
        out = tmp_path / "h.jsonl"
        code, doc = run_json(capsys, "hunt", "--checks", "ext-stanley-conj", "--n", "1-4", "--out", str(out))
        assert code == 3 and out.exists() and (tmp_path / "h.jsonl.manifest.json").exists()

    def test_hunt_clean(self, capsys):
        code, doc = run_json(capsys, "hunt", "--checks", "reverse-conj", "--n", "1-4")
        assert code == 0 and doc["result"]["discoveries"] == 0


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "posetcorr", "count", "--poset", ANTICHAIN3],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"] == "6"
