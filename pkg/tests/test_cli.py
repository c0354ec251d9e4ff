import pytest

from huipminer import cli, oracle
from huipminer.miner import mine

from conftest import DATA, TABLE2

TABLE1 = str(DATA / "table1.tsv")
MINE = ["mine", "--input", TABLE1, "--threshold", "14", "--absolute", "--max-length", "2", "--max-size", "2"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mine_table1(capsys):
    code, out, err = run(capsys, *MINE)
    assert code == 0
    assert "{A}\t20\t4\t1\t1" in out.splitlines()
    assert "coincident round 1: generated=6 pruned=2" in err


def test_relative_above_one_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["mine", "--input", TABLE1, "--threshold", "1.5", "--relative"])
    assert exc.value.code != 0


def test_pruning_modes_give_identical_files(tmp_path, capsys):
    files = []
    for mode in ("none", "sdcp", "ldcp"):
        path = tmp_path / f"{mode}.tsv"
        assert cli.main(MINE + ["--pruning", mode, "--output", str(path)]) == 0
        files.append(path.read_bytes())
    assert files[0] == files[1] == files[2]


def test_mine_with_utilities_jsonl(capsys):
    code, out, _ = run(capsys, "mine", "--input", TABLE1, "--utilities", str(DATA / "table4_utilities.tsv"),
                       "--threshold", "21", "--max-length", "2", "--max-size", "2", "--format", "jsonl")
    assert code == 0
    assert '{"pattern": "{B}->{A}", "u_max": 21, "support": 2, "length": 2, "size": 1}' in out.splitlines()


def test_reject_policy_fails_on_unmapped(tmp_path, capsys):
    util = tmp_path / "u.tsv"
    util.write_text("A\t1\n")
    code, _, err = run(capsys, *MINE, "--utilities", str(util), "--default-policy", "reject")
    assert code == 1 and "no external utility" in err


def test_convert(capsys):
    code, out, _ = run(capsys, "convert", "--input", TABLE1)
    assert code == 0
    assert out == "".join(f"{sid}\t{row}\n" for sid, row in TABLE2.items())
    assert run(capsys, "convert", "--input", TABLE1)[1] == out


def test_convert_empty_input(tmp_path, capsys):
    empty = tmp_path / "empty.tsv"
    empty.write_text("")
    code, _, err = run(capsys, "convert", "--input", str(empty))
    assert code == 1 and "zero accepted records" in err


def test_stats(capsys):
    code, out, _ = run(capsys, "stats", "--input", TABLE1)
    stats = dict(line.split("\t") for line in out.splitlines())
    assert code == 0
    assert stats["event_intervals"] == "17" and stats["e_sequences"] == "4"
    assert (stats["size_min"], stats["size_max"], stats["labels"]) == ("4", "5", "6")


def test_stats_single_interval(tmp_path, capsys):
    f = tmp_path / "one.tsv"
    f.write_text("1\tA\t0\t4\n")
    stats = dict(line.split("\t") for line in run(capsys, "stats", "--input", str(f))[1].splitlines())
    assert stats["size_min"] == stats["size_max"] == stats["size_avg"] == "1"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--runs", "15", "--seed", "3")
    assert code == 0 and out.strip() == "15/15 agree"
    assert run(capsys, "verify", "--runs", "15", "--seed", "3")[1] == out


def test_verify_flags_corrupted_miner(monkeypatch, capsys):
    def corrupted(db, p, cfg):
        return set(mine(db, p, cfg).patterns[1:])

    monkeypatch.setattr(oracle, "_miner_set", corrupted)
    monkeypatch.setattr(oracle.verify, "__defaults__", (0, 200, oracle.CorpusParams()))
    monkeypatch.setattr(oracle.verify, "__kwdefaults__", {"pruning": "ldcp", "miner": corrupted})
    code, out, err = run(capsys, "verify", "--runs", "10")
    assert code == 1
    assert "minimal failing database" in err
