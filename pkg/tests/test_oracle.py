import random

import pytest

from huipminer.miner import MinerConfig, mine
from huipminer.model import CSequence, CSequenceDatabase, LSequence, UtilityTable
from huipminer.oracle import (
    OracleExplosion,
    corpus,
    enumerate_patterns,
    oracle_max_utilities,
    oracle_mine,
    verify,
    witnesses,
)
from huipminer.utility import embedding_utility, pattern_max_utility

# frozen from enumerate_patterns; the sid 2 count (24) was checked by hand
TABLE2_PATTERNS_K2_Z2 = 66


def db(*rows):
    return CSequenceDatabase(tuple(CSequence.of(str(i + 1), r) for i, r in enumerate(rows)))


def test_enumerate_trivial():
    assert enumerate_patterns(db([("A", 1)]), 1, 1) == {LSequence.of("A")}
    assert enumerate_patterns(db([("AB", 2)]), 1, 2) == {LSequence.of("A"), LSequence.of("B"), LSequence.of("AB")}


def test_enumerate_table2(table2):
    sid2 = CSequenceDatabase((table2.sequences[1],))
    assert len(enumerate_patterns(sid2, 2, 2)) == 24
    assert len(enumerate_patterns(table2, 2, 2)) == TABLE2_PATTERNS_K2_Z2


def test_explosion_guard(table2):
    with pytest.raises(OracleExplosion):
        enumerate_patterns(table2, 3, 3, guard=10)


def test_oracle_mine_worked_value(table2, table4):
    got = {r.pattern: r.max_utility for r in oracle_mine(table2, table4, MinerConfig(21, 2, 2))}
    assert got[LSequence.of("B", "A")] == 21


def test_zero_threshold_returns_everything(table2, ones):
    got = oracle_mine(table2, ones, MinerConfig(0, 2, 2))
    assert {r.pattern for r in got} == enumerate_patterns(table2, 2, 2)


def test_oracle_agrees_with_dp(table2, table4):
    for pat, (u, support) in oracle_max_utilities(table2, table4, 2, 2).items():
        assert u == pattern_max_utility(pat, table2, table4)


def test_order_invariance(table2, table4):
    rev = CSequenceDatabase(tuple(reversed(table2.sequences)))
    cfg = MinerConfig(10, 2, 2)
    assert oracle_mine(rev, table4, cfg) == oracle_mine(table2, table4, cfg)


def test_witness_reproduces_value(table2, table4):
    pat = LSequence.of("B", "A")
    w = witnesses(pat, table2, table4)
    assert set(w) == {"3", "4"}
    by_sid = {c.sid: c for c in table2}
    assert sum(embedding_utility(pat, by_sid[s], pos, table4) for s, pos in sorted(w.items())) == 21


def test_corpus_is_seeded():
    a, b = corpus(5, 10), corpus(5, 10)
    assert [i.db for i in a] == [i.db for i in b]
    for inst in a:
        cdb = inst.c_database()
        assert 1 <= len(cdb) <= 6
        assert all(len(c) <= 8 for c in cdb)
        assert len(cdb.labels()) <= 5


def test_verify_reports_agreement():
    report = verify(1, 20)
    assert report.ok and report.summary() == "20/20 agree"


def test_verify_catches_broken_miner():
    def drop_last(database, p, cfg):
        pats = sorted(mine(database, p, cfg).patterns, key=lambda r: r.sort_key())
        return set(pats[:-1])

    report = verify(2, 10, miner=drop_last)
    assert not report.ok
    # shrinking keeps the failure but never grows the instance
    for inst in report.failures:
        assert sum(len(s) for s in inst.db) >= 1
