"""Brute-force reference miner and the random corpus used to check the real one.

Nothing here reuses the matching code in :mod:`huipminer.utility`: every
embedding of every sub-pattern is enumerated explicitly, so agreement with
the miner is independent evidence.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from decimal import Decimal
from itertools import combinations, product
from math import prod
from typing import Callable, Optional

from .cer import to_c_database
from .miner import MinerConfig, mine
from .model import (
    CSequenceDatabase,
    ESequence,
    ESequenceDatabase,
    EventInterval,
    LSequence,
    PatternResult,
    UtilityTable,
)

DEFAULT_GUARD = 2_000_000


class OracleExplosion(RuntimeError):
    """The exhaustive enumeration would exceed the configured guard."""


def _subsets(labels, max_size):
    out = []
    for r in range(1, min(len(labels), max_size) + 1):
        out.extend(combinations(labels, r))
    return out


def _sequence_embeddings(cseq, max_length, max_size):
    """Yield (pattern coincidences, positions) for every embedding in one sequence."""
    slots = [(j, _subsets(es.coincidence, max_size)) for j, es in enumerate(cseq.eventsets) if es.coincidence]
    for n in range(1, max_length + 1):
        for chosen in combinations(slots, n):
            positions = tuple(j for j, _ in chosen)
            for coins in product(*(subs for _, subs in chosen)):
                yield coins, positions


def _count_embeddings(cseq, max_length, max_size):
    sizes = [len(_subsets(es.coincidence, max_size)) for es in cseq.eventsets if es.coincidence]
    return sum(prod(c) for n in range(1, max_length + 1) for c in combinations(sizes, n))


def _guard(db, max_length, max_size, guard):
    total = sum(_count_embeddings(c, max_length, max_size) for c in db)
    if total > guard:
        raise OracleExplosion(f"{total} embeddings to enumerate exceeds the guard of {guard}")


def enumerate_patterns(db: CSequenceDatabase, max_length: int, max_size: int, *,
                       guard: int = DEFAULT_GUARD) -> set[LSequence]:
    """Every L-sequence within the length/size limits that occurs somewhere in ``db``."""
    _guard(db, max_length, max_size, guard)
    found = set()
    for cseq in db:
        for coins, _ in _sequence_embeddings(cseq, max_length, max_size):
            found.add(coins)
    return {LSequence(c) for c in found}


def _best_per_sequence(db, p, max_length, max_size):
    """pattern coincidences -> list of (sid index, best embedding utility, witness positions)."""
    table: dict = {}
    for i, cseq in enumerate(db):
        best: dict = {}
        for coins, positions in _sequence_embeddings(cseq, max_length, max_size):
            value = 0
            for c, j in zip(coins, positions):
                lam = cseq.eventsets[j].duration
                value += sum(p[l] * lam for l in c)
            if coins not in best or value > best[coins][0]:
                best[coins] = (value, positions)
        for coins, (value, positions) in best.items():
            table.setdefault(coins, []).append((i, value, positions))
    return table


def oracle_max_utilities(db: CSequenceDatabase, p, max_length: int, max_size: int, *,
                         guard: int = DEFAULT_GUARD) -> dict:
    """u_max and support of every occurring pattern, by exhaustive enumeration."""
    _guard(db, max_length, max_size, guard)
    out = {}
    for coins, rows in _best_per_sequence(db, p, max_length, max_size).items():
        total = 0
        for _, value, _ in sorted(rows):
            total += value
        out[LSequence(coins)] = (total, len(rows))
    return out


def witnesses(pattern: LSequence, db: CSequenceDatabase, p) -> dict:
    """sid -> host positions of the best embedding of ``pattern``."""
    table = _best_per_sequence(db, p, len(pattern), pattern.size)
    rows = table.get(pattern.coincidences, [])
    return {db.sequences[i].sid: positions for i, _, positions in rows}


def oracle_mine(db: CSequenceDatabase, p: UtilityTable, cfg: MinerConfig, *,
                guard: int = DEFAULT_GUARD) -> set[PatternResult]:
    total = sum(sum(sum(p[l] * es.duration for l in es.coincidence) for es in cseq) for cseq in db)
    threshold = cfg.absolute_threshold(total)
    utilities = oracle_max_utilities(db, p, cfg.max_length, cfg.max_size, guard=guard)
    return {PatternResult(pat, u, support) for pat, (u, support) in utilities.items() if u >= threshold}


# -- random corpus ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusParams:
    max_sequences: int = 6
    max_eventsets: int = 8
    max_alphabet: int = 5
    max_intervals: int = 5
    max_length: int = 3
    max_size: int = 3
    horizon: int = 12
    max_duration: int = 6
    utility_range: tuple = (0, 5)  # drawn in steps of 0.01
    threshold_range: tuple = (0.01, 0.3)  # drawn in steps of 0.0001


@dataclass(frozen=True)
class Instance:
    db: ESequenceDatabase
    utilities: UtilityTable
    config: MinerConfig

    def c_database(self) -> CSequenceDatabase:
        return to_c_database(self.db)


def random_esequence(rng: random.Random, sid: str, alphabet, params: CorpusParams) -> ESequence:
    while True:
        n = rng.randint(1, params.max_intervals)
        intervals = []
        for _ in range(n):
            b = rng.randint(0, params.horizon)
            intervals.append(EventInterval(b, b + rng.randint(1, params.max_duration), rng.choice(alphabet)))
        points = {t for e in intervals for t in (e.begin, e.finish)}
        if len(points) - 1 <= params.max_eventsets:
            return ESequence(sid, tuple(intervals))


def random_instance(rng: random.Random, params: CorpusParams = CorpusParams(), pruning: str = "ldcp") -> Instance:
    alphabet = [chr(ord("A") + i) for i in range(rng.randint(1, params.max_alphabet))]
    n = rng.randint(1, params.max_sequences)
    db = ESequenceDatabase(tuple(random_esequence(rng, str(i + 1), alphabet, params) for i in range(n)))
    lo, hi = params.utility_range
    utilities = UtilityTable({l: Decimal(rng.randint(lo * 100, hi * 100)) / 100 for l in alphabet}, "reject")
    t_lo, t_hi = params.threshold_range
    cfg = MinerConfig(
        threshold=Decimal(rng.randint(round(t_lo * 10_000), round(t_hi * 10_000))) / 10_000,
        mode="relative",
        max_length=rng.randint(1, params.max_length),
        max_size=rng.randint(1, params.max_size),
        pruning=pruning,
    )
    return Instance(db, utilities, cfg)


def corpus(seed: int, runs: int, params: CorpusParams = CorpusParams()) -> list[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng, params) for _ in range(runs)]


# -- differential harness --------------------------------------------------------------------


MinerFn = Callable[[ESequenceDatabase, UtilityTable, MinerConfig], set]


def _miner_set(db, p, cfg) -> set:
    return set(mine(db, p, cfg).patterns)


def disagreement(inst: Instance, miner: MinerFn = _miner_set) -> Optional[tuple[set, set]]:
    """None if miner and oracle agree, else (miner only, oracle only)."""
    got = miner(inst.db, inst.utilities, inst.config)
    want = oracle_mine(inst.c_database(), inst.utilities, inst.config)
    if got == want:
        return None
    return got - want, want - got


def shrink(inst: Instance, miner: MinerFn = _miner_set) -> Instance:
    """Greedily drop intervals while the instance still makes miner and oracle disagree."""
    current = inst
    changed = True
    while changed:
        changed = False
        for si, seq in enumerate(current.db.sequences):
            for ii in range(len(seq.intervals)):
                rest = seq.intervals[:ii] + seq.intervals[ii + 1:]
                seqs = list(current.db.sequences)
                if rest:
                    seqs[si] = ESequence(seq.sid, rest)
                else:
                    del seqs[si]
                if not seqs:
                    continue
                trial = Instance(ESequenceDatabase(tuple(seqs)), current.utilities, current.config)
                if disagreement(trial, miner) is not None:
                    current, changed = trial, True
                    break
            if changed:
                break
    return current


@dataclass
class VerifyReport:
    runs: int
    agree: int
    skipped: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        line = f"{self.agree}/{self.runs - self.skipped} agree"
        if self.skipped:
            line += f" ({self.skipped} skipped by explosion guard)"
        return line


def verify(seed: int = 0, runs: int = 200, params: CorpusParams = CorpusParams(), *,
           pruning: str = "ldcp", miner: MinerFn = _miner_set) -> VerifyReport:
    agree = skipped = 0
    failures = []
    for inst in corpus(seed, runs, params):
        if pruning != inst.config.pruning:
            inst = Instance(inst.db, inst.utilities, MinerConfig(
                inst.config.threshold, inst.config.max_length, inst.config.max_size,
                inst.config.mode, pruning))
        try:
            diff = disagreement(inst, miner)
        except OracleExplosion:
            skipped += 1
            continue
        if diff is None:
            agree += 1
        else:
            failures.append(shrink(inst, miner))
    return VerifyReport(runs, agree, skipped, failures)
