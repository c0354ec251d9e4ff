"""Two-phase high utility interval-based pattern miner.

The coincident phase grows single coincidences one label at a time; the
serial phase chains promising coincidences into longer L-sequences. A
candidate is extended only if it is promising, i.e. its pruning bound
(``ldcp``: top-K eventset utility of containing sequences, ``sdcp``: whole
sequence utility, ``none``: mere occurrence) reaches the threshold.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Optional

from .cer import to_c_database
from .model import (
    Coincidence,
    CSequenceDatabase,
    ESequenceDatabase,
    LSequence,
    ModelError,
    PatternResult,
    UtilityTable,
    to_decimal,
)
from .utility import Evaluation, IndexedDatabase

log = logging.getLogger(__name__)

PRUNING_MODES = ("ldcp", "sdcp", "none")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class MinerConfig:
    threshold: Decimal
    max_length: int = 1
    max_size: int = 1
    mode: str = "absolute"
    pruning: str = "ldcp"
    threads: int = 1

    def __post_init__(self):
        try:
            object.__setattr__(self, "threshold", to_decimal(self.threshold))
        except ModelError as exc:
            raise ConfigError(str(exc)) from None
        pruning = str(self.pruning).lower()
        object.__setattr__(self, "pruning", pruning)
        if self.mode not in ("absolute", "relative"):
            raise ConfigError(f"threshold mode must be absolute or relative, not {self.mode!r}")
        if pruning not in PRUNING_MODES:
            raise ConfigError(f"pruning must be one of {PRUNING_MODES}, not {self.pruning!r}")
        if not self.threshold >= 0:
            raise ConfigError("threshold must be ≥ 0")
        if self.mode == "relative" and self.threshold > 1:
            raise ConfigError("relative threshold must lie in [0, 1]")
        if self.max_length < 1 or self.max_size < 1:
            raise ConfigError("max length and max size must be ≥ 1")
        if self.threads < 1:
            raise ConfigError("threads must be ≥ 1")

    def absolute_threshold(self, total_utility) -> Decimal:
        if self.mode == "relative":
            return self.threshold * total_utility
        return self.threshold


@dataclass
class RoundStats:
    phase: str
    level: int
    generated: int = 0
    pruned: int = 0
    promising: int = 0
    high_utility: int = 0
    seconds: float = 0.0

    def summary(self) -> str:
        return (f"{self.phase} round {self.level}: generated={self.generated} "
                f"pruned={self.pruned} promising={self.promising} "
                f"high_utility={self.high_utility} time={self.seconds:.4f}s")


@dataclass
class CandidateStats:
    rounds: list = field(default_factory=list)

    def counts(self, phase: Optional[str] = None) -> list[int]:
        return [r.generated for r in self.rounds if phase is None or r.phase == phase]

    def generated_by_round(self) -> dict:
        return {(r.phase, r.level): r.generated for r in self.rounds}

    def total_generated(self) -> int:
        return sum(r.generated for r in self.rounds)


@dataclass
class MineResult:
    hucp: tuple
    husp: tuple
    stats: CandidateStats
    threshold: Decimal
    evaluations: Optional[dict] = None

    @property
    def patterns(self) -> tuple:
        return tuple(sorted(self.hucp + self.husp, key=PatternResult.sort_key))


def ccandidate(promising: Iterable[Coincidence], new_labels: Iterable[str]) -> set:
    """Extend each coincidence with every new label sorting after its last label."""
    labels = sorted(set(new_labels))
    out = set()
    for c in promising:
        c = tuple(c)
        for l in labels:
            if l > c[-1]:
                out.add(c + (l,))
    return out


def scandidate(promising: Iterable[LSequence], new_tails: Iterable[Coincidence]) -> set:
    tails = set(tuple(t) for t in new_tails)
    out = set()
    for pat in promising:
        for t in tails:
            out.add(LSequence(pat.coincidences + (t,)))
    return out


class _Evaluator:
    def __init__(self, index: IndexedDatabase, cfg: MinerConfig, threshold: Decimal, trace: Optional[dict]):
        self.index = index
        self.cfg = cfg
        self.threshold = threshold
        self.trace = trace
        self._pool = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else None

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()

    def bound(self, ev: Evaluation) -> bool:
        if ev.support == 0:
            return False
        if self.cfg.pruning == "ldcp":
            return ev.lwu >= self.threshold
        if self.cfg.pruning == "sdcp":
            return ev.sdcp >= self.threshold
        return True

    def run_round(self, phase: str, level: int, candidates: set):
        """Evaluate one round; returns (high-utility results, promising candidates, stats)."""
        start = time.perf_counter()
        ordered = sorted(candidates, key=LSequence.sort_key)
        if self._pool is not None:
            evals = list(self._pool.map(self.index.evaluate, ordered))
        else:
            evals = [self.index.evaluate(c) for c in ordered]
        high, promising = [], []
        for ev in evals:
            if self.trace is not None:
                self.trace[ev.pattern] = ev
            if ev.support and ev.max_utility >= self.threshold:
                high.append(PatternResult(ev.pattern, ev.max_utility, ev.support))
            if self.bound(ev):
                promising.append(ev.pattern)
        stats = RoundStats(phase, level, len(ordered), len(ordered) - len(promising),
                           len(promising), len(high), time.perf_counter() - start)
        log.debug(stats.summary())
        return high, promising, stats


def _prepare(db: CSequenceDatabase, p: UtilityTable, cfg: MinerConfig, index=None):
    if index is None:
        p.check(db.labels())
        index = IndexedDatabase(db, p, cfg.max_length)
    return index, cfg.absolute_threshold(index.total_utility)


def coincident_phase(db: CSequenceDatabase, p: UtilityTable, cfg: MinerConfig, *,
                     index: Optional[IndexedDatabase] = None, trace: Optional[dict] = None):
    """Returns (HUCP results, WUCP coincidences, CandidateStats)."""
    index, threshold = _prepare(db, p, cfg, index)
    ev = _Evaluator(index, cfg, threshold, trace)
    stats = CandidateStats()
    hucp, wucp = [], []
    candidates = {(l,) for l in db.labels()}
    z = 1
    try:
        while z <= cfg.max_size and candidates:
            high, promising, rs = ev.run_round("coincident", z, {LSequence((c,)) for c in candidates})
            stats.rounds.append(rs)
            hucp.extend(high)
            coins = [pat.coincidences[0] for pat in promising]
            wucp.extend(coins)
            new_labels = {l for c in coins for l in c}
            z += 1
            candidates = ccandidate(coins, new_labels) if z <= cfg.max_size else set()
    finally:
        ev.close()
    return hucp, wucp, stats


def serial_phase(db: CSequenceDatabase, p: UtilityTable, wucp: Iterable[Coincidence], cfg: MinerConfig, *,
                 index: Optional[IndexedDatabase] = None, trace: Optional[dict] = None):
    """Returns (HUSP results, CandidateStats)."""
    index, threshold = _prepare(db, p, cfg, index)
    ev = _Evaluator(index, cfg, threshold, trace)
    stats = CandidateStats()
    husp = []
    seeds = [LSequence((tuple(w),)) for w in set(tuple(w) for w in wucp)]
    k = 2
    candidates = scandidate(seeds, [s.coincidences[0] for s in seeds]) if cfg.max_length >= 2 else set()
    try:
        while k <= cfg.max_length and candidates:
            high, promising, rs = ev.run_round("serial", k, candidates)
            stats.rounds.append(rs)
            husp.extend(high)
            new_tails = {pat.coincidences[-1] for pat in promising}
            k += 1
            candidates = scandidate(promising, new_tails) if k <= cfg.max_length else set()
    finally:
        ev.close()
    return husp, stats


def mine_c_database(db: CSequenceDatabase, p: UtilityTable, cfg: MinerConfig, *, trace: bool = False) -> MineResult:
    index, threshold = _prepare(db, p, cfg)
    evaluations = {} if trace else None
    if not len(db):
        return MineResult((), (), CandidateStats(), threshold, evaluations)
    hucp, wucp, cstats = coincident_phase(db, p, cfg, index=index, trace=evaluations)
    husp, sstats = serial_phase(db, p, wucp, cfg, index=index, trace=evaluations)
    key = PatternResult.sort_key
    return MineResult(tuple(sorted(hucp, key=key)), tuple(sorted(husp, key=key)),
                      CandidateStats(cstats.rounds + sstats.rounds), threshold, evaluations)


def mine(db: ESequenceDatabase, p: UtilityTable, cfg: MinerConfig, *, trace: bool = False) -> MineResult:
    """Convert ``db`` to C-sequences and mine every high utility pattern."""
    return mine_c_database(to_c_database(db), p, cfg, trace=trace)
