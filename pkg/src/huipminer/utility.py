"""Utility calculus over C-sequences and the weighted-utilization bounds.

Matching a pattern coincidence against a host eventset prices only the
pattern's labels, at the host's duration. Embeddings use strictly ascending
host positions and never land on a gap eventset.

Utilities are :class:`~decimal.Decimal`, so sums are exact and independent
of accumulation order; the bounds then hold without any epsilon.
"""
from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterator, Mapping, Optional

from .model import CEventset, CSequence, CSequenceDatabase, LSequence

Prices = Mapping[str, Decimal]


def event_utility(label: str, duration: int, p: Prices) -> Decimal:
    if duration < 1:
        raise ValueError("duration must be ≥ 1")
    return p[label] * duration


def eventset_utility(es: CEventset, p: Prices) -> Decimal:
    return sum(event_utility(l, es.duration, p) for l in es.coincidence)


def csequence_utility(cseq: CSequence, p: Prices) -> Decimal:
    return sum(eventset_utility(es, p) for es in cseq)


def database_utility(db: CSequenceDatabase, p: Prices) -> Decimal:
    return sum(csequence_utility(c, p) for c in db)


def max_k_utility(cseq: CSequence, k: int, p: Prices) -> Decimal:
    """Best utility of at most ``k`` eventsets: the sum of the ``k`` largest."""
    if k < 1:
        raise ValueError("k must be ≥ 1")
    values = sorted((eventset_utility(es, p) for es in cseq), reverse=True)
    return sum(values[:k])


def _match_value(c, duration: int, p: Prices) -> Decimal:
    return sum(p[l] * duration for l in c)


def iter_embeddings(pattern: LSequence, cseq: CSequence) -> Iterator[tuple[int, ...]]:
    """All strictly ascending host positions that embed ``pattern`` in ``cseq``."""
    hosts = [set(es.coincidence) for es in cseq]
    coins = pattern.coincidences

    def walk(i, start, acc):
        if i == len(coins):
            yield tuple(acc)
            return
        need = set(coins[i])
        for j in range(start, len(hosts) - (len(coins) - i - 1)):
            if need <= hosts[j]:
                acc.append(j)
                yield from walk(i + 1, j + 1, acc)
                acc.pop()

    yield from walk(0, 0, [])


def is_subpattern(sub: LSequence, sup: LSequence) -> bool:
    """True if ``sub`` embeds in ``sup``: ascending positions, each coincidence a subset."""
    j = 0
    for c in sub.coincidences:
        need = set(c)
        while j < len(sup.coincidences) and not need <= set(sup.coincidences[j]):
            j += 1
        if j == len(sup.coincidences):
            return False
        j += 1
    return True


def embedding_utility(pattern: LSequence, cseq: CSequence, positions, p: Prices) -> Decimal:
    total = 0
    for c, j in zip(pattern.coincidences, positions):
        total += _match_value(c, cseq.eventsets[j].duration, p)
    return total


def pattern_utility_set(pattern: LSequence, cseq: CSequence, p: Prices) -> list[Decimal]:
    """One utility per embedding, in embedding enumeration order."""
    return [embedding_utility(pattern, cseq, pos, p) for pos in iter_embeddings(pattern, cseq)]


def _best_match(coins, hosts, durations, p: Prices) -> Optional[Decimal]:
    # best[j]: best utility of the coincidences matched so far, last one at host j
    n = len(hosts)
    best: list[Optional[Decimal]] = [None] * n
    first = True
    for c in coins:
        need = frozenset(c)
        nxt: list[Optional[Decimal]] = [None] * n
        run: Optional[Decimal] = 0 if first else None
        for j in range(n):
            if run is not None and need <= hosts[j]:
                nxt[j] = run + _match_value(c, durations[j], p)
            if not first and best[j] is not None and (run is None or best[j] > run):
                run = best[j]
        best = nxt
        first = False
    found = [v for v in best if v is not None]
    return max(found) if found else None


def max_match_utility(pattern: LSequence, cseq: CSequence, p: Prices) -> Optional[Decimal]:
    """Max of the utility set via dynamic programming; None when there is no embedding."""
    hosts = [frozenset(es.coincidence) for es in cseq]
    durations = [es.duration for es in cseq]
    return _best_match(pattern.coincidences, hosts, durations, p)


def pattern_max_utility(pattern: LSequence, db: CSequenceDatabase, p: Prices) -> Decimal:
    total = 0
    for cseq in db:
        best = max_match_utility(pattern, cseq, p)
        if best is not None:
            total += best
    return total


def lwu(pattern: LSequence, db: CSequenceDatabase, k: int, p: Prices) -> Decimal:
    if k < len(pattern):
        raise ValueError(f"k={k} is shorter than the pattern ({len(pattern)})")
    total = 0
    for cseq in db:
        if max_match_utility(pattern, cseq, p) is not None:
            total += max_k_utility(cseq, k, p)
    return total


def sdcp_bound(pattern: LSequence, db: CSequenceDatabase, p: Prices) -> Decimal:
    """Sequence-weighted bound: total utility of every sequence containing the pattern."""
    total = 0
    for cseq in db:
        if max_match_utility(pattern, cseq, p) is not None:
            total += csequence_utility(cseq, p)
    return total


@dataclass(frozen=True)
class Evaluation:
    pattern: LSequence
    max_utility: Decimal
    lwu: Decimal
    sdcp: Decimal
    support: int


class _Host:
    __slots__ = ("labels", "hosts", "durations", "top_k", "total")

    def __init__(self, cseq: CSequence, k: int, p: Prices):
        self.labels = frozenset(l for es in cseq for l in es.coincidence)
        self.hosts = [frozenset(es.coincidence) for es in cseq]
        self.durations = [es.duration for es in cseq]
        self.top_k = max_k_utility(cseq, k, p) if len(cseq) else 0
        self.total = csequence_utility(cseq, p)


class IndexedDatabase:
    """A C-sequence database with per-sequence data precomputed for repeated evaluation."""

    def __init__(self, db: CSequenceDatabase, p: Prices, k: int):
        self.db = db
        self.p = p
        self.k = k
        # every later sum is a sub-sum of these, so exact here means exact everywhere
        with decimal.localcontext() as ctx:
            ctx.traps[decimal.Inexact] = True
            try:
                self._hosts = [_Host(c, k, p) for c in db]
                self.total_utility = sum(h.total for h in self._hosts)
            except decimal.Inexact:
                raise ValueError("utilities need more significant digits than the decimal context offers") from None

    def evaluate(self, pattern: LSequence) -> Evaluation:
        coins = pattern.coincidences
        needed = frozenset(l for c in coins for l in c)
        u_max = bound = sdcp = 0
        support = 0
        for h in self._hosts:
            if not needed <= h.labels or len(coins) > len(h.hosts):
                continue
            best = _best_match(coins, h.hosts, h.durations, self.p)
            if best is None:
                continue
            support += 1
            u_max += best
            bound += h.top_k
            sdcp += h.total
        return Evaluation(pattern, u_max, bound, sdcp, support)
