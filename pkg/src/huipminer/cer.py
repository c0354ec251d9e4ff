"""Conversion between E-sequences and the coincidence eventset representation."""
from __future__ import annotations

from .model import (
    CEventset,
    CSequence,
    CSequenceDatabase,
    Coincidence,
    ESequence,
    ESequenceDatabase,
    EventInterval,
    ModelError,
    TimePoints,
    coincidence,
)


def unique_time_points(seq: ESequence) -> TimePoints:
    points = set()
    for e in seq.intervals:
        points.add(e.begin)
        points.add(e.finish)
    return TimePoints(tuple(sorted(points)))


def phi(seq: ESequence, t_p: int, t_q: int) -> Coincidence:
    """Labels whose interval covers the whole window [t_p, t_q]."""
    if t_p >= t_q:
        raise ModelError(f"phi needs t_p < t_q, got ({t_p}, {t_q})")
    return coincidence(e.label for e in seq.intervals if e.begin <= t_p and t_q <= e.finish)


def to_c_sequence(seq: ESequence) -> CSequence:
    pts = unique_time_points(seq).points
    out = []
    for t_p, t_q in zip(pts, pts[1:]):
        out.append(CEventset(phi(seq, t_p, t_q), t_q - t_p))
    return CSequence(seq.sid, tuple(out))


def to_c_database(db: ESequenceDatabase) -> CSequenceDatabase:
    return CSequenceDatabase(tuple(to_c_sequence(s) for s in db))


def from_c_sequence(cseq: CSequence, origin: int = 0) -> ESequence:
    """Rebuild event intervals; each maximal run of a label becomes one interval.

    Same-label intervals that touch or overlap in the source come back merged,
    since the representation cannot tell them apart.
    """
    open_at: dict[str, int] = {}
    intervals = []
    t = origin
    for es in cseq.eventsets:
        present = set(es.coincidence)
        for label in [l for l in open_at if l not in present]:
            intervals.append(EventInterval(open_at.pop(label), t, label))
        for label in es.coincidence:
            open_at.setdefault(label, t)
        t += es.duration
    for label, begin in open_at.items():
        intervals.append(EventInterval(begin, t, label))
    return ESequence(cseq.sid, tuple(intervals))
