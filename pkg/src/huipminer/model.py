"""Domain types shared by every part of the miner.

Labels are plain strings. A coincidence is a tuple of labels kept in sorted
(lexicographic) order, so tuples compare and hash canonically; the empty
tuple is the gap marker inside a C-sequence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Iterator, Mapping

GAP_SYMBOL = "∅"
# characters reserved by the text formats (pattern and C-database dumps)
_RESERVED = set(",{}()\t\r\n ") | {GAP_SYMBOL}

Label = str
Coincidence = tuple  # tuple[Label, ...], sorted, duplicate free


class ModelError(ValueError):
    """Raised when a domain object would violate one of its invariants."""


def check_label(label: str) -> str:
    if not isinstance(label, str) or not label:
        raise ModelError("label must be a non-empty string")
    bad = _RESERVED.intersection(label)
    if bad:
        raise ModelError(f"label {label!r} contains reserved character(s) {''.join(sorted(bad))!r}")
    return label


def to_decimal(x) -> Decimal:
    """Exact decimal for ints, decimal strings and Decimals; floats go through their shortest repr."""
    if isinstance(x, float):
        x = repr(x)
    try:
        d = x if isinstance(x, Decimal) else Decimal(x)
    except (InvalidOperation, TypeError):
        raise ModelError(f"not a decimal number: {x!r}") from None
    if not d.is_finite():
        raise ModelError(f"not a finite number: {x!r}")
    return d


def coincidence(labels: Iterable[str]) -> Coincidence:
    """Build a canonical coincidence from any iterable of labels."""
    return tuple(sorted(set(labels)))


@dataclass(frozen=True, order=True)
class EventInterval:
    begin: int
    finish: int
    label: str

    def __post_init__(self):
        check_label(self.label)
        if not (isinstance(self.begin, int) and isinstance(self.finish, int)):
            raise ModelError("time points must be integers")
        if self.begin < 0:
            raise ModelError("time points must be non-negative")
        if self.begin >= self.finish:
            raise ModelError(f"begin ≥ finish for {self.label} ({self.begin}, {self.finish})")

    @property
    def duration(self) -> int:
        return self.finish - self.begin


@dataclass(frozen=True)
class ESequence:
    """Event intervals of one sequence, ordered by (begin, label)."""

    sid: str
    intervals: tuple[EventInterval, ...]

    def __post_init__(self):
        if not self.intervals:
            raise ModelError(f"E-sequence {self.sid!r} has no intervals")
        ordered = tuple(sorted(self.intervals, key=lambda e: (e.begin, e.label, e.finish)))
        object.__setattr__(self, "intervals", ordered)

    @classmethod
    def of(cls, sid, triples: Iterable[tuple[str, int, int]]) -> "ESequence":
        return cls(str(sid), tuple(EventInterval(b, f, l) for l, b, f in triples))

    def __len__(self) -> int:
        return len(self.intervals)

    def labels(self) -> set[str]:
        return {e.label for e in self.intervals}


@dataclass(frozen=True)
class ESequenceDatabase:
    sequences: tuple[ESequence, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sequences", tuple(self.sequences))
        sids = [s.sid for s in self.sequences]
        if len(set(sids)) != len(sids):
            raise ModelError("duplicate sid in E-sequence database")

    def __iter__(self) -> Iterator[ESequence]:
        return iter(self.sequences)

    def __len__(self) -> int:
        return len(self.sequences)


@dataclass(frozen=True)
class TimePoints:
    points: tuple[int, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ModelError("need at least two unique time points")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ModelError("time points must be strictly ascending")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class CEventset:
    coincidence: Coincidence
    duration: int

    def __post_init__(self):
        object.__setattr__(self, "coincidence", coincidence(self.coincidence))
        if not isinstance(self.duration, int) or self.duration < 1:
            raise ModelError("eventset duration must be a positive integer")

    @property
    def is_gap(self) -> bool:
        return not self.coincidence


@dataclass(frozen=True)
class CSequence:
    sid: str
    eventsets: tuple[CEventset, ...]

    def __post_init__(self):
        object.__setattr__(self, "eventsets", tuple(self.eventsets))
        if self.eventsets and (self.eventsets[0].is_gap or self.eventsets[-1].is_gap):
            raise ModelError(f"C-sequence {self.sid!r} starts or ends with a gap")

    @classmethod
    def of(cls, sid, pairs: Iterable[tuple[Iterable[str], int]]) -> "CSequence":
        return cls(str(sid), tuple(CEventset(coincidence(c), lam) for c, lam in pairs))

    def __len__(self) -> int:
        return len(self.eventsets)

    def __iter__(self) -> Iterator[CEventset]:
        return iter(self.eventsets)

    def total_duration(self) -> int:
        return sum(es.duration for es in self.eventsets)


@dataclass(frozen=True)
class CSequenceDatabase:
    sequences: tuple[CSequence, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sequences", tuple(self.sequences))
        sids = [s.sid for s in self.sequences]
        if len(set(sids)) != len(sids):
            raise ModelError("duplicate sid in C-sequence database")

    def __iter__(self) -> Iterator[CSequence]:
        return iter(self.sequences)

    def __len__(self) -> int:
        return len(self.sequences)

    def labels(self) -> list[str]:
        return sorted({l for c in self.sequences for es in c for l in es.coincidence})


@dataclass(frozen=True, order=True)
class LSequence:
    """A pattern: ordered, non-empty coincidences without durations."""

    coincidences: tuple[Coincidence, ...]

    def __post_init__(self):
        cs = tuple(coincidence(c) for c in self.coincidences)
        if not cs:
            raise ModelError("an L-sequence needs at least one coincidence")
        if any(not c for c in cs):
            raise ModelError("L-sequence coincidences must be non-empty")
        for c in cs:
            for l in c:
                check_label(l)
        object.__setattr__(self, "coincidences", cs)

    @classmethod
    def of(cls, *coincidences: Iterable[str]) -> "LSequence":
        return cls(tuple(coincidence(c) for c in coincidences))

    def __len__(self) -> int:
        return len(self.coincidences)

    def __iter__(self) -> Iterator[Coincidence]:
        return iter(self.coincidences)

    @property
    def size(self) -> int:
        return lsequence_size(self)

    def __str__(self) -> str:
        return canonical_text(self)

    def sort_key(self):
        return (len(self), canonical_text(self))


def canonical_text(pattern: LSequence) -> str:
    return "->".join("{" + ",".join(c) + "}" for c in pattern.coincidences)


def parse_canonical_text(text: str) -> LSequence:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ModelError(f"malformed pattern {text!r}")
    parts = text[1:-1].split("}->{")
    return LSequence(tuple(coincidence(p.split(",")) for p in parts))


def lsequence_size(pattern: LSequence) -> int:
    return max(len(c) for c in pattern.coincidences)


_ONE = Decimal(1)


class UnmappedLabelError(KeyError):
    pass


@dataclass
class UtilityTable:
    """External utility per label.

    ``policy`` decides what happens on lookup of a label that is not in the
    table: ``"default-one"`` prices it at 1 and remembers it in ``defaulted``,
    ``"reject"`` raises :class:`UnmappedLabelError`.
    """

    values: Mapping[str, Decimal] = field(default_factory=dict)
    policy: str = "default-one"
    defaulted: set = field(default_factory=set, compare=False)

    def __post_init__(self):
        if self.policy not in ("default-one", "reject"):
            raise ModelError(f"unknown default policy {self.policy!r}")
        self.values = {check_label(k): to_decimal(v) for k, v in dict(self.values).items()}
        for k, v in self.values.items():
            if not v >= 0:
                raise ModelError(f"negative utility for {k!r}: {v}")

    def __getitem__(self, label: str) -> Decimal:
        try:
            return self.values[label]
        except KeyError:
            if self.policy == "reject":
                raise UnmappedLabelError(label) from None
            self.defaulted.add(label)
            return _ONE

    def check(self, labels: Iterable[str]) -> list[str]:
        """Resolve every label up front; returns the ones that fell back to the default."""
        missing = sorted(l for l in set(labels) if l not in self.values)
        for l in missing:
            self[l]
        return missing

    def scaled(self, alpha) -> "UtilityTable":
        alpha = to_decimal(alpha)
        return UtilityTable({k: v * alpha for k, v in self.values.items()}, self.policy)

    @classmethod
    def ones(cls) -> "UtilityTable":
        return cls({}, "default-one")


@dataclass(frozen=True)
class PatternResult:
    pattern: LSequence
    max_utility: Decimal
    support: int

    def sort_key(self):
        return self.pattern.sort_key()
