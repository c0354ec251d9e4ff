"""Readers and writers for the text formats.

E-sequence records:   sid<TAB>label<TAB>begin<TAB>finish
Utility table:        label<TAB>utility
C-database dump:      sid<TAB>(A,8)(∅,2)({C,E},2)...
Pattern files:        TSV with header, or JSON lines

Lines starting with ``#`` and blank lines are ignored by every reader.
"""
from __future__ import annotations

import io
import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import IO, Iterable, Union

from .model import (
    GAP_SYMBOL,
    CEventset,
    CSequence,
    CSequenceDatabase,
    ESequence,
    ESequenceDatabase,
    EventInterval,
    ModelError,
    PatternResult,
    UtilityTable,
    canonical_text,
    check_label,
    coincidence,
    parse_canonical_text,
    to_decimal,
)

Source = Union[str, IO[str]]

PATTERN_COLUMNS = ("pattern", "u_max", "support", "length", "size")


class ParseError(ValueError):
    pass


@dataclass
class ParseReport:
    accepted: int = 0
    rejected: list = field(default_factory=list)  # (line number, reason)
    warnings: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.accepted + len(self.rejected)


def _lines(source: Source):
    text = source if isinstance(source, str) else source.read()
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield n, line


def _fields(line: str, n: int) -> list[str]:
    parts = line.split("\t")
    if len(parts) != n:
        parts = line.split()
    return [p.strip() for p in parts]


def _sid_key(sid: str):
    return (0, int(sid), "") if sid.lstrip("-").isdigit() else (1, 0, sid)


def parse_esequence_db(source: Source) -> tuple[ESequenceDatabase, ParseReport]:
    report = ParseReport()
    groups: dict[str, list[EventInterval]] = defaultdict(list)
    for n, line in _lines(source):
        parts = _fields(line, 4)
        if len(parts) != 4:
            report.rejected.append((n, f"expected 4 fields, got {len(parts)}"))
            continue
        sid, label, begin, finish = parts
        if not sid:
            report.rejected.append((n, "empty sid"))
            continue
        if not label:
            report.rejected.append((n, "empty label"))
            continue
        try:
            b, f = int(begin), int(finish)
        except ValueError:
            report.rejected.append((n, "non-integer time"))
            continue
        if b < 0 or f < 0:
            report.rejected.append((n, "negative time"))
            continue
        if b >= f:
            report.rejected.append((n, "begin ≥ finish"))
            continue
        try:
            check_label(label)
        except ModelError as exc:
            report.rejected.append((n, str(exc)))
            continue
        groups[sid].append(EventInterval(b, f, label))
        report.accepted += 1
    if not report.accepted:
        raise ParseError("zero accepted records" + (f" ({len(report.rejected)} rejected)" if report.rejected else ""))
    seqs = tuple(ESequence(sid, tuple(groups[sid])) for sid in sorted(groups, key=_sid_key))
    return ESequenceDatabase(seqs), report


def parse_utility_table(source: Source, default_policy: str = "default-one") -> UtilityTable:
    values: dict[str, Decimal] = {}
    for n, line in _lines(source):
        parts = _fields(line, 2)
        if len(parts) != 2:
            raise ParseError(f"line {n}: expected label and utility")
        label, raw = parts
        try:
            value = Decimal(raw)
        except InvalidOperation:
            raise ParseError(f"line {n}: utility {raw!r} is not a number") from None
        if not value.is_finite() or value < 0:
            raise ParseError(f"line {n}: utility must be a finite non-negative number, got {raw}")
        if label in values:
            raise ParseError(f"line {n}: duplicate label {label!r}")
        try:
            check_label(label)
        except ModelError as exc:
            raise ParseError(f"line {n}: {exc}") from None
        values[label] = value
    return UtilityTable(values, default_policy)


def format_number(x) -> str:
    """Plain decimal text without exponent or trailing zeros; integral values drop the point."""
    d = to_decimal(x)
    if d == d.to_integral_value():
        return str(int(d))
    return format(d.normalize(), "f")


def _sorted(results: Iterable[PatternResult]):
    return sorted(results, key=PatternResult.sort_key)


def write_patterns(results: Iterable[PatternResult], fmt: str = "tsv") -> str:
    rows = _sorted(results)
    if fmt == "tsv":
        out = ["\t".join(PATTERN_COLUMNS)]
        for r in rows:
            out.append("\t".join((canonical_text(r.pattern), format_number(r.max_utility), str(r.support),
                                  str(len(r.pattern)), str(r.pattern.size))))
        return "\n".join(out) + "\n"
    if fmt == "jsonl":
        out = []
        for r in rows:
            # assembled by hand so u_max stays an exact JSON number
            out.append(f'{{"pattern": {json.dumps(canonical_text(r.pattern), ensure_ascii=False)}, '
                       f'"u_max": {format_number(r.max_utility)}, "support": {r.support}, '
                       f'"length": {len(r.pattern)}, "size": {r.pattern.size}}}')
        return "".join(line + "\n" for line in out)
    raise ValueError(f"unknown pattern format {fmt!r}")


def _number(n: int, raw) -> Decimal:
    try:
        return to_decimal(raw)
    except ModelError:
        raise ParseError(f"line {n}: u_max {raw!r} is not a number") from None


def read_patterns(source: Source, fmt: str = "tsv") -> list[PatternResult]:
    results = []
    if fmt == "tsv":
        for n, line in _lines(source):
            parts = line.split("\t")
            if tuple(parts) == PATTERN_COLUMNS:
                continue
            if len(parts) != len(PATTERN_COLUMNS):
                raise ParseError(f"line {n}: expected {len(PATTERN_COLUMNS)} columns")
            results.append(PatternResult(parse_canonical_text(parts[0]), _number(n, parts[1]), int(parts[2])))
    elif fmt == "jsonl":
        for n, line in _lines(source):
            obj = json.loads(line, parse_float=Decimal)
            results.append(PatternResult(parse_canonical_text(obj["pattern"]), _number(n, obj["u_max"]),
                                         int(obj["support"])))
    else:
        raise ValueError(f"unknown pattern format {fmt!r}")
    return results


def format_eventset(es: CEventset) -> str:
    if es.is_gap:
        body = GAP_SYMBOL
    elif len(es.coincidence) == 1:
        body = es.coincidence[0]
    else:
        body = "{" + ",".join(es.coincidence) + "}"
    return f"({body},{es.duration})"


def format_c_sequence(cseq: CSequence) -> str:
    return "".join(format_eventset(es) for es in cseq)


def write_c_database(db: CSequenceDatabase) -> str:
    return "".join(f"{c.sid}\t{format_c_sequence(c)}\n" for c in db)


_EVENTSET = re.compile(r"\((\{[^}]*\}|[^,(){}]+),(\d+)\)")


def parse_c_sequence(sid: str, text: str) -> CSequence:
    pos, out = 0, []
    for m in _EVENTSET.finditer(text):
        if m.start() != pos:
            raise ParseError(f"unexpected text {text[pos:m.start()]!r} in C-sequence {sid}")
        body, lam = m.group(1), int(m.group(2))
        if body == GAP_SYMBOL:
            labels = ()
        elif body.startswith("{"):
            labels = coincidence(body[1:-1].split(","))
        else:
            labels = (body,)
        out.append(CEventset(labels, lam))
        pos = m.end()
    if pos != len(text):
        raise ParseError(f"trailing text {text[pos:]!r} in C-sequence {sid}")
    return CSequence(sid, tuple(out))


def read_c_database(source: Source) -> CSequenceDatabase:
    seqs = []
    for n, line in _lines(source):
        sid, _, body = line.partition("\t")
        seqs.append(parse_c_sequence(sid, body.strip()))
    return CSequenceDatabase(tuple(seqs))


def write_esequence_db(db: ESequenceDatabase) -> str:
    buf = io.StringIO()
    for s in db:
        for e in s.intervals:
            buf.write(f"{s.sid}\t{e.label}\t{e.begin}\t{e.finish}\n")
    return buf.getvalue()
