import pytest
from hypothesis import given, strategies as st

from huipminer.model import (
    CEventset,
    CSequence,
    ESequence,
    ESequenceDatabase,
    EventInterval,
    LSequence,
    ModelError,
    TimePoints,
    UnmappedLabelError,
    UtilityTable,
    canonical_text,
    lsequence_size,
    parse_canonical_text,
)

labels = st.text(alphabet="ABCDEFGHxyz_01", min_size=1, max_size=3)
coincidences = st.frozensets(labels, min_size=1, max_size=4)
patterns = st.lists(coincidences, min_size=1, max_size=4).map(lambda cs: LSequence.of(*cs))


@pytest.mark.parametrize("pattern, text", [
    (LSequence.of("B", "AB", "A"), "{B}->{A,B}->{A}"),
    (LSequence.of("A"), "{A}"),
    (LSequence.of("BA"), "{A,B}"),
])
def test_canonical_text(pattern, text):
    assert canonical_text(pattern) == text


@pytest.mark.parametrize("pattern, size", [
    (LSequence.of("B", "AB", "A"), 2),
    (LSequence.of("A"), 1),
    (LSequence.of("ABC", "D"), 3),
])
def test_lsequence_size(pattern, size):
    assert lsequence_size(pattern) == size
    assert pattern.size == size


@given(patterns, patterns)
def test_canonical_text_injective(a, b):
    assert (canonical_text(a) == canonical_text(b)) == (a == b)


@given(patterns)
def test_canonical_text_parses_back(p):
    assert parse_canonical_text(canonical_text(p)) == p


@given(st.lists(labels))
def test_label_sort_is_stable(ls):
    once = sorted(ls)
    assert sorted(once) == once == sorted(reversed(ls))


def test_interval_rejects_zero_duration():
    with pytest.raises(ModelError):
        EventInterval(3, 3, "A")
    with pytest.raises(ModelError):
        EventInterval(5, 2, "A")


@pytest.mark.parametrize("label", ["", "A,B", "{A}", "∅", "A B", "(A"])
def test_bad_labels(label):
    with pytest.raises(ModelError):
        EventInterval(0, 1, label)


def test_esequence_orders_by_begin_then_label():
    s = ESequence.of(1, [("B", 5, 7), ("C", 2, 4), ("A", 5, 6)])
    assert [e.label for e in s.intervals] == ["C", "A", "B"]
    assert len(s) == 3


def test_database_rejects_duplicate_sid():
    s = ESequence.of(1, [("A", 0, 1)])
    with pytest.raises(ModelError):
        ESequenceDatabase((s, s))


def test_time_points_must_ascend():
    with pytest.raises(ModelError):
        TimePoints((1, 1, 2))
    with pytest.raises(ModelError):
        TimePoints((4,))


def test_csequence_cannot_start_or_end_with_gap():
    with pytest.raises(ModelError):
        CSequence.of(1, [((), 2), ("A", 1)])
    with pytest.raises(ModelError):
        CSequence.of(1, [("A", 1), ((), 2)])


def test_eventset_duration_positive():
    with pytest.raises(ModelError):
        CEventset(("A",), 0)


def test_lsequence_rejects_empty_coincidence():
    with pytest.raises(ModelError):
        LSequence.of("A", "")


def test_utility_table_policies():
    t = UtilityTable({"A": 2})
    assert t["A"] == 2 and t["Z"] == 1.0
    assert t.defaulted == {"Z"}
    strict = UtilityTable({"A": 2}, "reject")
    with pytest.raises(UnmappedLabelError):
        strict["Z"]
    with pytest.raises(ModelError):
        UtilityTable({"A": -1})
