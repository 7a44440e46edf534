import io

import pytest
from hypothesis import given, strategies as st

from kspm.avalanches import (
    Avalanche,
    avalanche_type,
    check_peak_similarity,
    check_peak_structure,
    check_long_update,
    collapse_types,
    global_density_column,
    influent_type_word,
    long_avalanches,
    long_snapshots,
    min_type_interval,
    record_log,
    type_sequence,
)
from kspm.core import fixed_point
from kspm.exceptions import DomainError, IntegrityError


@pytest.fixture(scope="module")
def log4():
    return record_log(4, 500)


def naive_peaks(firings):
    return [c for t, c in enumerate(firings) if all(c > d for d in firings[:t])]


def naive_dense_start(firings):
    if not firings:
        return 0
    m = max(firings)
    return min(l for l in range(m + 1) if all(c in firings for c in range(l, m + 1)))


def test_avalanche_fields_match_definitions():
    log = record_log(3, 400)
    for a in log.avalanches:
        assert list(a.peaks) == naive_peaks(a.firings)
        assert a.dense_start == naive_dense_start(a.firings)
    L = max(naive_dense_start(a.firings) for a in log.avalanches)
    assert global_density_column(log) == L == log.density_column


def test_repeated_column_is_an_integrity_error():
    with pytest.raises(IntegrityError):
        Avalanche.from_firings(1, (0, 1, 0))


def test_empty_avalanche():
    a = Avalanche.from_firings(1, ())
    assert a.peaks == () and a.dense_start == 0 and a.max_fired is None
    assert a.max_peak is None


def test_log_is_one_based_and_replays(log4):
    with pytest.raises(IndexError):
        log4[0]
    assert log4[1].k == 1
    assert log4.final == fixed_point(4, 500)
    snaps = log4.snapshots([0, 17, 500])
    assert snaps[17] == fixed_point(4, 17) and snaps[500] == log4.final
    seen = []
    for a, before, after in log4.replay(490, 495):
        seen.append(a.k)
        assert fixed_point(4, a.k - 1) == before
        assert fixed_point(4, a.k) == after
    assert seen == list(range(490, 496))


def test_long_avalanches_fire_the_marker_column(log4):
    L = global_density_column(log4)
    ks = long_avalanches(log4, L)
    assert ks == sorted(ks)
    assert all(L + 3 in log4[k].fired_set for k in ks)
    others = set(range(1, 501)) - set(ks)
    assert all(L + 3 not in log4[k].fired_set for k in others)
    mu = long_snapshots(log4, L)
    assert len(mu) == len(ks) + 1 and mu[-1] == fixed_point(4, ks[-1])


def test_type_threshold(log4):
    L = global_density_column(log4)
    i0 = min_type_interval(4, L)
    assert 3 * i0 >= L + 6 > 3 * (i0 - 1)
    with pytest.raises(DomainError):
        type_sequence(log4, i0 - 1, L)
    a = log4[long_avalanches(log4, L)[0]]
    with pytest.raises(DomainError):
        avalanche_type(a, i0 - 1, 4, L)


def test_types_by_definition(log4):
    L = global_density_column(log4)
    D = 4
    for i in range(min_type_interval(D, L), min_type_interval(D, L) + 4):
        got = type_sequence(log4, i, L)
        for k, t in zip(long_avalanches(log4, L), got):
            below = [p for p in log4[k].peaks if p < (D - 1) * i]
            want = None
            if below and (D - 1) * (i - 1) <= max(below):
                want = max(below) - (D - 1) * (i - 1)
            assert t == want


def test_figure_anchor(log4):
    L = global_density_column(log4)
    assert L == 6
    w = influent_type_word(log4, min_type_interval(4, L), L)
    assert str(w).startswith("0120120210")
    assert sum(w.run_sizes) <= len(long_avalanches(log4, L))


@given(st.lists(st.one_of(st.none(), st.integers(0, 2)), max_size=30))
def test_collapse_types(types):
    letters, sizes, spans = collapse_types(types)
    assert len(letters) == len(sizes) == len(spans)
    assert sum(sizes) == sum(1 for t in types if t is not None)
    for x, n, (a, b) in zip(letters, sizes, spans):
        assert b - a + 1 == n and set(types[a:b + 1]) == {x}
    for (a, b), (c, d) in zip(spans, spans[1:]):
        assert b < c
        if c == b + 1:
            assert types[b] != types[c]


def test_checkers_accept_real_data():
    log = record_log(3, 3000)
    L = global_density_column(log)
    longs = set(long_avalanches(log, L))
    prev = None
    for a, before, after in log.replay():
        assert check_peak_structure(before, a, 3) == []
        if a.k in longs:
            assert check_long_update(before, after, a, 3, L) == []
            if prev is not None:
                assert check_peak_similarity(prev, a, 3, L) == []
            prev = a


def test_checkers_report_tampering():
    log = record_log(3, 3000)
    L = global_density_column(log)
    ks = long_avalanches(log, L)
    k = ks[-1]
    snaps = log.snapshots([k - 1, k])
    a = log[k]
    after = list(snaps[k].slopes) + [0] * 4
    after[a.max_peak + 1] += 1
    assert check_long_update(list(snaps[k - 1].slopes), after, a, 3, L)
    fake = Avalanche.from_firings(0, tuple(range(L + 4, L + 30, 2)))
    assert check_peak_similarity(fake, a, 3, L) or check_peak_similarity(a, fake, 3, L)
