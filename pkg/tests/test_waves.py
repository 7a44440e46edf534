import math

import pytest
from hypothesis import given, strategies as st

from kspm.core import Configuration, fixed_point
from kspm.exceptions import DomainError
from kspm.waves import (
    cycle_form,
    envelope_ratio,
    envelope_violations,
    pipeline_check,
    predict_tail,
    wave_sweep,
    wave_match,
)


def is_wave_from(s, i, D):
    """Oracle: s[i:] is B^a [0] B^b 0^omega for some a, b."""
    block = list(range(D - 1, 0, -1))
    tail = list(s[i:])
    w = len(block)
    for a in range(len(tail) // w + 1):
        if tail[:a * w] != block * a:
            break
        rest = tail[a * w:]
        for z in ([], [0]):
            r = rest[len(z):]
            if rest[:len(z)] != z:
                continue
            if len(r) % w == 0 and r == block * (len(r) // w):
                return True
    return False


def oracle_i_N(s, D):
    return min(i for i in range(len(s) + 1) if is_wave_from(s, i, D))


@pytest.mark.parametrize("D", [2, 3, 4, 5])
def test_wave_match_agrees_with_exhaustive_oracle(D):
    for N in range(0, 400):
        s = fixed_point(D, N).slopes
        assert wave_match(s, D).i_N == oracle_i_N(s, D), N


@given(st.lists(st.integers(0, 2), max_size=14))
def test_wave_match_random_stable_d3(s):
    assert wave_match(s, 3).i_N == oracle_i_N(Configuration(s).slopes, 3)


def test_wave_match_rejects_unstable():
    with pytest.raises(DomainError):
        wave_match((3,), 3)


def test_wave_match_fields():
    wm = wave_match((1, 2, 1, 0, 2, 1), 3)
    assert wm.i_N == 1 and wm.has_zero and wm.left_block_len == 1 and wm.right_block_len == 1


def test_predict_tail_shapes():
    # y < x + 1: p..1, B^(x-y), 0, B^y
    assert predict_tail(3, 2, 1, 1).pattern == (1, 2, 1, 0, 2, 1)
    # y == x + 1: (p+1)..1, B^x
    assert predict_tail(3, 1, 0, 2).pattern == (1, 2, 1)
    with pytest.raises(DomainError):
        predict_tail(3, 1, 0, 3)
    with pytest.raises(DomainError):
        predict_tail(3, 1, 2, 1)


def test_cycle_form():
    assert cycle_form((0, 1, 0), 3) == (1, 0)
    assert cycle_form((0, 1, 2, 0, 1), 4) == (1, 1)
    assert cycle_form((0, 0), 3) is None and cycle_form((), 3) is None


def test_sweep_rows_and_envelope():
    rows = wave_sweep(3, 3000)
    assert [r.N for r in rows] == list(range(3001))
    for r in rows[::97]:
        cfg = fixed_point(3, r.N)
        assert r.width == cfg.width and r.i_N == oracle_i_N(cfg.slopes, 3)
    Ls = [r.L for r in rows]
    assert Ls == sorted(Ls)
    assert envelope_ratio(rows) == max(r.i_N / math.log2(r.N + 2) for r in rows)
    assert envelope_violations(rows, 100, 0) == []
    assert envelope_violations(rows, 0, 0)


def test_pipeline_small_and_tiny():
    rep = pipeline_check(3, 1000)
    assert rep.disagreements == 0 and set(rep.modes_agreeing) == {
        "algorithm-exact", "figure-suppressed"}
    assert rep.prop4 and all(e["agree"] for e in rep.prop4)
    assert rep.wave_consistent
    d = rep.to_dict()
    assert d["L"] == rep.L and isinstance(d["comparisons"], list)
    tiny = pipeline_check(3, 3)
    assert tiny.disagreements == 0


def test_pipeline_d4_base_words():
    rep = pipeline_check(4, 500)
    assert rep.figure_word.startswith("0120120210")
    assert rep.base_interval == rep.figure_interval + 1
