"""Wave tails of fixed points and the words-to-sand cross-check.

A wave is the tail ``B^* [0] B^* 0^omega`` with ``B = (D-1, D-2, ..., 1)`` and
at most one isolated zero between the two block runs.
"""
import math
from dataclasses import asdict, dataclass, field

from ._validation import check_D, check_count
from .avalanches import (
    global_density_column,
    influent_type_word,
    long_avalanches,
    min_type_interval,
    record_log,
)
from .core import Configuration, Sandpile, is_stable
from .exceptions import DomainError
from .transducer import MODES, build_machine, format_word

# (D-1) i >= L + TYPE_MARGIN (D-1): types are defined
TYPE_MARGIN = 2
# (D-1) i >= L + TRANSDUCER_MARGIN (D-1): the transducer predicts interval i+1
TRANSDUCER_MARGIN = 3


@dataclass(frozen=True)
class WaveMatch:
    D: int
    matched: bool
    i_N: int
    left_block_len: int
    right_block_len: int
    has_zero: bool


def _scan_blocks(s, j, block):
    """Count whole blocks ending just before index j, scanning leftward."""
    w = len(block)
    n = 0
    while j >= w and s[j - w:j] == block:
        j -= w
        n += 1
    return j, n


def wave_match(sigma, D):
    """Minimal column i_N from which ``sigma`` is a wave."""
    D = check_D(D)
    if not isinstance(sigma, Configuration):
        sigma = Configuration(sigma)
    if not is_stable(sigma, D):
        raise DomainError("wave matching is only defined on stable configurations")
    s = sigma.slopes
    block = tuple(range(D - 1, 0, -1))
    j, right = _scan_blocks(s, len(s), block)
    left = 0
    has_zero = False
    if j > 0 and s[j - 1] == 0:
        j2, left = _scan_blocks(s, j - 1, block)
        has_zero = True
        j = j2
    return WaveMatch(D, True, j, left, right, has_zero)


@dataclass(frozen=True)
class TailPrediction:
    x: int
    p: int
    y: int
    pattern: tuple


def predict_tail(D, x, p, y):
    """Tail of pi(N) from an interval whose type word is (0..D-2)^x (0..p),
    the last run holding y long avalanches."""
    D = check_D(D)
    if x < 0 or not 0 <= p <= D - 2 or y < 1:
        raise DomainError(f"invalid tail parameters x={x}, p={p}, y={y}")
    if y > x + 1:
        raise DomainError(f"last run size y={y} exceeds x+1={x + 1}")
    block = tuple(range(D - 1, 0, -1))
    if y < x + 1:
        pattern = tuple(range(p, 0, -1)) + block * (x - y) + (0,) + block * y
    else:
        pattern = tuple(range(p + 1, 0, -1)) + block * x
    return TailPrediction(x, p, y, pattern)


def cycle_form(letters, D):
    """``(x, p)`` when letters == (0..D-2)^x (0..p), else None."""
    n = len(letters)
    if n == 0 or any(c != j % (D - 1) for j, c in enumerate(letters)):
        return None
    return divmod(n - 1, D - 1)


@dataclass
class IntervalComparison:
    i: int
    word: str
    next_word: str
    boundary_flag: bool
    predicted: dict = field(default_factory=dict)
    agree: dict = field(default_factory=dict)


@dataclass
class PipelineReport:
    D: int
    N: int
    L: int
    n_long: int
    base_interval: int
    figure_interval: int
    base_word: str
    figure_word: str
    comparisons: list
    modes_agreeing: list
    prop4: list
    wave: dict
    wave_consistent: bool
    disagreements: int

    def to_dict(self):
        return asdict(self)


def _prefix(a, b):
    return tuple(b[:len(a)]) == tuple(a)


def _agrees(machine, word, sim_next):
    img = machine.image(word.letters)
    if img == sim_next:
        return True, img
    if word.boundary_flag and word.letters:
        # the last influent run may still be open at N
        head = machine.image(word.letters[:-1])
        return _prefix(head, sim_next) and _prefix(sim_next, img), img
    return False, img


def pipeline_check(D, N, log=None):
    """Compare simulated interval words with transducer images, and predicted tails
    with the brute-force fixed point.  Disagreements are recorded, never raised."""
    D = check_D(D)
    N = check_count(N)
    log = record_log(D, N) if log is None else log
    L = global_density_column(log)
    longs = long_avalanches(log, L)
    machines = {m: build_machine(D, m) for m in MODES}
    base = min_type_interval(D, L, TRANSDUCER_MARGIN)
    fig = min_type_interval(D, L, TYPE_MARGIN)
    words = {}

    def word(i):
        if i not in words:
            words[i] = influent_type_word(log, i, L, longs, margin=TYPE_MARGIN)
        return words[i]

    comparisons = []
    i = base
    while word(i).letters:
        w, nxt = word(i), word(i + 1)
        cmp = IntervalComparison(i, format_word(w.letters, D), format_word(nxt.letters, D),
                                 w.boundary_flag)
        for mode, machine in machines.items():
            ok, img = _agrees(machine, w, nxt.letters)
            cmp.predicted[mode] = format_word(img, D)
            cmp.agree[mode] = ok
        comparisons.append(cmp)
        i += 1

    fp = log.final
    prop4 = []
    for i in range(base, i + 1):
        w = word(i)
        form = cycle_form(w.letters, D)
        if form is None:
            continue
        x, p = form
        y = w.run_sizes[-1]
        entry = {"i": i, "x": x, "p": p, "y": y, "observed": list(fp.slopes[(D - 1) * i:])}
        try:
            pred = predict_tail(D, x, p, y)
            entry["predicted"] = list(Configuration(pred.pattern).slopes)
            entry["agree"] = entry["predicted"] == entry["observed"]
        except DomainError as exc:
            entry["predicted"] = None
            entry["agree"] = False
            entry["error"] = str(exc)
        prop4.append(entry)

    wave = wave_match(fp, D)
    consistent = True
    for entry in prop4:
        if entry["agree"]:
            offset = wave_match(Configuration(entry["predicted"]), D).i_N
            consistent = wave.i_N <= (D - 1) * entry["i"] + offset
            break

    agreeing = [m for m in MODES if all(c.agree[m] for c in comparisons)]
    disagreements = sum(1 for c in comparisons for m in MODES if not c.agree[m])
    disagreements += sum(1 for e in prop4 if not e["agree"])
    return PipelineReport(
        D, N, L, len(longs), base, fig,
        format_word(word(base).letters, D), format_word(word(fig).letters, D),
        [asdict(c) for c in comparisons], agreeing, prop4, asdict(wave), consistent,
        disagreements,
    )


@dataclass(frozen=True)
class SweepRow:
    N: int
    i_N: int
    L: int
    width: int
    has_zero: bool = False

    @property
    def match_mode(self):
        return "zero" if self.has_zero else "plain"


class WaveNotFound(AssertionError):
    pass


def wave_sweep(D, N_max, N_min=0):
    """Wave-match pi(N) for every N in [N_min, N_max]; returns the rows.

    ``L`` is the running global density column L(D, N).
    """
    D = check_D(D)
    N_max = check_count(N_max, "N_max")
    pile = Sandpile(D)
    rows = []
    L = 0
    for N in range(0, N_max + 1):
        if N:
            firings = pile.step()
            if firings:
                fired = set(firings)
                m = max(firings)
                l = m
                while l - 1 in fired:
                    l -= 1
                L = max(L, l)
        if N < N_min:
            continue
        cfg = pile.configuration()
        wm = wave_match(cfg, D)
        if not wm.matched:
            raise WaveNotFound(f"pi({N}) has no wave tail")
        rows.append(SweepRow(N, wm.i_N, L, cfg.width, wm.has_zero))
    return rows


def envelope_ratio(rows):
    """max over rows of i_N / log2(N + 2)."""
    return max((r.i_N / math.log2(r.N + 2) for r in rows), default=0.0)


def envelope_violations(rows, c, c0):
    return [r for r in rows if r.i_N > c * math.log2(r.N + 2) + c0]
