"""Avalanche combinatorics extracted from recorded leftmost strategies.

The k-th avalanche is the leftmost strategy that relaxes pi(k-1) plus one grain
on column 0.  From the recorded firings we derive peaks (record-breaking
columns), the density start, the global density column L(D, N), the long
avalanches (those firing column L + D - 1), avalanche types on intervals and the
influent type words those types form.
"""
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Optional

from ._validation import check_D, check_count
from .core import Configuration, Sandpile
from .exceptions import DomainError, IntegrityError


@dataclass(frozen=True)
class Avalanche:
    k: int
    firings: tuple
    peaks: tuple = ()
    fired_set: frozenset = frozenset()
    dense_start: int = 0
    max_fired: Optional[int] = None

    @classmethod
    def from_firings(cls, k, firings):
        firings = tuple(firings)
        fired = frozenset(firings)
        if len(fired) != len(firings):
            seen = set()
            dup = next(c for c in firings if c in seen or seen.add(c))
            raise IntegrityError(f"avalanche {k} fires column {dup} more than once")
        peaks = []
        best = -1
        for c in firings:
            if c > best:
                peaks.append(c)
                best = c
        if not firings:
            return cls(k, firings, (), fired, 0, None)
        m = best
        l = m
        while l - 1 in fired:
            l -= 1
        return cls(k, firings, tuple(peaks), fired, l, m)

    @property
    def max_peak(self):
        return self.peaks[-1] if self.peaks else None

    def is_dense_from(self, l):
        return self.max_fired is None or l >= self.dense_start


def analyze(log):
    """Fill peaks / density fields of every avalanche of ``log`` (in place)."""
    log.avalanches = [Avalanche.from_firings(a.k, a.firings) for a in log.avalanches]
    return log


@dataclass
class AvalancheLog:
    D: int
    N: int
    avalanches: list = field(default_factory=list)
    final: Optional[Configuration] = None

    def __len__(self):
        return len(self.avalanches)

    def __getitem__(self, k):
        """The k-th avalanche, 1-based like the grain index."""
        if not 1 <= k <= len(self.avalanches):
            raise IndexError(k)
        return self.avalanches[k - 1]

    @property
    def density_column(self):
        return global_density_column(self)

    def replay(self, start=1, stop=None):
        """Yield ``(avalanche, before, after)`` slope lists for k in [start, stop].

        ``before`` is pi(k-1) (without the added grain).  Both lists are live
        buffers; copy them to retain.  Snapshots are regenerated by replay rather
        than stored, which keeps memory at O(width).
        """
        stop = self.N if stop is None else stop
        pile = Sandpile(self.D)
        before = list(pile.slopes)
        for a in self.avalanches[:stop]:
            if a.k >= start:
                before[:] = pile.slopes
            pile.apply(a.firings)
            if a.k >= start:
                yield a, before, pile.slopes

    def snapshots(self, indices):
        """Return {k: pi(k)} for the requested grain counts (0 allowed)."""
        wanted = set(indices)
        out = {}
        if 0 in wanted:
            out[0] = Configuration()
        pile = Sandpile(self.D)
        for a in self.avalanches:
            pile.apply(a.firings)
            if a.k in wanted:
                out[a.k] = pile.configuration()
        return out


def record_log(D, N):
    """Run the incremental simulation and return an analysed AvalancheLog."""
    D = check_D(D)
    N = check_count(N)
    pile = Sandpile(D)
    avs = []
    for k in range(1, N + 1):
        avs.append(Avalanche.from_firings(k, pile.step()))
    return AvalancheLog(D, N, avs, pile.configuration())


def global_density_column(log):
    """Minimal column from which every avalanche up to N is dense."""
    return max((a.dense_start for a in log.avalanches), default=0)


def long_avalanches(log, L=None):
    """Grain indices k whose avalanche fires column L + D - 1, increasing."""
    L = global_density_column(log) if L is None else L
    target = L + log.D - 1
    return [a.k for a in log.avalanches if target in a.fired_set]


def long_snapshots(log, L=None):
    """The mu sequence: pi(0) followed by pi(k) for every long avalanche k."""
    ks = long_avalanches(log, L)
    snaps = log.snapshots([0] + ks)
    return [snaps[0]] + [snaps[k] for k in ks]


def min_type_interval(D, L, margin=2):
    """Smallest interval index i with (D-1) i >= L + margin (D-1)."""
    return -(-(L + margin * (D - 1)) // (D - 1))


def _check_interval(i, D, L, margin):
    if (D - 1) * i < L + margin * (D - 1):
        raise DomainError(
            f"interval {i} lies below the applicability threshold for L={L} (margin {margin})"
        )


def avalanche_type(avalanche, i, D, L, margin=2):
    """Type of a long avalanche on interval i: offset of the largest peak below
    column (D-1) i when that peak lies in interval i-1, else None (epsilon).

    ``margin`` sets the lowest admissible interval, (D-1) i >= L + margin (D-1).
    """
    _check_interval(i, D, L, margin)
    return _type_from_peaks(avalanche.peaks, i, D - 1)


def _type_from_peaks(peaks, i, w):
    pos = bisect_left(peaks, w * i)
    if pos == 0:
        return None
    p = peaks[pos - 1]
    if p >= w * (i - 1):
        return p - w * (i - 1)
    return None


@dataclass(frozen=True)
class InfluentTypeWord:
    interval: int
    letters: tuple
    boundary_flag: bool
    run_sizes: tuple = ()
    # (first, last) positions of each influent run inside the long-avalanche list
    run_spans: tuple = ()

    def __str__(self):
        return "".join(str(x) for x in self.letters)


def type_sequence(log, i, L=None, longs=None, margin=2):
    """Per long avalanche types on interval i (None for epsilon)."""
    D = log.D
    L = global_density_column(log) if L is None else L
    longs = long_avalanches(log, L) if longs is None else longs
    _check_interval(i, D, L, margin)
    return [_type_from_peaks(log[k].peaks, i, D - 1) for k in longs]


def collapse_types(types):
    """Run-length collapse of a type sequence.

    Returns ``(letters, run_sizes, run_spans)`` for the non-epsilon runs.
    """
    letters, sizes, spans = [], [], []
    start = 0
    n = len(types)
    while start < n:
        end = start
        while end + 1 < n and types[end + 1] == types[start]:
            end += 1
        if types[start] is not None:
            letters.append(types[start])
            sizes.append(end - start + 1)
            spans.append((start, end))
        start = end + 1
    return tuple(letters), tuple(sizes), tuple(spans)


def influent_type_word(log, i, L=None, longs=None, margin=2):
    types = type_sequence(log, i, L, longs, margin)
    letters, sizes, spans = collapse_types(types)
    flag = bool(spans) and spans[-1][1] == len(types) - 1
    return InfluentTypeWord(i, letters, flag, sizes, spans)


# -- invariant checkers; each returns a list of human readable violations --


def check_peak_structure(before, avalanche, D):
    """Peak characterisation and descending runs for one avalanche.

    ``before`` is pi(k-1).  The hypothesis needs D-1 consecutive fired columns
    starting at some l; the smallest such l is used.  Avalanches without such a
    block are skipped (returns []).
    """
    fired = avalanche.fired_set
    if avalanche.max_fired is None:
        return []
    l = None
    for c in sorted(fired):
        if all(c + d in fired for d in range(D - 1)):
            l = c
            break
    if l is None:
        return []
    out = []
    peaks = avalanche.peaks
    peak_set = set(peaks)
    get = lambda j: before[j] if j < len(before) else 0  # noqa: E731
    for p in range(l + D - 1, avalanche.max_fired + D):
        pos = bisect_left(peaks, p)
        near = pos > 0 and p <= peaks[pos - 1] + D - 1
        predicted = get(p) == D - 1 and near
        if predicted != (p in peak_set):
            out.append(f"k={avalanche.k}: column {p} peak={p in peak_set} predicted={predicted}")
    s = avalanche.firings
    T = len(s)
    for idx in range(1, len(peaks)):
        p = peaks[idx]
        if p < l + D - 1:
            continue
        t = s.index(p)
        run = p - peaks[idx - 1] - 1
        if T < t + 1 + run:
            out.append(f"k={avalanche.k}: avalanche too short after peak {p}")
            continue
        for tp in range(t + 1, t + 1 + run):
            if s[tp] != s[tp - 1] - 1:
                out.append(f"k={avalanche.k}: no descending run after peak {p}")
                break
    return out


def check_long_update(before, after, avalanche, D, L):
    """Update identity of a long avalanche on columns >= L + D - 1."""
    m = avalanche.max_peak
    get_b = lambda j: before[j] if j < len(before) else 0  # noqa: E731
    get_a = lambda j: after[j] if j < len(after) else 0  # noqa: E731
    out = []
    if get_b(m) != D - 1 or get_a(m) != 0:
        out.append(f"k={avalanche.k}: column {m} went {get_b(m)} -> {get_a(m)}, expected {D - 1} -> 0")
    top = max(len(before), len(after), m + D + 1)
    for j in range(L + D - 1, top):
        if j == m:
            continue
        delta = get_a(j) - get_b(j)
        expected = 1 if m < j <= m + D - 1 else 0
        if delta != expected:
            out.append(f"k={avalanche.k}: column {j} changed by {delta}, expected {expected}")
    return out


def check_peak_similarity(a, b, D, L):
    """Peak similarity of consecutive long avalanches ``a`` then ``b``."""
    lo = L + 2 * (D - 1)
    pa = [p for p in a.peaks if p >= lo]
    if not pa:
        return []
    pb = [p for p in b.peaks if lo <= p < pa[-1]]
    if pa[:-1] != pb:
        return [f"k={a.k}->{b.k}: {pa[:-1]} != {pb}"]
    return []


def check_nested_influence(log, i, L=None, longs=None, margin=2):
    """Each (i+1)-influent run sits inside an i-influent run."""
    L = global_density_column(log) if L is None else L
    longs = long_avalanches(log, L) if longs is None else longs
    outer = influent_type_word(log, i, L, longs, margin).run_spans
    inner = influent_type_word(log, i + 1, L, longs, margin).run_spans
    out = []
    for lo, hi in inner:
        if not any(a <= lo and hi <= b for a, b in outer):
            out.append(f"interval {i + 1} run {lo}..{hi} not inside an interval {i} run")
    return out
