"""Exact KSPM(D) dynamics on slope configurations.

A configuration is the sequence of height differences ``sigma_i = h_i - h_{i+1}``
of a sand pile, implicitly followed by zeros.  Firing column ``i`` (allowed when
``sigma_i >= D``) moves D-1 grains from column ``i`` onto the D-1 columns to its
right, which in slope coordinates reads::

    sigma[i-1] += D-1   (only when i > 0)
    sigma[i]   -= D
    sigma[i+D-1] += 1
"""
import random

from ._validation import check_D, check_count, check_slopes
from .exceptions import InternalError, RuleViolationError


class Configuration:
    """Immutable, canonical (trailing-zero free) slope sequence.

    Indexing past the stored length returns 0, mirroring the implicit zero tail.
    """

    __slots__ = ("_s",)

    def __init__(self, slopes=()):
        s = check_slopes(slopes)
        while s and s[-1] == 0:
            s.pop()
        self._s = tuple(s)

    @classmethod
    def _trusted(cls, slopes):
        # skips validation; caller guarantees non-negative ints
        obj = cls.__new__(cls)
        end = len(slopes)
        while end and slopes[end - 1] == 0:
            end -= 1
        obj._s = tuple(slopes[:end])
        return obj

    @property
    def slopes(self):
        return self._s

    def __len__(self):
        return len(self._s)

    def __iter__(self):
        return iter(self._s)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return self._s[i]
        if i < 0:
            raise IndexError("configurations are indexed by non-negative columns")
        return self._s[i] if i < len(self._s) else 0

    def __eq__(self, other):
        if isinstance(other, Configuration):
            return self._s == other._s
        if isinstance(other, (tuple, list)):
            return self == Configuration(other)
        return NotImplemented

    def __hash__(self):
        return hash(self._s)

    def __repr__(self):
        return f"Configuration({list(self._s)})"

    def window(self, start, stop):
        """Values on columns ``start .. stop-1`` including implicit zeros."""
        return tuple(self[i] for i in range(start, stop))

    @property
    def mass(self):
        return mass(self)

    @property
    def width(self):
        """Index of the largest non-empty column, or -1 for the empty pile."""
        return len(self._s) - 1

    def to_list(self):
        return list(self._s)


def _as_config(sigma):
    return sigma if isinstance(sigma, Configuration) else Configuration(sigma)


def mass(sigma):
    """Grain count ``sum (i+1) * sigma_i``."""
    return sum((i + 1) * v for i, v in enumerate(sigma))


def heights(sigma):
    """Height profile (suffix sums of the slopes), as a tuple without zero tail."""
    sigma = _as_config(sigma)
    out = []
    acc = 0
    for v in reversed(sigma.slopes):
        acc += v
        out.append(acc)
    out.reverse()
    return tuple(out)


def slopes_from_heights(h):
    """Inverse of :func:`heights`; rejects increasing profiles."""
    h = list(h)
    s = []
    for i, x in enumerate(h):
        nxt = h[i + 1] if i + 1 < len(h) else 0
        if x < nxt:
            raise ValueError("height profile must be non-increasing")
        s.append(x - nxt)
    return Configuration(s)


def is_stable(sigma, D):
    D = check_D(D)
    return all(v < D for v in sigma)


def fireable_columns(sigma, D):
    return [i for i, v in enumerate(sigma) if v >= D]


def _fire_list(s, i, D):
    """Apply the rule on the mutable list ``s`` (extended as needed)."""
    if i < 0 or i >= len(s) or s[i] < D:
        raise RuleViolationError(f"column {i} is not fireable (D={D})")
    t = i + D - 1
    if t >= len(s):
        s.extend([0] * (t + 1 - len(s)))
    s[i] -= D
    if i:
        s[i - 1] += D - 1
    s[t] += 1


def fire(sigma, i, D):
    """Return the configuration obtained by firing column ``i``."""
    D = check_D(D)
    s = list(_as_config(sigma).slopes)
    _fire_list(s, i, D)
    return Configuration._trusted(s)


def add_grain(sigma):
    """Add one grain on column 0."""
    s = list(_as_config(sigma).slopes) or [0]
    s[0] += 1
    return Configuration._trusted(s)


def firing_budget(sigma, D):
    """Upper bound on the number of firings of any stabilization of ``sigma``.

    Each firing raises the grain-position potential sum(i * h_i) by D(D-1)/2 and
    the potential never exceeds mass * (mass - 1), so mass**2 firings suffice.
    """
    m = mass(sigma)
    return m * m + D * m


def _relax_leftmost(s, D, frontier, budget):
    """Leftmost relaxation of the list ``s`` in place; returns the firings.

    Every unstable column must lie at or below ``frontier`` on entry.  The scan
    pointer only moves back one column after a firing (the only column to the
    left that can become unstable), so the cost is O(firings + frontier).
    """
    firings = []
    append = firings.append
    j = 0
    hi = frontier
    Dm1 = D - 1
    n = len(s)
    while j <= hi:
        if s[j] >= D:
            t = j + Dm1
            if t >= n:
                s.extend([0] * (t + 1 - n + 32))
                n = len(s)
            s[j] -= D
            s[t] += 1
            if t > hi:
                hi = t
            append(j)
            if j:
                s[j - 1] += Dm1
                j -= 1
            if len(firings) > budget:
                raise InternalError("firing budget exceeded during stabilization")
        else:
            j += 1
    return firings


def stabilize_leftmost(sigma, D):
    """Fire the leftmost fireable column until stable.

    Returns ``(fixed_point, strategy)`` where the strategy is the tuple of fired
    columns in order.
    """
    D = check_D(D)
    s = list(_as_config(sigma).slopes)
    budget = firing_budget(s, D)
    firings = _relax_leftmost(s, D, len(s) - 1, budget)
    return Configuration._trusted(s), tuple(firings)


def stabilize(sigma, D, policy="leftmost", rng=None):
    """Stabilize under an arbitrary firing policy (slow, used as an oracle).

    ``policy`` is ``"leftmost"``, ``"rightmost"`` or ``"random"``.
    """
    D = check_D(D)
    if policy not in ("leftmost", "rightmost", "random"):
        raise ValueError(f"unknown policy {policy!r}")
    rng = rng if rng is not None else random.Random(0)
    s = list(_as_config(sigma).slopes)
    budget = firing_budget(s, D)
    firings = []
    while True:
        cand = [i for i, v in enumerate(s) if v >= D]
        if not cand:
            break
        if policy == "leftmost":
            i = cand[0]
        elif policy == "rightmost":
            i = cand[-1]
        else:
            i = rng.choice(cand)
        _fire_list(s, i, D)
        firings.append(i)
        if len(firings) > budget:
            raise InternalError("firing budget exceeded during stabilization")
    return Configuration._trusted(s), tuple(firings)


def replay(sigma, strategy, D):
    """Apply a strategy firing by firing; raises RuleViolationError if illegal."""
    D = check_D(D)
    s = list(_as_config(sigma).slopes)
    for i in strategy:
        _fire_list(s, i, D)
    return Configuration._trusted(s)


def firing_counts(strategy):
    counts = {}
    for i in strategy:
        counts[i] = counts.get(i, 0) + 1
    return counts


class Sandpile:
    """Mutable incremental engine computing pi(k) for k = 0, 1, 2, ...

    ``step()`` adds a grain on column 0 and relaxes leftmost, returning the
    avalanche.  Columns are fired at most once per avalanche, so each step costs
    O(width).
    """

    def __init__(self, D, slopes=None):
        self.D = check_D(D)
        self.slopes = list(slopes) if slopes is not None else [0] * (D + 1)
        if not self.slopes:
            self.slopes = [0]
        self.k = 0

    def step(self):
        self.slopes[0] += 1
        self.k += 1
        # an avalanche fires each column at most once, so width + 1 bounds it
        return tuple(_relax_leftmost(self.slopes, self.D, 0, 2 * (len(self.slopes) + self.D)))

    def apply(self, firings):
        """Add a grain and replay a recorded avalanche instead of recomputing it."""
        self.slopes[0] += 1
        self.k += 1
        for i in firings:
            _fire_list(self.slopes, i, self.D)

    def configuration(self):
        return Configuration._trusted(self.slopes)


def fixed_point(D, N, observer=None):
    """Compute pi(N) by adding grains one at a time from the empty pile.

    ``observer(k, avalanche, config)`` is called after each grain with the
    avalanche as a tuple of columns and pi(k) as a Configuration.
    """
    D = check_D(D)
    N = check_count(N)
    pile = Sandpile(D)
    for k in range(1, N + 1):
        firings = pile.step()
        if observer is not None:
            observer(k, firings, pile.configuration())
    return pile.configuration()


def fixed_point_direct(D, N):
    """pi(N) by relaxing the single column (N, 0, 0, ...); an oracle for
    :func:`fixed_point`."""
    D = check_D(D)
    N = check_count(N)
    return stabilize_leftmost((N,), D)[0]


def iter_fixed_points(D, N):
    """Yield ``(k, avalanche, live_slopes)`` for k = 1..N.

    ``live_slopes`` is the engine's internal list; copy it to retain it.
    """
    D = check_D(D)
    N = check_count(N)
    pile = Sandpile(D)
    for k in range(1, N + 1):
        firings = pile.step()
        yield k, firings, pile.slopes
