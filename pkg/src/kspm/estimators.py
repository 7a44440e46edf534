"""scikit-learn style wrappers around the simulator, the transducer and wave matching.

These let the library sit in a Pipeline or be cloned with ``get_params``.  Inputs
are integer grain counts, words or slope sequences rather than feature matrices,
so ``fit`` only caches what ``transform`` needs.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_count, check_D
from .avalanches import record_log
from .core import Configuration, Sandpile
from .exceptions import InputError
from .transducer import ALGORITHM_EXACT, MODES, build_machine
from .waves import wave_match


def _counts(X):
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise InputError(f"expected a 1-d array of grain counts, got shape {arr.shape}")
    return [check_count(v.item() if hasattr(v, "item") else v) for v in arr]


class SandpileFixedPoint(TransformerMixin, BaseEstimator):
    """Map grain counts N to fixed points pi(N) of KSPM(D).

    ``fit`` simulates up to ``max(X)`` once and records the avalanche log;
    ``transform`` returns an object array of :class:`Configuration`.
    """

    def __init__(self, D=3):
        self.D = D

    def fit(self, X, y=None):
        D = check_D(self.D)
        counts = _counts(X)
        n_max = max(counts, default=0)
        wanted = set(counts)
        log = record_log(D, n_max)
        pts = log.snapshots(wanted)
        self.fixed_points_ = pts
        self.log_ = log
        self.density_column_ = log.density_column
        self.n_max_ = n_max
        return self

    def _lookup(self, N):
        if N not in self.fixed_points_:
            if N <= self.n_max_:
                self.fixed_points_.update(self.log_.snapshots([N]))
            else:
                pile = Sandpile(self.D, self.log_.final.slopes)
                for _ in range(N - self.n_max_):
                    pile.step()
                self.fixed_points_[N] = pile.configuration()
        return self.fixed_points_[N]

    def transform(self, X):
        check_is_fitted(self, "fixed_points_")
        counts = _counts(X)
        out = np.empty(len(counts), dtype=object)
        for j, N in enumerate(counts):
            out[j] = self._lookup(N)
        return out


class IntervalTransducer(TransformerMixin, BaseEstimator):
    """Apply the interval transducer t to a batch of words (tuples of letters)."""

    def __init__(self, D=3, mode=ALGORITHM_EXACT, start=None):
        self.D = D
        self.mode = mode
        self.start = start

    def fit(self, X=None, y=None):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        self.machine_ = build_machine(check_D(self.D), self.mode)
        self.n_states_ = len(self.machine_.states)
        return self

    def transform(self, X):
        check_is_fitted(self, "machine_")
        out = np.empty(len(X), dtype=object)
        for j, w in enumerate(X):
            out[j] = self.machine_.image(w, self.start)
        return out


class WaveMatcher(TransformerMixin, BaseEstimator):
    """Return the wave column i_N of each stable configuration."""

    def __init__(self, D=3):
        self.D = D

    def fit(self, X=None, y=None):
        self.D_ = check_D(self.D)
        return self

    def transform(self, X):
        check_is_fitted(self, "D_")
        return np.array([wave_match(x if isinstance(x, Configuration) else Configuration(x),
                                    self.D_).i_N for x in X], dtype=np.int64)
