"""Small argument checkers shared by the public API and the estimators."""
import numbers

from .exceptions import InputError


def check_D(D):
    if isinstance(D, bool) or not isinstance(D, numbers.Integral):
        raise InputError(f"D must be an integer, got {D!r}")
    D = int(D)
    if D < 2:
        raise InputError(f"D must be >= 2, got {D}")
    return D


def check_count(n, name="N"):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InputError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise InputError(f"{name} must be >= 0, got {n}")
    return n


def check_slopes(values):
    """Return ``values`` as a list of non-negative ints or raise InputError."""
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, numbers.Integral):
            raise InputError(f"slope values must be integers, got {v!r}")
        if v < 0:
            raise InputError(f"slope values must be >= 0, got {v}")
        out.append(int(v))
    return out


def check_word(word, n_letters):
    """Validate a word over {0, ..., n_letters-1} and return it as a tuple."""
    if isinstance(word, (bytes, bytearray)):
        if word and max(word) >= n_letters:
            raise InputError(f"letter {max(word)} is outside the alphabet 0..{n_letters - 1}")
        return tuple(word)
    out = []
    for x in word:
        if isinstance(x, bool) or not isinstance(x, numbers.Integral) or not 0 <= x < n_letters:
            raise InputError(f"letter {x!r} is outside the alphabet 0..{n_letters - 1}")
        out.append(int(x))
    return tuple(out)
