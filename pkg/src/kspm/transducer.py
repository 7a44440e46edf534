"""The interval word transducer of KSPM(D) and the D=3 word analysis.

An interval state is the tuple of the D-1 slope values of one interval.  Reading
the type of an influent subsequence arriving from the left interval, the machine
moves to the interval's new state and emits the types of the influent
subsequences it passes on to the right interval.

Letters are the integers 0..D-2.  For D=3 the conventional rendering is
``a`` = 0 and ``b`` = 1; see :func:`from_ab` / :func:`to_ab`.
"""
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from ._validation import check_D, check_word
from .exceptions import InputError, InternalError

ALGORITHM_EXACT = "algorithm-exact"
FIGURE_SUPPRESSED = "figure-suppressed"
MODES = (ALGORITHM_EXACT, FIGURE_SUPPRESSED)


def from_ab(text):
    """Parse a D=3 word written with a/b (or 0/1 digits)."""
    table = {"a": 0, "b": 1, "0": 0, "1": 1}
    try:
        return tuple(table[c] for c in text)
    except KeyError as exc:
        raise InputError(f"letter {exc.args[0]!r} is not in the alphabet {{a, b}}") from None


def to_ab(word):
    return "".join("ab"[x] for x in word)


def parse_word(text, D):
    """Parse a word given as digits, or as a/b when D=3."""
    D = check_D(D)
    if D == 3 and text and set(text) <= set("ab"):
        return from_ab(text)
    if any(not c.isdigit() for c in text):
        raise InputError(f"cannot parse {text!r} as a word over 0..{D - 2}")
    return check_word((int(c) for c in text), D - 1)


def format_word(word, D, ab=False):
    if ab and D == 3:
        return to_ab(word)
    return "".join(str(x) for x in word)


def format_state(state):
    return "".join(str(x) for x in state)


def f_peak(state, letter, D):
    """Greatest position holding D-1, provided one such position is <= letter."""
    top = D - 1
    if not any(state[m] == top for m in range(letter + 1)):
        return None
    return max(m for m, v in enumerate(state) if v == top)


def delta(state, letter, D):
    """One transducer transition: returns ``(new_state, output_word)``."""
    D = check_D(D)
    state = tuple(state)
    if len(state) != D - 1:
        raise InputError(f"state {state} must have {D - 1} entries")
    check_word((letter,), D - 1)
    out = []
    a = list(state)
    for _ in range(D * (D - 1) + 1):
        p = f_peak(a, letter, D)
        if p is None:
            for m in range(letter + 1):
                a[m] += 1
            return tuple(a), tuple(out)
        a[p] = 0
        for m in range(p + 1, D - 1):
            a[m] += 1
        out.append(p)
    raise InternalError(f"delta did not terminate from {state} on {letter}")


def is_wave_prefix(word):
    """True iff ``word`` is a prefix of (01)(01)... i.e. of (ab)^omega."""
    w = bytes(word)
    odd = w[1::2]
    return not any(w[0::2]) and odd.count(1) == len(odd)


_CHUNK = 8


def _as_bytes(word, D):
    if isinstance(word, (bytes, bytearray)):
        check_word(word, D - 1)
        return bytes(word)
    return bytes(check_word(word, D - 1))


@dataclass(frozen=True)
class TransducerMachine:
    D: int
    initial: tuple
    states: tuple
    table: dict = field(repr=False)
    recurrent: frozenset = field(repr=False)
    mode: str = ALGORITHM_EXACT

    def __post_init__(self):
        index = {q: n for n, q in enumerate(self.states)}
        object.__setattr__(self, "_index", index)
        # (state index, chunk of up to _CHUNK letters as bytes) -> (state index, output bytes)
        object.__setattr__(self, "_memo", {})

    @property
    def alphabet(self):
        return tuple(range(self.D - 1))

    @property
    def transient(self):
        return frozenset(self.states) - self.recurrent

    def step(self, state, letter):
        """Single transition ``(state, letter) -> (state, output)``."""
        state = tuple(state)
        if state not in self._index:
            raise InputError(f"{state} is not a state of this machine")
        check_word((letter,), self.D - 1)
        return self.table[(state, letter)]

    def _chunk(self, qi, chunk):
        q = self.states[qi]
        out = []
        for x in chunk:
            q, o = self.table[(q, x)]
            out.extend(o)
        return self._index[q], bytes(out)

    def _run_bytes(self, w, qi):
        memo = self._memo
        parts = []
        n = len(w)
        j = 0
        while j < n:
            c = w[j:j + _CHUNK]
            key = (qi, c)
            hit = memo.get(key)
            if hit is None:
                hit = memo[key] = self._chunk(qi, c)
            qi, o = hit
            if o:
                parts.append(o)
            j += _CHUNK
        return qi, b"".join(parts)

    def run(self, word, start=None):
        """Fold the machine over ``word``; returns ``(end_state, output)``."""
        q = self.initial if start is None else tuple(start)
        if q not in self._index:
            raise InputError(f"{q} is not a state of this machine")
        w = _as_bytes(word, self.D)
        qi, out = self._run_bytes(w, self._index[q])
        return self.states[qi], tuple(out)

    def image(self, word, start=None):
        return self.run(word, start)[1]

    def iterate(self, word, n):
        if n < 0:
            raise InputError("iteration count must be >= 0")
        w = _as_bytes(word, self.D)
        q0 = self._index[self.initial]
        for _ in range(n):
            w = self._run_bytes(w, q0)[1]
        return tuple(w)

    def edges(self):
        """Sorted list of ``(state, letter, target, output)``."""
        return sorted((q, x, r, o) for (q, x), (r, o) in self.table.items())

    def to_dot(self, ab=False, name="kspm"):
        def lbl(w):
            return format_word(w, self.D, ab) or "ε"

        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for q in self.states:
            shape = "doublecircle" if q == self.initial else "circle"
            fill = "grey70" if q in self.recurrent else "grey92"
            lines.append(
                f'  "{format_state(q)}" [shape={shape}, style=filled, fillcolor={fill}];'
            )
        for q, x, r, o in self.edges():
            lines.append(
                f'  "{format_state(q)}" -> "{format_state(r)}" [label="{lbl((x,))}|{lbl(o)}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_machine(D, mode=ALGORITHM_EXACT):
    """Breadth-first closure of :func:`delta` from the all-zero state."""
    D = check_D(D)
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    initial = (0,) * (D - 1)
    table = {}
    seen = {initial}
    order = [initial]
    todo = deque([initial])
    while todo:
        q = todo.popleft()
        for x in range(D - 1):
            r, out = delta(q, x, D)
            table[(q, x)] = (r, out)
            if r not in seen:
                seen.add(r)
                order.append(r)
                todo.append(r)
    g = nx.DiGraph()
    g.add_nodes_from(order)
    g.add_edges_from((q, r) for (q, _), (r, _) in table.items())
    recurrent = frozenset().union(*nx.attracting_components(g))
    if mode == FIGURE_SUPPRESSED:
        table = {k: (r, o if k[0] in recurrent else ()) for k, (r, o) in table.items()}
    return TransducerMachine(D, initial, tuple(order), table, recurrent, mode)


def run(machine, word, start=None):
    return machine.run(word, start)


def iterate(machine, word, n):
    return machine.iterate(word, n)


# -- D=3 word analysis --


@dataclass(frozen=True)
class WordStats:
    word: tuple
    height: int
    max_height: int
    in_L: bool


def height(word):
    if isinstance(word, (bytes, bytearray)):
        return abs(len(word) - 2 * word.count(1))
    a = sum(1 for x in word if x == 0)
    return abs(a - (len(word) - a))


def word_stats(word):
    """Height, maximal prefix height and membership in {ab u} + {eps, a}."""
    word = check_word(word, 2)
    bal = 0
    g = 0
    for x in word:
        bal += 1 if x == 0 else -1
        g = max(g, abs(bal))
    in_L = len(word) == 0 or word == (0,) or word[:2] == (0, 1)
    return WordStats(word, abs(bal), g, in_L)


def in_language(word):
    return len(word) == 0 or tuple(word) == (0,) or tuple(word[:2]) == (0, 1)


def basic_words(machine, q, max_depth=None):
    """Minimal words whose image from ``q`` has length >= 2, with their images."""
    q = tuple(q)
    D = machine.D
    max_depth = 2 * D * D if max_depth is None else max_depth
    found = {}
    frontier = [((), q, 0)]
    for _ in range(max_depth):
        nxt = []
        for w, state, produced in frontier:
            for x in machine.alphabet:
                r, o = machine.table[(state, x)]
                n = produced + len(o)
                if n >= 2:
                    found[w + (x,)] = machine.image(w + (x,), q)
                else:
                    nxt.append((w + (x,), r, n))
        frontier = nxt
        if not frontier:
            break
    if frontier:
        raise InternalError(f"basic word enumeration from {q} exceeded depth {max_depth}")
    return dict(sorted(found.items(), key=lambda kv: (len(kv[0]), kv[0])))


@dataclass(frozen=True)
class Decomposition:
    entry: tuple
    factors: tuple
    residual: tuple
    # False when the word never leaves the transient states
    entered: bool = True

    def concat(self):
        return self.entry + sum(self.factors, ()) + self.residual


def decompose(machine, word, start=None):
    """Split ``word`` into an entry word, basic factors and a residual prefix.

    The entry word is the shortest prefix that drives the machine from ``start``
    (default: the initial state) into the recurrent class.  Factors are basic
    words for the running state; the residual is what is left and is a proper
    prefix of a basic word.
    """
    word = check_word(word, machine.D - 1)
    q = machine.initial if start is None else tuple(start)
    pos = 0
    while q not in machine.recurrent and pos < len(word):
        q = machine.table[(q, word[pos])][0]
        pos += 1
    entry = word[:pos]
    if q not in machine.recurrent:
        return Decomposition(entry, (), (), entered=False)
    factors = []
    cur = pos
    produced = 0
    state = q
    for j in range(pos, len(word)):
        state, o = machine.table[(state, word[j])]
        produced += len(o)
        if produced >= 2:
            factors.append(word[cur:j + 1])
            cur = j + 1
            produced = 0
    return Decomposition(entry, tuple(factors), word[cur:], entered=True)


def wave_step_bound(length):
    """Iteration count after which t^n(u) is a prefix of (ab)^omega, |u| = length."""
    x = math.log(4 * length + 4 / 3, 4) - math.log(2 / 3, 4) + 3
    return math.ceil(x) + 1


def wave_steps(machine, word, max_steps=None):
    """Minimal n such that t^n(word) is a prefix of (ab)^omega."""
    w = _as_bytes(word, machine.D)
    limit = 4 * wave_step_bound(len(w)) + 64 if max_steps is None else max_steps
    q0 = machine._index[machine.initial]
    n = 0
    while not is_wave_prefix(w):
        if n >= limit:
            raise InternalError(f"no wave prefix after {limit} iterations")
        w = machine._run_bytes(w, q0)[1]
        n += 1
    return n


def wave_trajectory(machine, word, max_steps=None):
    """Successive iterates until a prefix of (ab)^omega is reached."""
    word = check_word(word, machine.D - 1)
    n = wave_steps(machine, word, max_steps)
    out = [word]
    for _ in range(n):
        word = machine.image(word)
        out.append(word)
    return out
