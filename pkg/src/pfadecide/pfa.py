"""Probabilistic finite automata, their support NFAs, and exact evaluation."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .graphs import reachable, reverse_adjacency
from .linalg import ONE, ZERO, RMatrix, dot, format_rational, mat_pow, vec_mat

# A word is given either as text ("h^3 g^2", "abba", "a^1000"), a unary
# length, or a sequence of letter names / indices.
WordLike = Union[str, int, Sequence[Union[str, int]]]


class PfaError(ValueError):
    pass


@dataclass(frozen=True)
class Pfa:
    """``P(w) = u^T M_{w_1} ... M_{w_k} v`` with row-stochastic ``M_a``."""

    alphabet: tuple[str, ...]
    initial: tuple[Fraction, ...]
    matrices: tuple[RMatrix, ...]
    final: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "initial", tuple(Fraction(x) for x in self.initial))
        object.__setattr__(self, "matrices", tuple(self.matrices))
        object.__setattr__(self, "final", tuple(int(x) for x in self.final))
        self.validate()

    def validate(self) -> None:
        n = len(self.initial)
        if n == 0:
            raise PfaError("a PFA needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet) or not self.alphabet:
            raise PfaError("alphabet must be a nonempty list of distinct letters")
        if len(self.matrices) != len(self.alphabet):
            raise PfaError("one transition matrix per letter required")
        if any(x < 0 for x in self.initial) or sum(self.initial) != 1:
            raise PfaError("initial vector must be a probability distribution")
        if len(self.final) != n or any(b not in (0, 1) for b in self.final):
            raise PfaError("final vector must be a 0/1 vector of length n")
        for letter, m in zip(self.alphabet, self.matrices):
            if m.shape != (n, n):
                raise PfaError(f"matrix for {letter!r} has shape {m.shape}, expected {(n, n)}")
            for i, row in enumerate(m.rows):
                if any(x < 0 for x in row) or sum(row) != 1:
                    raise PfaError(
                        f"row {i + 1} of matrix {letter!r} is not stochastic (sum {format_rational(sum(row))})"
                    )

    @property
    def n(self) -> int:
        return len(self.initial)

    @property
    def is_unary(self) -> bool:
        return len(self.alphabet) == 1

    def matrix(self, letter: str | int) -> RMatrix:
        return self.matrices[self.letter_index(letter)]

    def letter_index(self, letter: str | int) -> int:
        if isinstance(letter, int):
            if not 0 <= letter < len(self.alphabet):
                raise PfaError(f"letter index {letter} out of range")
            return letter
        try:
            return self.alphabet.index(letter)
        except ValueError:
            raise PfaError(f"unknown letter {letter!r}") from None

    def final_vector(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(b) for b in self.final)

    def is_zero_one(self) -> bool:
        return all(m.is_zero_one() for m in self.matrices)

    def commutes(self) -> bool:
        ms = self.matrices
        return all(ms[i] @ ms[j] == ms[j] @ ms[i] for i in range(len(ms)) for j in range(i + 1, len(ms)))


# ---------------------------------------------------------------------------
# words

_RUN_RE = re.compile(r"^(?P<letter>[^\s^]+)\^(?P<count>\d+)$")


def parse_word(text: str, alphabet: Sequence[str]) -> tuple[tuple[int, int], ...]:
    """Parse a word into ``(letter index, repeat count)`` runs.

    Whitespace separated tokens are either ``letter^K``, a letter name, or a
    run of single-character letter names (``hhg``). An empty string, ``ε``
    or ``eps`` is the empty word.
    """
    alphabet = list(alphabet)
    runs: list[tuple[int, int]] = []
    text = text.strip()
    if text in ("", "ε", "eps"):
        return ()
    for token in text.split():
        m = _RUN_RE.match(token)
        if m:
            name = m.group("letter")
            if name not in alphabet:
                raise PfaError(f"unknown letter {name!r} in word")
            runs.append((alphabet.index(name), int(m.group("count"))))
        elif token in alphabet:
            runs.append((alphabet.index(token), 1))
        elif all(ch in alphabet for ch in token):
            runs.extend((alphabet.index(ch), 1) for ch in token)
        else:
            bad = next(ch for ch in token if ch not in alphabet)
            raise PfaError(f"unknown letter {bad!r} in word token {token!r}")
    return _merge_runs(runs)


def _merge_runs(runs) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for letter, count in runs:
        if count == 0:
            continue
        if out and out[-1][0] == letter:
            out[-1] = (letter, out[-1][1] + count)
        else:
            out.append((letter, count))
    return tuple(out)


def word_runs(pfa: Pfa, word: WordLike) -> tuple[tuple[int, int], ...]:
    if isinstance(word, str):
        return parse_word(word, pfa.alphabet)
    if isinstance(word, int):
        if not pfa.is_unary:
            raise PfaError("an integer word is only meaningful for unary automata")
        if word < 0:
            raise PfaError("negative word length")
        return _merge_runs([(0, word)])
    return _merge_runs([(pfa.letter_index(x), 1) for x in word])


def format_runs(alphabet: Sequence[str], runs) -> str:
    if not runs:
        return "ε"
    return " ".join(f"{alphabet[i]}^{k}" for i, k in runs)


# direct vector stepping is cheaper than squaring up to roughly this many steps
_POWER_CUTOFF = 48


def accept_prob(pfa: Pfa, word: WordLike) -> Fraction:
    """Exact acceptance probability of ``word``."""
    vec = pfa.initial
    for letter, count in word_runs(pfa, word):
        m = pfa.matrices[letter]
        if count > _POWER_CUTOFF:
            vec = vec_mat(vec, mat_pow(m, count))
        else:
            for _ in range(count):
                vec = vec_mat(vec, m)
    return dot(vec, pfa.final_vector())


# ---------------------------------------------------------------------------
# cutpoint queries


class Mode(enum.Enum):
    REACH = "reach"
    EMPTY_GE = "empty-ge"
    EMPTY_GT = "empty-gt"
    EMPTY_LE = "empty-le"
    EMPTY_LT = "empty-lt"

    def holds(self, p: Fraction, lam: Fraction) -> bool:
        if self is Mode.REACH:
            return p == lam
        if self is Mode.EMPTY_GE:
            return p >= lam
        if self is Mode.EMPTY_GT:
            return p > lam
        if self is Mode.EMPTY_LE:
            return p <= lam
        return p < lam

    @property
    def symbol(self) -> str:
        return {"reach": "=", "empty-ge": ">=", "empty-gt": ">", "empty-le": "<=", "empty-lt": "<"}[self.value]


@dataclass(frozen=True)
class Query:
    """Is there a word with ``P(w) <mode> lambda``?"""

    lam: Fraction
    mode: Mode = Mode.REACH

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "mode", Mode(self.mode))
        if not 0 <= self.lam <= 1:
            raise PfaError("cutpoint must lie in [0, 1]")

    def holds(self, p: Fraction) -> bool:
        return self.mode.holds(p, self.lam)

    def __str__(self) -> str:
        return f"P(w) {self.mode.symbol} {format_rational(self.lam)}"


# ---------------------------------------------------------------------------
# support automaton


@dataclass(frozen=True)
class Nfa:
    n: int
    alphabet: tuple[str, ...]
    edges: tuple[tuple[tuple[int, ...], ...], ...]  # edges[a][p] = sorted successors
    initials: frozenset[int]
    finals: frozenset[int]

    def successors(self, p: int, letter: int) -> tuple[int, ...]:
        return self.edges[letter][p]

    def adjacency(self) -> list[list[int]]:
        """Letter-blind successor lists."""
        return [sorted({q for a in range(len(self.alphabet)) for q in self.edges[a][p]}) for p in range(self.n)]

    def has_edge(self, p: int, letter: int, q: int) -> bool:
        return q in self.edges[letter][p]


def embed_nfa(pfa: Pfa) -> Nfa:
    edges = tuple(
        tuple(tuple(j for j, x in enumerate(row) if x) for row in m.rows) for m in pfa.matrices
    )
    return Nfa(
        n=pfa.n,
        alphabet=pfa.alphabet,
        edges=edges,
        initials=frozenset(i for i, x in enumerate(pfa.initial) if x),
        finals=frozenset(i for i, b in enumerate(pfa.final) if b),
    )


def useful_states(nfa: Nfa) -> frozenset[int]:
    """States on some accepting path: reachable from an initial state and co-reachable to a final one."""
    adj = nfa.adjacency()
    fwd = reachable(nfa.initials, adj)
    bwd = reachable(nfa.finals, reverse_adjacency(nfa.n, adj))
    return frozenset(fwd & bwd)


def trim(pfa: Pfa) -> tuple[Pfa, tuple[int, ...]]:
    """Restrict to useful states, routing all lost mass into one rejecting sink.

    Returns the trimmed PFA and the original index of each kept state (the
    sink, when present, is last and has no original index). Acceptance
    probabilities of every word are unchanged.
    """
    keep = sorted(useful_states(embed_nfa(pfa)))
    if not keep:
        return Pfa(pfa.alphabet, (ONE,), tuple(RMatrix([[1]]) for _ in pfa.alphabet), (0,)), ()
    initial = [pfa.initial[i] for i in keep]
    mats = [[[m[i, j] for j in keep] for i in keep] for m in pfa.matrices]
    need_sink = sum(initial) != 1 or any(sum(row) != 1 for rows in mats for row in rows)
    final = [pfa.final[i] for i in keep]
    if need_sink:
        initial.append(ONE - sum(initial))
        for rows in mats:
            for row in rows:
                row.append(ONE - sum(row))
            rows.append([ZERO] * len(keep) + [ONE])
        final.append(0)
    return Pfa(pfa.alphabet, initial, tuple(RMatrix(r) for r in mats), final), tuple(keep)

