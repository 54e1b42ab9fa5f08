"""Degree-of-ambiguity classification of the support automaton.

An automaton is exponentially ambiguous when some useful state ``q`` has two
distinct ``q -> q`` runs on one word (EDA). Otherwise its ambiguity is bounded
by a polynomial whose degree is the length of the longest chain of pairs
``(r, s)`` that loop on a common word while also crossing ``r -> s`` (IDA).
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .graphs import reachable, reverse_adjacency, topological_sccs
from .pfa import Nfa, Pfa, embed_nfa, useful_states

Word = tuple[int, ...]


class AmbiguityClass(enum.Enum):
    EXPONENTIAL = "exponential"
    POLYNOMIAL = "polynomial"
    FINITE = "finite"


@dataclass(frozen=True)
class EdaWitness:
    state: int
    word: Word


@dataclass(frozen=True)
class IdaLink:
    """``r`` and ``s`` both loop on ``loop_word`` which also leads ``r -> s``;
    ``bridge`` leads from ``s`` to the next link's ``r`` (empty for the last)."""

    r: int
    s: int
    loop_word: Word
    bridge: Word = ()


@dataclass(frozen=True)
class AmbiguityReport:
    kind: AmbiguityClass
    degree: int = 0
    eda_witness: EdaWitness | None = None
    degree_witness: tuple[IdaLink, ...] = ()
    useful: frozenset[int] = field(default_factory=frozenset)

    def summary(self) -> str:
        if self.kind is AmbiguityClass.POLYNOMIAL:
            return f"POLYNOMIAL d>={self.degree}"
        return self.kind.name


# ---------------------------------------------------------------------------
# helpers


class _Restricted:
    """The NFA restricted to useful states, with letter-blind SCCs."""

    def __init__(self, nfa: Nfa):
        self.nfa = nfa
        self.useful = useful_states(nfa)
        self.sigma = range(len(nfa.alphabet))
        u = self.useful
        self.succ = [
            [tuple(q for q in nfa.edges[a][p] if q in u) if p in u else () for p in range(nfa.n)] for a in self.sigma
        ]
        adj = [sorted({q for a in self.sigma for q in self.succ[a][p]}) for p in range(nfa.n)]
        self.adj = adj
        comps = [c for c in topological_sccs(nfa.n, adj) if c[0] in u]
        self.comp_of = {}
        for idx, comp in enumerate(comps):
            for q in comp:
                self.comp_of[q] = idx
        self.comps = comps
        self._rev = reverse_adjacency(nfa.n, adj)

    def on_cycle(self, q: int) -> bool:
        return len(self.comps[self.comp_of[q]]) > 1 or q in self.adj[q]

    def reach(self, q: int) -> set[int]:
        return reachable([q], self.adj)

    def coreach(self, q: int) -> set[int]:
        return reachable([q], self._rev)


def _bfs(start, goal, step):
    """Shortest word from ``start`` to ``goal``; letters expanded in order so the
    first word found is also lexicographically least among the shortest."""
    if start == goal:
        return ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for letter, nxt in step(node):
            if nxt in parent:
                continue
            parent[nxt] = (node, letter)
            if nxt == goal:
                word = []
                cur = nxt
                while parent[cur] is not None:
                    cur, letter = parent[cur]
                    word.append(letter)
                return tuple(reversed(word))
            queue.append(nxt)
    return None


# ---------------------------------------------------------------------------
# EDA


def _eda_at(g: _Restricted, q: int) -> Word | None:
    comp = set(g.comps[g.comp_of[q]])

    def step(node):
        p1, p2, seen_split = node
        for a in g.sigma:
            for t1 in g.succ[a][p1]:
                if t1 not in comp:
                    continue
                for t2 in g.succ[a][p2]:
                    if t2 in comp:
                        yield a, (t1, t2, seen_split or t1 != t2)

    return _bfs((q, q, False), (q, q, True), step)


def has_eda(nfa: Nfa, _g: _Restricted | None = None) -> EdaWitness | None:
    g = _g or _Restricted(nfa)
    best = None
    for q in sorted(g.useful):
        if not g.on_cycle(q):
            continue
        word = _eda_at(g, q)
        if word is not None and (best is None or len(word) < len(best.word)):
            best = EdaWitness(q, word)
    return best


# ---------------------------------------------------------------------------
# IDA


def _ida_word(g: _Restricted, r: int, s: int, middle: set[int]) -> Word | None:
    first = set(g.comps[g.comp_of[r]])
    last = set(g.comps[g.comp_of[s]])

    def step(node):
        p1, p2, p3 = node
        for a in g.sigma:
            for t1 in g.succ[a][p1]:
                if t1 not in first:
                    continue
                for t3 in g.succ[a][p3]:
                    if t3 not in last:
                        continue
                    for t2 in g.succ[a][p2]:
                        if t2 in middle:
                            yield a, (t1, t2, t3)

    return _bfs((r, r, s), (r, s, s), step)


def ida_pairs(nfa: Nfa, _g: _Restricted | None = None) -> dict[tuple[int, int], Word]:
    """All IDA_1 pairs ``(r, s)`` with a shortest witnessing word."""
    g = _g or _Restricted(nfa)
    looping = [q for q in sorted(g.useful) if g.on_cycle(q)]
    reach = {q: g.reach(q) for q in looping}
    coreach = {q: g.coreach(q) for q in looping}
    out = {}
    for r in looping:
        for s in looping:
            if r == s or s not in reach[r]:
                continue
            word = _ida_word(g, r, s, reach[r] & coreach[s])
            if word is not None:
                out[(r, s)] = word
    return out


def ida_degree_lower_bound(nfa: Nfa, _g: _Restricted | None = None) -> tuple[int, tuple[IdaLink, ...]]:
    """Longest chain ``(r_1,s_1) ... (r_d,s_d)`` of IDA_1 pairs with ``s_i ->* r_{i+1}``.

    Assumes no EDA, which makes the chain graph acyclic (each link moves
    strictly forward in the SCC order).
    """
    g = _g or _Restricted(nfa)
    pairs = ida_pairs(nfa, g)
    if not pairs:
        return 0, ()
    reach = {}
    # process pairs from the end of the SCC order so successors are done first
    order = sorted(pairs, key=lambda p: (-g.comp_of[p[0]], p))
    best: dict[tuple[int, int], tuple[int, tuple[int, int] | None]] = {}
    for r, s in order:
        if s not in reach:
            reach[s] = g.reach(s)
        length, nxt = 1, None
        for r2, s2 in pairs:
            if r2 in reach[s] and (r2, s2) in best and g.comp_of[r2] > g.comp_of[r]:
                cand = best[(r2, s2)][0] + 1
                if cand > length:
                    length, nxt = cand, (r2, s2)
        best[(r, s)] = (length, nxt)
    start = min(best, key=lambda p: (-best[p][0], p))
    chain = []
    cur = start
    while cur is not None:
        nxt = best[cur][1]
        bridge = ()
        if nxt is not None:
            bridge = _bfs(cur[1], nxt[0], lambda p: ((a, q) for a in g.sigma for q in g.succ[a][p]))
        chain.append(IdaLink(cur[0], cur[1], pairs[cur], bridge))
        cur = nxt
    return best[start][0], tuple(chain)


def classify_nfa(nfa: Nfa) -> AmbiguityReport:
    g = _Restricted(nfa)
    eda = has_eda(nfa, g)
    if eda is not None:
        return AmbiguityReport(AmbiguityClass.EXPONENTIAL, eda_witness=eda, useful=g.useful)
    d, chain = ida_degree_lower_bound(nfa, g)
    if d:
        return AmbiguityReport(AmbiguityClass.POLYNOMIAL, degree=d, degree_witness=chain, useful=g.useful)
    return AmbiguityReport(AmbiguityClass.FINITE, useful=g.useful)


def classify(pfa: Pfa) -> AmbiguityReport:
    return classify_nfa(embed_nfa(pfa))


# ---------------------------------------------------------------------------
# witness checking by explicit run counting


def count_runs(nfa: Nfa, src: int, word: Sequence[int], dst: int) -> int:
    """Number of distinct runs from ``src`` to ``dst`` reading ``word``."""
    counts = {src: 1}
    for a in word:
        nxt: dict[int, int] = {}
        for p, k in counts.items():
            for q in nfa.edges[a][p]:
                nxt[q] = nxt.get(q, 0) + k
        counts = nxt
    return counts.get(dst, 0)


def check_report(nfa: Nfa, report: AmbiguityReport) -> bool:
    if report.eda_witness is not None:
        w = report.eda_witness
        if count_runs(nfa, w.state, w.word, w.state) < 2:
            return False
    for i, link in enumerate(report.degree_witness):
        v = link.loop_word
        if not v or link.r == link.s:
            return False
        if not all(count_runs(nfa, p, v, q) >= 1 for p, q in ((link.r, link.r), (link.r, link.s), (link.s, link.s))):
            return False
        if i + 1 < len(report.degree_witness):
            if count_runs(nfa, link.s, link.bridge, report.degree_witness[i + 1].r) < 1:
                return False
    return len(report.degree_witness) == report.degree
