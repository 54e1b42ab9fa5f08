"""Small graph helpers: Tarjan SCCs, condensation order, reachability."""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Sequence


def tarjan_scc(vertices: Iterable[Hashable], successors: Callable[[Hashable], Iterable[Hashable]]) -> list[list]:
    """Strongly connected components in reverse topological order.

    Iterative so deep graphs do not hit the recursion limit. A component is
    emitted only after every component it can reach, i.e. sinks first.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0

    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def topological_sccs(n: int, adjacency: Sequence[Iterable[int]]) -> list[list[int]]:
    """SCCs of a graph on ``range(n)``, ordered so edges only go forward.

    Within each component the states are sorted; components are emitted
    sources first.
    """
    comps = tarjan_scc(range(n), lambda v: adjacency[v])
    return [sorted(c) for c in reversed(comps)]


def reachable(starts: Iterable[int], adjacency: Sequence[Iterable[int]]) -> set[int]:
    seen = set(starts)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def reverse_adjacency(n: int, adjacency: Sequence[Iterable[int]]) -> list[list[int]]:
    rev: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for w in adjacency[v]:
            rev[w].append(v)
    return rev
