"""Small graph utilities over dense integer vertices."""
from __future__ import annotations

from collections import deque
from typing import Callable, Iterable, Sequence

Successors = Callable[[int], Iterable[int]]


def reachable(sources: Iterable[int], succ: Successors) -> set[int]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def tarjan_scc(vertices: Sequence[int], succ: Successors) -> list[list[int]]:
    """Strongly connected components, iterative Tarjan.

    Components come out in reverse topological order: every edge leaving a
    component points into a component listed earlier.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    result: list[list[int]] = []
    counter = 0

    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
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
                    work.append((w, iter(succ(w))))
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
                result.append(sorted(comp))
    return result


def is_nontrivial(comp: Sequence[int], succ: Successors) -> bool:
    """True if the component carries a cycle (size > 1 or a self-loop)."""
    if len(comp) > 1:
        return True
    v = comp[0]
    return v in set(succ(v))


def bfs_path(
    sources: Iterable[int],
    edges: Callable[[int], Iterable[tuple[object, int]]],
    goal: Callable[[int], bool],
    allowed: Callable[[int], bool] | None = None,
    min_length: int = 0,
) -> tuple[list[object], list[int]] | None:
    """Shortest labelled path from any source to a goal vertex.

    ``edges(v)`` yields ``(label, w)`` pairs in the preferred order; BFS in
    that order returns the length-lexicographically least label sequence.
    With ``min_length=1`` a source only counts as a goal after at least one
    step, which is what cycle search needs.
    Returns ``(labels, vertices)`` with ``len(vertices) == len(labels) + 1``.
    """
    parent: dict[tuple[int, bool], tuple[tuple[int, bool], object] | None] = {}
    queue: deque[tuple[int, bool]] = deque()
    for s in sources:
        key = (s, min_length == 0)
        if key not in parent:
            parent[key] = None
            queue.append(key)
    while queue:
        key = queue.popleft()
        v, moved = key
        if moved and goal(v):
            labels: list[object] = []
            verts = [v]
            while parent[key] is not None:
                key, label = parent[key]
                labels.append(label)
                verts.append(key[0])
            labels.reverse()
            verts.reverse()
            return labels, verts
        for label, w in edges(v):
            if allowed is not None and not allowed(w):
                continue
            nkey = (w, True)
            if nkey not in parent:
                parent[nkey] = (key, label)
                queue.append(nkey)
    return None
