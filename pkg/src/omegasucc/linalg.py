"""Exact sparse linear solving over Fractions.

No tolerances: every entry is a ``fractions.Fraction`` and a zero test is
an exact comparison.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import graphs

Row = dict[int, Fraction]


class SingularSystem(ArithmeticError):
    pass


def solve(rows: Sequence[Mapping[int, Fraction]], rhs: Sequence[Fraction], unknowns: Sequence[int]) -> dict[int, Fraction]:
    """Solve ``rows[i] . x = rhs[i]`` for the listed unknowns by Gauss-Jordan elimination.

    Rows are sparse ``{unknown: coefficient}`` maps. Pivots follow a cheap
    Markowitz rule to limit fill-in: the unknown occurring in the fewest
    not-yet-pivoted rows, then its shortest such row. Exact arithmetic makes
    any nonzero pivot safe, so the order only affects speed.
    """
    work: list[tuple[Row, Fraction]] = [(dict(r), Fraction(c)) for r, c in zip(rows, rhs)]
    # column -> rows with a nonzero there; ``active`` only counts non-pivot rows
    occurs: dict[int, set[int]] = {u: set() for u in unknowns}
    for i, (r, _) in enumerate(work):
        for u in r:
            occurs.setdefault(u, set()).add(i)
    active: dict[int, set[int]] = {u: set(occurs[u]) for u in unknowns}
    used: set[int] = set()
    pivots: list[tuple[int, int]] = []
    while active:
        u, p = _choose_pivot(active, work)
        used.add(p)
        prow, pval = work[p]
        for k in prow:
            if k in active:
                active[k].discard(p)
        del active[u]
        inv = 1 / prow[u]
        prow = {k: v * inv for k, v in prow.items()}
        pval = pval * inv
        work[p] = (prow, pval)
        pivots.append((u, p))
        for i in sorted(occurs[u]):
            if i == p:
                continue
            row, val = work[i]
            factor = row.get(u)
            if not factor:
                continue
            for k, v in prow.items():
                nv = row.get(k, 0) - factor * v
                if nv:
                    if k not in row:
                        occurs.setdefault(k, set()).add(i)
                        if k in active and i not in used:
                            active[k].add(i)
                    row[k] = nv
                elif k in row:
                    del row[k]
                    occurs[k].discard(i)
                    if k in active:
                        active[k].discard(i)
            work[i] = (row, val - factor * pval)
        occurs[u] = {p}
    return {u: work[p][1] for u, p in pivots}


def _choose_pivot(active: dict[int, set[int]], work) -> tuple[int, int]:
    """Unknown with the fewest candidate rows, then its shortest row; ties by index."""
    best_u = None
    best_count = None
    for u, rows in active.items():
        count = len(rows)
        if count == 0:
            raise SingularSystem(f"no pivot for unknown {u}")
        if best_count is None or count < best_count or (count == best_count and u < best_u):
            best_u, best_count = u, count
    row = min(active[best_u], key=lambda i: (len(work[i][0]), i))
    return best_u, row


def solve_absorbing(
    unknowns: Iterable[int],
    transitions: Mapping[int, Sequence[tuple[Fraction, int]]],
    known: Mapping[int, Fraction],
) -> dict[int, Fraction]:
    """Solve ``x_s = sum_t p(s, t) x_t`` with ``x`` fixed on ``known``.

    Every unknown must be able to reach a ``known`` state with positive
    probability, otherwise the system is singular. The system is split into
    strongly connected blocks and solved bottom-up, so each elimination only
    sees one block.
    """
    unknowns = sorted(set(unknowns))
    unknown_set = set(unknowns)

    def succ(s):
        return [t for _, t in transitions[s] if t in unknown_set]

    values: dict[int, Fraction] = dict(known)
    for block in graphs.tarjan_scc(unknowns, succ):
        block_set = set(block)
        rows, rhs = [], []
        for s in block:
            row: Row = {s: Fraction(1)}
            const = Fraction(0)
            for p, t in transitions[s]:
                if t in block_set:
                    row[t] = row.get(t, 0) - p
                else:
                    const += p * values.get(t, 0)
            row = {k: v for k, v in row.items() if v}
            rows.append(row)
            rhs.append(const)
        values.update(solve(rows, rhs, block))
    return {s: values[s] for s in unknowns}
