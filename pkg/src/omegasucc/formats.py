"""Text exchange formats: a conservative HOA v1 subset and DOT.

HOA output uses one atomic proposition per alphabet symbol, so every edge
label is a conjunction with exactly one positive literal. Acceptance is
state-based with set 0 marking final states. Büchi automata declare
``Acceptance: 1 Inf(0)``; finite-word automata declare ``Acceptance: 1 t``
and carry the tool-specific header ``word-mode: finite``, which other HOA
tools ignore.

The parser accepts what the writer produces, plus the ``[i]`` label
shorthand, conjunctions that leave out negated literals, and optional
state names. Anything outside the subset raises :class:`InputError`.
"""
from __future__ import annotations

import re

from .automaton import Automaton, Mode
from .errors import InputError


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(i: int, k: int) -> str:
    return "&".join(str(j) if j == i else f"!{j}" for j in range(k))


def to_hoa(a: Automaton, name: str | None = None) -> str:
    k = len(a.alphabet)
    lines = ["HOA: v1"]
    if name:
        lines.append(f"name: {_quote(name)}")
    lines.append(f"States: {a.num_states}")
    lines.append(f"Start: {a.initial}")
    lines.append(f"AP: {k} " + " ".join(_quote(s) for s in a.alphabet))
    if a.mode is Mode.BUCHI:
        lines.append("acc-name: Buchi")
        lines.append("Acceptance: 1 Inf(0)")
    else:
        lines.append("Acceptance: 1 t")
    lines.append("properties: trans-labels explicit-labels state-acc")
    if a.deterministic:
        lines.append("properties: deterministic")
    lines.append(f"word-mode: {'buchi' if a.mode is Mode.BUCHI else 'finite'}")
    lines.append("--BODY--")
    for q in a.states:
        lines.append(f"State: {q}" + (" {0}" if q in a.finals else ""))
        for i in range(k):
            for t in sorted(a.delta[q][i]):
                lines.append(f"[{_label(i, k)}] {t}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


_STRING = re.compile(r'"((?:[^"\\]|\\.)*)"')
_STATE = re.compile(r'^State:\s*(\d+)\s*(?:"(?:[^"\\]|\\.)*")?\s*(?:\{\s*([\d\s]*)\})?\s*$')
_EDGE = re.compile(r"^\[([^\]]*)\]\s*(\d+)\s*$")


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s)


def _parse_label(text: str, k: int, where: str) -> int:
    """Index of the single positive proposition in a conjunction label."""
    text = text.strip()
    if text.isdigit():
        i = int(text)
        if i >= k:
            raise InputError(f"{where}: proposition {i} out of range")
        return i
    positive = []
    for lit in text.split("&"):
        lit = lit.strip()
        m = re.fullmatch(r"(!?)\s*(\d+)", lit)
        if not m:
            raise InputError(f"{where}: unsupported label {text!r}")
        j = int(m.group(2))
        if j >= k:
            raise InputError(f"{where}: proposition {j} out of range")
        if not m.group(1):
            positive.append(j)
    if len(positive) != 1:
        raise InputError(f"{where}: label {text!r} must name exactly one symbol")
    return positive[0]


def from_hoa(text: str) -> Automaton:
    header: dict[str, str] = {}
    starts: list[int] = []
    lines = [ln.strip() for ln in text.splitlines()]
    try:
        body_at = lines.index("--BODY--")
    except ValueError:
        raise InputError("HOA: missing --BODY--") from None
    if not lines or not lines[0].startswith("HOA:") or lines[0].split(":", 1)[1].strip() != "v1":
        raise InputError("HOA: first line must be 'HOA: v1'")
    for ln in lines[1:body_at]:
        if not ln:
            continue
        if ":" not in ln:
            raise InputError(f"HOA: malformed header line {ln!r}")
        key, value = ln.split(":", 1)
        value = value.strip()
        if key == "Start":
            if "&" in value:
                raise InputError("HOA: alternating start states are not supported")
            starts.append(_int(value, "Start"))
        elif key == "properties":
            header[key] = (header.get(key, "") + " " + value).strip()
        else:
            header[key] = value
    for required in ("States", "AP"):
        if required not in header:
            raise InputError(f"HOA: missing {required} header")
    if len(starts) != 1:
        raise InputError("HOA: exactly one Start state is required")
    n = _int(header["States"], "States")
    ap = header["AP"]
    count_text, _, rest = ap.partition(" ")
    k = _int(count_text, "AP")
    alphabet = tuple(_unquote(s) for s in _STRING.findall(rest))
    if len(alphabet) != k:
        raise InputError(f"HOA: AP declares {k} propositions but names {len(alphabet)}")
    acceptance = header.get("Acceptance", "").replace(" ", "")
    mode_header = header.get("word-mode")
    if mode_header is not None:
        if mode_header not in ("buchi", "finite"):
            raise InputError(f"HOA: unknown word-mode {mode_header!r}")
        mode = Mode.BUCHI if mode_header == "buchi" else Mode.FINITE
    elif acceptance == "1Inf(0)":
        mode = Mode.BUCHI
    else:
        raise InputError(f"HOA: unsupported acceptance {header.get('Acceptance')!r}")
    if mode is Mode.BUCHI and acceptance != "1Inf(0)":
        raise InputError("HOA: Büchi automata must declare 'Acceptance: 1 Inf(0)'")

    edges = []
    finals = set()
    current = None
    seen_states = set()
    try:
        end_at = lines.index("--END--", body_at)
    except ValueError:
        raise InputError("HOA: missing --END--") from None
    for lineno, ln in enumerate(lines[body_at + 1 : end_at], start=body_at + 2):
        if not ln:
            continue
        where = f"HOA line {lineno}"
        m = _STATE.match(ln)
        if m:
            current = int(m.group(1))
            if current >= n:
                raise InputError(f"{where}: state {current} out of range")
            if current in seen_states:
                raise InputError(f"{where}: state {current} declared twice")
            seen_states.add(current)
            marks = (m.group(2) or "").split()
            if any(x != "0" for x in marks):
                raise InputError(f"{where}: only acceptance set 0 is supported")
            if marks:
                finals.add(current)
            continue
        m = _EDGE.match(ln)
        if m:
            if current is None:
                raise InputError(f"{where}: edge before any State:")
            i = _parse_label(m.group(1), k, where)
            target = int(m.group(2))
            if target >= n:
                raise InputError(f"{where}: target {target} out of range")
            edges.append((current, alphabet[i], target))
            continue
        raise InputError(f"{where}: unsupported body line {ln!r}")
    return Automaton.from_edges(alphabet, n, starts[0], edges, finals, mode)


def _int(text: str, what: str) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise InputError(f"HOA: {what} must be an integer, got {text!r}") from None
    if value < 0:
        raise InputError(f"HOA: {what} must be nonnegative")
    return value


def load_hoa(path) -> Automaton:
    with open(path) as fh:
        return from_hoa(fh.read())


def dump_hoa(a: Automaton, path, name: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(to_hoa(a, name))


def to_dot(a: Automaton, name: str = "A") -> str:
    """One node per state; finals are double circles, the initial state is bold."""
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for q in a.states:
        attrs = [f'label="{q}"', "shape=doublecircle" if q in a.finals else "shape=circle"]
        if q == a.initial:
            attrs.append("style=bold")
        lines.append(f"  {q} [{', '.join(attrs)}];")
    grouped: dict[tuple[int, int], list[str]] = {}
    for q, sym, t in a.edges():
        grouped.setdefault((q, t), []).append(sym)
    for (q, t), syms in grouped.items():
        lines.append(f"  {q} -> {t} [label={_quote(','.join(syms))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
