"""JSON lattice documents, congruence formatting and Graphviz export.

A document looks like::

    {"format_version": 1,
     "elements": ["0", "a", "b", "1"],
     "covers": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
     "involution": {"0": "1", "1": "0", "a": "b", "b": "a"},
     "brouwer": "trivial"}

``involution`` and ``brouwer`` are optional; ``brouwer`` is either a label map
or the string ``"trivial"``.
"""

from __future__ import annotations

import json
from typing import Sequence

from .involution import (BZLattice, InvolutionLattice, attach_brouwer, attach_involution,
                         trivial_brouwer, trivial_brouwer_map)
from .lattice import FiniteLattice, LatticeError, from_covers, height_levels

FORMAT_VERSION = 1


class ParseError(LatticeError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def _label_map(obj, where, index, n):
    if not isinstance(obj, dict):
        raise ParseError(where, "expected an object mapping labels to labels")
    perm = [None] * n
    for k, v in obj.items():
        if k not in index:
            raise ParseError(f"{where}.{k}", f"unknown label {k!r}")
        if not isinstance(v, str) or v not in index:
            raise ParseError(f"{where}.{k}", f"unknown label {v!r}")
        perm[index[k]] = index[v]
    missing = [i for i, p in enumerate(perm) if p is None]
    if missing:
        raise ParseError(where, f"no image given for {missing[0]}")
    return perm


def _find_cycle(n, covers):
    succ = [[] for _ in range(n)]
    for a, b in covers:
        succ[a].append(b)
    state = [0] * n
    for s in range(n):
        if state[s]:
            continue
        stack = [(s, iter(succ[s]))]
        state[s] = 1
        while stack:
            x, it = stack[-1]
            for y in it:
                if state[y] == 1:
                    return y
                if state[y] == 0:
                    state[y] = 1
                    stack.append((y, iter(succ[y])))
                    break
            else:
                state[x] = 2
                stack.pop()
    return None


def from_document(doc) -> FiniteLattice | InvolutionLattice | BZLattice:
    if not isinstance(doc, dict):
        raise ParseError("$", "expected a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError("$.format_version", f"unsupported version {version!r}")
    elements = doc.get("elements")
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise ParseError("$.elements", "expected a list of string labels")
    if not elements:
        raise ParseError("$.elements", "at least one element is required")
    if len(set(elements)) != len(elements):
        dup = next(e for e in elements if elements.count(e) > 1)
        raise ParseError("$.elements", f"duplicate label {dup!r}")
    index = {e: i for i, e in enumerate(elements)}
    covers_raw = doc.get("covers", [])
    if not isinstance(covers_raw, list):
        raise ParseError("$.covers", "expected a list of label pairs")
    covers = []
    for i, pair in enumerate(covers_raw):
        where = f"$.covers[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(where, "expected a pair [lower, upper]")
        for lab in pair:
            if lab not in index:
                raise ParseError(where, f"unknown label {lab!r}")
        if pair[0] == pair[1]:
            raise ParseError(where, "an element cannot cover itself")
        covers.append((index[pair[0]], index[pair[1]]))
    loop = _find_cycle(len(elements), covers)
    if loop is not None:
        raise ParseError("$.covers", f"cover relation has a cycle through {elements[loop]!r}")
    L = from_covers(len(elements), covers, elements)
    if "involution" not in doc or doc["involution"] is None:
        if doc.get("brouwer") is not None:
            raise ParseError("$.brouwer", "a Brouwer complement needs an involution")
        return L
    A = attach_involution(L, _label_map(doc["involution"], "$.involution", index, L.n))
    br = doc.get("brouwer")
    if br is None:
        return A
    if br == "trivial":
        return trivial_brouwer(A)
    return attach_brouwer(A, _label_map(br, "$.brouwer", index, L.n))


def parse(text: str):
    """Parse and validate a lattice document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return from_document(doc)


def to_document(S) -> dict:
    L = S if isinstance(S, FiniteLattice) else S.lattice
    labs = L.labels
    doc = {
        "format_version": FORMAT_VERSION,
        "elements": list(labs),
        "covers": [[labs[a], labs[b]] for a, b in L.covers],
    }
    if isinstance(S, (InvolutionLattice, BZLattice)):
        doc["involution"] = {labs[x]: labs[S.invol[x]] for x in range(L.n)}
    if isinstance(S, BZLattice):
        if S.brouwer == trivial_brouwer_map(L):
            doc["brouwer"] = "trivial"
        else:
            doc["brouwer"] = {labs[x]: labs[S.brouwer[x]] for x in range(L.n)}
    return doc


def emit(S) -> str:
    return json.dumps(to_document(S), indent=2) + "\n"


def format_partition(L: FiniteLattice, theta: Sequence[int]) -> str:
    """Blocks ordered by least element, labels ordered by element index."""
    blocks: dict[int, list[int]] = {}
    for x, r in enumerate(theta):
        blocks.setdefault(r, []).append(x)
    parts = [",".join(L.labels[x] for x in sorted(b)) for _, b in sorted(blocks.items())]
    return "[" + ",".join("[" + p + "]" for p in parts) + "]"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(S, show_involution: bool = False) -> str:
    """Hasse diagram as a DOT digraph, drawn bottom-up."""
    L = S if isinstance(S, FiniteLattice) else S.lattice
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=circle];"]
    for x in range(L.n):
        lines.append(f"  n{x} [label={_quote(L.labels[x])}];")
    for level in height_levels(L):
        lines.append("  { rank=same; " + " ".join(f"n{x};" for x in level) + " }")
    for a, b in L.covers:
        lines.append(f"  n{a} -> n{b};")
    if show_involution and isinstance(S, (InvolutionLattice, BZLattice)):
        for x in range(L.n):
            y = S.invol[x]
            if x < y:
                lines.append(f"  n{x} -> n{y} [style=dashed, dir=none, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
