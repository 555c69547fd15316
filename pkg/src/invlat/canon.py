"""Canonical labeling of finite lattices, optionally carrying unary operations.

Colour refinement over the cover graph, individualization of the first
non-singleton cell, and the lexicographically least leaf encoding.  Subtrees
that are images of explored ones under automorphisms found along the way are
skipped, so the result is exact for any input.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .lattice import FiniteLattice, bits, popcount


class Labeling:
    """Result of canonicalizing one structure.

    ``position[x]`` is the canonical label of element ``x`` and ``element[i]``
    the element carrying canonical label ``i``.
    """

    __slots__ = ("n", "encoding", "position", "element", "automorphisms", "n_maps")

    def __init__(self, n, encoding, position, automorphisms, n_maps):
        self.n = n
        self.encoding = encoding
        self.position = tuple(position)
        element = [0] * n
        for x, p in enumerate(position):
            element[p] = x
        self.element = tuple(element)
        self.automorphisms = automorphisms
        self.n_maps = n_maps

    def to_bytes(self) -> bytes:
        n = self.n
        out = bytearray([n, self.n_maps])
        for row in self.encoding[:n]:
            out += row.to_bytes(8, "big")
        out += bytes(self.encoding[n:])
        return bytes(out)


def _refine(colors, ucov, lcov, maps, premaps):
    n = len(colors)
    k = len(set(colors))
    while True:
        sigs = []
        for x in range(n):
            s = (colors[x],
                 tuple(sorted([colors[u] for u in ucov[x]])),
                 tuple(sorted([colors[d] for d in lcov[x]])))
            for m in maps:
                s += (colors[m[x]],)
            for pm in premaps:
                s += (tuple(sorted([colors[y] for y in pm[x]])),)
            sigs.append(s)
        uniq = sorted(set(sigs))
        rank = {s: i for i, s in enumerate(uniq)}
        colors = [rank[s] for s in sigs]
        if len(uniq) == k:
            return colors, k
        k = len(uniq)


class _Search:
    def __init__(self, L: FiniteLattice, maps: Sequence[Sequence[int]]):
        n = L.n
        self.n = n
        self.up = L.up
        self.ucov = L.upper_covers
        self.lcov = L.lower_covers
        self.maps = [tuple(m) for m in maps]
        self.premaps = []
        for m in self.maps:
            if len(set(m)) != n:
                pre = [[] for _ in range(n)]
                for x in range(n):
                    pre[m[x]].append(x)
                self.premaps.append(pre)
        self.first = None
        self.best = None
        self.autos: list[tuple[int, ...]] = []

    def run(self) -> Labeling:
        n = self.n
        init = []
        for x in range(n):
            key = (n - popcount(self.up[x]), popcount(self.up[x]),
                   len(self.ucov[x]), len(self.lcov[x]),
                   tuple(m[x] == x for m in self.maps))
            init.append(key)
        # order by down-set size first so canonical labels form a linear extension
        downsz = [0] * n
        for x in range(n):
            for y in bits(self.up[x]):
                downsz[y] += 1
        init = [(downsz[x],) + init[x] for x in range(n)]
        uniq = sorted(set(init))
        rank = {s: i for i, s in enumerate(uniq)}
        self._node([rank[s] for s in init], [])
        enc, pos, _ = self.best
        return Labeling(n, enc, pos, self.autos, len(self.maps))

    def _node(self, colors, path) -> Optional[int]:
        colors, k = _refine(colors, self.ucov, self.lcov, self.maps, self.premaps)
        n = self.n
        if k == n:
            return self._leaf(colors, path)
        counts = [0] * k
        for c in colors:
            counts[c] += 1
        target = next(c for c in range(k) if counts[c] > 1)
        cell = [x for x in range(n) if colors[x] == target]
        depth = len(path)
        explored: list[int] = []
        for v in cell:
            if explored and self._in_explored_orbit(v, explored, path):
                continue
            explored.append(v)
            child = [2 * c + (1 if c == target and x != v else 0)
                     for x, c in enumerate(colors)]
            back = self._node(child, path + [v])
            if back is not None and back < depth:
                return back
        return None

    def _encode(self, pos):
        n = self.n
        element = [0] * n
        for x in range(n):
            element[pos[x]] = x
        rows = []
        for i in range(n):
            r = 0
            for y in bits(self.up[element[i]]):
                r |= 1 << pos[y]
            rows.append(r)
        for m in self.maps:
            rows.extend(pos[m[element[i]]] for i in range(n))
        return tuple(rows), element

    def _leaf(self, pos, path) -> Optional[int]:
        enc, element = self._encode(pos)
        if self.first is None:
            self.first = self.best = (enc, pos, list(path))
            return None
        for ref in (self.first, self.best):
            if enc == ref[0]:
                ref_pos = ref[1]
                self.autos.append(tuple(element[ref_pos[x]] for x in range(self.n)))
                ref_path = ref[2]
                d = 0
                while d < len(path) and d < len(ref_path) and path[d] == ref_path[d]:
                    d += 1
                return d
        if enc < self.best[0]:
            self.best = (enc, pos, list(path))
        return None

    def _in_explored_orbit(self, v, explored, path) -> bool:
        gens = [g for g in self.autos if all(g[p] == p for p in path)]
        if not gens:
            return False
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for x in range(self.n):
                a, b = find(x), find(g[x])
                if a != b:
                    parent[a] = b
        rv = find(v)
        return any(find(e) == rv for e in explored)


def canonical_labeling(L: FiniteLattice, maps: Sequence[Sequence[int]] = ()) -> Labeling:
    """Canonical labeling of ``L`` together with the unary operations ``maps``."""
    return _Search(L, maps).run()


def canonical_form(L: FiniteLattice, maps: Sequence[Sequence[int]] = ()) -> bytes:
    """Bytes equal for two inputs iff they are isomorphic (maps included)."""
    return canonical_labeling(L, maps).to_bytes()


def isomorphism(L: FiniteLattice, M: FiniteLattice,
                maps_l: Sequence[Sequence[int]] = (),
                maps_m: Sequence[Sequence[int]] = ()) -> Optional[tuple[int, ...]]:
    if L.n != M.n or len(maps_l) != len(maps_m):
        return None
    a = canonical_labeling(L, maps_l)
    b = canonical_labeling(M, maps_m)
    if a.encoding != b.encoding:
        return None
    return tuple(b.element[a.position[x]] for x in range(L.n))


def canonical_lattice(L: FiniteLattice, maps: Sequence[Sequence[int]] = ()):
    """The canonically relabelled copy of ``L`` and of ``maps``."""
    lab = canonical_labeling(L, maps)
    pos = lab.position
    M = L.relabel(pos, labels=[str(i) for i in range(L.n)])
    new_maps = []
    for m in maps:
        nm = [0] * L.n
        for x in range(L.n):
            nm[pos[x]] = pos[m[x]]
        new_maps.append(tuple(nm))
    return M, new_maps, lab
