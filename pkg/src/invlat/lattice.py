"""Finite lattices on the element set 0..n-1.

Orders are stored as bitmasks: ``up[x]`` has bit ``y`` set iff ``x <= y`` and
``down[x]`` has bit ``y`` set iff ``y <= x``.  Meet and join tables are derived
once when the lattice is validated.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

MAX_ELEMENTS = 64


class LatticeError(ValueError):
    pass


class NotAPartialOrder(LatticeError):
    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"not a partial order: {axiom} fails at {witness}")


class NotALattice(LatticeError):
    def __init__(self, pair: tuple[int, int], missing: str):
        self.pair = pair
        self.missing = missing
        super().__init__(f"not a lattice: elements {pair} have no unique {missing}")


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FiniteLattice:
    """An immutable finite lattice.  Build one with :func:`validate`."""

    __slots__ = ("n", "up", "down", "meet", "join", "covers", "upper_covers",
                 "lower_covers", "labels", "bottom", "top", "_hash")

    def __init__(self, n, up, down, meet, join, labels=None):
        self.n = n
        self.up = tuple(up)
        self.down = tuple(down)
        self.meet = meet
        self.join = join
        ucov = []
        for x in range(n):
            strict = self.up[x] & ~(1 << x)
            ucov.append(tuple(y for y in bits(strict)
                              if self.up[x] & self.down[y] == (1 << x) | (1 << y)))
        self.upper_covers = tuple(ucov)
        lcov = [[] for _ in range(n)]
        for x in range(n):
            for y in ucov[x]:
                lcov[y].append(x)
        self.lower_covers = tuple(tuple(c) for c in lcov)
        self.covers = tuple((x, y) for x in range(n) for y in ucov[x])
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.bottom = _extreme(self.up, n)
        self.top = _extreme(self.down, n)
        self._hash = None

    # -- order queries --------------------------------------------------

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1) or bool(self.up[y] >> x & 1)

    def covered_by(self, x: int, y: int) -> bool:
        return y in self.upper_covers[x]

    def leq_matrix(self) -> list[list[bool]]:
        return [[self.leq(x, y) for y in range(self.n)] for x in range(self.n)]

    def interval(self, x: int, y: int) -> list[int]:
        return list(bits(self.up[x] & self.down[y]))

    def is_convex(self, subset: Iterable[int]) -> bool:
        s = 0
        for x in subset:
            s |= 1 << x
        for x in bits(s):
            for y in bits(s & self.up[x]):
                if self.up[x] & self.down[y] & ~s:
                    return False
        return True

    def label_of(self, x: int) -> str:
        return self.labels[x]

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def with_labels(self, labels: Sequence[str]) -> "FiniteLattice":
        return FiniteLattice(self.n, self.up, self.down, self.meet, self.join, labels)

    def relabel(self, perm: Sequence[int], labels=None) -> "FiniteLattice":
        """Return the isomorphic copy in which element ``x`` becomes ``perm[x]``."""
        n = self.n
        up = [0] * n
        for x in range(n):
            up[perm[x]] = sum(1 << perm[y] for y in bits(self.up[x]))
        if labels is None:
            labels = [None] * n
            for x in range(n):
                labels[perm[x]] = self.labels[x]
        return from_up_masks(up, labels)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, FiniteLattice) and self.up == other.up

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.up)
        return self._hash

    def __repr__(self):
        return f"FiniteLattice(n={self.n}, covers={list(self.covers)})"


def _extreme(masks, n):
    full = (1 << n) - 1
    for x in range(n):
        if masks[x] == full:
            return x
    raise AssertionError("bounded lattice expected")


def _derive_tables(n, up, down):
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for x in range(n):
        meet[x][x] = join[x][x] = x
        for y in range(x + 1, n):
            lower = down[x] & down[y]
            m = next((z for z in bits(lower) if down[z] == lower), None)
            if m is None:
                raise NotALattice((x, y), "meet")
            upper = up[x] & up[y]
            j = next((z for z in bits(upper) if up[z] == upper), None)
            if j is None:
                raise NotALattice((x, y), "join")
            meet[x][y] = meet[y][x] = m
            join[x][y] = join[y][x] = j
    return tuple(map(tuple, meet)), tuple(map(tuple, join))


def from_up_masks(up: Sequence[int], labels=None) -> FiniteLattice:
    """Build a lattice from already-checked order bitmasks (no axiom checks)."""
    n = len(up)
    down = [0] * n
    for x in range(n):
        for y in bits(up[x]):
            down[y] |= 1 << x
    meet, join = _derive_tables(n, up, down)
    return FiniteLattice(n, up, down, meet, join, labels)


def validate(matrix: Sequence[Sequence[bool]], labels=None) -> FiniteLattice:
    """Check that ``matrix`` is the order relation of a lattice and build it.

    Raises NotAPartialOrder naming the failing axiom and a witness, or
    NotALattice with a pair lacking a meet or join.
    """
    n = len(matrix)
    if n == 0:
        raise LatticeError("the empty poset is not admitted")
    if n > MAX_ELEMENTS:
        raise LatticeError(f"at most {MAX_ELEMENTS} elements are supported, got {n}")
    for row in matrix:
        if len(row) != n:
            raise LatticeError("order matrix must be square")
    if labels is not None and len(labels) != n:
        raise LatticeError("one label per element required")
    up = [sum(1 << y for y in range(n) if matrix[x][y]) for x in range(n)]
    for x in range(n):
        if not up[x] >> x & 1:
            raise NotAPartialOrder("reflexivity", (x,))
    for x in range(n):
        for y in bits(up[x]):
            if y != x and up[y] >> x & 1:
                raise NotAPartialOrder("antisymmetry", (x, y))
    for x in range(n):
        for y in bits(up[x]):
            extra = up[y] & ~up[x]
            if extra:
                z = next(bits(extra))
                raise NotAPartialOrder("transitivity", (x, y, z))
    return from_up_masks(up, labels)


def from_covers(n: int, covers: Iterable[tuple[int, int]], labels=None) -> FiniteLattice:
    """Build a lattice from a cover (Hasse) relation given as pairs (lower, upper)."""
    up = [1 << x for x in range(n)]
    succ = [[] for _ in range(n)]
    for a, b in covers:
        succ[a].append(b)
    # reflexive-transitive closure, one DFS per element
    for x in range(n):
        seen = 1 << x
        stack = [x]
        while stack:
            y = stack.pop()
            for z in succ[y]:
                if not seen >> z & 1:
                    seen |= 1 << z
                    stack.append(z)
        up[x] = seen
    matrix = [[bool(up[x] >> y & 1) for y in range(n)] for x in range(n)]
    return validate(matrix, labels)


def irreducibles(L: FiniteLattice) -> tuple[frozenset, frozenset]:
    """Meet- and join-irreducible elements (at most one upper / lower cover)."""
    mi = frozenset(x for x in range(L.n) if len(L.upper_covers[x]) <= 1)
    ji = frozenset(x for x in range(L.n) if len(L.lower_covers[x]) <= 1)
    return mi, ji


def narrows(L: FiniteLattice) -> list[tuple[int, int]]:
    """Prime intervals [a, b] with a meet-irreducible and b join-irreducible."""
    return [(a, b) for a, b in L.covers
            if len(L.upper_covers[a]) == 1 and len(L.lower_covers[b]) == 1]


def dual(L: FiniteLattice) -> FiniteLattice:
    return FiniteLattice(L.n, L.down, L.up, L.join, L.meet, L.labels)


def is_modular(L: FiniteLattice) -> bool:
    m, j = L.meet, L.join
    for x in range(L.n):
        for z in bits(L.up[x]):
            for y in range(L.n):
                if j[x][m[y][z]] != m[j[x][y]][z]:
                    return False
    return True


def is_distributive(L: FiniteLattice) -> bool:
    m, j = L.meet, L.join
    r = range(L.n)
    return all(m[x][j[y][z]] == j[m[x][y]][m[x][z]] for x in r for y in r for z in r)


def linear_extension(L: FiniteLattice) -> list[int]:
    """Elements sorted by down-set size, ties by index; bottom first, top last."""
    return sorted(range(L.n), key=lambda x: (popcount(L.down[x]), x))


def height_levels(L: FiniteLattice) -> list[list[int]]:
    """Elements grouped by length of the longest chain from the bottom."""
    h = [0] * L.n
    for x in linear_extension(L):
        for y in L.upper_covers[x]:
            h[y] = max(h[y], h[x] + 1)
    levels: list[list[int]] = [[] for _ in range(max(h) + 1)]
    for x in range(L.n):
        levels[h[x]].append(x)
    return levels


def is_isomorphic(L: FiniteLattice, M: FiniteLattice) -> Optional[tuple[int, ...]]:
    """An order isomorphism L -> M as a tuple, or None."""
    from .canon import isomorphism
    return isomorphism(L, M)


def canonical_form(L: FiniteLattice) -> bytes:
    from .canon import canonical_form as _cf
    return _cf(L)
