"""Congruences of lattices, i-lattices and BZ-lattices.

Every congruence is stored as a :class:`Partition`.  Principal congruences are
closed by a worklist over glued pairs; whole congruence lattices are obtained
as join-closures of the principal congruences of covering pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .involution import (ANTIORTHOLATTICE, BZLattice, InvolutionLattice, classify,
                         is_i_sublattice, sub_i_lattice)
from .lattice import FiniteLattice, LatticeError, from_up_masks
from .partition import Partition, join_all

LATTICE = "lattice"
I_KIND = "i-lattice"
BZ_KIND = "bz"
CON0 = "con0"
CON01 = "con01"

Structure = Union[FiniteLattice, InvolutionLattice, BZLattice]


class CharacterizationMismatch(AssertionError):
    """Two independent computations of the same family disagree."""


class NotACongruence(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"partition is not compatible with the operations at {witness}")


class NoExtension(LookupError):
    pass


@dataclass(frozen=True)
class CongruenceFamily:
    members: tuple
    kind: str
    n: int

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, p):
        return Partition(p) in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_cache_set")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_cache_set", s)
        return s

    @property
    def bottom(self) -> Partition:
        """The finest member."""
        return max(self.members, key=Partition.num_classes)

    @property
    def top(self) -> Partition:
        return min(self.members, key=Partition.num_classes)

    def order(self) -> list[tuple[int, int]]:
        """Refinement pairs (i, j), i != j, with members[i] finer than members[j]."""
        ms = self.members
        return [(i, j) for i in range(len(ms)) for j in range(len(ms))
                if i != j and ms[i].refines(ms[j])]

    def as_lattice(self) -> FiniteLattice:
        """The family as an abstract lattice under refinement."""
        ms = self.members
        up = [sum(1 << j for j in range(len(ms)) if ms[i].refines(ms[j]))
              for i in range(len(ms))]
        return from_up_masks(up)

    def atoms(self) -> list[Partition]:
        return atoms(self)


def _family(parts: Iterable[Partition], kind: str, n: int) -> CongruenceFamily:
    return CongruenceFamily(tuple(sorted(set(parts), key=Partition.sort_key)), kind, n)


def _lattice_of(S: Structure) -> FiniteLattice:
    return S if isinstance(S, FiniteLattice) else S.lattice


def _maps_of(S: Structure) -> list[tuple[int, ...]]:
    if isinstance(S, BZLattice):
        return [S.invol, S.brouwer]
    if isinstance(S, InvolutionLattice):
        return [S.invol]
    return []


# -- partition algebra -------------------------------------------------------

def partition_meet(p: Partition, q: Partition) -> Partition:
    return Partition(p).meet(Partition(q))


def partition_join_in_eq(p: Partition, q: Partition) -> Partition:
    return Partition(p).join(Partition(q))


def prime_of(theta: Sequence[int], invol: Sequence[int]) -> Partition:
    """The image {(a', b') : (a, b) in theta}."""
    return Partition(theta).permuted(invol)


# -- compatibility -----------------------------------------------------------

def compatibility_witness(L: FiniteLattice, theta: Sequence[int],
                          maps: Sequence[Sequence[int]] = ()) -> Optional[tuple]:
    """A pair (x, y, z-or-map) breaking compatibility, or None."""
    t = theta
    m, j = L.meet, L.join
    for x in range(L.n):
        for y in range(x + 1, L.n):
            if t[x] != t[y]:
                continue
            for z in range(L.n):
                if t[j[x][z]] != t[j[y][z]] or t[m[x][z]] != t[m[y][z]]:
                    return (x, y, z)
            for k, f in enumerate(maps):
                if t[f[x]] != t[f[y]]:
                    return (x, y, f"map{k}")
    return None


def is_compatible(S: Structure, theta: Sequence[int]) -> bool:
    return compatibility_witness(_lattice_of(S), theta, _maps_of(S)) is None


# -- principal congruences -----------------------------------------------------

def _close(L: FiniteLattice, pairs: Iterable[tuple[int, int]],
           maps: Sequence[Sequence[int]] = ()) -> Partition:
    n = L.n
    parent = list(range(n))
    meet, join = L.meet, L.join

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = list(pairs)
    while work:
        x, y = work.pop()
        a, b = find(x), find(y)
        if a == b:
            continue
        if a < b:
            parent[b] = a
        else:
            parent[a] = b
        # translations of a merging pair are enough: their transitive
        # closure contains the translations of every consequence
        jx, jy, mx, my = join[x], join[y], meet[x], meet[y]
        for z in range(n):
            if jx[z] != jy[z]:
                work.append((jx[z], jy[z]))
            if mx[z] != my[z]:
                work.append((mx[z], my[z]))
        for f in maps:
            work.append((f[x], f[y]))
    return Partition(find(x) for x in range(n))


def principal_congruence(L: FiniteLattice, a: int, b: int) -> Partition:
    """Smallest lattice congruence gluing a and b."""
    return _close(L, [(a, b)])


def congruence_generated(S: Structure, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Smallest congruence of S (all of its operations) containing ``pairs``."""
    return _close(_lattice_of(S), pairs, _maps_of(S))


def i_principal_congruence(A: InvolutionLattice, a: int, b: int) -> Partition:
    """Cg(a, b) joined with Cg(a', b'), checked to be a congruence of A."""
    L, p = A.lattice, A.invol
    theta = principal_congruence(L, a, b).join(principal_congruence(L, p[a], p[b]))
    w = compatibility_witness(L, theta, [p])
    if w is not None:
        raise CharacterizationMismatch(f"Cg(a,b) v Cg(a',b') not an i-congruence at {w}")
    if theta != congruence_generated(A, [(a, b)]):
        raise CharacterizationMismatch("i-principal congruence differs from direct closure")
    return theta


def i_congruence_of(A: InvolutionLattice, theta: Sequence[int]) -> Partition:
    """Smallest i-congruence above the lattice congruence theta: theta v theta'."""
    theta = Partition(theta)
    return theta.join(prime_of(theta, A.invol))


# -- whole families ------------------------------------------------------------

def all_congruences(L: FiniteLattice) -> CongruenceFamily:
    n = L.n
    gens = sorted(set(principal_congruence(L, a, b) for a, b in L.covers))
    start = Partition.discrete(n)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                if g.refines(m):
                    continue
                j = join_all(n, (m, g))
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return _family(seen, LATTICE, n)


def i_congruences(A: InvolutionLattice, con: Optional[CongruenceFamily] = None) -> CongruenceFamily:
    """Con_I(A) as the self-dual members of Con(A), cross-checked two more ways."""
    L, p = A.lattice, A.invol
    if con is None:
        con = all_congruences(L)
    fixed = set()
    joins = set()
    meets = set()
    for t in con:
        tp = prime_of(t, p)
        if tp == t:
            fixed.add(t)
        joins.add(t.join(tp))
        meets.add(t.meet(tp))
    if fixed != joins or fixed != meets:
        raise CharacterizationMismatch("Con_I computed three ways does not agree")
    return _family(fixed, I_KIND, L.n)


def bz_congruences(B: BZLattice, con_i: Optional[CongruenceFamily] = None) -> CongruenceFamily:
    L = B.lattice
    if con_i is None:
        con_i = i_congruences(B.base)
    t = B.brouwer
    members = [th for th in con_i
               if all(th[t[x]] == th[t[th[x]]] for x in range(L.n))]
    fam = _family(members, BZ_KIND, L.n)
    if ANTIORTHOLATTICE in classify(B):
        expected = set(_filter_singleton(con_i, L, both=True)) | {Partition.total(L.n)}
        if set(fam.members) != expected:
            raise CharacterizationMismatch("Con_BZ differs from Con_BI01 plus the total relation")
    return fam


def _filter_singleton(fam, L, both):
    for th in fam:
        if th.block_of(L.bottom) != [L.bottom]:
            continue
        if both and th.block_of(L.top) != [L.top]:
            continue
        yield th


def congruences(S: Structure, kind: Optional[str] = None) -> CongruenceFamily:
    """Dispatch on ``kind`` (lattice, i-lattice, bz); default from the type of S."""
    if kind is None:
        kind = BZ_KIND if isinstance(S, BZLattice) else I_KIND if isinstance(S, InvolutionLattice) else LATTICE
    if kind == LATTICE:
        return all_congruences(_lattice_of(S))
    if kind == I_KIND:
        if isinstance(S, BZLattice):
            S = S.base
        if not isinstance(S, InvolutionLattice):
            raise TypeError("i-lattice congruences need an involution")
        return i_congruences(S)
    if kind == BZ_KIND:
        if not isinstance(S, BZLattice):
            raise TypeError("BZ congruences need a Brouwer complement")
        return bz_congruences(S)
    raise ValueError(f"unknown congruence kind {kind!r}")


def con0(S: Structure, base: Optional[str] = None) -> CongruenceFamily:
    """Members of the chosen family whose class of 0 is a singleton."""
    L = _lattice_of(S)
    fam = congruences(S, base)
    return _family(_filter_singleton(fam, L, both=False), CON0, L.n)


def con01(S: Structure, base: Optional[str] = None) -> CongruenceFamily:
    """Members whose classes of 0 and of 1 are both singletons."""
    L = _lattice_of(S)
    fam = congruences(S, base)
    return _family(_filter_singleton(fam, L, both=True), CON01, L.n)


def atoms(family: CongruenceFamily) -> list[Partition]:
    """Minimal members other than the least one."""
    if len(family) < 2:
        return []
    bot = family.bottom
    rest = [m for m in family if m != bot]
    return [m for m in rest
            if not any(o != m and o.refines(m) for o in rest)]


def is_subdirectly_irreducible(family: CongruenceFamily) -> bool:
    return len(atoms(family)) == 1


def quotient(S: Structure, theta: Sequence[int]):
    """The quotient structure S/theta, classes indexed by their least element."""
    L = _lattice_of(S)
    theta = Partition(theta)
    if len(theta) != L.n:
        raise NotACongruence(("size", len(theta)))
    w = compatibility_witness(L, theta, _maps_of(S))
    if w is not None:
        raise NotACongruence(w)
    reps = [x for x in range(L.n) if theta[x] == x]
    idx = {r: i for i, r in enumerate(reps)}
    up = []
    for r in reps:
        mask = 0
        for s in reps:
            if theta[L.join[r][s]] == s:
                mask |= 1 << idx[s]
        up.append(mask)
    Q = from_up_masks(up, [L.labels[r] for r in reps])
    if isinstance(S, FiniteLattice):
        return Q

    def induced(f):
        return tuple(idx[theta[f[r]]] for r in reps)

    QA = InvolutionLattice(Q, induced(S.invol))
    if isinstance(S, BZLattice):
        return BZLattice(QA, induced(S.brouwer))
    return QA


def cep_extend(A: InvolutionLattice, subset: Sequence[int], sigma: Sequence[int],
               con_i: Optional[CongruenceFamily] = None) -> Partition:
    """A congruence of A whose trace on ``subset`` is ``sigma``.

    ``subset`` must be closed under meet, join and the involution; ``sigma`` is
    a partition of it indexed by position in ``sorted(subset)``.
    """
    elems = sorted(subset)
    if not is_i_sublattice(A, elems):
        raise LatticeError(f"{elems} is not an i-sublattice")
    sigma = Partition(sigma)
    sub = sub_i_lattice(A, elems)
    if compatibility_witness(sub.lattice, sigma, [sub.invol]) is not None:
        raise NotACongruence(("sigma",))
    if con_i is None:
        con_i = i_congruences(A)
    for th in con_i:
        if th.restrict(elems) == sigma:
            return th
    raise NoExtension(f"no congruence of the whole restricts to {sigma!r}")


def narrow_quotient_size(A: InvolutionLattice, a: int, b: int) -> int:
    return i_principal_congruence(A, a, b).num_classes()

