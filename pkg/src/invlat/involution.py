"""Lattices with involution, pseudo-Kleene algebras and BZ-lattices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .lattice import FiniteLattice, LatticeError, bits, from_up_masks, is_distributive, popcount

I_LATTICE = "i-lattice"
BOUNDED_I = "bounded-i"
PSEUDO_KLEENE = "pseudo-Kleene"
DE_MORGAN = "De Morgan"
KLEENE = "Kleene"
PARAORTHOMODULAR = "paraorthomodular"
BZ = "BZ"
ANTIORTHOLATTICE = "antiortholattice"
ORTHOMODULAR = "orthomodular"


class StructureError(LatticeError):
    pass


class NotInvolutive(StructureError):
    def __init__(self, x: int):
        self.witness = x
        super().__init__(f"map is not an involution at element {x}")


class NotAntitone(StructureError):
    def __init__(self, x: int, y: int):
        self.witness = (x, y)
        super().__init__(f"map is not order-reversing: {x} <= {y} but images are not reversed")


class NotPseudoKleene(StructureError):
    def __init__(self, a: int, b: int):
        self.witness = (a, b)
        super().__init__(f"a ^ a' <= b v b' fails for a={a}, b={b}")


class BrouwerAxiomFails(StructureError):
    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"Brouwer complement axiom '{axiom}' fails at {witness}")


@dataclass(frozen=True)
class InvolutionLattice:
    lattice: FiniteLattice
    invol: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def labels(self):
        return self.lattice.labels

    def prime(self, x: int) -> int:
        return self.invol[x]


@dataclass(frozen=True)
class BZLattice:
    base: InvolutionLattice
    brouwer: tuple[int, ...]

    @property
    def lattice(self) -> FiniteLattice:
        return self.base.lattice

    @property
    def invol(self) -> tuple[int, ...]:
        return self.base.invol

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def labels(self):
        return self.base.lattice.labels


@dataclass(frozen=True)
class Cones:
    N: frozenset
    Z: frozenset
    P: frozenset
    incomparable: frozenset

    @property
    def NZ(self) -> frozenset:
        return self.N | self.Z

    @property
    def PZ(self) -> frozenset:
        return self.P | self.Z


def attach_involution(L: FiniteLattice, perm: Sequence[int]) -> InvolutionLattice:
    n = L.n
    perm = tuple(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise StructureError("involution must be a permutation of the elements")
    for x in range(n):
        if perm[perm[x]] != x:
            raise NotInvolutive(x)
    for x in range(n):
        for y in bits(L.up[x]):
            if not L.leq(perm[y], perm[x]):
                raise NotAntitone(x, y)
    return InvolutionLattice(L, perm)


def involutions_of(L: FiniteLattice) -> list[tuple[int, ...]]:
    """All order-reversing permutations of L that are their own inverse."""
    n = L.n
    up, down = L.up, L.down
    upsz = [popcount(m) for m in up]
    downsz = [popcount(m) for m in down]
    ucnt = [len(c) for c in L.upper_covers]
    lcnt = [len(c) for c in L.lower_covers]
    cand = [[y for y in range(n) if upsz[x] == downsz[y] and downsz[x] == upsz[y]
             and ucnt[x] == lcnt[y] and lcnt[x] == ucnt[y]] for x in range(n)]
    sigma = [-1] * n
    out = []

    def consistent(x, y):
        # sigma(x) = y together with sigma(y) = x, against assigned elements;
        # the pair itself is always consistent
        for a, b in ((x, y), (y, x)):
            for z in range(n):
                s = sigma[z]
                if s < 0:
                    continue
                if up[a] >> z & 1 and not up[s] >> b & 1:
                    return False
                if up[z] >> a & 1 and not up[b] >> s & 1:
                    return False
        return True

    def rec():
        try:
            x = sigma.index(-1)
        except ValueError:
            out.append(tuple(sigma))
            return
        for y in cand[x]:
            if sigma[y] != -1:
                continue
            if y != x and x not in cand[y]:
                continue
            if not consistent(x, y):
                continue
            sigma[x] = y
            sigma[y] = x
            rec()
            sigma[x] = sigma[y] = -1

    rec()
    # final check keeps the search honest
    good = []
    for s in out:
        try:
            attach_involution(L, s)
        except StructureError:
            continue
        good.append(s)
    return sorted(good)


def is_pseudo_kleene(A: InvolutionLattice) -> bool:
    return _kleene_witness(A) is None


def _kleene_witness(A: InvolutionLattice) -> Optional[tuple[int, int]]:
    L, p = A.lattice, A.invol
    lows = {L.meet[a][p[a]]: a for a in range(A.n)}
    highs = {L.join[b][p[b]]: b for b in range(A.n)}
    for lo, a in lows.items():
        for hi, b in highs.items():
            if not L.leq(lo, hi):
                return (a, b)
    return None


def is_paraorthomodular(A: InvolutionLattice) -> bool:
    L, p = A.lattice, A.invol
    for a in range(A.n):
        for b in bits(L.up[a]):
            if b != a and L.meet[p[a]][b] == L.bottom:
                return False
    return True


def is_ortholattice(A: InvolutionLattice) -> bool:
    L, p = A.lattice, A.invol
    return all(L.meet[a][p[a]] == L.bottom for a in range(A.n))


def is_orthomodular_lattice(A: InvolutionLattice) -> bool:
    """Ortholattice satisfying a <= b  =>  b = a v (b ^ a')."""
    if not is_ortholattice(A):
        return False
    L, p = A.lattice, A.invol
    return all(L.join[a][L.meet[b][p[a]]] == b for a in range(A.n) for b in bits(L.up[a]))


def sharp_elements(A: InvolutionLattice) -> frozenset:
    """The elements a with a ^ a' = 0."""
    L, p = A.lattice, A.invol
    return frozenset(a for a in range(A.n) if L.meet[a][p[a]] == L.bottom)


def is_antiortholattice_candidate(A: InvolutionLattice) -> bool:
    L = A.lattice
    return is_pseudo_kleene(A) and sharp_elements(A) == {L.bottom, L.top}


def trivial_brouwer_map(L: FiniteLattice) -> tuple[int, ...]:
    return tuple(L.top if x == L.bottom else L.bottom for x in range(L.n))


def attach_brouwer(A: InvolutionLattice, tilde: Sequence[int]) -> BZLattice:
    """Validate a Brouwer complement on a pseudo-Kleene algebra."""
    w = _kleene_witness(A)
    if w is not None:
        raise NotPseudoKleene(*w)
    tilde = tuple(tilde)
    L, p = A.lattice, A.invol
    if len(tilde) != A.n or any(not 0 <= t < A.n for t in tilde):
        raise StructureError("Brouwer complement must be a total map on the elements")
    for a in range(A.n):
        if L.meet[a][tilde[a]] != L.bottom:
            raise BrouwerAxiomFails("a ^ a~ = 0", (a,))
        if not L.leq(a, tilde[tilde[a]]):
            raise BrouwerAxiomFails("a <= a~~", (a,))
        if p[tilde[a]] != tilde[tilde[a]]:
            raise BrouwerAxiomFails("a~' = a~~", (a,))
    for a in range(A.n):
        for b in bits(L.up[a]):
            if not L.leq(tilde[b], tilde[a]):
                raise BrouwerAxiomFails("antitone", (a, b))
    return BZLattice(A, tilde)


def trivial_brouwer(A: InvolutionLattice) -> BZLattice:
    """Antiortholattice structure: 0~ = 1 and a~ = 0 for every a != 0."""
    w = _kleene_witness(A)
    if w is not None:
        raise NotPseudoKleene(*w)
    L = A.lattice
    for a in sorted(sharp_elements(A)):
        if a not in (L.bottom, L.top):
            raise BrouwerAxiomFails("{a | a ^ a' = 0} = {0, 1}", (a,))
    return attach_brouwer(A, trivial_brouwer_map(L))


def brouwer_complements_of(A: InvolutionLattice) -> list[tuple[int, ...]]:
    """Every Brouwer complement a pseudo-Kleene algebra admits (exhaustive)."""
    if not is_pseudo_kleene(A):
        return []
    L, p, n = A.lattice, A.invol, A.n
    order = sorted(range(n), key=lambda x: (popcount(L.down[x]), x))
    cand = [[t for t in range(n) if L.meet[a][t] == L.bottom] for a in range(n)]
    tilde = [-1] * n
    out = []

    def ok(a, t):
        for b in range(n):
            s = tilde[b]
            if s < 0:
                continue
            if L.leq(a, b) and not L.leq(s, t):
                return False
            if L.leq(b, a) and not L.leq(t, s):
                return False
        return True

    def rec(i):
        if i == n:
            try:
                attach_brouwer(A, tilde)
            except StructureError:
                return
            out.append(tuple(tilde))
            return
        a = order[i]
        for t in cand[a]:
            if ok(a, t):
                tilde[a] = t
                rec(i + 1)
                tilde[a] = -1

    rec(0)
    return sorted(out)


def classify(A) -> frozenset:
    """Class-membership flags by direct definition scans."""
    bz = A if isinstance(A, BZLattice) else None
    base = A.base if bz else A
    L = base.lattice
    flags = {I_LATTICE, BOUNDED_I}
    pk = is_pseudo_kleene(base)
    dist = is_distributive(L)
    if dist:
        flags.add(DE_MORGAN)
    if pk:
        flags.add(PSEUDO_KLEENE)
        if dist:
            flags.add(KLEENE)
    if is_paraorthomodular(base):
        flags.add(PARAORTHOMODULAR)
    anti = pk and sharp_elements(base) == {L.bottom, L.top}
    if bz is not None:
        flags.add(BZ)
        if anti and bz.brouwer == trivial_brouwer_map(L):
            flags.add(ANTIORTHOLATTICE)
        if PARAORTHOMODULAR in flags and bz.brouwer == base.invol:
            flags.add(ORTHOMODULAR)
    else:
        if anti:
            flags.add(ANTIORTHOLATTICE)
        if is_orthomodular_lattice(base):
            flags.add(ORTHOMODULAR)
    return frozenset(flags)


def cones(A: InvolutionLattice) -> Cones:
    L, p = A.lattice, A.invol
    N, Z, P, inc = set(), set(), set(), set()
    for x in range(A.n):
        if p[x] == x:
            Z.add(x)
        elif L.leq(x, p[x]):
            N.add(x)
        elif L.leq(p[x], x):
            P.add(x)
        else:
            inc.add(x)
    return Cones(frozenset(N), frozenset(Z), frozenset(P), frozenset(inc))


def zero_meet_irreducible(L: FiniteLattice) -> bool:
    return len(L.upper_covers[L.bottom]) <= 1


def is_i_sublattice(A: InvolutionLattice, subset) -> bool:
    L, p = A.lattice, A.invol
    s = set(subset)
    if not s:
        return False
    return all(L.meet[x][y] in s and L.join[x][y] in s for x in s for y in s) and \
        all(p[x] in s for x in s)


def sub_i_lattice(A: InvolutionLattice, subset) -> InvolutionLattice:
    """The i-sublattice on ``subset`` (re-indexed by sorted position)."""
    elems = sorted(subset)
    if not is_i_sublattice(A, elems):
        raise StructureError(f"{elems} is not closed under meet, join and involution")
    idx = {x: i for i, x in enumerate(elems)}
    L = A.lattice
    up = [sum(1 << idx[y] for y in elems if L.leq(x, y)) for x in elems]
    S = from_up_masks(up, [L.labels[x] for x in elems])
    return InvolutionLattice(S, tuple(idx[A.invol[x]] for x in elems))


def i_canonical_form(A: InvolutionLattice) -> bytes:
    from .canon import canonical_form
    return canonical_form(A.lattice, [A.invol])


def i_isomorphism(A: InvolutionLattice, B: InvolutionLattice):
    from .canon import isomorphism
    return isomorphism(A.lattice, B.lattice, [A.invol], [B.invol])
