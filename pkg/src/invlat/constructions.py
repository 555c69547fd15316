"""Builders: chains, Boolean cubes, ordinal and horizontal sums, products.

Sums number their elements summand by summand, each summand bottom to top
along a linear extension; an identified element keeps the smaller index.  For
horizontal sums the shared bottom is element 0 and the shared top is the last
element, so every construction is numbered along a linear extension.
"""

from __future__ import annotations

from typing import Optional, Sequence, Union

from .involution import InvolutionLattice, attach_involution
from .lattice import (FiniteLattice, LatticeError, bits, dual, from_covers, from_up_masks,
                      linear_extension)
from .partition import Partition, join_all

Lat = Union[FiniteLattice, InvolutionLattice]


class MissingBound(LatticeError):
    pass


class TrivialSummand(LatticeError):
    pass


class ForbiddenTop(LatticeError):
    pass


def _lat(X: Lat) -> FiniteLattice:
    return X.lattice if isinstance(X, InvolutionLattice) else X


def _numeric(n):
    return [str(i) for i in range(n)]


def _from_order(n, leq) -> FiniteLattice:
    return from_up_masks([sum(1 << y for y in range(n) if leq(x, y)) for x in range(n)],
                         _numeric(n))


# -- basic families -------------------------------------------------------------

def chain(n: int) -> InvolutionLattice:
    """The n-element chain with its unique involution x -> n-1-x."""
    if n < 1:
        raise LatticeError("a chain needs at least one element")
    L = _from_order(n, lambda x, y: x <= y)
    return InvolutionLattice(L, tuple(n - 1 - x for x in range(n)))


def boolean_cube(k: int) -> InvolutionLattice:
    """The Boolean algebra of subsets of a k-set, complement as involution."""
    if k < 0:
        raise LatticeError("k must be non-negative")
    n = 1 << k
    L = _from_order(n, lambda x, y: x & y == x)
    return InvolutionLattice(L, tuple((n - 1) ^ x for x in range(n)))


# -- ordinal sums ---------------------------------------------------------------

def _order_maps(X: FiniteLattice):
    """Position of each element along the standard linear extension."""
    ext = linear_extension(X)
    pos = [0] * X.n
    for i, x in enumerate(ext):
        pos[x] = i
    return pos


def _ordinal_maps(parts: Sequence[FiniteLattice]):
    """Glue lattices bottom to top; return the sum and per-part index maps."""
    maps = []
    offset = 0
    total = 0
    for k, P in enumerate(parts):
        pos = _order_maps(P)
        if k == 0:
            maps.append([pos[x] for x in range(P.n)])
            offset = P.n - 1
            total = P.n
        else:
            maps.append([offset + pos[x] for x in range(P.n)])
            offset += P.n - 1
            total += P.n - 1
    up = [0] * total
    for k, P in enumerate(parts):
        m = maps[k]
        start = m[P.top]
        # everything from this part's top upwards sits above its elements
        above = ((1 << total) - 1) ^ ((1 << start) - 1)
        for x in range(P.n):
            up[m[x]] |= sum(1 << m[y] for y in bits(P.up[x])) | above
    return from_up_masks(up, _numeric(total)), maps


def ordinal_sum(*parts: Lat) -> FiniteLattice:
    """L1 + L2 + ...: each top identified with the next bottom."""
    if not parts:
        raise LatticeError("ordinal sum of nothing")
    return _ordinal_maps([_lat(P) for P in parts])[0]


def ordinal_sum_maps(*parts: Lat):
    return _ordinal_maps([_lat(P) for P in parts])


def i_ordinal_triple(M: Lat, K: InvolutionLattice) -> InvolutionLattice:
    """M + K + M^d with x in M paired with its copy in M^d."""
    M = _lat(M)
    Md = dual(M)
    S, (mm, mk, md) = _ordinal_maps([M, K.lattice, Md])
    invol = [0] * S.n
    for x in range(M.n):
        invol[mm[x]] = md[x]
        invol[md[x]] = mm[x]
    for x in range(K.n):
        invol[mk[x]] = mk[K.invol[x]]
    return attach_involution(S, invol)


def cong_ordinal_sum(parts: Sequence[Lat], congs: Sequence[Sequence[int]]) -> Partition:
    """alpha_1 + alpha_2 + ... on the ordinal sum of ``parts``."""
    S, maps = ordinal_sum_maps(*parts)
    return join_all(S.n, [_transport(S.n, c, m) for c, m in zip(congs, maps)])


def _transport(n, theta, m):
    lab = list(range(n))
    for x, r in enumerate(theta):
        lab[m[x]] = m[r]
    # lab is a map to class representatives of one summand; close it
    return join_all(n, [lab])


# -- horizontal sums ------------------------------------------------------------

def _horizontal_maps(parts: Sequence[FiniteLattice]):
    for P in parts:
        if P.n < 2:
            raise TrivialSummand("horizontal sums need non-trivial summands")
    total = 2 + sum(P.n - 2 for P in parts)
    top = total - 1
    maps = []
    nxt = 1
    for P in parts:
        pos = _order_maps(P)
        inner = sorted((x for x in range(P.n) if x not in (P.bottom, P.top)), key=lambda x: pos[x])
        m = [0] * P.n
        m[P.bottom] = 0
        m[P.top] = top
        for x in inner:
            m[x] = nxt
            nxt += 1
        maps.append(m)
    up = [0] * total
    up[0] = (1 << total) - 1
    up[top] = 1 << top
    for P, m in zip(parts, maps):
        for x in range(P.n):
            if x in (P.bottom, P.top):
                continue
            up[m[x]] = sum(1 << m[y] for y in bits(P.up[x]))
    return from_up_masks(up, _numeric(total)), maps


def horizontal_sum(*parts: Lat):
    """Glue bottoms and tops; an i-lattice when every summand carries one."""
    if not parts:
        raise LatticeError("horizontal sum of nothing")
    S, maps = _horizontal_maps([_lat(P) for P in parts])
    if all(isinstance(P, InvolutionLattice) for P in parts):
        invol = [0] * S.n
        for P, m in zip(parts, maps):
            for x in range(P.n):
                invol[m[x]] = m[P.invol[x]]
        return attach_involution(S, invol)
    return S


def horizontal_sum_maps(*parts: Lat):
    return _horizontal_maps([_lat(P) for P in parts])


def cong_horizontal_sum(parts: Sequence[Lat], congs: Sequence[Sequence[int]]) -> Partition:
    """delta_1 [+] delta_2 [+] ...: classes of the summands glued at 0 and 1."""
    S, maps = horizontal_sum_maps(*parts)
    for P, c in zip(parts, congs):
        P = _lat(P)
        if c[P.bottom] == c[P.top]:
            raise ForbiddenTop("a summand congruence may not collapse 0 with 1")
    return join_all(S.n, [_transport(S.n, c, m) for c, m in zip(congs, maps)])


# -- products -------------------------------------------------------------------

def direct_product(A: Lat, B: Lat):
    """Componentwise order; element (x, y) gets index x*|B| + y."""
    L, M = _lat(A), _lat(B)
    n, k = L.n, M.n
    up = [0] * (n * k)
    for x in range(n):
        for y in range(k):
            mask = 0
            for u in bits(L.up[x]):
                for v in bits(M.up[y]):
                    mask |= 1 << (u * k + v)
            up[x * k + y] = mask
    P = from_up_masks(up, _numeric(n * k))
    if isinstance(A, InvolutionLattice) and isinstance(B, InvolutionLattice):
        return InvolutionLattice(P, tuple(A.invol[x] * k + B.invol[y]
                                          for x in range(n) for y in range(k)))
    return P


# -- named catalog --------------------------------------------------------------

def M3() -> InvolutionLattice:
    """M3 as L3 [+] L2^2: one atom fixed, the other two swapped."""
    return horizontal_sum(chain(3), boolean_cube(2))


def N5() -> InvolutionLattice:
    return horizontal_sum(chain(3), chain(4))


def B6() -> InvolutionLattice:
    """Two 4-chains 0 < a < b' < 1 and 0 < b < a' < 1, a <-> a', b <-> b'."""
    labels = ["0", "a", "b", "a'", "b'", "1"]
    covers = [(0, 1), (0, 2), (1, 4), (2, 3), (4, 5), (3, 5)]
    L = from_covers(6, covers, labels)
    return attach_involution(L, (5, 3, 4, 1, 2, 0))


def M_example() -> InvolutionLattice:
    """L2^2 + L2 + L2^2."""
    return i_ordinal_triple(boolean_cube(2), chain(2))


def H_example() -> InvolutionLattice:
    """L4 [+] L4 [+] L4."""
    return horizontal_sum(chain(4), chain(4), chain(4))


def L_example() -> InvolutionLattice:
    """(M3 [+] L4) + L2^3 + (M3 [+] L4)^d, twenty elements."""
    return i_ordinal_triple(horizontal_sum(M3(), chain(4)), boolean_cube(3))


def _even(n, least):
    if n % 2 or n < least:
        raise LatticeError(f"n must be even and at least {least}, got {n}")


def E(n: int) -> InvolutionLattice:
    """L_{n/2-2} + (L2 x L3) + L_{n/2-2}, n even, n >= 6."""
    _even(n, 6)
    return i_ordinal_triple(chain(n // 2 - 2), direct_product(chain(2), chain(3)))


def E_k(k: int, n: int) -> InvolutionLattice:
    """L_{n/2-k/2-2} + L2^2 + L_k + L2^2 + L_{n/2-k/2-2}."""
    _even(n, 8)
    if k % 2 or k < 2 or k > n - 6:
        raise LatticeError(f"k must be even with 2 <= k <= n-6, got k={k}, n={n}")
    outer = ordinal_sum(chain(n // 2 - k // 2 - 2), boolean_cube(2))
    return i_ordinal_triple(outer, chain(k))


def F(n: int) -> InvolutionLattice:
    """L_{n/2-2} + B6 + L_{n/2-2}."""
    _even(n, 6)
    return i_ordinal_triple(chain(n // 2 - 2), B6())


def G(n: int) -> InvolutionLattice:
    """L_{n/2-3} + H + L_{n/2-3}."""
    _even(n, 8)
    return i_ordinal_triple(chain(n // 2 - 3), H_example())


def boolean_sandwich(n: int) -> InvolutionLattice:
    """L_{n/2-1} + L2^2 + L_{n/2-1}, n even, n >= 4."""
    _even(n, 4)
    return i_ordinal_triple(chain(n // 2 - 1), boolean_cube(2))


def catalog() -> dict:
    """Fixed-size named structures."""
    return {
        "L2xL3": direct_product(chain(2), chain(3)),
        "B6": B6(),
        "M3": M3(),
        "N5": N5(),
        "M": M_example(),
        "H": H_example(),
        "L4xL5": direct_product(chain(4), chain(5)),
        "L": L_example(),
        "L3+L3": horizontal_sum(chain(3), chain(3)),
        "L3+L5": horizontal_sum(chain(3), chain(5)),
        "L4+L4": horizontal_sum(chain(4), chain(4)),
        "L3+(L2xL3)": horizontal_sum(chain(3), direct_product(chain(2), chain(3))),
    }


# name -> (builder, number of integer parameters)
PARAMETRIC = {
    "chain": (chain, 1),
    "boolean": (boolean_cube, 1),
    "E": (E, 1),
    "Ekn": (E_k, 2),
    "F": (F, 1),
    "G": (G, 1),
    "sandwich": (boolean_sandwich, 1),
}

# (|Con|, |Con_I|) of the fixed example table
EXAMPLE_TABLE = [
    ("L2xL3", 8, 4),
    ("B6", 7, 5),
    ("M", 32, 8),
    ("H", 9, 9),
    ("L4xL5", 128, 16),
    ("L", 72, 24),
]


def parametric_expectations(n: int) -> dict:
    """Expected |Con_I| of the even-size families at size n."""
    out = {}
    if n % 2 == 0 and n >= 6:
        out["E"] = 2 ** (n // 2 - 1)
        out["F"] = 5 * 2 ** (n // 2 - 3)
    if n % 2 == 0 and n >= 8:
        out["G"] = 9 * 2 ** (n // 2 - 4)
        for k in range(2, n - 5, 2):
            out[f"Ekn {k}"] = 2 ** (n // 2 - 1)
    return out


def example_counts(sizes: Sequence[int] = (8, 10, 12)) -> list[dict]:
    """Computed versus expected counts for the example table and families."""
    from .congruence import all_congruences, i_congruences

    rows = []
    cat = catalog()
    for name, con, con_i in EXAMPLE_TABLE:
        A = cat[name]
        c = all_congruences(A.lattice)
        rows.append({"name": name, "size": A.n, "con": len(c), "con_i": len(i_congruences(A, c)),
                     "expected_con": con, "expected_con_i": con_i})
    for n in sizes:
        for key, expected in parametric_expectations(n).items():
            if key.startswith("Ekn"):
                A = E_k(int(key.split()[1]), n)
                name = f"E_{{{key.split()[1]},{n}}}"
            else:
                A = {"E": E, "F": F, "G": G}[key](n)
                name = f"{key}_{n}"
            c = all_congruences(A.lattice)
            rows.append({"name": name, "size": A.n, "con": len(c),
                         "con_i": len(i_congruences(A, c)),
                         "expected_con": None, "expected_con_i": expected})
    return rows


def build(name: str, params: Sequence[int] = ()) -> InvolutionLattice:
    """Catalog entry or parametric family by name."""
    if name in PARAMETRIC:
        fn, k = PARAMETRIC[name]
        if len(params) != k:
            raise LatticeError(f"{name} takes {k} integer parameter(s)")
        return fn(*params)
    cat = catalog()
    if name not in cat:
        raise LatticeError(f"unknown construction {name!r}")
    if params:
        raise LatticeError(f"{name} takes no parameters")
    return cat[name]

