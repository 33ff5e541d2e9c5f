"""Finite bounded distributive lattices.

Elements are dense integer ids ``0 .. size-1``; every id has a unique display
name.  Order, meet, join and median are precomputed as numpy tables, so the
same lookup expression works on a scalar id and on an array of ids::

    lat.meet_table[x, y]        # x, y may be ints or broadcastable arrays
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CyclicCovers,
    DuplicateName,
    ForeignElement,
    LatpolyError,
    LatticeTooLarge,
    NotALattice,
    NotDistributive,
)

MAX_SIZE = 64


def _transitive_closure(size: int, covers: Iterable[tuple[int, int]]) -> np.ndarray:
    reach = np.eye(size, dtype=bool)
    for x, y in covers:
        reach[x, y] = True
    for k in range(size):
        reach |= reach[:, k : k + 1] & reach[k : k + 1, :]
    return reach


def _bound_table(leq: np.ndarray, upper: bool) -> np.ndarray:
    """Least upper (or greatest lower) bound of every pair, -1 where none exists."""
    rel = leq.T if upper else leq
    size = len(leq)
    out = np.full((size, size), -1, dtype=np.intp)
    # bounds[x, y, z]: z lies below (above) both x and y
    bounds = rel.T[:, None, :] & rel.T[None, :, :]
    for x in range(size):
        for y in range(x, size):
            cand = np.flatnonzero(bounds[x, y])
            # the extremal bound dominates every other bound
            best = [m for m in cand if rel[cand, m].all()]
            if len(best) == 1:
                out[x, y] = out[y, x] = best[0]
    return out


class Lattice:
    """An immutable, validated finite bounded distributive lattice.

    Build one with :func:`build_from_covers`, :func:`chain`, :func:`boolean`
    or :func:`product`; the constructor checks every lattice axiom eagerly.
    """

    def __init__(self, names: Sequence[str], leq: np.ndarray, label: str | None = None):
        names = tuple(str(n) for n in names)
        size = len(names)
        if size == 0:
            raise NotALattice("a lattice needs at least one element")
        if size > MAX_SIZE:
            raise LatticeTooLarge(f"{size} elements exceeds the cap of {MAX_SIZE}")
        seen = set()
        for n in names:
            if n in seen:
                raise DuplicateName(f"duplicate element name {n!r}")
            seen.add(n)
        leq = np.array(leq, dtype=bool)
        if leq.shape != (size, size):
            raise LatpolyError("order table has the wrong shape")

        self.size = size
        self.names = names
        self.label = label or f"lattice:{size}"
        self._index = {n: i for i, n in enumerate(names)}
        self.leq_table = leq
        self._check_partial_order()
        self.meet_table = self._tabulate(upper=False)
        self.join_table = self._tabulate(upper=True)
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])
        self._check_laws()
        self._check_distributive()
        mj = self.meet_table
        jt = self.join_table
        x, y, z = np.indices((size, size, size))
        self.med_table = mj[mj[jt[x, y], jt[x, z]], jt[y, z]]
        for table in (self.leq_table, self.meet_table, self.join_table, self.med_table):
            table.setflags(write=False)

    # -- validation -----------------------------------------------------

    def _check_partial_order(self):
        leq = self.leq_table
        if not leq.diagonal().all():
            raise LatpolyError("order is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            x, y = np.argwhere(both)[0]
            raise CyclicCovers(
                f"{self.names[x]} and {self.names[y]} lie below each other"
            )
        closed = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
        if (closed & ~leq).any():
            raise LatpolyError("order is not transitive")

    def _tabulate(self, upper: bool) -> np.ndarray:
        table = _bound_table(self.leq_table, upper)
        if (table < 0).any():
            x, y = np.argwhere(table < 0)[0]
            what = "join" if upper else "meet"
            raise NotALattice(
                f"{self.names[x]} and {self.names[y]} have no unique {what}",
                witness=(int(x), int(y)),
            )
        return table

    def _check_laws(self):
        m, j = self.meet_table, self.join_table
        x, y = np.indices((self.size, self.size))
        assert (m == m.T).all() and (j == j.T).all()
        assert (m[x, x] == x).all() and (j[x, x] == x).all()
        assert (m[x, j[x, y]] == x).all() and (j[x, m[x, y]] == x).all()
        x, y, z = np.indices((self.size,) * 3)
        assert (m[m[x, y], z] == m[x, m[y, z]]).all()
        assert (j[j[x, y], z] == j[x, j[y, z]]).all()

    def _check_distributive(self):
        m, j = self.meet_table, self.join_table
        x, y, z = np.indices((self.size,) * 3)
        bad = m[x, j[y, z]] != j[m[x, y], m[x, z]]
        if bad.any():
            w = tuple(int(v) for v in np.argwhere(bad)[0])
            names = ", ".join(self.names[v] for v in w)
            raise NotDistributive(f"distributivity fails at ({names})", witness=w)

    # -- element access -------------------------------------------------

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"<Lattice {self.label} size={self.size}>"

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.names == other.names and np.array_equal(self.leq_table, other.leq_table)

    def __hash__(self):
        return hash((self.names, self.leq_table.tobytes()))

    @property
    def elements(self) -> range:
        return range(self.size)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ForeignElement(f"no element named {name!r} in {self.label}") from None

    def name(self, x: int) -> str:
        return self.names[self.check(x)]

    def check(self, x) -> int:
        """Return ``x`` as an int, raising :class:`ForeignElement` if it is out of range."""
        if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
            raise ForeignElement(f"{x!r} is not an element id")
        if not 0 <= x < self.size:
            raise ForeignElement(f"element id {x} outside 0..{self.size - 1}")
        return int(x)

    # -- operations -----------------------------------------------------

    def leq(self, x: int, y: int) -> bool:
        return bool(self.leq_table[x, y])

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.leq_table[x, y])

    def meet(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    def join(self, x: int, y: int) -> int:
        return int(self.join_table[x, y])

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.top
        for x in xs:
            acc = int(self.meet_table[acc, x])
        return acc

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        for x in xs:
            acc = int(self.join_table[acc, x])
        return acc

    def med(self, x: int, y: int, z: int) -> int:
        return int(self.med_table[self.check(x), self.check(y), self.check(z)])

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(x, y)`` with ``x`` covered by ``y``, sorted."""
        lt = self.leq_table.copy()
        np.fill_diagonal(lt, False)
        lt_i = lt.astype(np.int64)
        # x < z < y for some z
        two_step = (lt_i @ lt_i) > 0
        return [(int(x), int(y)) for x, y in np.argwhere(lt & ~two_step)]

    def is_chain(self) -> bool:
        return bool((self.leq_table | self.leq_table.T).all())

    def is_convex(self, s: Iterable[int]) -> bool:
        mem = np.zeros(self.size, dtype=bool)
        for x in s:
            mem[self.check(x)] = True
        return bool(convex_rows(self, mem[None, :])[0])


def convex_rows(lat: Lattice, members: np.ndarray) -> np.ndarray:
    """Convexity of many subsets at once.

    ``members`` is a boolean ``(rows, size)`` array; row ``r`` encodes one
    subset.  A subset fails to be convex exactly when some non-member ``y``
    has a member below it and a member above it.
    """
    leq = lat.leq_table.astype(np.int64)
    mem = members.astype(np.int64)
    below = (mem @ leq) > 0  # some member x <= y
    above = (mem @ leq.T) > 0  # some member z >= y
    return ~(~members & below & above).any(axis=1)


def med(lat: Lattice, x: int, y: int, z: int) -> int:
    """Ternary median ``(x v y) ^ (x v z) ^ (y v z)``."""
    return lat.med(x, y, z)


def is_convex(lat: Lattice, s: Iterable[int]) -> bool:
    """True iff ``x <= y <= z`` with ``x, z`` in ``s`` forces ``y`` into ``s``."""
    return lat.is_convex(s)


# -- constructors -------------------------------------------------------


def build_from_covers(
    names: Sequence[str], covers: Iterable[Sequence[int]], label: str | None = None
) -> Lattice:
    """Build a lattice from its Hasse diagram.

    ``covers`` holds index pairs ``(x, y)`` meaning ``x < y``; redundant
    (transitive) pairs are accepted.  The order is the reflexive-transitive
    closure of the pairs.
    """
    size = len(names)
    if size > MAX_SIZE:
        raise LatticeTooLarge(f"{size} elements exceeds the cap of {MAX_SIZE}")
    pairs = []
    for pair in covers:
        if len(pair) != 2:
            raise LatpolyError(f"cover {pair!r} is not a pair")
        x, y = pair
        for v in (x, y):
            if not isinstance(v, (int, np.integer)) or not 0 <= v < size:
                raise LatpolyError(f"cover index {v!r} out of range")
        if x == y:
            raise CyclicCovers(f"self-loop at {names[x]!r}")
        pairs.append((int(x), int(y)))
    leq = _transitive_closure(size, pairs)
    return Lattice(names, leq, label=label)


def chain(k: int) -> Lattice:
    """The ``k``-element chain ``0 < c1 < ... < 1``."""
    if k < 2:
        raise LatpolyError("a chain needs at least 2 elements")
    if k > MAX_SIZE:
        raise LatticeTooLarge(f"{k} elements exceeds the cap of {MAX_SIZE}")
    names = ["0"] + [f"c{i}" for i in range(1, k - 1)] + ["1"]
    i, j = np.indices((k, k))
    return Lattice(names, i <= j, label=f"chain:{k}")


def _subset_name(mask: int, k: int) -> str:
    if mask == 0:
        return "0"
    if mask == (1 << k) - 1:
        return "1"
    return "{" + "".join(str(i + 1) for i in range(k) if mask >> i & 1) + "}"


def boolean(k: int) -> Lattice:
    """The powerset of ``{1..k}``; element id ``m`` is the subset with bitmask ``m``.

    The empty set is named ``0``, the full set ``1``, and the others by their
    members in braces, e.g. ``{13}``.
    """
    if not 1 <= k <= 4:
        raise LatpolyError("boolean(k) needs 1 <= k <= 4")
    size = 1 << k
    x, y = np.indices((size, size))
    return Lattice(
        [_subset_name(m, k) for m in range(size)], (x & y) == x, label=f"boolean:{k}"
    )


def _wrap(label: str) -> str:
    return f"({label})" if label.startswith("product:") else label


def product(p: Lattice, q: Lattice) -> Lattice:
    """Direct product with the componentwise order.

    Pair ``(x, y)`` gets id ``x * len(q) + y`` and the name ``(x,y)``.
    """
    size = p.size * q.size
    if size > MAX_SIZE:
        raise LatticeTooLarge(f"{size} elements exceeds the cap of {MAX_SIZE}")
    names = [f"({a},{b})" for a, b in itertools.product(p.names, q.names)]
    leq = np.kron(p.leq_table.astype(np.int8), q.leq_table.astype(np.int8)) > 0
    return Lattice(names, leq, label=f"product:{_wrap(p.label)},{_wrap(q.label)}")
