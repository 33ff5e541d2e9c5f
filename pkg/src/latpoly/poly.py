"""Lattice polynomial functions and explicit function tables.

A :class:`PolynomialFn` of arity ``n`` stores one coefficient per subset
``I`` of ``{1..n}``; subsets are bitmasks with bit ``i-1`` standing for
variable ``x_i``.  The function it denotes is the disjunctive normal form

    f(x) = join over I of ( alpha[I] meet (meet of x_i, i in I) )

where the empty meet is the top element.  A :class:`FunctionTable` is an
arbitrary map ``L^n -> L`` stored as an ``n``-dimensional numpy array in
row-major (lexicographic) order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import ArityError, ForeignElement, LatpolyError, NotPolynomial
from .lattice import Lattice, convex_rows

MAX_POLY_ARITY = 6
MAX_TABLE_CELLS = 1 << 22


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset_bits(mask: int) -> list[int]:
    """Zero-based variable positions present in ``mask``."""
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def mask_key(mask: int) -> str:
    """``0b101`` -> ``"13"``: the sorted one-based indices as a string."""
    return "".join(str(i + 1) for i in subset_bits(mask))


def characteristic_vector(lat: Lattice, n: int, mask: int) -> tuple[int, ...]:
    return tuple(lat.top if mask >> i & 1 else lat.bottom for i in range(n))


def zeta_join(lat: Lattice, n: int, alpha: Sequence[int]) -> tuple[int, ...]:
    """``out[I] = join of alpha[J] over J subset of I``."""
    out = list(alpha)
    jt = lat.join_table
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if m & bit:
                out[m] = int(jt[out[m], out[m ^ bit]])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """An arbitrary function ``L^n -> L`` given by its value table."""

    lattice: Lattice
    arity: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        n, size = self.arity, self.lattice.size
        if n < 1:
            raise ArityError("arity must be at least 1")
        if size**n > MAX_TABLE_CELLS:
            raise ArityError(f"table with {size}^{n} cells is too large")
        vals = np.array(self.values, dtype=np.intp)
        if vals.size != size**n:
            raise ArityError(f"table needs {size**n} values, got {vals.size}")
        vals = vals.reshape((size,) * n)
        if vals.size and (vals.min() < 0 or vals.max() >= size):
            raise ForeignElement("table value outside the lattice")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, lat: Lattice, n: int, fn) -> "FunctionTable":
        """Tabulate a Python callable ``fn(*xs) -> element``."""
        vals = [fn(*x) for x in itertools.product(lat.elements, repeat=n)]
        return cls(lat, n, vals)

    def __call__(self, *x: int) -> int:
        if len(x) != self.arity:
            raise ArityError(f"expected {self.arity} arguments, got {len(x)}")
        return int(self.values[tuple(self.lattice.check(v) for v in x)])

    def __eq__(self, other):
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.arity == other.arity
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.arity, self.values.tobytes()))

    def flat(self) -> list[int]:
        return [int(v) for v in self.values.ravel()]

    def grid(self) -> np.ndarray:
        return np.indices(self.values.shape)

    def range(self) -> set[int]:
        return {int(v) for v in np.unique(self.values)}


@dataclass(frozen=True, eq=False)
class PolynomialFn:
    """A lattice polynomial function in disjunctive normal form.

    Two instances compare equal when they denote the same function, i.e.
    when their canonical coefficient maps agree; the raw ``alpha`` of a
    function is not unique.
    """

    lattice: Lattice
    arity: int
    alpha: tuple[int, ...]

    def __post_init__(self):
        n = self.arity
        if not 1 <= n <= MAX_POLY_ARITY:
            raise ArityError(f"polynomial arity must lie in 1..{MAX_POLY_ARITY}")
        alpha = tuple(self.lattice.check(a) for a in self.alpha)
        if len(alpha) != 1 << n:
            raise ArityError(f"alpha needs {1 << n} coefficients, got {len(alpha)}")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def from_map(cls, lat: Lattice, n: int, coeffs: dict) -> "PolynomialFn":
        """Build from ``{frozenset of 1-based indices: element}``; missing subsets are bottom."""
        alpha = [lat.bottom] * (1 << n)
        for subset, value in coeffs.items():
            mask = 0
            for i in subset:
                if not 1 <= i <= n:
                    raise ArityError(f"variable index {i} outside 1..{n}")
                mask |= 1 << (i - 1)
            alpha[mask] = value
        return cls(lat, n, tuple(alpha))

    @cached_property
    def canonical_alpha(self) -> tuple[int, ...]:
        """``alpha_can[I] = f(e_I)``, the join of ``alpha[J]`` over ``J`` subset of ``I``."""
        return zeta_join(self.lattice, self.arity, self.alpha)

    def canonical(self) -> "PolynomialFn":
        return PolynomialFn(self.lattice, self.arity, self.canonical_alpha)

    def __eq__(self, other):
        if not isinstance(other, PolynomialFn):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.arity == other.arity
            and self.canonical_alpha == other.canonical_alpha
        )

    def __hash__(self):
        return hash((self.arity, self.canonical_alpha))

    def __call__(self, *x: int) -> int:
        return evaluate(self, x)

    def table(self) -> FunctionTable:
        lat, n = self.lattice, self.arity
        if lat.size**n > MAX_TABLE_CELLS:
            raise ArityError(f"table with {lat.size}^{n} cells is too large")
        return FunctionTable(lat, n, self.evaluate_grid(list(np.indices((lat.size,) * n))))

    def evaluate_grid(self, xs: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorised DNF evaluation; ``xs[i]`` is an array of values for ``x_{i+1}``."""
        lat = self.lattice
        mt, jt = lat.meet_table, lat.join_table
        shape = np.broadcast_shapes(*(np.shape(x) for x in xs))
        out = np.full(shape, lat.bottom, dtype=np.intp)
        for mask, coeff in enumerate(self.alpha):
            if coeff == lat.bottom:
                continue
            term = np.full(shape, coeff, dtype=np.intp)
            for i in subset_bits(mask):
                term = mt[term, xs[i]]
            out = jt[out, term]
        return out


def evaluate(f: PolynomialFn, x: Sequence[int]) -> int:
    """Evaluate ``f`` at the tuple ``x`` via its disjunctive normal form."""
    lat = f.lattice
    if len(x) != f.arity:
        raise ArityError(f"expected {f.arity} arguments, got {len(x)}")
    x = [lat.check(v) for v in x]
    mt, jt = lat.meet_table, lat.join_table
    acc = lat.bottom
    for mask, coeff in enumerate(f.alpha):
        term = coeff
        for i in subset_bits(mask):
            term = mt[term, x[i]]
        acc = jt[acc, term]
    return int(acc)


def table_of(f: PolynomialFn) -> FunctionTable:
    return f.table()


# -- recognising polynomial functions ----------------------------------


def _first_true(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(v) for v in hits[0])


def from_table(t: FunctionTable) -> PolynomialFn:
    """Read the coefficients off the characteristic vectors and check the rebuild.

    Raises :class:`NotPolynomial` with the lexicographically least tuple where
    the rebuilt DNF disagrees with ``t``.
    """
    lat, n = t.lattice, t.arity
    alpha = tuple(
        int(t.values[characteristic_vector(lat, n, m)]) for m in range(1 << n)
    )
    f = PolynomialFn(lat, n, alpha)
    rebuilt = f.evaluate_grid(list(t.grid()))
    witness = _first_true(rebuilt != t.values)
    if witness is not None:
        raise NotPolynomial(
            f"table is not a polynomial function (differs at {witness})", witness=witness
        )
    return f


def is_polynomial(t: FunctionTable) -> bool:
    try:
        from_table(t)
    except NotPolynomial:
        return False
    return True


def median_violation(t: FunctionTable) -> tuple[tuple[int, ...], int] | None:
    """Least ``(tuple, slot)`` where ``t(x y z) != med(t(x 0 z), y, t(x 1 z))``."""
    lat, n = t.lattice, t.arity
    vals = t.values
    best = None
    for k in range(n):
        low = np.take(vals, [lat.bottom], axis=k)
        high = np.take(vals, [lat.top], axis=k)
        y = np.arange(lat.size).reshape([-1 if i == k else 1 for i in range(n)])
        bad = _first_true(lat.med_table[low, y, high] != vals)
        if bad is not None and (best is None or bad < best[0]):
            best = (bad, k)
    return best


def is_polynomial_median(t: FunctionTable) -> bool:
    """Decide polynomiality through the median decomposition in every slot."""
    return median_violation(t) is None


def minimal_alpha(f: PolynomialFn) -> PolynomialFn:
    """The minimal DNF: keep ``alpha_can[I]`` only where it strictly exceeds
    the join of ``alpha_can`` over the proper subsets of ``I``."""
    lat, n = f.lattice, f.arity
    can = f.canonical_alpha
    out = []
    for mask in range(1 << n):
        # can is monotone, so maximal proper subsets suffice
        below = lat.join_all(can[mask ^ (1 << i)] for i in subset_bits(mask))
        out.append(can[mask] if lat.lt(below, can[mask]) else lat.bottom)
    return PolynomialFn(lat, n, tuple(out))


def is_symmetric(f: PolynomialFn) -> bool:
    """Permutation invariance.

    ``f(e_I)`` must depend only on ``|I|``; conversely a canonical map that
    depends only on ``|I|`` yields a symmetric normal form.
    """
    seen: dict[int, int] = {}
    for mask, v in enumerate(f.canonical_alpha):
        if seen.setdefault(popcount(mask), v) != v:
            return False
    return True


# -- conditions of the structural characterisation ----------------------


def _sections(t: FunctionTable, k: int) -> np.ndarray:
    """Rows of ``y -> t(x y z)``: shape ``(contexts, size)``."""
    return np.moveaxis(t.values, k, -1).reshape(-1, t.lattice.size)


def check_condition_a_nondecreasing(t: FunctionTable) -> bool:
    """Componentwise ``x <= x'`` implies ``t(x) <= t(x')``.

    Checking single-coordinate cover steps is enough.
    """
    lat = t.lattice
    leq = lat.leq_table
    covers = lat.covers()
    for k in range(t.arity):
        rows = _sections(t, k)
        for y, y2 in covers:
            if not leq[rows[:, y], rows[:, y2]].all():
                return False
    return True


def check_condition_b_lattice_morphism_sections(t: FunctionTable) -> bool:
    """Every unary section ``y -> t(x y z)`` preserves meet and join."""
    lat = t.lattice
    mt, jt = lat.meet_table, lat.join_table
    y, y2 = np.triu_indices(lat.size, k=1)
    for k in range(t.arity):
        rows = _sections(t, k)
        a, b = rows[:, y], rows[:, y2]
        if not (rows[:, mt[y, y2]] == mt[a, b]).all():
            return False
        if not (rows[:, jt[y, y2]] == jt[a, b]).all():
            return False
    return True


def _membership(lat: Lattice, rows: np.ndarray) -> np.ndarray:
    mem = np.zeros((len(rows), lat.size), dtype=bool)
    mem[np.arange(len(rows))[:, None], rows] = True
    return mem


def check_condition_c_section_range_convex(t: FunctionTable) -> bool:
    """The range of every unary section is a convex subset."""
    lat = t.lattice
    for k in range(t.arity):
        if not convex_rows(lat, _membership(lat, _sections(t, k))).all():
            return False
    return True


def check_condition_d_range_convex(t: FunctionTable) -> bool:
    lat = t.lattice
    return bool(convex_rows(lat, _membership(lat, t.values.reshape(1, -1)))[0])


def substitute(t: FunctionTable, k: int, inner: np.ndarray) -> np.ndarray:
    """``t`` evaluated on the grid with slot ``k`` replaced by ``inner``."""
    idx = list(t.grid())
    idx[k] = inner
    return t.values[tuple(idx)]


def check_condition_e_section_idempotent(t: FunctionTable) -> bool:
    """``t(x t(x y z) z) = t(x y z)`` for every tuple and slot."""
    return all(
        np.array_equal(substitute(t, k, t.values), t.values) for k in range(t.arity)
    )


CONDITIONS = {
    "a": check_condition_a_nondecreasing,
    "b": check_condition_b_lattice_morphism_sections,
    "c": check_condition_c_section_range_convex,
    "d": check_condition_d_range_convex,
    "e": check_condition_e_section_idempotent,
}


def conditions(t: FunctionTable, which: str = "abcde") -> dict[str, bool]:
    return {c: CONDITIONS[c](t) for c in which}


# -- enumeration and sampling -------------------------------------------


def enumerate_polynomials(lat: Lattice, n: int, values: Sequence[int] | None = None) -> Iterator[PolynomialFn]:
    """Every polynomial function of arity ``n``, once each.

    Polynomial functions correspond one-to-one to monotone maps from the
    subsets of ``{1..n}`` to ``L``, namely their canonical coefficient maps.
    ``values`` optionally restricts the coefficients (e.g. to bottom and top
    for term functions).
    """
    allowed = list(lat.elements if values is None else values)
    leq = lat.leq_table
    size = 1 << n
    alpha = [0] * size

    def rec(mask):
        if mask == size:
            yield PolynomialFn(lat, n, tuple(alpha))
            return
        floor = lat.join_all(alpha[mask ^ (1 << i)] for i in subset_bits(mask))
        for v in allowed:
            if leq[floor, v]:
                alpha[mask] = v
                yield from rec(mask + 1)

    yield from rec(0)


def all_tables(lat: Lattice, n: int) -> Iterator[FunctionTable]:
    """Every function ``L^n -> L`` in lexicographic order of its value list."""
    cells = lat.size**n
    for vals in itertools.product(lat.elements, repeat=cells):
        yield FunctionTable(lat, n, vals)


def table_count(lat: Lattice, n: int) -> int:
    return lat.size ** (lat.size**n)


def random_polynomial(lat: Lattice, n: int, rng: np.random.Generator) -> PolynomialFn:
    return PolynomialFn(lat, n, tuple(int(v) for v in rng.integers(0, lat.size, 1 << n)))


def random_table(lat: Lattice, n: int, rng: np.random.Generator) -> FunctionTable:
    return FunctionTable(lat, n, rng.integers(0, lat.size, lat.size**n))


def random_monotone_table(lat: Lattice, n: int, rng: np.random.Generator) -> FunctionTable:
    """A nondecreasing step function: join of ``v_g`` over generators ``g <= x``."""
    grid = np.indices((lat.size,) * n)
    leq = lat.leq_table
    out = np.full(grid.shape[1:], lat.bottom, dtype=np.intp)
    for _ in range(int(rng.integers(1, 4))):
        g = rng.integers(0, lat.size, n)
        v = int(rng.integers(0, lat.size))
        above = np.logical_and.reduce([leq[g[i], grid[i]] for i in range(n)])
        out = np.where(above, lat.join_table[out, v], out)
    return FunctionTable(lat, n, out)


def perturb(t: FunctionTable, rng: np.random.Generator) -> FunctionTable:
    """Change one random cell to a different value."""
    vals = t.values.copy().ravel()
    if t.lattice.size < 2:
        raise LatpolyError("cannot perturb a table over a one-element lattice")
    cell = int(rng.integers(0, len(vals)))
    vals[cell] = (vals[cell] + int(rng.integers(1, t.lattice.size))) % t.lattice.size
    return FunctionTable(t.lattice, t.arity, vals)


def table_population(lat: Lattice, n: int, rng: np.random.Generator, cap: int = 20000, samples: int = 600):
    """Tables for equivalence checks: all of them when there are at most
    ``cap``, otherwise a seeded mix of polynomial, perturbed-polynomial,
    monotone and uniform random tables.  Returns ``(mode, tables)``."""
    if table_count(lat, n) <= cap:
        return "exhaustive", list(all_tables(lat, n))
    tables = []
    for i in range(samples):
        kind = i % 4
        if kind == 0:
            tables.append(random_polynomial(lat, n, rng).table())
        elif kind == 1:
            tables.append(perturb(random_polynomial(lat, n, rng).table(), rng))
        elif kind == 2:
            tables.append(random_monotone_table(lat, n, rng))
        else:
            tables.append(random_table(lat, n, rng))
    return "sampled", tables
