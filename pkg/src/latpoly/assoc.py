"""Associativity of lattice polynomial functions.

Two notions are handled here.  A fixed-arity ``f: L^n -> L`` is associative
when, inside any string of length ``2n-1``, collapsing the ``n``-block that
starts at position ``i`` gives a value independent of ``i``.  A variadic
``g`` (one component ``g_n`` per arity) is associative when
``g(g(x) g(y)) = g(xy)`` for all strings, where an empty ``x`` or ``y``
contributes no letter.

Every associative ``n``-ary polynomial function is determined by four
values ``a, b, c, d`` (its values at ``0^n``, ``10^(n-1)``, ``0^(n-1)1`` and
``1^n``) through ::

    f(x) = a v (b ^ x_1) v (b ^ c ^ (x_1 v ... v x_n)) v (c ^ x_n) v (d ^ x_1 ^ ... ^ x_n)

and every associative variadic polynomial function by six values.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import (
    ArityError,
    BudgetExceeded,
    InvalidParameters,
    LatpolyError,
    NotAssociative,
    UnsoundConstruction,
)
from .lattice import Lattice
from .poly import FunctionTable, PolynomialFn

DEFAULT_BUDGET = 10**8


# -- fixed arity --------------------------------------------------------


class DornteWitness(NamedTuple):
    """Collapsing the block at ``i`` and at ``j`` inside ``string`` disagree."""

    string: tuple[int, ...]
    i: int
    j: int


def dornte_cost(size: int, n: int) -> int:
    return n * size ** (2 * n - 1)


def _check_budget(cost: int, budget: int | None):
    if budget is not None and cost > budget:
        raise BudgetExceeded(f"check needs {cost} evaluations, budget is {budget}")


def _collapse(vals: np.ndarray, grid: Sequence[np.ndarray], i: int, n: int) -> np.ndarray:
    inner = vals[tuple(grid[i : i + n])]
    return vals[tuple(list(grid[:i]) + [inner] + list(grid[i + n :]))]


def _dornte_chunk(vals: np.ndarray, n: int, size: int, firsts: range) -> DornteWitness | None:
    m = 2 * n - 1
    rest = list(np.indices((size,) * (m - 1)))
    for first in firsts:
        grid = [np.full(rest[0].shape, first, dtype=np.intp)] + rest
        base = _collapse(vals, grid, 0, n)
        diffs = [_collapse(vals, grid, j, n) != base for j in range(1, n)]
        bad = np.logical_or.reduce(diffs)
        hits = np.argwhere(bad)
        if len(hits):
            tail = tuple(int(v) for v in hits[0])
            j = next(j for j, d in enumerate(diffs, start=1) if d[tail])
            return DornteWitness((first,) + tail, 0, j)
    return None


def nary_associativity_witness(
    t: FunctionTable, budget: int | None = DEFAULT_BUDGET, threads: int = 1
) -> DornteWitness | None:
    """Lexicographically least string on which two block positions disagree.

    For arity 1 the check is ``t(t(x)) = t(x)`` and the witness string is
    ``(x,)`` with ``i = j = 0``.  The string space is split by its first
    letter across ``threads`` workers; the result does not depend on the
    worker count.
    """
    n, size, vals = t.arity, t.lattice.size, t.values
    _check_budget(dornte_cost(size, n), budget)
    if n == 1:
        bad = np.flatnonzero(vals[vals] != vals)
        return DornteWitness((int(bad[0]),), 0, 0) if len(bad) else None
    if threads <= 1 or size == 1:
        return _dornte_chunk(vals, n, size, range(size))
    threads = min(threads, size)
    bounds = np.linspace(0, size, threads + 1).astype(int)
    chunks = [range(bounds[k], bounds[k + 1]) for k in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda r: _dornte_chunk(vals, n, size, r), chunks))
    return next((r for r in results if r is not None), None)


def is_associative_nary(
    t: FunctionTable | PolynomialFn, budget: int | None = DEFAULT_BUDGET, threads: int = 1
) -> bool:
    if isinstance(t, PolynomialFn):
        t = t.table()
    return nary_associativity_witness(t, budget, threads) is None


@dataclass(frozen=True)
class AssocParams:
    """The four defining values of an associative ``n``-ary polynomial function."""

    a: int
    b: int
    c: int
    d: int

    def normalized(self, lat: Lattice, n: int = 2) -> "AssocParams":
        """The values the constructed function actually takes at its four points.

        For ``n >= 2`` this is ``(a, a v b, a v c, a v b v c v d)``; for
        ``n = 1`` the last three points coincide.
        """
        jt = lat.join_table
        a, b, c, d = (lat.check(v) for v in (self.a, self.b, self.c, self.d))
        top = int(jt[jt[jt[a, b], c], d])
        if n == 1:
            return AssocParams(a, top, top, top)
        return AssocParams(a, int(jt[a, b]), int(jt[a, c]), top)

    def is_normalized(self, lat: Lattice, n: int = 2) -> bool:
        return self.normalized(lat, n) == self


def _nary_alpha(lat: Lattice, n: int, p: AssocParams) -> tuple[int, ...]:
    jt, mt = lat.join_table, lat.meet_table
    a, b, c, d = p.a, p.b, p.c, p.d
    bc = int(mt[b, c])
    full = (1 << n) - 1
    alpha = []
    for mask in range(1 << n):
        v = a
        if mask:
            v = jt[v, bc]
        if mask & 1:
            v = jt[v, b]
        if mask >> (n - 1) & 1:
            v = jt[v, c]
        if mask == full:
            v = jt[v, d]
        alpha.append(int(v))
    return tuple(alpha)


def construct_nary(lat: Lattice, n: int, p: AssocParams) -> PolynomialFn:
    """The ``n``-ary polynomial function defined by the four parameters.

    The parameters are normalized first; the result carries canonical
    coefficients.
    """
    if n < 1:
        raise ArityError("arity must be at least 1")
    return PolynomialFn(lat, n, _nary_alpha(lat, n, p.normalized(lat, n)))


def corner_values(f: PolynomialFn | FunctionTable) -> AssocParams:
    """``(f(0^n), f(10^(n-1)), f(0^(n-1)1), f(1^n))``."""
    lat, n = f.lattice, f.arity
    lo, hi = lat.bottom, lat.top
    return AssocParams(
        f(*([lo] * n)),
        f(*([hi] + [lo] * (n - 1))),
        f(*([lo] * (n - 1) + [hi])),
        f(*([hi] * n)),
    )


def classify_nary(
    f: PolynomialFn, budget: int | None = DEFAULT_BUDGET, threads: int = 1
) -> AssocParams:
    """Parameters of an associative polynomial function.

    Raises :class:`NotAssociative` (with a :class:`DornteWitness`) when ``f``
    fails the block-position check, and :class:`UnsoundConstruction` if the
    four corner values do not rebuild ``f``.
    """
    witness = nary_associativity_witness(f.table(), budget, threads)
    if witness is not None:
        raise NotAssociative(f"not associative: {witness}", witness=witness)
    p = corner_values(f)
    if construct_nary(f.lattice, f.arity, p) != f:
        raise UnsoundConstruction(f"corner values {p} do not rebuild the function")
    return p


def nary_quadruples(lat: Lattice):
    """All ``(a, b, c, d)`` with ``a <= b ^ c`` and ``b v c <= d``."""
    leq, mt, jt = lat.leq_table, lat.meet_table, lat.join_table
    for a, b, c, d in itertools.product(lat.elements, repeat=4):
        if leq[a, mt[b, c]] and leq[jt[b, c], d]:
            yield AssocParams(a, b, c, d)


def enumerate_associative_nary(
    lat: Lattice, n: int, budget: int | None = DEFAULT_BUDGET
) -> dict[PolynomialFn, AssocParams]:
    """All associative ``n``-ary polynomial functions, keyed by function.

    Every candidate built from a quadruple is re-checked with
    :func:`nary_associativity_witness`; a failure raises
    :class:`UnsoundConstruction`.
    """
    quads = list(nary_quadruples(lat))
    _check_budget(len(quads) * dornte_cost(lat.size, n), budget)
    found: dict[PolynomialFn, AssocParams] = {}
    for p in quads:
        f = construct_nary(lat, n, p)
        if f in found:
            continue
        witness = nary_associativity_witness(f.table(), budget=None)
        if witness is not None:
            raise UnsoundConstruction(f"{p} builds a non-associative function: {witness}")
        found[f] = p.normalized(lat, n)
    return found


def symmetric_median_form(lat: Lattice, p: AssocParams, n: int, x):
    """``med(a, (b ^ x_1) v med(meet x, b ^ c, join x) v (c ^ x_n), d)``.

    ``x`` is a sequence of ``n`` elements; numpy arrays of elements work too
    and are evaluated elementwise.
    """
    if len(x) != n:
        raise ArityError(f"expected {n} arguments, got {len(x)}")
    mt, jt, med = lat.meet_table, lat.join_table, lat.med_table
    lo, hi = x[0], x[0]
    for v in x[1:]:
        lo, hi = mt[lo, v], jt[hi, v]
    inner = jt[jt[mt[p.b, x[0]], med[lo, mt[p.b, p.c], hi]], mt[p.c, x[-1]]]
    return med[p.a, inner, p.d]


def reduced_symmetric_form(lat: Lattice, a: int, b: int, d: int, x):
    """``med(a, med(meet x, b, join x), d)``; valid when the function is symmetric."""
    mt, jt, med = lat.meet_table, lat.join_table, lat.med_table
    lo, hi = x[0], x[0]
    for v in x[1:]:
        lo, hi = mt[lo, v], jt[hi, v]
    return med[a, med[lo, b, hi], d]


# -- variadic -----------------------------------------------------------


@dataclass(frozen=True)
class VariadicPolynomial:
    """``g_1(x) = a1 v (d1 ^ x)`` and, for every ``n >= 2``, ``g_n`` is the
    four-parameter form with ``(a2, b2, c2, d2)``.

    Construction enforces ``a1 <= a2`` and ``d2 <= d1`` on the normalized
    values; without them the family is not associative.
    """

    lattice: Lattice
    a1: int
    d1: int
    a2: int
    b2: int
    c2: int
    d2: int

    def __post_init__(self):
        lat = self.lattice
        for v in (self.a1, self.d1, self.a2, self.b2, self.c2, self.d2):
            lat.check(v)
        a1, d1 = self.unary_values()
        p = self.binary_params()
        if not (lat.leq(a1, p.a) and lat.leq(p.d, d1)):
            raise InvalidParameters(
                "need a1 <= a2 and d2 <= d1 (after normalization), got "
                f"a1={lat.name(a1)} a2={lat.name(p.a)} d1={lat.name(d1)} d2={lat.name(p.d)}"
            )

    def unary_values(self) -> tuple[int, int]:
        """``(g_1(0), g_1(1))``."""
        return self.a1, self.lattice.join(self.a1, self.d1)

    def binary_params(self) -> AssocParams:
        return AssocParams(self.a2, self.b2, self.c2, self.d2).normalized(self.lattice, 2)

    def normalized(self) -> "VariadicPolynomial":
        a1, d1 = self.unary_values()
        p = self.binary_params()
        return VariadicPolynomial(self.lattice, a1, d1, p.a, p.b, p.c, p.d)

    def component(self, n: int) -> PolynomialFn:
        lat = self.lattice
        if n < 1:
            raise ArityError("components start at arity 1")
        if n == 1:
            a1, d1 = self.unary_values()
            return PolynomialFn(lat, 1, (a1, d1))
        return construct_nary(lat, n, self.binary_params())

    def to_table(self, maxlen: int) -> "VariadicTable":
        return VariadicTable(
            self.lattice, tuple(self.component(n).table() for n in range(1, maxlen + 1))
        )


def eval_variadic(g: VariadicPolynomial, x: Sequence[int], method: str = "formula") -> int:
    """Evaluate ``g`` on a nonempty string.

    ``method="formula"`` uses the closed form of the component;
    ``method="fold"`` computes ``g2(...g2(g2(x1 x2) x3)... xn)`` for ``n > 2``.
    The empty string is rejected: its value is the empty string, not an element.
    """
    if len(x) == 0:
        raise ArityError("variadic functions are evaluated on nonempty strings only")
    if method == "formula" or len(x) <= 2:
        return g.component(len(x))(*x)
    if method != "fold":
        raise ValueError(f"unknown method {method!r}")
    g2 = g.component(2)
    acc = g2(x[0], x[1])
    for v in x[2:]:
        acc = g2(acc, v)
    return acc


@dataclass(frozen=True)
class VariadicTable:
    """Explicit components ``g_1 .. g_maxlen`` of a function on strings."""

    lattice: Lattice
    components: tuple[FunctionTable, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ArityError("a variadic table needs at least one component")
        for n, comp in enumerate(self.components, start=1):
            if comp.arity != n:
                raise ArityError(f"component {n} has arity {comp.arity}")
            if comp.lattice != self.lattice:
                raise LatpolyError(f"component {n} lives on a different lattice")

    @property
    def maxlen(self) -> int:
        return len(self.components)

    def __getitem__(self, n: int) -> np.ndarray:
        """Value array of component ``g_n`` (one-based)."""
        return self.components[n - 1].values

    def __call__(self, *x: int) -> int:
        if not 1 <= len(x) <= self.maxlen:
            raise ArityError(f"string length {len(x)} outside 1..{self.maxlen}")
        return self.components[len(x) - 1](*x)

    def truncate(self, maxlen: int) -> "VariadicTable":
        return VariadicTable(self.lattice, self.components[:maxlen])

    @classmethod
    def from_fold(cls, g1: FunctionTable, g2: FunctionTable, maxlen: int) -> "VariadicTable":
        """``g_n`` for ``n > 2`` folds ``g2`` from the left."""
        lat = g1.lattice
        comps = [g1, g2][:maxlen]
        for n in range(3, maxlen + 1):
            grid = np.indices((lat.size,) * n)
            acc = g2.values[grid[0], grid[1]]
            for i in range(2, n):
                acc = g2.values[acc, grid[i]]
            comps.append(FunctionTable(lat, n, acc))
        return cls(lat, tuple(comps))


Variadic = Union[VariadicTable, VariadicPolynomial]


def as_table(g: Variadic, maxlen: int) -> VariadicTable:
    if isinstance(g, VariadicPolynomial):
        return g.to_table(maxlen)
    if g.maxlen < maxlen:
        raise ArityError(f"table only defines components up to {g.maxlen}")
    return g.truncate(maxlen)


class SplitWitness(NamedTuple):
    """``g(g(string[:split]) g(string[split:])) != g(string)``."""

    string: tuple[int, ...]
    split: int


def _first(bad: np.ndarray):
    hits = np.argwhere(bad)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def variadic_associativity_witness(g: Variadic, maxlen: int) -> SplitWitness | None:
    """Shortest, then lexicographically least, string with a failing split."""
    if maxlen < 1:
        raise ArityError("maxlen must be at least 1")
    t = as_table(g, maxlen)
    size = t.lattice.size
    for m in range(1, maxlen + 1):
        grid = list(np.indices((size,) * m))
        target = t[m]
        fails = []
        for s in range(m + 1):
            inner = []
            if s > 0:
                inner.append(t[s][tuple(grid[:s])])
            if s < m:
                inner.append(t[m - s][tuple(grid[s:])])
            inner = np.broadcast_arrays(*inner)
            fails.append(t[len(inner)][tuple(inner)] != target)
        w = _first(np.logical_or.reduce(fails))
        if w is not None:
            split = next(s for s, f in enumerate(fails) if f[w])
            return SplitWitness(w, split)
    return None


def is_associative_variadic(g: Variadic, maxlen: int) -> bool:
    """``g(g(x) g(y)) = g(xy)`` for all strings ``xy`` of length at most ``maxlen``."""
    return variadic_associativity_witness(g, maxlen) is None


class BlockWitness(NamedTuple):
    """``g(x g(y) z) != g(xyz)`` for ``y = string[start:start+length]``."""

    string: tuple[int, ...]
    start: int
    length: int


def substitution_witness(g: Variadic, maxlen: int) -> BlockWitness | None:
    """Violation of ``g(x g(y) z) = g(xyz)`` with ``y`` nonempty, ``|xyz| <= maxlen``."""
    t = as_table(g, maxlen)
    size = t.lattice.size
    for m in range(1, maxlen + 1):
        grid = list(np.indices((size,) * m))
        target = t[m]
        cases = []
        for length in range(1, m + 1):
            for start in range(m - length + 1):
                inner = t[length][tuple(grid[start : start + length])]
                outer = grid[:start] + [inner] + grid[start + length :]
                outer = np.broadcast_arrays(*outer)
                cases.append(((start, length), t[len(outer)][tuple(outer)] != target))
        w = _first(np.logical_or.reduce([c[1] for c in cases]))
        if w is not None:
            start, length = next(key for key, bad in cases if bad[w])
            return BlockWitness(w, start, length)
    return None


def is_associative_substitution(g: Variadic, maxlen: int) -> bool:
    return substitution_witness(g, maxlen) is None


def is_range_idempotent_variadic(g: Variadic, maxlen: int) -> bool:
    """``g(g(x)^r) = g(x)`` for ``|x| <= maxlen`` and ``1 <= r <= maxlen``."""
    t = as_table(g, maxlen)
    for m in range(1, maxlen + 1):
        v = t[m]
        for r in range(1, maxlen + 1):
            if not np.array_equal(t[r][(v,) * r], v):
                return False
    return True


def is_string_idempotent_variadic(g: Variadic, maxlen: int) -> bool:
    """``g(x^r) = g(x)`` whenever ``r * |x| <= maxlen``."""
    t = as_table(g, maxlen)
    size = t.lattice.size
    for m in range(1, maxlen + 1):
        grid = tuple(np.indices((size,) * m))
        for r in range(2, maxlen // m + 1):
            if not np.array_equal(t[r * m][grid * r], t[m]):
                return False
    return True


def is_strongly_idempotent_variadic(g: Variadic, maxlen: int) -> bool:
    """``g(x g(x y z) z) = g(x y z)`` for every string and slot."""
    t = as_table(g, maxlen)
    return all(
        all(
            np.array_equal(_replace_slot(t[m], k), t[m])
            for k in range(m)
        )
        for m in range(1, maxlen + 1)
    )


def _replace_slot(vals: np.ndarray, k: int) -> np.ndarray:
    idx = list(np.indices(vals.shape))
    idx[k] = vals
    return vals[tuple(idx)]


def extend_to_variadic(
    f: PolynomialFn, budget: int | None = DEFAULT_BUDGET
) -> VariadicPolynomial:
    """An associative variadic polynomial function whose ``n``-th component is ``f``.

    The unary component is pinned to ``a1 = a`` and ``d1 = d``.
    """
    p = classify_nary(f, budget).normalized(f.lattice, f.arity)
    return VariadicPolynomial(f.lattice, p.a, p.d, p.a, p.b, p.c, p.d)


def variadic_parameter_space(lat: Lattice):
    """All normalized, valid six-parameter families, each once."""
    leq = lat.leq_table
    quads = sorted(
        {p.normalized(lat) for p in nary_quadruples(lat)},
        key=lambda p: (p.a, p.b, p.c, p.d),
    )
    for p in quads:
        for a1, d1 in itertools.product(lat.elements, repeat=2):
            if leq[a1, d1] and leq[a1, p.a] and leq[p.d, d1]:
                yield VariadicPolynomial(lat, a1, d1, p.a, p.b, p.c, p.d)
