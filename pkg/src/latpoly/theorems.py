"""Exhaustive (or seeded, sampled) verification of the structural results.

Each tag names one result about associative polynomial functions; ``verify``
runs the matching check on one lattice within the given bounds and returns
a :class:`VerificationReport`.  Variadic statements quantify over strings of
every length; here they are checked up to ``maxlen`` and the report records
that bound.
"""

from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import assoc, poly
from .assoc import (
    AssocParams,
    VariadicPolynomial,
    VariadicTable,
    construct_nary,
    corner_values,
    enumerate_associative_nary,
    is_associative_nary,
    is_associative_substitution,
    is_associative_variadic,
    is_range_idempotent_variadic,
    is_string_idempotent_variadic,
    is_strongly_idempotent_variadic,
    nary_quadruples,
    reduced_symmetric_form,
    symmetric_median_form,
    variadic_associativity_witness,
)
from .errors import NotAChain
from .lattice import Lattice
from .poly import FunctionTable, PolynomialFn

DEFAULT_SEED = 20100917
DEFAULT_MAX_ARITY = 3
DEFAULT_MAXLEN = 5

# population sizes above which a verifier switches to seeded sampling
POLY_CAP = 5000
FAMILY_CAP = 1500
GRID_CAP = 3000


class Tag(str, enum.Enum):
    P1 = "P1"
    L2 = "L2"
    L3 = "L3"
    P3 = "P3"
    L4 = "L4"
    T5 = "T5"
    R2i = "R2i"
    R2ii = "R2ii"
    T7 = "T7"
    C1 = "C1"
    P8 = "P8"
    T9 = "T9"
    C2 = "C2"


DESCRIPTIONS = {
    Tag.P1: "substitution and split formulations of variadic associativity agree",
    Tag.L2: "associative g: range-idempotent iff g(x^n) = g(x)",
    Tag.L3: "associative range-idempotent g: g(x g(xyz) z) = g(xyz)",
    Tag.P3: "median decomposition decides polynomiality",
    Tag.L4: "median identity at characteristic vectors",
    Tag.T5: "associative polynomial functions are the four-parameter forms",
    Tag.R2i: "symmetric median rewriting of the four-parameter form",
    Tag.R2ii: "associative term functions",
    Tag.T7: "associative variadic polynomial functions are the six-parameter forms",
    Tag.C1: "associative n-ary polynomials extend to associative variadic ones",
    Tag.P8: "structural conditions (a)-(e) characterise polynomial functions",
    Tag.T9: "range-idempotent associative polynomial g: three characterisations",
    Tag.C2: "on chains, conditions (a) and (c) suffice",
}


@dataclass
class VerificationReport:
    theorem: str
    lattice: str
    bounds: dict
    passed: bool
    witness: Any = None
    evaluations: int = 0
    elapsed: float = 0.0
    mode: str = "exhaustive"
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("a failing report must carry a witness")

    @property
    def outcome(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "theorem": self.theorem,
            "description": DESCRIPTIONS[Tag(self.theorem)],
            "lattice": self.lattice,
            "bounds": dict(self.bounds),
            "outcome": self.outcome,
            "mode": self.mode,
            "seed": self.seed,
            "evaluations": self.evaluations,
            "witness": _jsonable(self.witness),
            "details": _jsonable(self.details),
        }
        if timing:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out

    def to_text(self, timing: bool = False) -> str:
        bounds = " ".join(f"{k}={v}" for k, v in self.bounds.items())
        seed = "" if self.seed is None else f" seed={self.seed}"
        head = (
            f"{self.theorem:<5} {self.outcome.upper():<4} {self.lattice}  "
            f"[{self.mode}{seed}] {bounds} evaluations={self.evaluations}"
        )
        if timing:
            head += f" elapsed={self.elapsed:.2f}s"
        lines = [head, f"      {DESCRIPTIONS[Tag(self.theorem)]}"]
        for key in sorted(self.details):
            lines.append(f"      {key}: {_plain(self.details[key])}")
        if not self.passed:
            lines.append(f"      witness: {_plain(self.witness)}")
        return "\n".join(lines)


def _plain(obj) -> str:
    """Compact text rendering for report lines."""
    if isinstance(obj, dict):
        return " ".join(f"{k}={_plain(v)}" for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_plain(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    return str(_jsonable(obj))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


class _Run:
    """Per-verification state: bounds, seeded RNG, evaluation tally."""

    def __init__(self, lat: Lattice, max_arity: int, maxlen: int, seed: int, samples: int | None, exhaustive: bool):
        self.lat = lat
        self.max_arity = max_arity
        self.maxlen = maxlen
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.samples = samples
        self.exhaustive = exhaustive
        self.sampled = False
        self.evaluations = 0

    def count(self, k: int = 1):
        self.evaluations += k

    def cap(self, default: int) -> int | None:
        return None if self.exhaustive else default

    def subsample(self, items: list, cap: int | None) -> list:
        if cap is None or len(items) <= cap:
            return items
        self.sampled = True
        idx = np.sort(self.rng.choice(len(items), size=cap, replace=False))
        return [items[i] for i in idx]

    def names(self, xs):
        return [self.lat.names[x] for x in xs]


class _Fail(Exception):
    def __init__(self, witness):
        self.witness = witness


# -- populations ---------------------------------------------------------


def _polynomials(run: _Run, n: int) -> list[PolynomialFn]:
    cap = run.cap(POLY_CAP)
    it = poly.enumerate_polynomials(run.lat, n)
    fs = list(it if cap is None else itertools.islice(it, cap + 1))
    if cap is not None and len(fs) > cap:
        run.sampled = True
        return [poly.random_polynomial(run.lat, n, run.rng).canonical() for _ in range(cap // 5)]
    return fs


def _tables(run: _Run, n: int) -> list[FunctionTable]:
    mode, tables = poly.table_population(
        run.lat, n, run.rng, samples=run.samples or 600
    )
    if mode == "sampled":
        run.sampled = True
    return tables


def _variadic_polys(run: _Run) -> list[VariadicPolynomial]:
    return run.subsample(list(assoc.variadic_parameter_space(run.lat)), run.cap(FAMILY_CAP))


def _unary_table(lat: Lattice, values) -> FunctionTable:
    return FunctionTable(lat, 1, list(values))


def associative_binary_ops(run: _Run) -> list[FunctionTable]:
    """Associative binary operations used to build non-polynomial families.

    Up to three elements every binary table is tried; beyond that the pool
    is the associative binary polynomials, their conjugates under element
    permutations, and ``x*y = h(x)`` / ``h(y)`` for idempotent maps ``h``.
    """
    lat = run.lat
    size = lat.size
    if poly.table_count(lat, 2) <= 20000:
        ops = []
        for t in poly.all_tables(lat, 2):
            run.count()
            if is_associative_nary(t):
                ops.append(t)
        return ops
    run.sampled = True
    base = [f.table() for f in enumerate_associative_nary(lat, 2)]
    pool = {t.values.tobytes(): t for t in base}
    perms = list(itertools.permutations(range(size))) if math.factorial(size) <= 24 else [
        tuple(run.rng.permutation(size)) for _ in range(24)
    ]
    for perm in perms:
        p = np.array(perm)
        inv = np.argsort(p)
        for t in base:
            v = inv[t.values[p[:, None], p[None, :]]]
            pool.setdefault(v.tobytes(), FunctionTable(lat, 2, v))
    x, y = np.indices((size, size))
    for _ in range(16):
        h = _random_idempotent(size, run.rng)
        for v in (h[x], h[y]):
            pool.setdefault(v.tobytes(), FunctionTable(lat, 2, v))
    ops = [t for t in pool.values() if is_associative_nary(t)]
    run.count(len(pool))
    return run.subsample(sorted(ops, key=lambda t: t.values.tobytes()), 60)


def _random_idempotent(size: int, rng) -> np.ndarray:
    """A map fixing a random nonempty image set and sending the rest into it."""
    image = rng.permutation(size)[: int(rng.integers(1, size + 1))]
    h = image[rng.integers(0, len(image), size)]
    h[image] = image
    return h


def fold_families(run: _Run, maxlen: int) -> list[VariadicTable]:
    """Associative families ``g_n = fold of g2`` over associative binary operations."""
    lat = run.lat
    size = lat.size
    ident = _unary_table(lat, range(size))
    if size**size <= 64:
        unaries = [_unary_table(lat, v) for v in itertools.product(range(size), repeat=size)]
    else:
        unaries = [ident] + [
            _unary_table(lat, run.rng.integers(0, size, size)) for _ in range(7)
        ]
        run.sampled = True
    families = []
    for g2 in associative_binary_ops(run):
        for g1 in unaries:
            fam = VariadicTable.from_fold(g1, g2, maxlen)
            run.count()
            if is_associative_variadic(fam.truncate(2), 2) and is_associative_variadic(fam, maxlen):
                families.append(fam)
    return run.subsample(families, run.cap(FAMILY_CAP))


def _random_component(lat: Lattice, n: int, rng) -> FunctionTable:
    return poly.random_table(lat, n, rng)


def random_variadic_tables(run: _Run, maxlen: int, count: int) -> list[VariadicTable]:
    """A seeded mix: polynomial families, fold families, one-cell perturbations
    of those, and families with unrelated random components."""
    lat, rng = run.lat, run.rng
    space = list(assoc.variadic_parameter_space(lat))
    folds = fold_families(run, maxlen)
    run.sampled = True
    out = []
    for i in range(count):
        kind = i % 4
        if kind == 0 or (kind == 2 and not folds):
            fam = space[int(rng.integers(len(space)))].to_table(maxlen)
        elif kind == 1 and folds:
            fam = folds[int(rng.integers(len(folds)))]
        elif kind == 2:
            base = folds[int(rng.integers(len(folds)))]
            k = int(rng.integers(0, maxlen))
            comps = list(base.components)
            comps[k] = poly.perturb(comps[k], rng)
            fam = VariadicTable(lat, tuple(comps))
        else:
            if rng.random() < 0.5:
                g1 = _random_component(lat, 1, rng)
                g2 = _random_component(lat, 2, rng)
                fam = VariadicTable.from_fold(g1, g2, maxlen)
            else:
                base = space[int(rng.integers(len(space)))].to_table(maxlen)
                k = int(rng.integers(0, maxlen))
                comps = list(base.components)
                comps[k] = poly.perturb(comps[k], rng)
                fam = VariadicTable(lat, tuple(comps))
        out.append(fam)
    return out


def sample_variadic_tables(
    lat: Lattice, maxlen: int, count: int, seed: int = DEFAULT_SEED
) -> list[VariadicTable]:
    """The seeded population the P1 check draws, outside a verification run."""
    run = _Run(lat, DEFAULT_MAX_ARITY, maxlen, seed, count, exhaustive=False)
    return random_variadic_tables(run, maxlen, count)


def _associative_families(run: _Run, maxlen: int) -> list[tuple[str, VariadicTable]]:
    fams = [(f"poly{_params(run, g)}", g.to_table(maxlen)) for g in _variadic_polys(run)]
    fams += [(f"fold#{i}", t) for i, t in enumerate(fold_families(run, maxlen))]
    return fams


def _params(run: _Run, g: VariadicPolynomial) -> str:
    vals = [g.a1, g.d1, g.a2, g.b2, g.c2, g.d2]
    return "(" + ",".join(run.names(vals)) + ")"


def _describe_table(run: _Run, t: FunctionTable) -> dict:
    return {"arity": t.arity, "values": run.names(t.flat())}


def _describe_family(run: _Run, t: VariadicTable) -> dict:
    return {f"g{c.arity}": run.names(c.flat()) for c in t.components[:2]}


# -- verifiers ------------------------------------------------------------


def _verify_p1(run: _Run) -> dict:
    fams = random_variadic_tables(run, run.maxlen, run.samples or 200)
    n_assoc = 0
    for fam in fams:
        run.count(2)
        split = is_associative_variadic(fam, run.maxlen)
        subst = is_associative_substitution(fam, run.maxlen)
        if split != subst:
            raise _Fail({"family": _describe_family(run, fam), "split": split, "substitution": subst})
        n_assoc += split
    return {"families": len(fams), "associative": n_assoc}


def _verify_l2(run: _Run) -> dict:
    fams = _associative_families(run, run.maxlen)
    n_ri = 0
    for name, fam in fams:
        run.count(2)
        ri = is_range_idempotent_variadic(fam, run.maxlen)
        si = is_string_idempotent_variadic(fam, run.maxlen)
        if ri != si:
            raise _Fail({"family": name, "range_idempotent": ri, "string_idempotent": si})
        n_ri += ri
    return {"associative_families": len(fams), "range_idempotent": n_ri}


def _verify_l3(run: _Run) -> dict:
    fams = _associative_families(run, run.maxlen)
    checked = 0
    for name, fam in fams:
        run.count()
        if not is_range_idempotent_variadic(fam, run.maxlen):
            continue
        checked += 1
        run.count()
        if not is_strongly_idempotent_variadic(fam, run.maxlen):
            raise _Fail({"family": name})
    return {"associative_range_idempotent_families": checked}


def _verify_p3(run: _Run) -> dict:
    sizes = {}
    for n in range(1, run.max_arity + 1):
        tables = _tables(run, n)
        n_poly = 0
        for t in tables:
            run.count(2)
            by_median = poly.is_polynomial_median(t)
            by_rebuild = poly.is_polynomial(t)
            if by_median != by_rebuild:
                raise _Fail({**_describe_table(run, t), "median": by_median, "rebuild": by_rebuild})
            n_poly += by_rebuild
        sizes[f"n={n}"] = {"tables": len(tables), "polynomial": n_poly}
    return sizes


def _verify_l4(run: _Run) -> dict:
    lat = run.lat
    med = lat.med_table
    sizes = {}
    for n in range(1, run.max_arity + 1):
        fs = _polynomials(run, n)
        full = (1 << n) - 1
        for f in fs:
            vals = f.table().values
            can = f.canonical_alpha
            for I in range(full):
                e_I = poly.characteristic_vector(lat, n, I)
                for k in range(n):
                    if I >> k & 1:
                        continue
                    for J in range(full + 1):
                        x = list(e_I)
                        x[k] = can[J]
                        run.count()
                        lhs = int(vals[tuple(x)])
                        rhs = int(med[can[I], can[J], can[I | 1 << k]])
                        if lhs != rhs:
                            raise _Fail({
                                "alpha": run.names(can),
                                "I": poly.mask_key(I), "J": poly.mask_key(J), "k": k + 1,
                            })
        sizes[f"n={n}"] = len(fs)
    return {"polynomials": sizes}


def _verify_t5(run: _Run) -> dict:
    lat = run.lat
    out = {}
    for n in range(1, run.max_arity + 1):
        before = run.sampled
        fs = _polynomials(run, n)
        full_population = run.sampled == before
        oracle = set()
        for f in fs:
            run.count()
            if is_associative_nary(f.table()):
                oracle.add(f)
        constructed = enumerate_associative_nary(lat, n)
        run.count(len(constructed))
        missing = [f for f in oracle if f not in constructed]
        if missing:
            raise _Fail({"n": n, "associative_but_not_constructed": run.names(missing[0].canonical_alpha)})
        if full_population:
            extra = [f for f in constructed if f not in oracle]
            if extra:
                raise _Fail({"n": n, "constructed_but_not_found": run.names(extra[0].canonical_alpha)})
        for f in oracle:
            p = corner_values(f)
            if construct_nary(lat, n, p) != f:
                raise _Fail({"n": n, "not_rebuilt_from_corners": run.names(f.canonical_alpha)})
        out[f"n={n}"] = {"polynomials": len(fs), "associative": len(oracle), "constructed": len(constructed)}
    return out


def _verify_r2i(run: _Run) -> dict:
    lat = run.lat
    quads = list(nary_quadruples(lat))
    out = {}
    for n in range(1, run.max_arity + 1):
        grid = list(np.indices((lat.size,) * n))
        symmetric = 0
        for p in quads:
            run.count()
            target = construct_nary(lat, n, p).table().values
            got = symmetric_median_form(lat, p, n, grid)
            if not np.array_equal(got, target):
                raise _Fail({"n": n, "params": run.names([p.a, p.b, p.c, p.d])})
            if p.b == p.c:
                symmetric += 1
                if not np.array_equal(reduced_symmetric_form(lat, p.a, p.b, p.d, grid), target):
                    raise _Fail({"n": n, "reduced_params": run.names([p.a, p.b, p.d])})
        out[f"n={n}"] = {"quadruples": len(quads), "symmetric": symmetric}
    return out


def term_function_names(lat: Lattice, n: int) -> dict[str, PolynomialFn]:
    lo, hi = lat.bottom, lat.top
    full = (1 << n) - 1
    proj_first = PolynomialFn(lat, n, tuple(hi if m & 1 else lo for m in range(full + 1)))
    proj_last = PolynomialFn(lat, n, tuple(hi if m >> (n - 1) & 1 else lo for m in range(full + 1)))
    meet = PolynomialFn(lat, n, tuple(hi if m == full else lo for m in range(full + 1)))
    join = PolynomialFn(lat, n, tuple(hi if m else lo for m in range(full + 1)))
    return {
        "x1": proj_first,
        "xn": proj_last,
        "meet": meet,
        "join": join,
        "const0": PolynomialFn(lat, n, (lo,) * (full + 1)),
        "const1": PolynomialFn(lat, n, (hi,) * (full + 1)),
    }


def _verify_r2ii(run: _Run) -> dict:
    lat = run.lat
    out = {}
    constants_pass = True
    for n in range(1, run.max_arity + 1):
        named = term_function_names(lat, n)
        found = []
        for f in poly.enumerate_polynomials(lat, n, values=[lat.bottom, lat.top]):
            run.count()
            if is_associative_nary(f.table()):
                found.append(f)
        labels = sorted({k for f in found for k, g in named.items() if g == f})
        unnamed = [f for f in found if f not in named.values()]
        if unnamed:
            raise _Fail({"n": n, "unexpected_associative_term": run.names(unnamed[0].canonical_alpha)})
        for k in ("x1", "xn", "meet", "join"):
            if named[k] not in found:
                raise _Fail({"n": n, "missing": k})
        consts = [k for k in ("const0", "const1") if named[k] in found]
        constants_pass &= len(consts) == 2
        out[f"n={n}"] = labels
    out["constants_associative"] = constants_pass
    # the four-function list leaves out the two constants, which also qualify
    out["remark_discrepancy"] = constants_pass
    return out


def _component_table(cache: dict, lat: Lattice, n: int, p: AssocParams) -> FunctionTable:
    key = (n, p)
    if key not in cache:
        cache[key] = construct_nary(lat, n, p).table()
    return cache[key]


def violation_keys(lat: Lattice, maxlen: int) -> list[tuple]:
    """Parameter choices whose families have associative polynomial components
    but break one of the six-parameter constraints: ``a1 <= a2``,
    ``d2 <= d1``, or some component ``g_m`` (``m >= 3``) built from
    parameters other than those of ``g2``.

    A key is ``(kind, (a1, d1), p2, (m, q) or None)``.
    """
    leq = lat.leq_table
    quads = sorted({p.normalized(lat) for p in nary_quadruples(lat)}, key=lambda p: (p.a, p.b, p.c, p.d))
    unaries = [(a1, d1) for a1, d1 in itertools.product(lat.elements, repeat=2) if leq[a1, d1]]
    keys = []
    for a1, d1 in unaries:
        for p2 in quads:
            if not (leq[a1, p2.a] and leq[p2.d, d1]):
                keys.append(("unary", (a1, d1), p2, None))
            for m in range(3, maxlen + 1):
                keys.extend((f"g{m}", (a1, d1), p2, (m, q)) for q in quads if q != p2)
    return keys


def violation_family(lat: Lattice, key: tuple, maxlen: int, cache: dict | None = None) -> VariadicTable:
    cache = {} if cache is None else cache
    _, (a1, d1), p2, dev = key
    comps = [PolynomialFn(lat, 1, (a1, d1)).table()]
    comps += [_component_table(cache, lat, n, p2) for n in range(2, maxlen + 1)]
    if dev is not None:
        m, q = dev
        comps[m - 1] = _component_table(cache, lat, m, q)
    return VariadicTable(lat, tuple(comps))


def _verify_t7(run: _Run) -> dict:
    lat, maxlen = run.lat, run.maxlen
    space = _variadic_polys(run)
    for g in space:
        run.count()
        w = variadic_associativity_witness(g, maxlen)
        if w is not None:
            raise _Fail({"family": _params(run, g), "string": run.names(w.string), "split": w.split})
    fold_len = min(maxlen, 6)
    for g in space:
        run.count()
        direct = g.to_table(fold_len)
        folded = VariadicTable.from_fold(direct.components[0], direct.components[1], fold_len)
        if direct != folded:
            raise _Fail({"family": _params(run, g), "fold_disagrees": True})
    keys = run.subsample(violation_keys(lat, maxlen), run.cap(GRID_CAP))
    cache: dict = {}
    for key in keys:
        run.count()
        if is_associative_variadic(violation_family(lat, key, maxlen, cache), maxlen):
            kind, (a1, d1), p2, dev = key
            raise _Fail({
                "violation": kind,
                "g1": run.names([a1, d1]),
                "g2": run.names([p2.a, p2.b, p2.c, p2.d]),
                "deviating": None if dev is None else run.names([dev[1].a, dev[1].b, dev[1].c, dev[1].d]),
            })
    return {"valid_families": len(space), "violating_families": len(keys), "fold_checked_to": fold_len}


def _verify_c1(run: _Run) -> dict:
    lat = run.lat
    out = {}
    for n in range(1, run.max_arity + 1):
        members = enumerate_associative_nary(lat, n)
        depth = max(run.maxlen, n)
        for f in members:
            run.count()
            g = assoc.extend_to_variadic(f)
            if g.component(n) != f or not is_associative_variadic(g, depth):
                raise _Fail({"n": n, "alpha": run.names(f.canonical_alpha)})
        out[f"n={n}"] = len(members)
    space = run.subsample(list(assoc.variadic_parameter_space(lat)), 300)
    for g in space:
        for n in range(1, run.max_arity + 1):
            run.count()
            if not is_associative_nary(g.component(n).table()):
                raise _Fail({"family": _params(run, g), "component": n})
    out["families_with_associative_components"] = len(space)
    return {"extended": out}


def _all_conditions_agree(run: _Run, t: FunctionTable) -> bool:
    run.count(6)
    conds = poly.conditions(t)
    return all(conds.values()) == poly.is_polynomial(t)


def _verify_p8(run: _Run) -> dict:
    out = {}
    for n in range(1, run.max_arity + 1):
        tables = _tables(run, n)
        n_poly = 0
        for t in tables:
            if not _all_conditions_agree(run, t):
                raise _Fail({**_describe_table(run, t), "conditions": poly.conditions(t)})
            n_poly += poly.is_polynomial(t)
        out[f"n={n}"] = {"tables": len(tables), "polynomial": n_poly}
    return out


def _components_polynomial(fam: VariadicTable) -> bool:
    return all(poly.is_polynomial(c) for c in fam.components)


def _corner_match(fam: VariadicTable) -> bool:
    lat = fam.lattice
    lo, hi = lat.bottom, lat.top
    return fam[2][lo, lo] == fam[1][lo] and fam[2][hi, hi] == fam[1][hi]


def _t9_predicates(run: _Run, fam: VariadicTable, which: str) -> tuple[bool, bool, bool]:
    run.count(3)
    maxlen = fam.maxlen
    ri = is_range_idempotent_variadic(fam, maxlen)
    polynomial = _components_polynomial(fam)
    first = ri and polynomial
    second = polynomial and bool(_corner_match(fam))
    third = ri and all(all(poly.conditions(c, which).values()) for c in fam.components)
    return first, second, third


def _verify_t9(run: _Run, which: str = "abcd") -> dict:
    fams = _associative_families(run, run.maxlen)
    counts = [0, 0, 0]
    for name, fam in fams:
        preds = _t9_predicates(run, fam, which)
        if len(set(preds)) != 1:
            raise _Fail({"family": name, "g1_g2": _describe_family(run, fam),
                         "i": preds[0], "ii": preds[1], "iii": preds[2]})
        for k, v in enumerate(preds):
            counts[k] += v
    return {"associative_families": len(fams), "range_idempotent_polynomial": counts[0],
            "conditions_used": which}


def _verify_c2(run: _Run) -> dict:
    if not run.lat.is_chain():
        raise NotAChain(f"{run.lat.label} is not a chain")
    out = _verify_t9(run, which="ac")
    scans = {}
    for n in range(1, run.max_arity + 1):
        tables = _tables(run, n)
        for t in tables:
            run.count(4)
            c = poly.conditions(t, "abcd")
            if c["a"] and not c["b"]:
                raise _Fail({**_describe_table(run, t), "a_without_b": True})
            if c["a"] and c["c"] and not c["d"]:
                raise _Fail({**_describe_table(run, t), "ac_without_d": True})
        scans[f"n={n}"] = len(tables)
    out["implication_scan_tables"] = scans
    return out


VERIFIERS: dict[Tag, Callable[[_Run], dict]] = {
    Tag.P1: _verify_p1,
    Tag.L2: _verify_l2,
    Tag.L3: _verify_l3,
    Tag.P3: _verify_p3,
    Tag.L4: _verify_l4,
    Tag.T5: _verify_t5,
    Tag.R2i: _verify_r2i,
    Tag.R2ii: _verify_r2ii,
    Tag.T7: _verify_t7,
    Tag.C1: _verify_c1,
    Tag.P8: _verify_p8,
    Tag.T9: _verify_t9,
    Tag.C2: _verify_c2,
}


def verify(
    theorem: Tag | str,
    lat: Lattice,
    max_arity: int = DEFAULT_MAX_ARITY,
    maxlen: int = DEFAULT_MAXLEN,
    seed: int = DEFAULT_SEED,
    samples: int | None = None,
    exhaustive: bool = False,
) -> VerificationReport:
    """Run one verification.

    ``samples`` sizes the random populations used where exhaustive
    enumeration is out of reach; ``exhaustive=True`` lifts the population
    caps entirely.  The seed is reported only when sampling happened.
    """
    tag = Tag(theorem)
    if max_arity < 1 or maxlen < 2:
        raise ValueError("need max_arity >= 1 and maxlen >= 2")
    run = _Run(lat, max_arity, maxlen, seed, samples, exhaustive)
    start = time.perf_counter()
    try:
        details = VERIFIERS[tag](run)
        passed, witness = True, None
    except _Fail as fail:
        details, passed, witness = {}, False, fail.witness
    elapsed = time.perf_counter() - start
    return VerificationReport(
        theorem=tag.value,
        lattice=lat.label,
        bounds={"max_arity": max_arity, "maxlen": maxlen},
        passed=passed,
        witness=witness,
        evaluations=run.evaluations,
        elapsed=elapsed,
        mode="sampled" if run.sampled else "exhaustive",
        seed=seed if run.sampled else None,
        details=details,
    )


def verify_all(lat: Lattice, **kwargs) -> list[VerificationReport]:
    """Every tag in order; the chain-only check is skipped on other lattices."""
    return [
        verify(tag, lat, **kwargs)
        for tag in Tag
        if tag is not Tag.C2 or lat.is_chain()
    ]


def bundled_lattices() -> list[Lattice]:
    from .lattice import boolean, chain, product

    return [chain(2), chain(3), chain(4), boolean(2), product(chain(3), chain(2))]
