"""Acceptance criteria, one test per criterion.

The terminal summary prints one PASS/FAIL line per criterion number.
"""

import itertools

import numpy as np
import pytest

from latpoly import poly
from latpoly.assoc import (
    AssocParams,
    VariadicPolynomial,
    construct_nary,
    enumerate_associative_nary,
    is_associative_nary,
    is_associative_substitution,
    is_associative_variadic,
    nary_quadruples,
    reduced_symmetric_form,
    symmetric_median_form,
    variadic_associativity_witness,
)
from latpoly.cli import main
from latpoly.errors import InvalidParameters
from latpoly.lattice import boolean, chain
from latpoly.poly import PolynomialFn
from latpoly.theorems import (
    DEFAULT_SEED,
    sample_variadic_tables,
    term_function_names,
    verify,
    violation_family,
    violation_keys,
)

pytestmark = pytest.mark.acceptance

criterion = pytest.mark.criterion


@criterion(1, "associative polynomial functions: table scan equals quadruple construction")
@pytest.mark.parametrize("k,n", [(2, 2), (2, 3), (3, 2)])
def test_c01_completeness_by_table_scan(k, n):
    lat = chain(k)
    scanned = {
        t for t in poly.all_tables(lat, n)
        if poly.is_polynomial(t) and is_associative_nary(t, budget=None)
    }
    constructed = {f.table() for f in enumerate_associative_nary(lat, n)}
    assert scanned == constructed
    assert len(scanned) > 0


@criterion(2, "six-parameter families are associative to maxlen 5")
@pytest.mark.parametrize("lat", [chain(3), boolean(2)], ids=lambda l: l.label)
def test_c02_sufficiency(lat):
    seen, accepted, failures = set(), 0, []
    for params in itertools.product(lat.elements, repeat=6):
        try:
            g = VariadicPolynomial(lat, *params)
        except InvalidParameters:
            continue
        accepted += 1
        # components depend on the normalized values only
        key = g.normalized()
        if key in seen:
            continue
        seen.add(key)
        if not is_associative_variadic(g, 5):
            failures.append(params)
    assert accepted > 0 and not failures


def _split_fails(fam, w):
    s, k = w.string, w.split
    inner = ([fam(*s[:k])] if k else []) + ([fam(*s[k:])] if k < len(s) else [])
    return fam(*inner) != fam(*s)


@criterion(3, "families breaking a parameter constraint are never associative")
def test_c03_necessity_grid():
    lat, maxlen = chain(3), 5
    keys = violation_keys(lat, maxlen)
    kinds = {key[0] for key in keys}
    assert "unary" in kinds and {"g3", "g4", "g5"} <= kinds
    cache, false_passes = {}, []
    for key in keys:
        fam = violation_family(lat, key, maxlen, cache)
        w = variadic_associativity_witness(fam, maxlen)
        if w is None or not _split_fails(fam, w):
            false_passes.append(key)
    assert not false_passes
    assert len(keys) > 5000


@criterion(4, "substitution and split formulations agree on 1000 seeded families")
def test_c04_formulations_agree():
    fams = sample_variadic_tables(chain(3), 4, 1000, seed=DEFAULT_SEED)
    assert len(fams) == 1000
    split = [is_associative_variadic(f, 4) for f in fams]
    subst = [is_associative_substitution(f, 4) for f in fams]
    assert split == subst
    assert 0 < sum(split) < len(fams)


def _chain3_population(rng, count):
    """Uniform random tables plus tables near the polynomial ones."""
    lat, out = chain(3), []
    for i in range(count):
        kind = i % 4
        if kind == 0:
            out.append(poly.random_table(lat, 2, rng))
        elif kind == 1:
            out.append(poly.random_polynomial(lat, 2, rng).table())
        elif kind == 2:
            out.append(poly.perturb(poly.random_polynomial(lat, 2, rng).table(), rng))
        else:
            out.append(poly.random_monotone_table(lat, 2, rng))
    return out


@criterion(5, "median decomposition agrees with the rebuild oracle")
def test_c05_median_vs_rebuild():
    c2 = chain(2)
    exhaustive = list(poly.all_tables(c2, 2)) + list(poly.all_tables(c2, 3))
    assert len(exhaustive) == 16 + 256
    sampled = _chain3_population(np.random.default_rng(DEFAULT_SEED), 10_000)
    disagreements = [
        t for t in exhaustive + sampled if poly.is_polynomial_median(t) != poly.is_polynomial(t)
    ]
    assert not disagreements
    n_poly = sum(poly.is_polynomial(t) for t in sampled)
    assert 0 < n_poly < len(sampled)


@criterion(6, "structural conditions: P8, T9 and C2 reports pass")
@pytest.mark.parametrize(
    "tag,lat",
    [(t, chain(k)) for t in ("P8", "T9", "C2") for k in (2, 3, 4)]
    + [(t, boolean(2)) for t in ("P8", "T9")],
    ids=lambda v: v if isinstance(v, str) else v.label,
)
def test_c06_conditions(tag, lat):
    r = verify(tag, lat, max_arity=3, maxlen=4)
    assert r.passed, r.witness
    if tag == "C2":
        assert r.details["conditions_used"] == "ac"
        assert r.details["implication_scan_tables"]


@criterion(7, "idempotency lemmas and the median identity, exhaustive on chain(3)")
@pytest.mark.parametrize("tag", ["L2", "L3", "L4"])
def test_c07_lemmas(tag):
    r = verify(tag, chain(3), max_arity=3, maxlen=5, exhaustive=True)
    assert r.passed, r.witness
    assert r.mode == "exhaustive"


@criterion(8, "symmetric median form equals the four-parameter form")
def test_c08_symmetric_form():
    lat = chain(3)
    quads = sorted({p.normalized(lat) for p in nary_quadruples(lat)}, key=lambda p: (p.a, p.b, p.c, p.d))
    for n in (1, 2, 3):
        grid = list(np.indices((lat.size,) * n))
        for p in quads:
            target = construct_nary(lat, n, p).table().values
            assert np.array_equal(symmetric_median_form(lat, p, n, grid), target)
            if p.b == p.c:
                assert np.array_equal(reduced_symmetric_form(lat, p.a, p.b, p.d, grid), target)
    assert verify("R2i", lat, max_arity=3).passed


def _naive_associative(f):
    t, n, lat = f.table(), f.arity, f.lattice
    for s in itertools.product(lat.elements, repeat=2 * n - 1):
        if len({t(*(s[:i] + (t(*s[i : i + n]),) + s[i + n :])) for i in range(n)}) > 1:
            return False
    return True


@criterion(9, "associative term functions: projections, meet, join and the constants")
@pytest.mark.parametrize("k", [2, 3])
def test_c09_term_functions(k):
    lat = chain(k)
    lo, hi = lat.bottom, lat.top
    for n in (2, 3):
        named = term_function_names(lat, n)
        found = set()
        for alpha in itertools.product((lo, hi), repeat=1 << n):
            f = PolynomialFn(lat, n, alpha)
            if _naive_associative(f):
                found.add(f)
        assert {named[key] for key in ("x1", "xn", "meet", "join")} <= found
        assert found <= set(named.values())
        assert {named["const0"], named["const1"]} <= found
    r = verify("R2ii", lat, max_arity=3)
    assert r.passed
    assert r.details["constants_associative"] is True
    assert r.details["remark_discrepancy"] is True


@criterion(10, "minimal coefficients preserve the function and cannot be thinned")
@pytest.mark.parametrize("lat", [chain(3), boolean(2)], ids=lambda l: l.label)
def test_c10_minimal_form(lat):
    rng = np.random.default_rng(DEFAULT_SEED)
    for i in range(1000):
        n = 1 + i % 3
        f = PolynomialFn(lat, n, tuple(int(v) for v in rng.integers(0, lat.size, 1 << n)))
        star = poly.minimal_alpha(f)
        table = f.table()
        assert star.table() == table
        for mask, v in enumerate(star.alpha):
            if v == lat.bottom:
                continue
            thinned = list(star.alpha)
            thinned[mask] = lat.bottom
            assert PolynomialFn(lat, n, tuple(thinned)).table() != table


GOLDEN_CASES = [
    (
        ["assoc", "classify", "--lattice", "chain3.json", "--poly", "meet3.json"],
        '{"associative": true, "a": "0", "b": "0", "c": "0", "d": "1"}\n',
    ),
    (
        ["poly", "eval", "--lattice", "chain3.json", "--expr", "med(x1,x2,x3)", "--args", "c1,0,1"],
        "c1\n",
    ),
]


@criterion(11, "CLI examples reproduce byte-exactly with one thread")
@pytest.mark.parametrize("argv,expected", GOLDEN_CASES, ids=["classify", "eval"])
def test_c11_cli_golden(argv, expected, capsys, monkeypatch, request):
    monkeypatch.chdir(request.path.parent / "golden")
    assert main(argv + ["--threads", "1"]) == 0
    assert capsys.readouterr().out == expected


@criterion(11, "CLI examples reproduce byte-exactly with one thread")
def test_c11_cli_verify_report(capsys, monkeypatch, request):
    golden = request.path.parent / "golden"
    monkeypatch.chdir(golden)
    argv = ["verify", "T5", "--lattice", "chain2.json", "--max-arity", "3", "--threads", "1"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert out == (golden / "verify_t5.out").read_text()
    assert out.startswith("T5    PASS chain2.json")
    assert "n=3: polynomials=20 associative=6 constructed=6" in out
