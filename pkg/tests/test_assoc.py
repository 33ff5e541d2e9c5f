import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latpoly import poly
from latpoly.assoc import (
    AssocParams,
    VariadicPolynomial,
    VariadicTable,
    classify_nary,
    construct_nary,
    corner_values,
    enumerate_associative_nary,
    eval_variadic,
    extend_to_variadic,
    is_associative_nary,
    is_associative_substitution,
    is_associative_variadic,
    is_range_idempotent_variadic,
    is_string_idempotent_variadic,
    is_strongly_idempotent_variadic,
    nary_associativity_witness,
    nary_quadruples,
    reduced_symmetric_form,
    substitution_witness,
    symmetric_median_form,
    variadic_associativity_witness,
    variadic_parameter_space,
)
from latpoly.errors import ArityError, BudgetExceeded, InvalidParameters, NotAssociative
from latpoly.lattice import boolean, chain
from latpoly.poly import FunctionTable, PolynomialFn

from conftest import TEST_LATTICES


def naive_nary_associative(t):
    """Collapse every block position of every string, one string at a time."""
    lat, n = t.lattice, t.arity
    if n == 1:
        # one block position only; the unary condition is idempotency
        return all(t(t(x)) == t(x) for x in lat.elements)
    for s in itertools.product(lat.elements, repeat=2 * n - 1):
        vals = {t(*(s[:i] + (t(*s[i : i + n]),) + s[i + n :])) for i in range(n)}
        if len(vals) > 1:
            return False
    return True


def naive_variadic_associative(g, maxlen):
    """Split form over every string and every split point."""
    lat = g.lattice
    for m in range(1, maxlen + 1):
        for s in itertools.product(lat.elements, repeat=m):
            for k in range(m + 1):
                inner = ([g(*s[:k])] if k else []) + ([g(*s[k:])] if k < m else [])
                if g(*inner) != g(*s):
                    return False
    return True


def median_form(lat, x, y):
    return lat.med(x, y, lat.top // 2)


def test_binary_examples(chain2, chain3):
    meet = FunctionTable.from_function(chain2, 2, chain2.meet)
    assert is_associative_nary(meet)
    proj = PolynomialFn.from_map(chain3, 2, {frozenset({1}): 2})
    assert is_associative_nary(proj)
    assert classify_nary(proj) == AssocParams(0, 2, 0, 2)
    f = construct_nary(chain3, 2, AssocParams(0, 0, 0, 2))
    assert f.table() == FunctionTable.from_function(chain3, 2, chain3.meet)


def test_ternary_median_not_associative(chain2):
    med = PolynomialFn.from_map(
        chain2, 3, {frozenset(s): 1 for s in ({1, 2}, {1, 3}, {2, 3}, {1, 2, 3})}
    )
    with pytest.raises(NotAssociative) as exc:
        classify_nary(med)
    w = exc.value.witness
    assert w.string == (0, 0, 0, 1, 1) and (w.i, w.j) == (0, 1)
    t = med.table()
    s = w.string
    assert t(*(s[:w.i] + (t(*s[w.i : w.i + 3]),) + s[w.i + 3 :])) != t(
        *(s[:w.j] + (t(*s[w.j : w.j + 3]),) + s[w.j + 3 :])
    )


def test_construct_from_ternary_params(chain3):
    c1 = chain3.index("c1")
    f = construct_nary(chain3, 3, AssocParams(0, c1, c1, 2))
    assert is_associative_nary(f)
    assert corner_values(f) == AssocParams(0, c1, c1, 2)


def test_unary_meaning(chain3):
    for a, d in itertools.product(chain3.elements, repeat=2):
        f = construct_nary(chain3, 1, AssocParams(a, 0, 0, d))
        assert is_associative_nary(f)
    bad = FunctionTable(chain3, 1, [1, 2, 0])
    w = nary_associativity_witness(bad)
    assert w.string == (0,)


def test_classify_round_trips(lattice):
    for n in (1, 2, 3):
        if n == 3 and lattice.size > 4:
            continue
        for f, p in enumerate_associative_nary(lattice, n).items():
            assert classify_nary(f).normalized(lattice, n) == p
            assert construct_nary(lattice, n, p) == f


@pytest.mark.parametrize("lat,n", [(chain(2), 2), (chain(2), 3), (chain(3), 2), (boolean(2), 2)])
def test_fast_check_matches_naive_on_polynomials(lat, n):
    for f in poly.enumerate_polynomials(lat, n):
        t = f.table()
        assert is_associative_nary(t) == naive_nary_associative(t)


def test_fast_check_matches_naive_on_random_tables():
    rng = np.random.default_rng(11)
    for lat in (chain(2), chain(3), boolean(2)):
        for n in (1, 2, 3):
            for _ in range(20):
                t = poly.random_table(lat, n, rng)
                assert is_associative_nary(t) == naive_nary_associative(t)
    # random tables are almost never associative: include some that are
    c3 = chain(3)
    for n in (2, 3):
        for f in list(enumerate_associative_nary(c3, n))[:10]:
            assert naive_nary_associative(f.table())


def test_enumerate_matches_exhaustive_scan(chain2):
    for n in (1, 2, 3):
        by_scan = {
            f for f in poly.enumerate_polynomials(chain2, n) if naive_nary_associative(f.table())
        }
        assert by_scan == set(enumerate_associative_nary(chain2, n))


def test_threads_do_not_change_witness(chain4):
    rng = np.random.default_rng(12)
    for _ in range(10):
        t = poly.random_table(chain4, 2, rng)
        assert nary_associativity_witness(t, threads=1) == nary_associativity_witness(t, threads=3)
    f = poly.random_polynomial(chain4, 3, rng)
    t = f.table()
    assert nary_associativity_witness(t, threads=1) == nary_associativity_witness(t, threads=4)


def test_budget(chain4):
    t = poly.random_table(chain4, 3, np.random.default_rng(0))
    with pytest.raises(BudgetExceeded):
        nary_associativity_witness(t, budget=100)
    nary_associativity_witness(t, budget=None)


def test_normalization_examples(chain3):
    p = AssocParams(1, 0, 0, 0)
    assert p.normalized(chain3) == AssocParams(1, 1, 1, 1)
    assert p.normalized(chain3, 1) == AssocParams(1, 1, 1, 1)
    assert AssocParams(0, 0, 1, 2).is_normalized(chain3)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(TEST_LATTICES), st.data())
def test_normalization_invariants(lat, data):
    a, b, c, d = (data.draw(st.integers(0, lat.size - 1)) for _ in range(4))
    n = data.draw(st.integers(1, 3))
    p = AssocParams(a, b, c, d)
    q = p.normalized(lat, n)
    assert q.normalized(lat, n) == q
    assert lat.leq(q.a, q.b) and lat.leq(q.a, q.c)
    assert lat.leq(lat.join(q.b, q.c), q.d)
    f = construct_nary(lat, n, p)
    assert construct_nary(lat, n, q) == f
    assert corner_values(f) == q


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(TEST_LATTICES[:4]), st.data())
def test_constructed_functions_are_associative(lat, data):
    quads = list(nary_quadruples(lat))
    p = data.draw(st.sampled_from(quads))
    n = data.draw(st.integers(1, 3))
    assert is_associative_nary(construct_nary(lat, n, p))


def test_symmetric_forms(lattice):
    for n in (2, 3):
        if n == 3 and lattice.size > 4:
            continue
        grid = list(np.indices((lattice.size,) * n))
        for f, p in enumerate_associative_nary(lattice, n).items():
            assert np.array_equal(symmetric_median_form(lattice, p, n, grid), f.table().values)
            if poly.is_symmetric(f):
                assert p.b == p.c
                assert np.array_equal(
                    reduced_symmetric_form(lattice, p.a, p.b, p.d, grid), f.table().values
                )
    with pytest.raises(ArityError):
        symmetric_median_form(lattice, AssocParams(0, 0, 0, 0), 2, [0])


def test_variadic_validation(chain3):
    with pytest.raises(InvalidParameters):
        VariadicPolynomial(chain3, 2, 2, 0, 0, 0, 2)
    with pytest.raises(InvalidParameters):
        VariadicPolynomial(chain3, 0, 0, 0, 0, 0, 2)
    g = VariadicPolynomial(chain3, 0, 2, 0, 0, 0, 2)
    assert eval_variadic(g, [2, 1, 2]) == 1
    with pytest.raises(ArityError):
        eval_variadic(g, [])


def test_variadic_fold_matches_formula(lattice):
    rng = np.random.default_rng(13)
    space = list(variadic_parameter_space(lattice))
    for k in rng.choice(len(space), size=min(len(space), 25), replace=False):
        g = space[k]
        for m in range(1, 7):
            for _ in range(5):
                x = [int(v) for v in rng.integers(0, lattice.size, m)]
                assert eval_variadic(g, x) == eval_variadic(g, x, method="fold")


def test_variadic_counts():
    assert len(list(variadic_parameter_space(chain(3)))) == 35
    assert len(list(variadic_parameter_space(boolean(2)))) == 64


def test_split_and_substitution_agree_with_naive():
    rng = np.random.default_rng(14)
    lat = chain(2)
    for _ in range(40):
        comps = [poly.random_table(lat, n, rng) for n in (1, 2, 3)]
        t = VariadicTable(lat, tuple(comps))
        naive = naive_variadic_associative(t, 3)
        assert is_associative_variadic(t, 3) == naive
        assert is_associative_substitution(t, 3) == naive
    for g in variadic_parameter_space(lat):
        t = g.to_table(4)
        assert naive_variadic_associative(t, 4)
        assert is_associative_variadic(g, 4) and is_associative_substitution(g, 4)


def test_variadic_witnesses_are_real(chain2):
    g1 = FunctionTable(chain2, 1, [0, 1])
    g2 = FunctionTable.from_function(chain2, 2, lambda x, y: 1 - x if x == y else x)
    t = VariadicTable.from_fold(g1, g2, 3)
    w = variadic_associativity_witness(t, 3)
    assert w is not None
    s, k = w.string, w.split
    inner = ([t(*s[:k])] if k else []) + ([t(*s[k:])] if k < len(s) else [])
    assert t(*inner) != t(*s)
    b = substitution_witness(t, 3)
    s = b.string
    rebuilt = s[: b.start] + (t(*s[b.start : b.start + b.length]),) + s[b.start + b.length :]
    assert t(*rebuilt) != t(*s)


def test_idempotency_predicates_on_meet_family(chain3):
    g = VariadicPolynomial(chain3, 0, 2, 0, 0, 0, 2)
    assert is_range_idempotent_variadic(g, 4)
    assert is_string_idempotent_variadic(g, 4)
    assert is_strongly_idempotent_variadic(g, 4)
    c1 = chain3.index("c1")
    shifted = VariadicPolynomial(chain3, 0, 2, c1, c1, c1, 2)
    # g1 = identity but g2(0, 0) = c1, so g(x x) != g(x)
    assert not is_string_idempotent_variadic(shifted, 4)


def test_extend(chain3):
    c1 = chain3.index("c1")
    for n in (1, 2, 3):
        for f in enumerate_associative_nary(chain3, n):
            g = extend_to_variadic(f)
            assert g.component(n) == f
            assert is_associative_variadic(g, 4)
    not_assoc = PolynomialFn.from_map(
        chain3, 3, {frozenset(s): 2 for s in ({1, 2}, {1, 3}, {2, 3})}
    )
    with pytest.raises(NotAssociative):
        extend_to_variadic(not_assoc)
    assert extend_to_variadic(construct_nary(chain3, 2, AssocParams(c1, c1, c1, c1))).a1 == c1


def test_from_fold_components(chain3):
    g = VariadicPolynomial(chain3, 0, 2, 0, 2, 0, 2)
    t = VariadicTable.from_fold(g.component(1).table(), g.component(2).table(), 5)
    assert t == g.to_table(5)
    with pytest.raises(ArityError):
        t(*([0] * 6))
