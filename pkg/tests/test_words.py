from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schottky.moebius import FixedPointForm, apply, from_fixed_points
from schottky.words import (
    ReducedWord,
    alphabet,
    enumerate_coset_reps,
    enumerate_double_coset_reps,
    enumerate_reduced,
    evaluate_word,
    free_reduce,
)


def _all_words(g, n):
    return [free_reduce(w) for w in product(alphabet(g), repeat=n)]


def test_counts_examples():
    assert len(list(enumerate_reduced(2, 1))) == 4
    assert len(list(enumerate_reduced(2, 2))) == 12
    assert [tuple(w) for w in enumerate_reduced(1, 3)] == [(1, 1, 1), (-1, -1, -1)]


@pytest.mark.parametrize("g", [1, 2, 3, 4])
@pytest.mark.parametrize("n", range(0, 7))
def test_counting_formula(g, n):
    expect = 1 if n == 0 else 2 * g * (2 * g - 1) ** (n - 1)
    assert sum(1 for _ in enumerate_reduced(g, n)) == expect


def test_stream_order():
    ws = list(enumerate_reduced(2, 2))
    assert ws == sorted(ws, key=ReducedWord.sort_key)
    assert ws[0] == (1, 1) and ws[1] == (1, 2)


def test_coset_examples():
    assert [tuple(w) for w in enumerate_coset_reps(1, 1, 5)] == [()]
    assert [tuple(w) for w in enumerate_coset_reps(2, 1, 1)] == [(), (2,), (-2,)]


def _brute_cosets(g, i, n):
    """Classes of reduced words of length <= n modulo right multiplication by powers of gamma_i."""
    reps = set()
    for L in range(n + 1):
        for w in product(alphabet(g), repeat=L):
            w = free_reduce(w)
            while w and abs(w[-1]) == i:
                w = ReducedWord(w[:-1])
            reps.add(tuple(w))
    return reps


@pytest.mark.parametrize("g,i,n", [(2, 1, 3), (2, 2, 4), (3, 2, 3)])
def test_coset_distinctness_brute_force(g, i, n):
    got = [tuple(w) for w in enumerate_coset_reps(g, i, n)]
    assert len(got) == len(set(got))
    # no two reps differ by a right factor gamma_i^m
    for w in got:
        for m in (1, -1, 2, -2):
            moved = tuple(free_reduce(w + (i if m > 0 else -i,) * abs(m)))
            assert moved == w or moved not in got
    assert set(got) == _brute_cosets(g, i, n)


def test_double_coset_examples():
    assert [tuple(w) for w in enumerate_double_coset_reps(1, 1, 1, 4)] == [()]
    # a length-1 word must avoid +-1 as first letter and +-2 as last letter
    assert [tuple(w) for w in enumerate_double_coset_reps(2, 1, 2, 1)] == [()]
    assert [tuple(w) for w in enumerate_double_coset_reps(3, 1, 1, 1)] == [(), (2,), (-2,), (3,), (-3,)]


@pytest.mark.parametrize("g,i,j,n", [(2, 1, 2, 3), (3, 1, 1, 2), (3, 2, 3, 3)])
def test_double_coset_filter_brute_force(g, i, j, n):
    got = [tuple(w) for w in enumerate_double_coset_reps(g, i, j, n)]
    expect = [()]
    for L in range(1, n + 1):
        for w in product(alphabet(g), repeat=L):
            if all(a != -b for a, b in zip(w, w[1:])) and abs(w[0]) != i and abs(w[-1]) != j:
                expect.append(w)
    assert sorted(got) == sorted(expect)
    assert len(got) == len(set(got))


def test_reduced_word_validation():
    with pytest.raises(ValueError):
        ReducedWord((1, -1))
    with pytest.raises(ValueError):
        ReducedWord((0,))
    with pytest.raises(ValueError):
        ReducedWord((3,)).check_rank(2)
    assert ReducedWord((1, 2)).inverse() == (-2, -1)


def test_empty_word_is_identity():
    gens = [from_fixed_points(FixedPointForm(1.0, -1.0, 0.1))]
    assert evaluate_word((), gens).equals(gens[0] @ gens[0].inverse(), tol=1e-14)


@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_evaluate_is_left_to_right(z):
    gens = [from_fixed_points(FixedPointForm(1.0, -1.0, 0.1)), from_fixed_points(FixedPointForm(1j, -1j, 0.2))]
    m = evaluate_word((1, 2), gens)
    w = apply(gens[1], z)
    expect = apply(gens[0], w)
    got = apply(m, z)
    if isinstance(got, complex) and isinstance(expect, complex):
        assert abs(got - expect) <= 1e-9 * (1 + abs(expect))
