"""Reduced words in the free group on generators +-1..+-g.

Every stream is deterministic: by length, then lexicographically for the
letter order ``1 < -1 < 2 < -2 < ...``. Enumeration is depth-first and lazy,
so callers never need all words of a length in memory at once.
"""

from __future__ import annotations

from typing import Iterator, List, Sequence, Tuple

from .moebius import MoebiusMap, compose


def letter_order(k: int) -> int:
    """Sort key realizing ``1 < -1 < 2 < -2 < ...``."""
    return 2 * (abs(k) - 1) + (k < 0)


def alphabet(g: int) -> Tuple[int, ...]:
    return tuple(sorted((s * k for k in range(1, g + 1) for s in (1, -1)), key=letter_order))


class ReducedWord(tuple):
    """Cancellation-free word; ``(1, -1)`` and friends are rejected."""

    def __new__(cls, letters: Sequence[int] = ()):
        letters = tuple(int(k) for k in letters)
        for k in letters:
            if k == 0:
                raise ValueError("letter 0 is not a generator")
        for a, b in zip(letters, letters[1:]):
            if a == -b:
                raise ValueError(f"word {letters} is not reduced ({a} followed by {b})")
        return super().__new__(cls, letters)

    def check_rank(self, g: int) -> "ReducedWord":
        if any(abs(k) > g for k in self):
            raise ValueError(f"word {tuple(self)} uses a generator beyond rank {g}")
        return self

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple(-k for k in reversed(self)))

    def sort_key(self):
        return (len(self), tuple(letter_order(k) for k in self))

    def __repr__(self):
        return f"ReducedWord({tuple(self)})"


def free_reduce(letters: Sequence[int]) -> ReducedWord:
    out: List[int] = []
    for k in letters:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return ReducedWord(out)


def _extend(g: int, n: int, prefix: Tuple[int, ...], first_ok, last_ok) -> Iterator[Tuple[int, ...]]:
    letters = alphabet(g)
    if len(prefix) == n:
        if not prefix or last_ok(prefix[-1]):
            yield prefix
        return
    for k in letters:
        if prefix:
            if prefix[-1] == -k:
                continue
        elif not first_ok(k):
            continue
        yield from _extend(g, n, prefix + (k,), first_ok, last_ok)


def _always(_k):
    return True


def enumerate_reduced(g: int, n: int) -> Iterator[ReducedWord]:
    """All reduced words of length exactly ``n``: ``2g(2g-1)^(n-1)`` of them."""
    if g < 1 or n < 0:
        raise ValueError("need g >= 1 and n >= 0")
    for w in _extend(g, n, (), _always, _always):
        yield ReducedWord(w)


def enumerate_coset_reps(g: int, i: int, n: int) -> Iterator[ReducedWord]:
    """Representatives of ``Gamma / <gamma_i>`` of length <= n.

    The empty word and every reduced word whose last letter is not ``+-i``.
    """
    if not 1 <= i <= g:
        raise ValueError("need 1 <= i <= g")
    yield ReducedWord()
    for length in range(1, n + 1):
        for w in _extend(g, length, (), _always, lambda k: abs(k) != i):
            yield ReducedWord(w)


def enumerate_double_coset_reps(g: int, i: int, j: int, n: int) -> Iterator[ReducedWord]:
    """The set Phi_ij truncated at length n.

    The empty word plus reduced words with first letter not ``+-i`` and last
    letter not ``+-j``; these represent ``<gamma_i> \\ Gamma / <gamma_j>``.
    """
    if not (1 <= i <= g and 1 <= j <= g):
        raise ValueError("need 1 <= i, j <= g")
    yield ReducedWord()
    for length in range(1, n + 1):
        for w in _extend(g, length, (), lambda k: abs(k) != i, lambda k: abs(k) != j):
            yield ReducedWord(w)


def generator_table(gens: Sequence[MoebiusMap]) -> dict:
    """``{k: gamma_k}`` for k = +-1..+-g with ``gamma_{-k} = gamma_k^{-1}``."""
    table = {}
    for k, m in enumerate(gens, start=1):
        table[k] = m
        table[-k] = m.inverse()
    return table


def evaluate_word(w: Sequence[int], gens: Sequence[MoebiusMap]) -> MoebiusMap:
    """Left-to-right product ``gamma_{w_1} o ... o gamma_{w_n}``."""
    w = ReducedWord(w).check_rank(len(gens))
    if not gens:
        raise ValueError("need at least one generator")
    table = generator_table(gens)
    result = MoebiusMap.identity(gens[0].a)
    for k in w:
        result = compose(result, table[k])
    return result
