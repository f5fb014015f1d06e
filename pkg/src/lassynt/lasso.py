"""Lasso words ``u v^omega`` and the bounded-lasso input languages."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm
from typing import Hashable, Iterable, Iterator, Sequence

Letter = Hashable


@dataclass(frozen=True)
class Lasso:
    u: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if not self.v:
            raise ValueError("lasso period must be nonempty")

    def __len__(self) -> int:
        return len(self.u) + len(self.v)

    @property
    def base(self) -> tuple:
        return self.u + self.v

    @property
    def loop_start(self) -> int:
        return len(self.u)

    def letter(self, j: int):
        """Letter at position ``j`` of the infinite word."""
        return self.base[delta(j, len(self), len(self.u))]

    def map(self, fn) -> "Lasso":
        return Lasso(tuple(map(fn, self.u)), tuple(map(fn, self.v)))


def delta(j: int, k: int, j_prime: int) -> int:
    """Base position of infinite-word index ``j`` for a length-``k`` lasso looping to ``j_prime``."""
    if not 0 <= j_prime < k:
        raise ValueError(f"loop start {j_prime} outside [0, {k})")
    if j < 0:
        raise ValueError("negative position")
    if j < k:
        return j
    return (j - k) % (k - j_prime) + j_prime


def unroll(lasso: Lasso, length: int) -> tuple:
    """First ``length`` letters of ``u v^omega``."""
    if length < 0:
        raise ValueError("negative length")
    u, v = lasso.u, lasso.v
    if length <= len(u):
        return u[:length]
    rest = length - len(u)
    reps = -(-rest // len(v))
    return u + (v * reps)[:rest]


def word_eq(l1: Lasso, l2: Lasso) -> bool:
    """Exact equality of the two infinite words."""
    bound = max(len(l1.u), len(l2.u)) + lcm(len(l1.v), len(l2.v))
    return unroll(l1, bound) == unroll(l2, bound)


def lassos_of_length(alphabet: Sequence[Letter], k: int) -> Iterator[Lasso]:
    """All ``(u, v)`` with ``|u v| = k``, ordered by ``|u|`` then base in alphabet order."""
    if k < 1:
        raise ValueError("lasso length must be at least 1")
    for split in range(k):
        for base in itertools.product(alphabet, repeat=k):
            yield Lasso(base[:split], base[split:])


@dataclass(frozen=True)
class CanonicalWord:
    """A length-``k`` lasso word identified by its ``2k`` unrolling.

    ``rep`` is the least lasso (by ``|u|``, then base in alphabet order) that
    denotes the word; it does not take part in equality.
    """
    k: int
    unrolling: tuple
    rep: Lasso

    def __eq__(self, other):
        if not isinstance(other, CanonicalWord):
            return NotImplemented
        return self.k == other.k and self.unrolling == other.unrolling

    def __hash__(self):
        return hash((self.k, self.unrolling))


def canonical_word(lasso: Lasso, k: int | None = None) -> CanonicalWord:
    k = len(lasso) if k is None else k
    return CanonicalWord(k, unroll(lasso, 2 * k), lasso)


def enumerate_k_words(alphabet: Sequence[Letter], k: int) -> list[CanonicalWord]:
    """One representative per distinct infinite word of lasso length ``k``.

    The result is ordered by first occurrence in ``lassos_of_length`` so the
    representative of each word is its canonical (least) lasso.
    """
    seen: dict[tuple, CanonicalWord] = {}
    for lasso in lassos_of_length(alphabet, k):
        key = unroll(lasso, 2 * k)
        if key not in seen:
            seen[key] = CanonicalWord(k, key, lasso)
    return list(seen.values())


def enumerate_k_words_bruteforce(alphabet: Sequence[Letter], k: int) -> list[Lasso]:
    """Deduplicate all length-``k`` lassos with pairwise ``word_eq``; slow but independent."""
    reps: list[Lasso] = []
    for lasso in lassos_of_length(alphabet, k):
        if not any(word_eq(lasso, r) for r in reps):
            reps.append(lasso)
    return reps


def representable_at(lasso: Lasso, k: int) -> bool:
    """Is the word of ``lasso`` denoted by some lasso of length exactly ``k``?"""
    if k < 1:
        return False
    # candidate letters come from the lasso itself; any other letter cannot occur
    word = unroll(lasso, k)
    for split in range(k):
        if word_eq(lasso, Lasso(word[:split], word[split:])):
            return True
    return False


def input_letters(inputs: Sequence[str]) -> list[frozenset]:
    """All valuations of ``inputs`` as sets, in binary counting order (bit ``b`` is ``inputs[b]``)."""
    return [frozenset(x for b, x in enumerate(inputs) if idx >> b & 1)
            for idx in range(2 ** len(inputs))]


def letter_index(letter: Iterable[str], inputs: Sequence[str]) -> int:
    letter = set(letter)
    return sum(1 << b for b, x in enumerate(inputs) if x in letter)


def format_letter(letter: Iterable[str], order: Sequence[str] | None = None) -> str:
    names = [x for x in order if x in letter] if order is not None else sorted(letter)
    return "{" + ",".join(names) + "}"


def format_lasso(lasso: Lasso, order: Sequence[str] | None = None) -> str:
    u = " ".join(format_letter(a, order) for a in lasso.u)
    v = " ".join(format_letter(a, order) for a in lasso.v)
    return f"{u} ({v})^w".strip() if u else f"({v})^w"
