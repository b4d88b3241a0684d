"""Free-group words over the index universe.

A group word is a reduced tuple of signed letters (index, +1|-1); positive
words are plain tuples of indices.  Infinite words are restricted to the
eventually periodic ones, stored in a normal form (primitive period,
minimal preperiod) that makes equality of infinite words decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

GroupWord = Tuple[tuple, ...]  # ((letter, sign), ...), reduced
PositiveWord = Tuple  # (letter, ...)

EMPTY: GroupWord = ()


def reduce_letters(letters) -> GroupWord:
    """Stack reduction: cancel adjacent g g^-1 pairs."""
    out: list = []
    for letter, sign in letters:
        if out and out[-1][0] == letter and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((letter, sign))
    return tuple(out)


def from_positive(word: PositiveWord) -> GroupWord:
    return tuple((x, 1) for x in word)


def reduce_concat(t: GroupWord, s: GroupWord) -> GroupWord:
    return reduce_letters(list(t) + list(s))


def invert(t: GroupWord) -> GroupWord:
    return tuple((letter, -sign) for letter, sign in reversed(t))


def length(t: GroupWord) -> int:
    return len(t)


def decompose_pos_neg(t: GroupWord) -> Optional[tuple]:
    """Write t = alpha beta^-1 with |t| = |alpha| + |beta|, if possible.

    Exists iff no negative letter precedes a positive one in the reduced
    form; the decomposition is then unique.  Returns (alpha, beta) as
    positive words.
    """
    k = 0
    while k < len(t) and t[k][1] == 1:
        k += 1
    for letter, sign in t[k:]:
        if sign == 1:
            return None
    alpha = tuple(letter for letter, _ in t[:k])
    beta = tuple(letter for letter, _ in reversed(t[k:]))
    return alpha, beta


def conjugate_circuit_decomposition(t: GroupWord) -> Optional[tuple]:
    """The unique (alpha, gamma, sign) with t = alpha gamma^{sign} alpha^-1
    and |t| = 2|alpha| + |gamma|, when it exists."""
    if not t:
        raise ValueError("t must differ from the empty word")
    d = decompose_pos_neg(t)
    if d is None:
        return None
    mu, nu = d
    if len(nu) < len(mu) and mu[: len(nu)] == nu:
        return nu, mu[len(nu):], 1
    if len(mu) < len(nu) and nu[: len(mu)] == mu:
        return mu, nu[len(mu):], -1
    return None


def in_subtree(t: GroupWord, s: GroupWord, r: GroupWord) -> bool:
    """Whether r lies on t's side of the tree edge (t, s).

    Requires t^-1 s to be a single signed letter; the component containing
    t is exactly {r : |r^-1 s| = |r^-1 t| + 1}.
    """
    edge = reduce_concat(invert(t), s)
    if len(edge) != 1:
        raise ValueError("t^-1 s must be a single letter")
    inv_r = invert(r)
    return length(reduce_concat(inv_r, s)) == length(reduce_concat(inv_r, t)) + 1


@dataclass(frozen=True)
class EvPeriodicWord:
    """Eventually periodic positive word pre . per per per ... in normal form."""

    pre: PositiveWord
    per: PositiveWord

    @staticmethod
    def make(pre, per) -> "EvPeriodicWord":
        pre = tuple(pre)
        per = tuple(per)
        if not per:
            raise ValueError("period must be nonempty")
        n = len(per)
        for d in range(1, n + 1):
            if n % d == 0 and per == per[:d] * (n // d):
                per = per[:d]
                break
        pre_l, per_l = list(pre), list(per)
        while pre_l and pre_l[-1] == per_l[-1]:
            per_l.insert(0, per_l.pop())
            pre_l.pop()
        return EvPeriodicWord(tuple(pre_l), tuple(per_l))

    def letter_at(self, i: int) -> object:
        """0-based letter of the infinite word."""
        if i < len(self.pre):
            return self.pre[i]
        return self.per[(i - len(self.pre)) % len(self.per)]

    def prefix(self, n: int) -> PositiveWord:
        return tuple(self.letter_at(i) for i in range(n))

    def has_prefix(self, alpha: PositiveWord) -> bool:
        return all(self.letter_at(i) == a for i, a in enumerate(alpha))

    def drop(self, k: int) -> "EvPeriodicWord":
        """Remove the first k letters."""
        if k <= len(self.pre):
            return EvPeriodicWord.make(self.pre[k:], self.per)
        r = (k - len(self.pre)) % len(self.per)
        return EvPeriodicWord.make((), self.per[r:] + self.per[:r])

    def prepend(self, beta: PositiveWord) -> "EvPeriodicWord":
        return EvPeriodicWord.make(tuple(beta) + self.pre, self.per)

    def letters(self) -> set:
        return set(self.pre) | set(self.per)

    def render(self, fmt=str) -> str:
        pre = " ".join(fmt(x) for x in self.pre)
        per = " ".join(fmt(x) for x in self.per)
        return (pre + " " if pre else "") + f"( {per} )^inf"


def is_admissible(spec, word) -> bool:
    """Admissibility of a finite or eventually periodic positive word:
    every adjacent pair (including junction and period wrap) is an edge."""
    if isinstance(word, EvPeriodicWord):
        seq = list(word.pre) + list(word.per)
        pairs = list(zip(seq, seq[1:]))
        pairs.append((word.per[-1], word.per[0]))
    else:
        seq = list(word)
        pairs = list(zip(seq, seq[1:]))
    return all(spec.entry(a, b) == 1 for a, b in pairs)


def act_on_infinite(t: GroupWord, word: EvPeriodicWord) -> EvPeriodicWord:
    """Left multiplication t . (infinite word), cancelling t against the
    word's initial segment.  Defined when t = beta alpha^-1 with alpha a
    prefix of the word; the result replaces alpha by beta."""
    d = decompose_pos_neg(invert(t))
    if d is None:
        raise ValueError("t^-1 is not of the form alpha beta^-1")
    alpha, beta = d
    if not word.has_prefix(alpha):
        raise ValueError("cancellation does not match the word")
    return word.drop(len(alpha)).prepend(beta)
