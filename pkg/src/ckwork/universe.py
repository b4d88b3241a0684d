"""Index universes and finitely-described subsets of them.

A universe is either a finite ordered list of named generators or a
finite list of named tracks, each track a disjoint copy of {1, 2, 3, ...}.
An index is a bare name (finite universe) or a pair (track, n) with n >= 1.

Subsets of a tracked universe are kept exact by storing, per track, the
characteristic sequence n -> 0/1 as an eventually periodic bit stream in
normal form.  Every Boolean operation is again such a set, so membership,
finiteness, equality, union, intersection, difference and complement are
all decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Optional, Union

Index = Union[str, tuple]  # bare name, or (track, n)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True)
class BitStream:
    """Eventually periodic 0/1 sequence over n = 1, 2, 3, ... in normal form.

    Normal form: the period is primitive and the preperiod is minimal, so
    structural equality decides sequence equality.
    """

    pre: tuple
    per: tuple

    @staticmethod
    def make(pre: Iterable[int], per: Iterable[int]) -> "BitStream":
        pre = tuple(int(bool(b)) for b in pre)
        per = tuple(int(bool(b)) for b in per)
        if not per:
            per = (0,)
        # primitive period
        n = len(per)
        for d in range(1, n + 1):
            if n % d == 0 and per == per[:d] * (n // d):
                per = per[:d]
                break
        # minimal preperiod: absorb matching tail into a rotated period
        pre_l = list(pre)
        per_l = list(per)
        while pre_l and pre_l[-1] == per_l[-1]:
            per_l.insert(0, per_l.pop())
            pre_l.pop()
        return BitStream(tuple(pre_l), tuple(per_l))

    @staticmethod
    def empty() -> "BitStream":
        return BitStream((), (0,))

    @staticmethod
    def full() -> "BitStream":
        return BitStream((), (1,))

    @staticmethod
    def singleton(n: int) -> "BitStream":
        return BitStream.make((0,) * (n - 1) + (1,), (0,))

    @staticmethod
    def tail(start: int, step: int = 1) -> "BitStream":
        """{n : n >= start, n == start (mod step)}"""
        return BitStream.make((0,) * (start - 1), (1,) + (0,) * (step - 1))

    @staticmethod
    def from_elements(elems: Iterable[int]) -> "BitStream":
        elems = sorted(set(elems))
        if not elems:
            return BitStream.empty()
        hi = elems[-1]
        bits = [0] * hi
        for e in elems:
            bits[e - 1] = 1
        return BitStream.make(bits, (0,))

    def value_at(self, n: int) -> int:
        if n < 1:
            return 0
        if n <= len(self.pre):
            return self.pre[n - 1]
        return self.per[(n - len(self.pre) - 1) % len(self.per)]

    def combine(self, other: "BitStream", op) -> "BitStream":
        L = max(len(self.pre), len(other.pre))
        P = _lcm(len(self.per), len(other.per))
        pre = [op(self.value_at(n), other.value_at(n)) for n in range(1, L + 1)]
        per = [op(self.value_at(n), other.value_at(n)) for n in range(L + 1, L + P + 1)]
        return BitStream.make(pre, per)

    def union(self, other):
        return self.combine(other, lambda a, b: a | b)

    def intersect(self, other):
        return self.combine(other, lambda a, b: a & b)

    def difference(self, other):
        return self.combine(other, lambda a, b: a & (1 - b))

    def complement(self) -> "BitStream":
        return BitStream.make(
            tuple(1 - b for b in self.pre), tuple(1 - b for b in self.per)
        )

    def shift(self, delta: int) -> "BitStream":
        """Characteristic stream of {n + delta : n in S} clipped to n >= 1."""
        if delta == 0:
            return self
        if delta > 0:
            return BitStream.make((0,) * delta + self.pre, self.per)
        k = -delta
        if k <= len(self.pre):
            return BitStream.make(self.pre[k:], self.per)
        r = (k - len(self.pre)) % len(self.per)
        return BitStream.make((), self.per[r:] + self.per[:r])

    def is_empty(self) -> bool:
        return not any(self.pre) and not any(self.per)

    def is_finite(self) -> bool:
        return not any(self.per)

    def finite_elements(self) -> list:
        # valid only when is_finite()
        return [n + 1 for n, b in enumerate(self.pre) if b]

    def first_tail(self) -> Optional[tuple]:
        """Some arithmetic progression (start, step) inside the set, if infinite."""
        for i, b in enumerate(self.per):
            if b:
                return (len(self.pre) + i + 1, len(self.per))
        return None

    def min_element(self) -> Optional[int]:
        for n, b in enumerate(self.pre):
            if b:
                return n + 1
        for i, b in enumerate(self.per):
            if b:
                return len(self.pre) + i + 1
        return None

    def eventually_one_on_class(self, residue: int, modulus: int) -> bool:
        """True iff value_at(n) = 1 for every large n with n == residue (mod modulus).

        Requires len(per) to divide modulus, which callers arrange by taking lcms.
        """
        base = len(self.pre)
        # first position beyond the preperiod in the residue class
        n0 = base + 1 + ((residue - base - 1) % modulus)
        if modulus % len(self.per) != 0:
            # fall back to sampling one full lcm block
            M = _lcm(modulus, len(self.per))
            return all(self.value_at(n0 + k * modulus) for k in range(M // modulus))
        return self.value_at(n0) == 1

    def iter_elements(self, limit: int) -> Iterator[int]:
        for n in range(1, limit + 1):
            if self.value_at(n):
                yield n


class Universe:
    """The index set G: finite named generators, or named tracks of naturals."""

    def __init__(self, kind: str, names: Iterable[str]):
        if kind not in ("finite", "tracked"):
            raise ValueError(f"unknown universe kind {kind!r}")
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        if kind == "tracked" and not names:
            raise ValueError("tracked universe needs at least one track")
        if kind == "finite" and not names:
            raise ValueError("finite universe needs at least one generator")
        self.kind = kind
        self.names = names
        self._order = {n: i for i, n in enumerate(names)}

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __eq__(self, other):
        return (
            isinstance(other, Universe)
            and self.kind == other.kind
            and self.names == other.names
        )

    def __hash__(self):
        return hash((self.kind, self.names))

    def __repr__(self):
        return f"Universe({self.kind}, {list(self.names)})"

    def contains(self, idx: Index) -> bool:
        if self.kind == "finite":
            return isinstance(idx, str) and idx in self._order
        return (
            isinstance(idx, tuple)
            and len(idx) == 2
            and idx[0] in self._order
            and isinstance(idx[1], int)
            and idx[1] >= 1
        )

    def check_index(self, idx: Index) -> Index:
        if not self.contains(idx):
            raise ValueError(f"index {self.format_index(idx)!r} not in universe")
        return idx

    def generators(self) -> tuple:
        """All indices of a finite universe."""
        if self.kind != "finite":
            raise ValueError("generators() needs a finite universe")
        return self.names

    def sort_key(self, idx: Index):
        if self.kind == "finite":
            return (self._order[idx],)
        return (self._order[idx[0]], idx[1])

    def format_index(self, idx: Index) -> str:
        if isinstance(idx, tuple):
            return f"{idx[0]}[{idx[1]}]"
        return str(idx)

    def parse_index(self, text: str) -> Index:
        text = text.strip()
        if "[" in text:
            if not text.endswith("]"):
                raise ValueError(f"malformed index {text!r}")
            track, num = text[:-1].split("[", 1)
            if self.kind != "tracked" or track not in self._order:
                raise ValueError(f"unknown track {track!r}")
            n = int(num)
            if n < 1:
                raise ValueError(f"track index must be >= 1 in {text!r}")
            return (track, n)
        if self.kind != "finite" or text not in self._order:
            raise ValueError(f"unknown generator {text!r}")
        return text

    def empty_set(self) -> "IndexSet":
        return IndexSet(self)

    def full_set(self) -> "IndexSet":
        if self.kind == "finite":
            return IndexSet(self, names=self.names)
        return IndexSet(
            self, tracks={t: BitStream.full() for t in self.names}
        )


class IndexSet:
    """A decidable, finitely-described subset of a universe.

    Finite universes store a plain frozenset of names; tracked universes
    store one normalized BitStream per track.  Closed under all Boolean
    operations, with decidable equality and finiteness.
    """

    def __init__(self, universe: Universe, names=(), tracks=None):
        self.universe = universe
        if universe.kind == "finite":
            self.names = frozenset(names)
            self.tracks = {}
        else:
            self.names = frozenset()
            tracks = tracks or {}
            self.tracks = {
                t: s for t, s in tracks.items() if not s.is_empty()
            }

    # -- constructors ----------------------------------------------------

    @staticmethod
    def of(universe: Universe, indices: Iterable[Index]) -> "IndexSet":
        indices = list(indices)
        for i in indices:
            universe.check_index(i)
        if universe.kind == "finite":
            return IndexSet(universe, names=indices)
        per_track: dict = {}
        for t, n in indices:
            per_track.setdefault(t, []).append(n)
        return IndexSet(
            universe,
            tracks={t: BitStream.from_elements(ns) for t, ns in per_track.items()},
        )

    @staticmethod
    def track_tail(universe: Universe, track: str, start: int = 1, step: int = 1) -> "IndexSet":
        if universe.kind != "tracked" or track not in universe.names:
            raise ValueError(f"unknown track {track!r}")
        return IndexSet(universe, tracks={track: BitStream.tail(start, step)})

    # -- queries ----------------------------------------------------------

    def contains(self, idx: Index) -> bool:
        if self.universe.kind == "finite":
            return idx in self.names
        if not isinstance(idx, tuple):
            return False
        t, n = idx
        s = self.tracks.get(t)
        return bool(s and s.value_at(n))

    def is_empty(self) -> bool:
        if self.universe.kind == "finite":
            return not self.names
        return not self.tracks

    def is_finite(self) -> bool:
        if self.universe.kind == "finite":
            return True
        return all(s.is_finite() for s in self.tracks.values())

    def finite_elements(self) -> list:
        """Exhaustive sorted element list; requires is_finite()."""
        if not self.is_finite():
            raise ValueError("set is infinite")
        if self.universe.kind == "finite":
            return sorted(self.names, key=self.universe.sort_key)
        out = []
        for t, s in self.tracks.items():
            out.extend((t, n) for n in s.finite_elements())
        out.sort(key=self.universe.sort_key)
        return out

    def some_element(self) -> Optional[Index]:
        if self.universe.kind == "finite":
            if not self.names:
                return None
            return min(self.names, key=self.universe.sort_key)
        best = None
        for t in self.universe.names:
            s = self.tracks.get(t)
            if s is None:
                continue
            n = s.min_element()
            if n is not None:
                cand = (t, n)
                if best is None or self.universe.sort_key(cand) < self.universe.sort_key(best):
                    best = cand
        return best

    def infinite_tails(self) -> list:
        """One witness arithmetic progression (track, start, step) per infinite track."""
        out = []
        for t, s in self.tracks.items():
            tail = s.first_tail()
            if tail:
                out.append((t, tail[0], tail[1]))
        return out

    def iter_sample(self, per_track: int = 50) -> Iterator[Index]:
        """Finite elements plus a bounded sample of each infinite track part."""
        if self.universe.kind == "finite":
            yield from sorted(self.names, key=self.universe.sort_key)
            return
        for t in self.universe.names:
            s = self.tracks.get(t)
            if s is None:
                continue
            count = 0
            n = 1
            horizon = len(s.pre) + per_track * len(s.per)
            while count < per_track and n <= horizon:
                if s.value_at(n):
                    yield (t, n)
                    count += 1
                n += 1

    # -- algebra ----------------------------------------------------------

    def _combine(self, other: "IndexSet", setop, bitop) -> "IndexSet":
        if self.universe != other.universe:
            raise ValueError("sets over different universes")
        if self.universe.kind == "finite":
            return IndexSet(self.universe, names=setop(self.names, other.names))
        tracks = {}
        for t in self.universe.names:
            a = self.tracks.get(t, BitStream.empty())
            b = other.tracks.get(t, BitStream.empty())
            tracks[t] = a.combine(b, bitop)
        return IndexSet(self.universe, tracks=tracks)

    def union(self, other):
        return self._combine(other, frozenset.union, lambda a, b: a | b)

    def intersect(self, other):
        return self._combine(other, frozenset.intersection, lambda a, b: a & b)

    def difference(self, other):
        return self._combine(other, frozenset.difference, lambda a, b: a & (1 - b))

    def complement(self) -> "IndexSet":
        return self.universe.full_set().difference(self)

    def shift_track(self, delta: int) -> "IndexSet":
        """Shift every track component by delta (tracked universes only)."""
        return IndexSet(
            self.universe,
            tracks={t: s.shift(delta) for t, s in self.tracks.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, IndexSet) or self.universe != other.universe:
            return NotImplemented
        if self.universe.kind == "finite":
            return self.names == other.names
        return self.tracks == other.tracks

    def __hash__(self):
        if self.universe.kind == "finite":
            return hash((self.universe, self.names))
        return hash((self.universe, tuple(sorted(self.tracks.items()))))

    def render(self) -> str:
        """Stable text form, e.g. '{1, 2}' or '{x[1], y[3..]}'."""
        if self.universe.kind == "finite":
            inner = ", ".join(sorted(self.names, key=self.universe.sort_key))
            return "{" + inner + "}"
        parts = []
        for t in self.universe.names:
            s = self.tracks.get(t)
            if s is None:
                continue
            singles = [n + 1 for n, b in enumerate(s.pre) if b]
            parts.extend(f"{t}[{n}]" for n in singles)
            base = len(s.pre)
            for i, b in enumerate(s.per):
                if b:
                    start = base + i + 1
                    step = len(s.per)
                    parts.append(
                        f"{t}[{start}..]" if step == 1 else f"{t}[{start}.. step {step}]"
                    )
        return "{" + ", ".join(parts) + "}"

    def __repr__(self):
        return f"IndexSet {self.render()}"
