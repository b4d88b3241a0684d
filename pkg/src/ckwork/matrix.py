"""Finitely-described 0-1 matrices over finite or tracked index universes.

A matrix is given by an ordered rule list evaluated with first-match
semantics: exceptions beat rules, earlier rules beat later ones, and a
default closes the gaps.  Rectangle rules set a constant on a product of
describable sets; diagonal rules set a constant on an affine diagonal
(row T[n+p], column U[n+q] for n >= n0, optionally n stepping by d).

Everything the rest of the system asks of the matrix (entries, row and
column supports, A(X,Y,.) supports, cluster points of the column family,
unitality) is answered exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional

from .universe import BitStream, Index, IndexSet, Universe


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True)
class RectRule:
    rows: IndexSet
    cols: IndexSet
    value: int


@dataclass(frozen=True)
class DiagRule:
    """Entries (row_track[n+row_off], col_track[n+col_off]) = value
    for n >= start with n == start (mod step)."""

    row_track: str
    row_off: int
    col_track: str
    col_off: int
    start: int
    step: int
    value: int

    def match_n(self, i: Index, j: Index) -> Optional[int]:
        """The diagonal parameter n matching the cell (i, j), if any."""
        if not (isinstance(i, tuple) and isinstance(j, tuple)):
            return None
        if i[0] != self.row_track or j[0] != self.col_track:
            return None
        n = i[1] - self.row_off
        if n != j[1] - self.col_off:
            return None
        if n < self.start or (n - self.start) % self.step != 0:
            return None
        return n


class SupportReport:
    """Support of j -> A(X, Y, j): exhaustive list when finite, witness set otherwise."""

    def __init__(self, support: IndexSet):
        self.support = support
        self.finite = support.is_finite()

    @property
    def elements(self):
        if self.finite:
            return self.support.finite_elements()
        return None

    def witness_tails(self):
        return self.support.infinite_tails()

    def __repr__(self):
        kind = "finite" if self.finite else "infinite"
        return f"SupportReport({kind}, {self.support.render()})"


class MatrixSpec:
    """A validated 0-1 matrix with no identically zero rows.

    Immutable after construction; the internal caches only memoize pure
    recomputable values, so concurrent queries need no coordination.
    """

    def __init__(
        self,
        universe: Universe,
        rules: Iterable = (),
        default: int = 0,
        exceptions: Iterable = (),
        validate: bool = True,
    ):
        self.universe = universe
        self.rules = tuple(rules)
        self.default = int(bool(default))
        self.exceptions = {}
        for i, j, v in exceptions:
            universe.check_index(i)
            universe.check_index(j)
            if (i, j) in self.exceptions:
                raise ValueError(
                    f"overlapping exception at ({universe.format_index(i)}, "
                    f"{universe.format_index(j)})"
                )
            self.exceptions[(i, j)] = int(bool(v))
        for r in self.rules:
            if isinstance(r, DiagRule):
                if r.start < 1 or r.step < 1:
                    raise ValueError("diag rule needs start >= 1 and step >= 1")
                if self.universe.kind != "tracked":
                    raise ValueError("diag rules need a tracked universe")
                for t in (r.row_track, r.col_track):
                    if t not in self.universe.names:
                        raise ValueError(f"unknown track {t!r}")
        self._row_cache: dict = {}
        self._col_cache: dict = {}
        self._cluster_cache = None
        self._entry_table = None
        if self.universe.is_finite:
            self._entry_table = {
                (i, j): self._entry_uncached(i, j)
                for i in universe.names
                for j in universe.names
            }
        if validate:
            self._validate_rows()

    # -- structural bounds -------------------------------------------------

    def modulus(self) -> int:
        """lcm of every periodicity occurring in the description."""
        m = 1
        for r in self.rules:
            if isinstance(r, RectRule):
                for s in (r.rows, r.cols):
                    for bs in s.tracks.values():
                        m = _lcm(m, len(bs.per))
            else:
                m = _lcm(m, r.step)
                if r.row_off != r.col_off:
                    m = _lcm(m, abs(r.row_off - r.col_off))
        return m

    def low_bound(self) -> int:
        """Track positions <= this bound may behave irregularly; beyond it,
        behaviour is periodic with period modulus()."""
        b = 1
        for (i, j) in self.exceptions:
            for idx in (i, j):
                if isinstance(idx, tuple):
                    b = max(b, idx[1])
        for r in self.rules:
            if isinstance(r, RectRule):
                for s in (r.rows, r.cols):
                    for bs in s.tracks.values():
                        b = max(b, len(bs.pre))
            else:
                b = max(b, r.start + max(r.row_off, r.col_off), abs(r.row_off - r.col_off) + 1)
        return b + self.modulus()

    # -- entries -----------------------------------------------------------

    def _entry_uncached(self, i: Index, j: Index) -> int:
        v = self.exceptions.get((i, j))
        if v is not None:
            return v
        for r in self.rules:
            if isinstance(r, RectRule):
                if r.rows.contains(i) and r.cols.contains(j):
                    return r.value
            else:
                if r.match_n(i, j) is not None:
                    return r.value
        return self.default

    def entry(self, i: Index, j: Index) -> int:
        self.universe.check_index(i)
        self.universe.check_index(j)
        if self._entry_table is not None:
            return self._entry_table[(i, j)]
        return self._entry_uncached(i, j)

    # -- rows and columns ---------------------------------------------------

    def _masked_scan(self, fix: Index, axis: str) -> IndexSet:
        """First-match assembly of one row (axis='row') or column (axis='col')."""
        u = self.universe
        undecided = u.full_set()
        support = u.empty_set()

        def decide(cells: IndexSet, value: int):
            nonlocal undecided, support
            hit = cells.intersect(undecided)
            if hit.is_empty():
                return
            undecided = undecided.difference(hit)
            if value:
                support = support.union(hit)

        for (i, j), v in self.exceptions.items():
            if axis == "row" and i == fix:
                decide(IndexSet.of(u, [j]), v)
            elif axis == "col" and j == fix:
                decide(IndexSet.of(u, [i]), v)
        for r in self.rules:
            if isinstance(r, RectRule):
                if axis == "row" and r.rows.contains(fix):
                    decide(r.cols, r.value)
                elif axis == "col" and r.cols.contains(fix):
                    decide(r.rows, r.value)
            else:
                if axis == "row":
                    if isinstance(fix, tuple) and fix[0] == r.row_track:
                        n = fix[1] - r.row_off
                        if n >= r.start and (n - r.start) % r.step == 0:
                            m = n + r.col_off
                            if m >= 1:
                                decide(IndexSet.of(u, [(r.col_track, m)]), r.value)
                else:
                    if isinstance(fix, tuple) and fix[0] == r.col_track:
                        n = fix[1] - r.col_off
                        if n >= r.start and (n - r.start) % r.step == 0:
                            m = n + r.row_off
                            if m >= 1:
                                decide(IndexSet.of(u, [(r.row_track, m)]), r.value)
        if self.default:
            support = support.union(undecided)
        return support

    def row_support(self, i: Index) -> IndexSet:
        self.universe.check_index(i)
        if i not in self._row_cache:
            self._row_cache[i] = self._masked_scan(i, "row")
        return self._row_cache[i]

    def is_row_finite(self, i: Index) -> bool:
        return self.row_support(i).is_finite()

    def column(self, j: Index) -> IndexSet:
        """c_j = {i : A(i, j) = 1}."""
        self.universe.check_index(j)
        if j not in self._col_cache:
            self._col_cache[j] = self._masked_scan(j, "col")
        return self._col_cache[j]

    def axyj_support(self, X: Iterable[Index], Y: Iterable[Index]) -> SupportReport:
        """Support of j -> prod_{x in X} A(x,j) * prod_{y in Y} (1 - A(y,j))."""
        s = self.universe.full_set()
        for x in X:
            s = s.intersect(self.row_support(x))
        for y in Y:
            s = s.difference(self.row_support(y))
        return SupportReport(s)

    # -- cluster points of the column family --------------------------------

    def column_cluster_points(self) -> list:
        """All cluster points of the indexed column family {c_j} in 2^G.

        A cluster point is a vector every basic neighborhood of which holds
        c_j for infinitely many j.  Finite universes have none.  On a tracked
        universe the columns along one track, taken per residue class beyond
        the irregular region, converge pointwise: rectangle rules whose column
        set holds a tail of the track decide the limit, diagonal contributions
        escape every fixed row, and nothing else survives.  Each such limit is
        attained as described, and a compactness argument shows there are no
        other cluster points, so the returned list is exhaustive.
        """
        if self._cluster_cache is not None:
            return list(self._cluster_cache)
        if self.universe.is_finite:
            self._cluster_cache = []
            return []
        D = self.modulus()
        found = []
        for track in self.universe.names:
            for rho in range(D):
                col = self._limit_column(track, rho, D)
                if col not in found:
                    found.append(col)
        self._cluster_cache = found
        return list(found)

    def _limit_column(self, track: str, rho: int, D: int) -> IndexSet:
        u = self.universe
        undecided = u.full_set()
        limit = u.empty_set()
        for r in self.rules:
            if not isinstance(r, RectRule):
                continue
            bs = r.cols.tracks.get(track)
            if bs is None or not bs.eventually_one_on_class(rho + 1, D):
                continue
            hit = r.rows.intersect(undecided)
            undecided = undecided.difference(hit)
            if r.value:
                limit = limit.union(hit)
        if self.default:
            limit = limit.union(undecided)
        return limit

    def is_unital(self) -> dict:
        """Unitality of the generated algebra, with a machine-checkable witness.

        Unital iff the zero vector is not a cluster point of the columns.
        A positive answer carries a finite witness Y with A(empty, Y, .)
        finitely supported; a negative answer carries the zero cluster point.
        """
        clusters = self.column_cluster_points()
        zero = self.universe.empty_set()
        if any(c == zero for c in clusters):
            return {
                "unital": False,
                "witness": {"kind": "zero_cluster_point", "clusters": [c.render() for c in clusters]},
            }
        if self.universe.is_finite:
            Y: list = []
        else:
            picks = []
            D = self.modulus()
            for track in self.universe.names:
                for rho in range(D):
                    col = self._limit_column(track, rho, D)
                    e = col.some_element()
                    if e is not None and e not in picks:
                        picks.append(e)
            Y = picks
        report = self.axyj_support([], Y)
        if not report.finite:
            # enlarge with a second pick per limit column; the slack covers
            # diagonal interference at isolated indices
            extra = list(Y)
            D = self.modulus()
            for track in self.universe.names:
                for rho in range(D):
                    col = self._limit_column(track, rho, D)
                    for e in col.iter_sample(3):
                        if e not in extra:
                            extra.append(e)
            Y = extra
            report = self.axyj_support([], Y)
        return {
            "unital": True,
            "witness": {
                "kind": "finite_Y",
                "Y": [self.universe.format_index(y) for y in Y],
                "support": report.support.render(),
            },
            "_Y": Y,
        }

    # -- validation ---------------------------------------------------------

    def _validate_rows(self):
        u = self.universe
        if u.is_finite:
            for i in u.names:
                if self.row_support(i).is_empty():
                    raise ValueError(f"identically zero row at index {i}")
            return
        horizon = self.low_bound() + 2 * self.modulus()
        for t in u.names:
            for n in range(1, horizon + 1):
                if self.row_support((t, n)).is_empty():
                    raise ValueError(
                        f"identically zero row at index {t}[{n}]"
                    )
        # beyond the horizon rows repeat with period modulus(), so the
        # concrete sweep above is exhaustive

    def describe(self) -> dict:
        return {
            "universe": {"kind": self.universe.kind, "names": list(self.universe.names)},
            "rules": len(self.rules),
            "exceptions": len(self.exceptions),
            "default": self.default,
        }
