"""Points of the Toeplitz spectrum and its Cuntz-Krieger boundary.

A point is determined by its stem (a finite or eventually periodic
admissible word) together with, in the bounded case, the root set at the
stem tip.  Roots at interior positions are columns of the matrix and are
recomputed on demand rather than stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .matrix import MatrixSpec
from .universe import IndexSet
from .words import (
    EvPeriodicWord,
    GroupWord,
    PositiveWord,
    decompose_pos_neg,
    is_admissible,
)


@dataclass(frozen=True)
class SpectrumPoint:
    stem: Union[PositiveWord, EvPeriodicWord]
    root: Optional[IndexSet]  # present iff the stem is finite

    @property
    def bounded(self) -> bool:
        return not isinstance(self.stem, EvPeriodicWord)

    def stem_prefix(self, n: int) -> PositiveWord:
        if self.bounded:
            return tuple(self.stem[:n])
        return self.stem.prefix(n)

    def stem_has_prefix(self, alpha: PositiveWord) -> bool:
        if self.bounded:
            return tuple(self.stem[: len(alpha)]) == tuple(alpha)
        return self.stem.has_prefix(alpha)

    def stem_letters(self) -> set:
        if self.bounded:
            return set(self.stem)
        return self.stem.letters()

    def render(self, fmt=str) -> str:
        if self.bounded:
            stem = " ".join(fmt(x) for x in self.stem) or "e"
            return f"stem={stem};root={self.root.render()}"
        return "stem=" + self.stem.render(fmt)


@dataclass(frozen=True)
class Pattern:
    """Local configuration W_{X,Y,Z} relative to a base word: the base is in
    the point, base x^-1 in / base y^-1 out / base z out for x, y, z in the
    finite sets X, Y, Z."""

    base: PositiveWord
    X: frozenset
    Y: frozenset
    Z: frozenset

    def __post_init__(self):
        if self.X & self.Y:
            raise ValueError("X and Y must be disjoint")


def phi(spec: MatrixSpec) -> SpectrumPoint:
    """The smallest point: empty stem, empty root."""
    return SpectrumPoint((), spec.universe.empty_set())


def make_bounded(spec: MatrixSpec, omega: PositiveWord, root: IndexSet) -> SpectrumPoint:
    omega = tuple(omega)
    for x in omega:
        spec.universe.check_index(x)
    if not is_admissible(spec, omega):
        raise ValueError("stem is not admissible")
    if omega and not root.contains(omega[-1]):
        raise ValueError("root must contain the last stem letter")
    return SpectrumPoint(omega, root)


def make_unbounded(spec: MatrixSpec, omega: EvPeriodicWord) -> SpectrumPoint:
    for x in list(omega.pre) + list(omega.per):
        spec.universe.check_index(x)
    if not is_admissible(spec, omega):
        raise ValueError("stem is not admissible")
    return SpectrumPoint(omega, None)


def root_at(spec: MatrixSpec, xi: SpectrumPoint, alpha: PositiveWord) -> IndexSet:
    """Root of the stem prefix alpha: the column of the successor letter at
    interior positions, the stored root at the tip of a finite stem."""
    alpha = tuple(alpha)
    if not xi.stem_has_prefix(alpha):
        raise ValueError("alpha is not a stem prefix")
    if xi.bounded and len(alpha) == len(xi.stem):
        return xi.root
    if xi.bounded:
        successor = xi.stem[len(alpha)]
    else:
        successor = xi.stem.letter_at(len(alpha))
    return spec.column(successor)


def contains(spec: MatrixSpec, xi: SpectrumPoint, t: GroupWord) -> bool:
    """Membership t in xi: t = alpha beta^-1 reduced with alpha a stem
    prefix and beta empty or admissible ending inside the root at alpha."""
    d = decompose_pos_neg(t)
    if d is None:
        return False
    alpha, beta = d
    if not xi.stem_has_prefix(alpha):
        return False
    if xi.bounded and len(alpha) > len(xi.stem):
        return False
    if not beta:
        return True
    if not is_admissible(spec, beta):
        return False
    return root_at(spec, xi, alpha).contains(beta[-1])


def in_tilde_omega(spec: MatrixSpec, xi: SpectrumPoint) -> bool:
    """Boundary membership: unbounded points always; bounded points exactly
    when the tip root is a cluster point of the column family."""
    if not xi.bounded:
        return True
    return any(xi.root == c for c in spec.column_cluster_points())


def in_omega_A(spec: MatrixSpec, xi: SpectrumPoint) -> bool:
    if not in_tilde_omega(spec, xi):
        return False
    return not (xi.bounded and not xi.stem and xi.root.is_empty())


def equal(xi1: SpectrumPoint, xi2: SpectrumPoint) -> bool:
    if xi1.bounded != xi2.bounded:
        return False
    if xi1.bounded:
        return tuple(xi1.stem) == tuple(xi2.stem) and xi1.root == xi2.root
    return xi1.stem == xi2.stem  # EvPeriodicWord normal forms


def neighborhood(
    spec: MatrixSpec,
    xi: SpectrumPoint,
    depth: Optional[int] = None,
    X=(),
    Y=(),
    Z=(),
) -> Pattern:
    """A basic open neighborhood of xi.

    Unbounded points: the depth-n cylinder, encoded with the prefix as base
    and its last letter as the single positive constraint.  Bounded points:
    the (X, Y, Z) configuration at the stem tip, which requires X inside and
    Y disjoint from the root.
    """
    if not xi.bounded:
        if depth is None or depth < 1:
            raise ValueError("unbounded points take a depth n >= 1")
        base = xi.stem.prefix(depth)
        return Pattern(base, frozenset({base[-1]}), frozenset(), frozenset())
    X, Y, Z = frozenset(X), frozenset(Y), frozenset(Z)
    for x in X:
        if not xi.root.contains(x):
            raise ValueError("X must lie inside the root")
    for y in Y:
        if xi.root.contains(y):
            raise ValueError("Y must avoid the root")
    return Pattern(tuple(xi.stem), X, Y, Z)


def normalize_pattern(pattern: Pattern) -> Pattern:
    """Reduce the base to the empty word.  For a nonempty base this keeps
    the same orbit exactly when the base's last letter is in X."""
    if not pattern.base:
        return pattern
    if pattern.base[-1] not in pattern.X:
        raise ValueError("pattern base can be dropped only when last(base) is in X")
    return Pattern((), pattern.X, pattern.Y, pattern.Z)
