"""Symbolic normal forms for monomials in the generating partial
isometries, and exact emptiness tests for the clopen sets cut out by
finitely many membership constraints.

Every product of generators and adjoints collapses to a canonical
monomial  coeff * S_alpha * (prod of domain projections Q_x) * S_beta^*,
because adjacent-pair relations either annihilate, absorb, or commute
everything else away.  Zero-ness of such a monomial, and order between
the associated projections, reduce to the emptiness of a constraint set
{t_i in xi} / {s_j not in xi}, decided by walking the forced stem prefix
and completing per ambient: the Toeplitz spectrum accepts any consistent
tip root, its boundary requires either a prolongation or a cluster-point
root.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import spectrum, words
from .matrix import MatrixSpec
from .universe import IndexSet
from .words import EvPeriodicWord, GroupWord

TAU = "tau"
TILDE = "tilde"


@dataclass(frozen=True)
class Monomial:
    """coeff * S_left * prod(Q_x for x in middle) * S_right^*, canonical:
    a zero coefficient clears everything, and the middle never repeats the
    source projections already implied by the outer words."""

    coeff: int
    left: tuple
    middle: frozenset
    right: tuple

    def is_zero(self) -> bool:
        return self.coeff == 0

    def render(self, fmt=str) -> str:
        if self.coeff == 0:
            return "0"
        parts = []
        if self.left:
            parts.append("S[" + " ".join(fmt(x) for x in self.left) + "]")
        for x in sorted(self.middle, key=repr):
            parts.append("Q[" + fmt(x) + "]")
        if self.right:
            parts.append("S[" + " ".join(fmt(x) for x in self.right) + "]*")
        return " ".join(parts) if parts else "1"


ZERO = Monomial(0, (), frozenset(), ())
ONE = Monomial(1, (), frozenset(), ())


def _canon(left, middle, right) -> Monomial:
    middle = set(middle)
    if left:
        middle.discard(left[-1])
    if right:
        middle.discard(right[-1])
    return Monomial(1, tuple(left), frozenset(middle), tuple(right))


def rewrite(spec: MatrixSpec, letters: Iterable[tuple], start: Optional[Monomial] = None) -> Monomial:
    """Fold a word in the generators ((x, +1) for S_x, (x, -1) for S_x^*)
    into canonical form.  Each letter is absorbed in O(1) set operations,
    so the rewriting terminates and is confluent by construction."""
    m = start if start is not None else ONE
    if m.is_zero():
        return ZERO
    left, middle, right = list(m.left), set(m.middle), list(m.right)
    for x, sign in letters:
        spec.universe.check_index(x)
        if sign == 1:
            if right:
                if right[0] != x:
                    return ZERO  # S_i^* S_j = 0 for i != j
                right.pop(0)
                if not right:
                    middle.add(x)
                # otherwise the freed projection is absorbed by the stored
                # admissible word: Q_{b1} S_{b2} = S_{b2}
            else:
                for q in middle:
                    if spec.entry(q, x) == 0:
                        return ZERO  # Q_q S_x = A(q, x) S_x
                middle.clear()
                if left and spec.entry(left[-1], x) == 0:
                    return ZERO  # inadmissible words vanish
                left.append(x)
        else:
            if right:
                if spec.entry(x, right[0]) == 0:
                    return ZERO
                right.insert(0, x)
            else:
                if x in middle:
                    middle.discard(x)  # Q_x S_x^* = S_x^*
                right.insert(0, x)
    return _canon(left, middle, right)


def monomial_tokens(m: Monomial) -> list:
    out = [(x, 1) for x in m.left]
    for x in sorted(m.middle, key=repr):
        out.extend([(x, -1), (x, 1)])
    out.extend((x, -1) for x in reversed(m.right))
    return out


def multiply(spec: MatrixSpec, a: Monomial, b: Monomial) -> Monomial:
    if a.is_zero() or b.is_zero():
        return ZERO
    return rewrite(spec, monomial_tokens(b), start=a)


def adjoint(m: Monomial) -> Monomial:
    if m.is_zero():
        return ZERO
    return _canon(m.right, m.middle, m.left)


def of_group_word(spec: MatrixSpec, t: GroupWord) -> Monomial:
    """The image u(t) of a reduced group word."""
    return rewrite(spec, t)


def range_monomial(spec: MatrixSpec, t: GroupWord) -> Monomial:
    """e(t) = u(t) u(t)^*."""
    return rewrite(spec, list(t) + list(words.invert(t)))


@dataclass(frozen=True)
class ClopenConstraint:
    """Intersection of the sets {t in xi} over positives and {s not in xi}
    over negatives, inside the chosen ambient spectrum."""

    positives: frozenset  # of GroupWord
    negatives: frozenset
    ambient: str = TAU

    @staticmethod
    def make(positives=(), negatives=(), ambient: str = TAU) -> "ClopenConstraint":
        if ambient not in (TAU, TILDE):
            raise ValueError(f"unknown ambient {ambient!r}")
        return ClopenConstraint(
            frozenset(tuple(t) for t in positives),
            frozenset(tuple(s) for s in negatives),
            ambient,
        )


def monomial_to_constraint(spec: MatrixSpec, m: Monomial, ambient: str = TAU) -> ClopenConstraint:
    """Constraint set of the range projection m m^*: emptiness of this set
    is equivalent to the monomial vanishing in the ambient's function
    algebra."""
    if m.is_zero():
        raise ValueError("zero monomial has no constraint form")
    positives = [words.from_positive(m.left)]
    qs = set(m.middle)
    if m.right:
        qs.add(m.right[-1])
    if m.left:
        qs.discard(m.left[-1])
    for x in qs:
        positives.append(words.from_positive(m.left) + ((x, -1),))
    return ClopenConstraint.make(positives, (), ambient)


# ---------------------------------------------------------------------------
# the emptiness solver
# ---------------------------------------------------------------------------


@dataclass
class Solution:
    empty: bool
    witness: Optional[spectrum.SpectrumPoint]
    note: str = ""


def _intake(spec: MatrixSpec, c: ClopenConstraint):
    """Split constraints into (alpha, last_beta | None) pairs; positives
    that cannot ever hold force emptiness, negatives that cannot ever hold
    are dropped."""
    pos = []
    for t in c.positives:
        d = words.decompose_pos_neg(tuple(t))
        if d is None:
            return None, None, True
        alpha, beta = d
        if not words.is_admissible(spec, alpha) or not words.is_admissible(spec, beta):
            return None, None, True
        pos.append((alpha, beta[-1] if beta else None))
    neg = []
    for s in c.negatives:
        s = tuple(s)
        if not s:
            return None, None, True  # e belongs to every point
        d = words.decompose_pos_neg(s)
        if d is None:
            continue
        alpha, beta = d
        if not words.is_admissible(spec, alpha) or not words.is_admissible(spec, beta):
            continue
        neg.append((alpha, beta[-1] if beta else None))
    return pos, neg, False


def solve(spec: MatrixSpec, c: ClopenConstraint) -> Solution:
    """Decide emptiness, with a point witness when satisfiable.

    The stem is grown letter by letter.  Constraints whose positive part
    equals the current prefix impose tip conditions; deeper positives force
    the next letter; deeper negatives merely mark letters that need
    explicit treatment, everything else is lumped into one describable
    candidate set per step.
    """
    pos, neg, hard_empty = _intake(spec, c)
    if hard_empty:
        return Solution(True, None, "unsatisfiable constraint word")
    clusters = spec.column_cluster_points() if c.ambient == TILDE else None
    return _search(spec, (), pos, neg, clusters, c.ambient)


def _search(spec, path, pos, neg, clusters, ambient) -> Solution:
    u = spec.universe
    depth = len(path)
    # arrival: a negative forbidding the current prefix kills the branch
    for alpha, lb in neg:
        if lb is None and alpha == path:
            return Solution(True, None, f"prefix {path} is forbidden")
    here_pos = [lb for alpha, lb in pos if alpha == path and lb is not None]
    here_neg = [lb for alpha, lb in neg if alpha == path and lb is not None]
    deeper_pos = [(alpha, lb) for alpha, lb in pos if len(alpha) > depth]
    for alpha, _lb in deeper_pos:
        if alpha[:depth] != path:
            return Solution(True, None, "positive prefixes diverge")
    # option 1: end here with a bounded point
    if not deeper_pos:
        required = set(here_pos)
        if path:
            required.add(path[-1])
        forbidden = set(here_neg)
        if ambient == TAU:
            if not (required & forbidden):
                root = IndexSet.of(u, sorted(required, key=u.sort_key))
                return Solution(False, spectrum.SpectrumPoint(tuple(path), root))
        else:
            for K in clusters:
                if all(K.contains(x) for x in required) and not any(
                    K.contains(y) for y in forbidden
                ):
                    return Solution(False, spectrum.SpectrumPoint(tuple(path), K))
    # continuation candidates share a profile: admissible after the tip,
    # inside every positive's row, outside every negative's row
    profile = u.full_set()
    if path:
        profile = profile.intersect(spec.row_support(path[-1]))
    for lb in here_pos:
        profile = profile.intersect(spec.row_support(lb))
    for lb in here_neg:
        profile = profile.difference(spec.row_support(lb))
    if deeper_pos:
        # option 2a: the next letter is forced by the deeper positives
        nxts = {alpha[depth] for alpha, _lb in deeper_pos}
        if len(nxts) != 1:
            return Solution(True, None, "positive prefixes diverge")
        (z,) = nxts
        if not profile.contains(z):
            return Solution(True, None, f"forced letter {z} violates the tip profile")
        return _search(spec, path + (z,), pos, neg, clusters, ambient)
    # option 2b: explicit continuations named by deeper negatives
    mentioned = sorted(
        {alpha[depth] for alpha, _lb in neg if len(alpha) > depth and alpha[:depth] == path},
        key=u.sort_key,
    )
    for z in mentioned:
        if not profile.contains(z):
            continue
        sol = _search(spec, path + (z,), pos, neg, clusters, ambient)
        if not sol.empty:
            return sol
    # option 2c: any other admissible letter; nothing deeper can now apply,
    # and rows are never identically zero, so the stem extends forever
    rest = profile.difference(IndexSet.of(u, mentioned))
    z = rest.some_element()
    if z is not None:
        return Solution(False, _unbounded_witness(spec, path + (z,)),
                        "prolonged past every constraint")
    return Solution(True, None, "no admissible continuation and no legal root")


def _unbounded_witness(spec, prefix):
    """Extend the prefix to an eventually periodic admissible word if a
    cycle is reachable; the completion exists regardless, but only
    eventually periodic stems are representable."""
    path = list(prefix)
    seen = {}
    for step in range(64):
        v = path[-1]
        if v in seen:
            k = seen[v]
            try:
                return spectrum.make_unbounded(
                    spec, EvPeriodicWord.make(tuple(path[:k]), tuple(path[k:-1]))
                )
            except ValueError:
                return None
        seen[v] = len(path) - 1
        nxt = spec.row_support(v).some_element()
        if nxt is None:
            return None
        path.append(nxt)
    return None


def is_empty(spec: MatrixSpec, c: ClopenConstraint) -> bool:
    return solve(spec, c).empty


def is_zero_u(spec: MatrixSpec, t: GroupWord, ambient: str = TAU) -> bool:
    """Whether u(t) vanishes in the chosen ambient: no decomposition into
    positive times inverse-positive, or an empty membership set."""
    if words.decompose_pos_neg(tuple(t)) is None:
        return True
    return is_empty(spec, ClopenConstraint.make([tuple(t)], (), ambient))


def leq_projection(spec: MatrixSpec, p: ClopenConstraint, q: ClopenConstraint) -> bool:
    """p <= q as projections: the set of p meets the complement of q
    nowhere; the complement distributes over q's constraints."""
    if p.ambient != q.ambient:
        raise ValueError("ambient mismatch")
    for t in sorted(q.positives):
        c = ClopenConstraint.make(p.positives, set(p.negatives) | {t}, p.ambient)
        if not is_empty(spec, c):
            return False
    for s in sorted(q.negatives):
        c = ClopenConstraint.make(set(p.positives) | {s}, p.negatives, p.ambient)
        if not is_empty(spec, c):
            return False
    return True
