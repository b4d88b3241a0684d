"""The partial action of the free group on spectrum points.

Group elements act by left multiplication on the sets they translate; a
point is in the domain of t exactly when it contains t^-1.  Stems move by
cancellation against the initial segment, tip roots are carried along
unchanged.  On top of the action: fixed points, the edge-labelled orbit
sets E_x, local-pattern orbit membership, and the inclusion preorder of
the E_x.
"""

from __future__ import annotations

import random
from typing import Optional

from . import graphs, spectrum, words
from .matrix import MatrixSpec
from .spectrum import Pattern, SpectrumPoint
from .universe import Index, IndexSet
from .words import EvPeriodicWord, GroupWord


def in_domain(spec: MatrixSpec, xi: SpectrumPoint, t: GroupWord) -> bool:
    return spectrum.contains(spec, xi, words.invert(t))


def act(spec: MatrixSpec, xi: SpectrumPoint, t: GroupWord) -> SpectrumPoint:
    """t . xi for xi in the domain of t: the stem maps to t stem(xi) and a
    finite tip root is carried over unchanged."""
    if not in_domain(spec, xi, t):
        raise ValueError("point is not in the domain of t")
    if xi.bounded:
        moved = words.reduce_concat(t, words.from_positive(xi.stem))
        new_stem = tuple(letter for letter, sign in moved)
        if len(new_stem) != len(moved):
            raise AssertionError("translated stem left the positive cone")
        return SpectrumPoint(new_stem, xi.root)
    return SpectrumPoint(words.act_on_infinite(t, xi.stem), None)


def fixed_point(spec: MatrixSpec, t: GroupWord) -> Optional[SpectrumPoint]:
    """The unique fixed point of t, when one exists.

    t must be conjugate to a positive word along a geodesic, t = a c^{+-1}
    a^-1 with |t| = 2|a| + |c|; the candidate stem a c c c ... must be
    admissible, which already puts the point in the domain of t.
    """
    if not t:
        raise ValueError("the empty word fixes everything")
    decomp = words.conjugate_circuit_decomposition(t)
    if decomp is None:
        return None
    alpha, gamma, _sign = decomp
    stem = EvPeriodicWord.make(alpha, gamma)
    if not words.is_admissible(spec, stem):
        return None
    xi = spectrum.make_unbounded(spec, stem)
    assert in_domain(spec, xi, t)
    return xi


def _prefix_roots(spec: MatrixSpec, xi: SpectrumPoint) -> list:
    """(prefix, root) pairs covering every membership behaviour: all
    prefixes of a finite stem, one preperiod plus one period of an
    infinite one."""
    if xi.bounded:
        depths = range(len(xi.stem) + 1)
    else:
        depths = range(len(xi.stem.pre) + len(xi.stem.per) + 1)
    out = []
    for d in depths:
        alpha = xi.stem_prefix(d)
        out.append((alpha, spectrum.root_at(spec, xi, alpha)))
    return out


def e_x_contains(spec: MatrixSpec, xi: SpectrumPoint, x: Index) -> bool:
    """Membership in E_x: the point contains an edge labelled x.

    Holds iff x occurs in the stem, or some admissible positive word
    starting at x ends inside the root of a stem prefix (length one
    included); the word search is a reachability question on the graph.
    """
    spec.universe.check_index(x)
    if x in xi.stem_letters():
        return True
    target = spec.universe.empty_set()
    for _alpha, root in _prefix_roots(spec, xi):
        target = target.union(root)
    if target.is_empty():
        return False
    reach = graphs.reach_for(spec)
    hit, kind = reach.reaches(x, target)
    if kind in (graphs.EXACT,):
        return hit
    if kind == graphs.UPPER and not hit:
        return False
    if kind == graphs.LOWER and hit:
        return True
    raise RuntimeError("reachability not certified for this matrix")


def pattern_contains(spec: MatrixSpec, pattern: Pattern, xi: SpectrumPoint) -> bool:
    """Orbit membership for a base-e pattern: some t in xi has
    t x^-1 in xi (x in X), t y^-1 not in xi (y in Y), t z not in xi (z in Z).

    Candidates t = alpha beta^-1 split into beta = e, checked on finitely
    many stem prefixes, and beta != e, where only beta's first letter, last
    letter and graph connectivity matter, so the search reduces to a
    reachability question against the prefix roots.
    """
    if pattern.base:
        pattern = spectrum.normalize_pattern(pattern)
    X, Y, Z = pattern.X, pattern.Y, pattern.Z
    prefix_roots = _prefix_roots(spec, xi)
    # beta = e: t is a stem prefix
    for d, (alpha, root) in enumerate(prefix_roots):
        last = alpha[-1] if alpha else None
        if last is not None and last in Y:
            continue
        if not all(x == last or root.contains(x) for x in X):
            continue
        if any(root.contains(y) for y in Y):
            continue
        successor = _stem_letter(xi, d)
        if successor is not None and successor in Z:
            continue
        return True
    # beta != e: conditions collapse to beta's first letter b (the support
    # of A(X, Y, .) minus Z) and a path from b into some prefix root
    valid_first = spec.axyj_support(X, Y).support
    if Z:
        valid_first = valid_first.difference(IndexSet.of(spec.universe, list(Z)))
    if valid_first.is_empty():
        return False
    targets = spec.universe.empty_set()
    for _alpha, root in prefix_roots:
        targets = targets.union(root)
    if targets.is_empty():
        return False
    reach = graphs.reach_for(spec)
    anc, kind = reach.ancestors(targets)
    hit = not anc.intersect(valid_first).is_empty()
    if kind == graphs.EXACT:
        return hit
    if kind == graphs.UPPER and not hit:
        return False
    if kind == graphs.LOWER and hit:
        return True
    raise RuntimeError("reachability not certified for this matrix")


def _stem_letter(xi: SpectrumPoint, d: int):
    # None at the tip of a finite stem: no positive continuation lies in
    # the point there, so Z constraints hold vacuously
    if xi.bounded:
        return xi.stem[d] if d < len(xi.stem) else None
    return xi.stem.letter_at(d)


def e_inclusion_order(spec: MatrixSpec, probe) -> dict:
    """The certified part of the inclusion preorder on {E_x : x in probe}:
    an arc x -> y whenever the graph has a path from x to y, which forces
    E_y inside E_x.  This is a sub-relation of true inclusion: the converse
    direction is not decided here."""
    probe = list(probe)
    reach = graphs.reach_for(spec)
    relation = {}
    for x in probe:
        spec.universe.check_index(x)
        desc, kind = reach.descendants(IndexSet.of(spec.universe, [x]))
        below = set()
        for y in probe:
            if x == y:
                below.add(y)
                continue
            hit = desc.contains(y)
            if kind == graphs.EXACT or (kind == graphs.LOWER and hit) or (
                kind == graphs.UPPER and not hit
            ):
                if hit:
                    below.add(y)
        relation[x] = below
    return relation


def garfo_counterexample_search(
    spec: MatrixSpec, x: Index, samples: int = 50, seed: int = 0
) -> Optional[SpectrumPoint]:
    """Probe the decomposition of E_x into the E_y over the x-row.

    Finite row: the decomposition is a theorem, so sampled points of E_x
    are checked to lie in some E_y and none may fail.  Infinite row: hunt
    for a boundary point inside E_x but outside every E_y; bounded points
    whose root is a nonzero column cluster point are the natural
    candidates.
    """
    spec.universe.check_index(x)
    row = spec.row_support(x)
    if row.is_finite():
        ys = row.finite_elements()
        for xi in sample_points(spec, samples, seed=seed):
            if not e_x_contains(spec, xi, x):
                continue
            if not any(e_x_contains(spec, xi, y) for y in ys):
                raise AssertionError(
                    "finite-row decomposition violated; this contradicts the theory"
                )
        return None
    reach = graphs.reach_for(spec)
    for cluster in spec.column_cluster_points():
        if cluster.is_empty():
            continue
        xi = spectrum.SpectrumPoint((), cluster)
        anc, kind = reach.ancestors(cluster)
        if kind != graphs.EXACT:
            continue  # witnesses must be certified both ways
        if not anc.contains(x):
            continue  # xi is not in E_x
        if row.intersect(anc).is_empty():
            # no y in the x-row admits a path into the root, so xi avoids
            # every E_y while sitting inside E_x
            return xi
    return None


def isolated_in_orbit(spec: MatrixSpec, t: GroupWord, reading: str = "literal") -> Optional[bool]:
    """Whether the fixed point of t is isolated in its orbit: exactly when
    the circuit part of t's decomposition is transitory.  None when the
    transitory status cannot be certified for this matrix."""
    xi = fixed_point(spec, t)
    if xi is None:
        raise ValueError("t has no fixed point")
    _alpha, gamma, _sign = words.conjugate_circuit_decomposition(t)
    ans, kind = graphs.is_transitory(spec, gamma, reading)
    if kind != graphs.EXACT:
        return None
    return ans


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample_points(spec: MatrixSpec, count: int, seed: int = 0, max_len: int = 6) -> list:
    """Deterministic mix of bounded and unbounded valid points."""
    rng = random.Random(seed)
    u = spec.universe
    if u.is_finite:
        letters = list(u.names)
    else:
        letters = [(t, n) for t in u.names for n in range(1, 4)]
    out = []
    guard = 0
    while len(out) < count and guard < 50 * count:
        guard += 1
        stem = _random_admissible(spec, rng, letters, rng.randrange(max_len + 1))
        if stem is None:
            continue
        if rng.random() < 0.5:
            # bounded point with a random explicit root
            pool = list(spec.row_support(stem[-1]).iter_sample(3)) if stem else letters
            root_elems = set(rng.sample(pool, k=min(len(pool), rng.randrange(len(pool) + 1)))) if pool else set()
            if stem:
                root_elems.add(stem[-1])
            root = IndexSet.of(u, sorted(root_elems, key=u.sort_key))
            out.append(SpectrumPoint(tuple(stem), root))
        else:
            per = _random_cycle(spec, rng, letters, stem[-1] if stem else None)
            if per is None:
                continue
            try:
                out.append(spectrum.make_unbounded(spec, EvPeriodicWord.make(tuple(stem), per)))
            except ValueError:
                continue
    return out


def _random_admissible(spec, rng, letters, target_len):
    if target_len == 0:
        return []
    starts = letters[:]
    rng.shuffle(starts)
    stem = [starts[0]]
    while len(stem) < target_len:
        succs = [w for w in spec.row_support(stem[-1]).iter_sample(4)]
        if not succs:
            return None
        stem.append(rng.choice(succs))
    return stem


def _random_cycle(spec, rng, letters, anchor):
    """A cycle usable as a period, optionally forced to attach after anchor."""
    start_pool = (
        [w for w in spec.row_support(anchor).iter_sample(4)] if anchor is not None else letters[:]
    )
    rng.shuffle(start_pool)
    for start in start_pool:
        path = [start]
        for _ in range(8):
            if spec.entry(path[-1], path[0]) == 1:
                return tuple(path)
            succs = [w for w in spec.row_support(path[-1]).iter_sample(4) if w not in path]
            if not succs:
                break
            path.append(rng.choice(succs))
    return None
