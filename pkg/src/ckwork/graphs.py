"""Decision procedures on the directed graph of a matrix.

Vertices are the indices, with an edge i -> j exactly when A(i, j) = 1.
Finite universes use ordinary graph algorithms.  Tracked universes are
analyzed through a two-layer view: a concrete window of low track
positions plus residue classes of high positions, where the rule
language guarantees translation-uniform behaviour.  Reachability is a
saturation over describable index sets with closed-form acceleration of
diagonal shifts; results carry an exactness kind so callers can tell
certified answers from conservative ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .matrix import DiagRule, MatrixSpec, RectRule
from .universe import BitStream, Index, IndexSet

EXACT = "exact"
LOWER = "lower"  # under-approximation: members are certainly reachable
UPPER = "upper"  # over-approximation: non-members are certainly unreachable
NONE = "none"


# ---------------------------------------------------------------------------
# reachability
# ---------------------------------------------------------------------------


class Reach:
    """Forward and backward reachability closure over index sets."""

    def __init__(self, spec: MatrixSpec):
        self.spec = spec
        self.conflict_free = self._conflict_free()
        self._anc_cache: dict = {}
        self._desc_cache: dict = {}

    # -- shadowing certificate ----------------------------------------------

    def _items(self):
        """Priority-ordered items as (kind, payload, value); default last."""
        out = [("cell", ij, v) for ij, v in self.spec.exceptions.items()]
        for r in self.spec.rules:
            out.append(("rect" if isinstance(r, RectRule) else "diag", r, r.value))
        full = self.spec.universe.full_set()
        out.append(("rect", RectRule(full, full, self.spec.default), self.spec.default))
        return out

    def _conflict_free(self) -> bool:
        """No earlier value-0 item intersects a later value-1 item's block.

        Under this certificate the union of the value-1 blocks equals the
        edge set exactly, so set-level closures are exact.
        """
        items = self._items()
        for hi in range(len(items)):
            k0, p0, v0 = items[hi]
            if v0 != 0:
                continue
            for lo in range(hi + 1, len(items)):
                k1, p1, v1 = items[lo]
                if v1 != 1:
                    continue
                if self._blocks_intersect(k0, p0, k1, p1):
                    return False
        return True

    def _blocks_intersect(self, k0, p0, k1, p1) -> bool:
        if k0 == "cell":
            return self._block_contains(k1, p1, *p0)
        if k1 == "cell":
            return self._block_contains(k0, p0, *p1)
        if k0 == "rect" and k1 == "rect":
            return not (
                p0.rows.intersect(p1.rows).is_empty()
                or p0.cols.intersect(p1.cols).is_empty()
            )
        if k0 == "rect" and k1 == "diag":
            return self._rect_diag_intersect(p0, p1)
        if k0 == "diag" and k1 == "rect":
            return self._rect_diag_intersect(p1, p0)
        return self._diag_diag_intersect(p0, p1)

    @staticmethod
    def _block_contains(kind, payload, i, j) -> bool:
        if kind == "cell":
            return payload == (i, j)
        if kind == "rect":
            return payload.rows.contains(i) and payload.cols.contains(j)
        return payload.match_n(i, j) is not None

    @staticmethod
    def _rect_diag_intersect(rect: RectRule, diag: DiagRule) -> bool:
        rows = rect.rows.tracks.get(diag.row_track)
        cols = rect.cols.tracks.get(diag.col_track)
        if rows is None or cols is None:
            return False
        # parameters n with (row_track, n+row_off) in rows and
        # (col_track, n+col_off) in cols, n in the diagonal's domain
        a = rows.shift(-diag.row_off)
        b = cols.shift(-diag.col_off)
        dom = BitStream.tail(diag.start, diag.step)
        return not a.intersect(b).intersect(dom).is_empty()

    @staticmethod
    def _diag_diag_intersect(d0: DiagRule, d1: DiagRule) -> bool:
        if d0.row_track != d1.row_track or d0.col_track != d1.col_track:
            return False
        if d0.row_off - d1.row_off != d0.col_off - d1.col_off:
            return False
        shift = d0.row_off - d1.row_off  # cells agree where n1 = n0 + shift
        horizon = max(d0.start, d1.start) + 2 * d0.step * d1.step + abs(shift) + 2
        for n0 in range(d0.start, horizon + 1, d0.step):
            n1 = n0 + shift
            if n1 >= d1.start and (n1 - d1.start) % d1.step == 0:
                return True
        return False

    # -- one-ply steps --------------------------------------------------------

    def _step(self, S: IndexSet, forward: bool) -> IndexSet:
        """Union of value-1 blocks incident to S on the chosen side."""
        u = self.spec.universe
        out = u.empty_set()
        if S.is_empty():
            return out
        for (i, j), v in self.spec.exceptions.items():
            if v == 1:
                if forward and S.contains(i):
                    out = out.union(IndexSet.of(u, [j]))
                elif not forward and S.contains(j):
                    out = out.union(IndexSet.of(u, [i]))
        for r in self.spec.rules:
            if isinstance(r, RectRule):
                if r.value != 1:
                    continue
                src, dst = (r.rows, r.cols) if forward else (r.cols, r.rows)
                if not src.intersect(S).is_empty():
                    out = out.union(dst)
            elif r.value == 1:
                out = out.union(self._diag_apply(S, r, forward))
        if self.spec.default == 1:
            out = out.union(u.full_set())
        return out

    @staticmethod
    def _diag_params(r: DiagRule, forward: bool):
        """(src_track, dst_track, mask over src positions, shift)."""
        if forward:
            return r.row_track, r.col_track, BitStream.tail(r.start + r.row_off, r.step), r.col_off - r.row_off
        return r.col_track, r.row_track, BitStream.tail(r.start + r.col_off, r.step), r.row_off - r.col_off

    def _diag_apply(self, S: IndexSet, r: DiagRule, forward: bool) -> IndexSet:
        src, dst, mask, delta = self._diag_params(r, forward)
        stream = S.tracks.get(src)
        if stream is None:
            return self.spec.universe.empty_set()
        hit = stream.intersect(mask)
        if hit.is_empty():
            return self.spec.universe.empty_set()
        return IndexSet(self.spec.universe, tracks={dst: hit.shift(delta)})

    # -- closure with acceleration --------------------------------------------

    def _widen(self, S: IndexSet, forward: bool) -> IndexSet:
        """Close same-track diagonal shifts in one stroke.

        Upward shifts whose forward orbit provably stays inside the rule's
        domain contribute a whole arithmetic tail; downward shifts are run
        to their own fixpoint (they bottom out at the domain's start).
        Every element added this way is genuinely reachable, so the
        closure stays exact.
        """
        for r in self.spec.rules:
            if not isinstance(r, DiagRule) or r.value != 1:
                continue
            src, dst, mask, delta = self._diag_params(r, forward)
            if src != dst or delta == 0:
                continue
            stream = S.tracks.get(src)
            if stream is None:
                continue
            if delta > 0:
                horizon = len(mask.pre) + len(stream.pre) + 2 * len(mask.per) * delta + 2 * delta
                steps = len(mask.per) // gcd(len(mask.per), delta) + 2
                tails = BitStream.empty()
                for p in stream.iter_elements(horizon):
                    if p <= len(mask.pre) or tails.value_at(p):
                        continue
                    if all(mask.value_at(p + k * delta) for k in range(steps)):
                        tails = tails.union(BitStream.tail(p, delta))
                if not tails.is_empty():
                    S = S.union(IndexSet(self.spec.universe, tracks={src: tails}))
            else:
                fuel = (
                    len(stream.pre) + len(mask.pre) + 4 * len(stream.per) * -delta + 16
                )
                T = stream
                for _ in range(fuel):
                    add = T.intersect(mask).shift(delta).difference(T)
                    if add.is_empty():
                        break
                    T = T.union(add)
                S = S.union(IndexSet(self.spec.universe, tracks={src: T}))
        return S

    def _closure(self, S0: IndexSet, forward: bool):
        if self.spec.universe.is_finite:
            # plain BFS over the entry table; always exact
            reached = set(S0.finite_elements())
            frontier = set(reached)
            while frontier:
                nxt = set()
                for v in frontier:
                    for w in self.spec.universe.names:
                        hit = self.spec.entry(v, w) if forward else self.spec.entry(w, v)
                        if hit and w not in reached:
                            nxt.add(w)
                reached |= nxt
                frontier = nxt
            return IndexSet.of(self.spec.universe, sorted(reached, key=self.spec.universe.sort_key)), EXACT
        S = S0
        cap = 60 + 4 * self.spec.low_bound() + 12 * (len(self.spec.rules) + 1) * self.spec.modulus()
        for i in range(cap):
            add = self._step(S, forward).difference(S)
            if add.is_empty():
                return S, (EXACT if self.conflict_free else UPPER)
            S = S.union(add)
            if i % 4 == 3:
                S = self._widen(S, forward)
        return S, (LOWER if self.conflict_free else NONE)

    def descendants(self, S: IndexSet):
        if S not in self._desc_cache:
            self._desc_cache[S] = self._closure(S, forward=True)
        return self._desc_cache[S]

    def ancestors(self, S: IndexSet):
        if S not in self._anc_cache:
            self._anc_cache[S] = self._closure(S, forward=False)
        return self._anc_cache[S]

    def reaches(self, source: Index, target: IndexSet):
        """(answer, kind) for: is there a path (length >= 0) from source
        into the target set."""
        anc, kind = self.ancestors(target)
        hit = anc.contains(source)
        if kind == EXACT:
            return hit, EXACT
        if kind == UPPER:
            return (True, UPPER) if hit else (False, EXACT)
        if kind == LOWER:
            return (True, EXACT) if hit else (False, LOWER)
        return hit, NONE


_REACH_CACHE: dict = {}


def reach_for(spec: MatrixSpec) -> Reach:
    r = _REACH_CACHE.get(id(spec))
    if r is None or r.spec is not spec:
        r = Reach(spec)
        _REACH_CACHE[id(spec)] = r
    return r


# ---------------------------------------------------------------------------
# generic small-graph helpers
# ---------------------------------------------------------------------------


def _scc(nodes, succ) -> list:
    """Tarjan's strongly connected components; succ maps node -> iterable."""
    index: dict = {}
    low: dict = {}
    onstack: set = set()
    stack: list = []
    comps: list = []
    counter = [0]

    def visit(root):
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in onstack:
                    low[node] = min(low[node], index[w])
            if not advanced:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[node])
                if low[node] == index[node]:
                    comp = []
                    while True:
                        w = stack.pop()
                        onstack.discard(w)
                        comp.append(w)
                        if w == node:
                            break
                    comps.append(comp)

    for v in nodes:
        if v not in index:
            visit(v)
    return comps


def _cycle_shifts(component, edges) -> list:
    """Total shifts of the simple cycles inside one component.

    edges maps node -> [(dst, shift)].  Class graphs are tiny, so plain
    DFS enumeration is fine.
    """
    cset = set(component)
    shifts = []
    for start in sorted(cset):
        stack = [(start, 0, frozenset({start}))]
        while stack:
            node, acc, seen = stack.pop()
            for (w, d) in edges.get(node, ()):
                if w == start:
                    shifts.append(acc + d)
                elif w in cset and w not in seen:
                    stack.append((w, acc + d, seen | {w}))
    return shifts


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------


@dataclass
class CircuitReport:
    circuit: tuple  # vertex sequence (x1 .. xn) with an edge back to x1
    has_exit: bool
    transitory_literal: bool
    transitory_edge_departure: bool


def window_vertices(spec: MatrixSpec, width: Optional[int] = None) -> list:
    """Concrete exploration region: everything on a finite universe, the
    low positions of every track otherwise."""
    if spec.universe.is_finite:
        return list(spec.universe.names)
    if width is None:
        width = window_width(spec)
    return [(t, n) for t in spec.universe.names for n in range(1, width + 1)]


def window_width(spec: MatrixSpec) -> int:
    return spec.low_bound() + 4 * spec.modulus() + 8


def _diag_class_edges(spec: MatrixSpec) -> dict:
    """Shift-weighted edges between (track, residue mod M) classes coming
    from diagonal rules that stay unshadowed on a tail of their diagonal."""
    M = spec.modulus()
    edges: dict = {}
    for ridx, r in enumerate(spec.rules):
        if not isinstance(r, DiagRule) or r.value != 1:
            continue
        if _diag_eventually_shadowed(spec, ridx):
            continue
        delta = r.col_off - r.row_off
        for rho in range(M):
            # high members (row_track, m) with m == rho (mod M) see the rule
            # exactly when m == start + row_off (mod step); step divides M
            if (rho - (r.start + r.row_off)) % r.step != 0:
                continue
            src = (r.row_track, rho)
            dst = (r.col_track, (rho + delta) % M)
            edges.setdefault(src, []).append((dst, delta))
    return edges


def _diag_eventually_shadowed(spec: MatrixSpec, ridx: int) -> bool:
    """Whether an earlier value-0 rule overlaps this diagonal.  Single-cell
    exceptions never kill a tail and are ignored; rule overlaps demote the
    diagonal conservatively (existence claims are re-verified concretely)."""
    r = spec.rules[ridx]
    for k in range(ridx):
        other = spec.rules[k]
        if not (hasattr(other, "value") and other.value == 0):
            continue
        if isinstance(other, RectRule):
            if Reach._rect_diag_intersect(other, r):
                return True
        elif Reach._diag_diag_intersect(other, r):
            return True
    return False


def circuit_vertex_set(spec: MatrixSpec):
    """(IndexSet, sound, complete): vertices lying on some circuit.

    sound: every member is certainly on a circuit.  complete: every circuit
    has at least one vertex in the set (enough for existence questions and
    for ancestor targets, since a circuit vertex reaches the whole circuit).
    """
    u = spec.universe
    if u.is_finite:
        verts = list(u.names)
        comps = _scc(verts, lambda v: [w for w in verts if spec.entry(v, w) == 1])
        on = []
        for comp in comps:
            if len(comp) > 1 or spec.entry(comp[0], comp[0]) == 1:
                on.extend(comp)
        return IndexSet.of(u, sorted(on, key=u.sort_key)), True, True
    reach = reach_for(spec)
    sound = True
    complete = True
    if spec.default == 1:
        if reach.conflict_free:
            # no value-0 item anywhere, so the graph is complete
            return u.full_set(), True, True
        complete = False
    out = u.empty_set()
    # concrete cycles inside the window
    wverts = window_vertices(spec)
    comps = _scc(
        wverts,
        lambda v: [w for w in wverts if spec.entry(v, w) == 1],
    )
    on = []
    for comp in comps:
        if len(comp) > 1 or spec.entry(comp[0], comp[0]) == 1:
            on.extend(comp)
    out = out.union(IndexSet.of(u, on))
    # zero-shift diagonal class cycles, realizable at every high matching spot
    M = spec.modulus()
    B = spec.low_bound()
    edges = _diag_class_edges(spec)
    nodes = sorted(edges)
    for component in _scc(nodes, lambda v: [w for w, _ in edges.get(v, ())]):
        shifts = _cycle_shifts(component, edges)
        if not shifts:
            continue
        if 0 in shifts or (min(shifts) < 0 < max(shifts)):
            for (track, rho) in component:
                start = B + 1 + ((rho - B - 1) % M)
                out = out.union(IndexSet(u, tracks={track: BitStream.tail(start, M)}))
    # rectangle-closed vertices: v in cols(r) reaching rows(r) closes a loop
    for r in spec.rules:
        if isinstance(r, RectRule) and r.value == 1:
            anc, kind = reach.ancestors(r.rows)
            hit = r.cols.intersect(anc)
            if kind in (EXACT, LOWER):
                out = out.union(hit)
                if kind == LOWER:
                    complete = False
            elif kind == UPPER:
                out = out.union(hit)
                sound = False
            else:
                sound = False
                complete = False
    return out, sound, complete


def enumerate_circuits(spec: MatrixSpec, max_len: int, width: Optional[int] = None) -> list:
    """Simple circuits up to max_len: exhaustive on finite universes,
    concrete window witnesses otherwise (rotations are distinct circuits)."""
    if spec.universe.is_finite:
        verts = list(spec.universe.names)
    else:
        verts = window_vertices(spec, width)
    vset = set(verts)
    found: list = []

    def extend(path):
        if spec.entry(path[-1], path[0]) == 1:
            found.append(tuple(path))
        if len(path) == max_len:
            return
        for w in spec.row_support(path[-1]).iter_sample(64):
            if w in vset and w not in path:
                extend(path + [w])

    for v in verts:
        extend([v])
    reports = []
    for c in sorted(set(found), key=lambda c: (len(c), [spec.universe.sort_key(v) for v in c])):
        reports.append(
            CircuitReport(
                circuit=c,
                has_exit=circuit_has_exit(spec, c),
                transitory_literal=is_transitory(spec, c, "literal")[0],
                transitory_edge_departure=is_transitory(spec, c, "edge_departure")[0],
            )
        )
    return reports


def circuit_has_exit(spec: MatrixSpec, circuit: tuple) -> bool:
    for k, v in enumerate(circuit):
        nxt = circuit[(k + 1) % len(circuit)]
        if not spec.row_support(v).difference(IndexSet.of(spec.universe, [nxt])).is_empty():
            return True
    return False


def is_transitory(spec: MatrixSpec, circuit: tuple, reading: str):
    """(answer, kind) for one concrete circuit under the chosen reading.

    literal: no path (y1 .. ym), m >= 3, with both endpoints on the circuit
    and the second vertex off it.  edge_departure: no excursion leaving the
    circuit by a non-circuit edge ever returns to it.
    """
    u = spec.universe
    vset = IndexSet.of(u, sorted(set(circuit), key=u.sort_key))
    reach = reach_for(spec)
    anc, kind = reach.ancestors(vset)
    leaving = u.empty_set()
    for k, v in enumerate(circuit):
        sup = spec.row_support(v)
        if reading == "literal":
            leaving = leaving.union(sup.difference(vset))
        else:
            nxt = circuit[(k + 1) % len(circuit)]
            leaving = leaving.union(sup.difference(IndexSet.of(u, [nxt])))
    returning = leaving.intersect(anc)
    if kind == EXACT:
        return returning.is_empty(), EXACT
    if kind == UPPER:
        return (True, EXACT) if returning.is_empty() else (False, UPPER)
    return (False, EXACT) if not returning.is_empty() else (True, kind)


def any_circuit_exists(spec: MatrixSpec) -> dict:
    cv, sound, complete = circuit_vertex_set(spec)
    if cv.is_empty():
        return {"answer": "no" if complete else "unknown", "witness": None, "exact": complete}
    if sound:
        return {"answer": "yes", "witness": cv.some_element(), "exact": True}
    return {"answer": "unknown", "witness": None, "exact": False}


# ---------------------------------------------------------------------------
# terminal circuits
# ---------------------------------------------------------------------------


def has_terminal_circuit(spec: MatrixSpec) -> dict:
    """Terminal circuit = circuit whose every vertex has out-degree exactly
    one; found by following the unique-successor map on such vertices."""
    if spec.universe.is_finite:
        succ = {}
        for v in spec.universe.names:
            sup = spec.row_support(v).finite_elements()
            if len(sup) == 1:
                succ[v] = sup[0]
        hit = _follow_deterministic(succ)
        if hit:
            return {"answer": "yes", "witness": hit, "exact": True}
        return {"answer": "no", "witness": None, "exact": True}
    return _terminal_tracked(spec)


def _follow_deterministic(succ: dict):
    for start in succ:
        path, seen = [start], {start}
        while path[-1] in succ:
            nxt = succ[path[-1]]
            if nxt in seen:
                if nxt in path:
                    return tuple(path[path.index(nxt):])
                break
            if nxt not in succ:
                break
            path.append(nxt)
            seen.add(nxt)
    return None


def _class_successor(spec: MatrixSpec, track: str, rho: int, M: int, B: int):
    """Successor shape of high vertices (track, n == rho mod M, n > B):
    ('one_diag', delta, dst_track) | ('one_fixed', j, None) | ('other',)."""
    n1 = B + 1 + ((rho - B - 1) % M)
    n2 = n1 + M
    outs = []
    for n in (n1, n2):
        sup = spec.row_support((track, n))
        if not sup.is_finite():
            return ("other", None, None)
        el = sup.finite_elements()
        if len(el) != 1:
            return ("other", None, None)
        outs.append(el[0])
    j1, j2 = outs
    if j1 == j2:
        return ("one_fixed", j1, None)
    if (
        isinstance(j1, tuple)
        and isinstance(j2, tuple)
        and j1[0] == j2[0]
        and j2[1] - j1[1] == M
    ):
        return ("one_diag", j1[1] - n1, j1[0])
    return ("other", None, None)


def _terminal_tracked(spec: MatrixSpec) -> dict:
    u = spec.universe
    M = spec.modulus()
    B = spec.low_bound() + M
    width = B + 6 * M + 8
    succ = {}
    for v in window_vertices(spec, width):
        sup = spec.row_support(v)
        if sup.is_finite():
            el = sup.finite_elements()
            if len(el) == 1 and not (isinstance(el[0], tuple) and el[0][1] > width):
                succ[v] = el[0]
    hit = _follow_deterministic(succ)
    if hit:
        return {"answer": "yes", "witness": hit, "exact": True}
    # deterministic class cycles with zero total shift
    det = {
        (t, rho): _class_successor(spec, t, rho, M, B)
        for t in u.names
        for rho in range(M)
    }
    for start, shape in det.items():
        if shape[0] != "one_diag":
            continue
        node, shift, trail = start, 0, {start: 0}
        while det[node][0] == "one_diag":
            _, delta, dst = det[node]
            node = (dst, (node[1] + delta) % M)
            shift += delta
            if node in trail:
                if shift - trail[node] == 0:
                    witness = _realize_deterministic_cycle(spec, node, M, B)
                    if witness:
                        return {"answer": "yes", "witness": witness, "exact": True}
                break
            trail[node] = shift
    return {"answer": "no", "witness": None, "exact": True}


def _realize_deterministic_cycle(spec: MatrixSpec, start_class, M: int, B: int):
    track, rho = start_class
    n = B + 2 * M + ((rho - B - 2 * M - 1) % M) + 1
    v0 = (track, n)
    path = [v0]
    for _ in range(64 * (M + 1)):
        sup = spec.row_support(path[-1])
        if not sup.is_finite():
            return None
        el = sup.finite_elements()
        if len(el) != 1:
            return None
        nxt = el[0]
        if nxt == v0:
            return tuple(path)
        if nxt in path:
            return tuple(path[path.index(nxt):])
        path.append(nxt)
    return None


# ---------------------------------------------------------------------------
# transitory circuits, global verdicts
# ---------------------------------------------------------------------------


def has_transitory_circuit(spec: MatrixSpec, reading: str = "literal") -> dict:
    """Over simple circuits.  Exhaustive on finite universes; on tracked
    ones the vacuous case (no circuits) and the complete-graph case are
    certified, anything else is flagged."""
    if spec.universe.is_finite:
        for rep in enumerate_circuits(spec, len(spec.universe.names)):
            flag = rep.transitory_literal if reading == "literal" else rep.transitory_edge_departure
            if flag:
                return {"answer": "yes", "witness": rep.circuit, "exact": True}
        return {"answer": "no", "witness": None, "exact": True}
    exists = any_circuit_exists(spec)
    if exists["answer"] == "no" and exists["exact"]:
        return {"answer": "no", "witness": None, "exact": True}
    reach = reach_for(spec)
    if spec.default == 1 and reach.conflict_free:
        # complete graph on an infinite universe: every circuit has an exit
        # and every exit returns, under either reading
        return {"answer": "no", "witness": "complete graph", "exact": True}
    width = spec.low_bound() + spec.modulus() + 2
    for rep in enumerate_circuits(spec, max(3, spec.modulus()), width=width):
        flag = rep.transitory_literal if reading == "literal" else rep.transitory_edge_departure
        if flag:
            ans, kind = is_transitory(spec, rep.circuit, reading)
            if ans and kind == EXACT:
                return {"answer": "yes", "witness": rep.circuit, "exact": True}
    return {"answer": "unknown", "witness": None, "exact": False}


def is_transitive(spec: MatrixSpec) -> dict:
    """Strong connectivity: a path between every ordered vertex pair."""
    u = spec.universe
    reach = reach_for(spec)
    if u.is_finite:
        verts = list(u.names)
        for v in verts:
            desc, _ = reach.descendants(IndexSet.of(u, [v]))
            for w in verts:
                if not desc.contains(w):
                    return {"answer": "no", "witness": (v, w), "exact": True}
        return {"answer": "yes", "witness": None, "exact": True}
    M = spec.modulus()
    B = spec.low_bound()
    full = u.full_set()
    probes = [(t, n) for t in u.names for n in range(1, B + 2 * M + 1)]
    ok = True
    for v in probes:
        desc, kind = reach.descendants(IndexSet.of(u, [v]))
        missing = full.difference(desc)
        if not missing.is_empty():
            if kind in (EXACT, UPPER):
                return {"answer": "no", "witness": (v, missing.some_element()), "exact": True}
            ok = False
        elif kind not in (EXACT, LOWER):
            ok = False
    # probes covered the low region and one full residue period beyond the
    # structural bound; higher vertices behave like their class probes
    if ok and reach.conflict_free:
        return {"answer": "yes", "witness": None, "exact": True}
    return {"answer": "unknown", "witness": None, "exact": False}


def is_permutation(spec: MatrixSpec) -> dict:
    """Every row and every column holds exactly one nonzero entry."""
    u = spec.universe
    if u.is_finite:
        probes = list(u.names)
    else:
        M, B = spec.modulus(), spec.low_bound()
        probes = [(t, n) for t in u.names for n in range(1, B + 2 * M + 1)]
        # beyond the sweep, supports repeat with period M
    for i in probes:
        for axis, sup in (("row", spec.row_support(i)), ("column", spec.column(i))):
            if not (sup.is_finite() and len(sup.finite_elements()) == 1):
                return {"answer": "no", "witness": (axis, i), "exact": True}
    return {"answer": "yes", "witness": None, "exact": True}


def every_vertex_reaches_circuit(spec: MatrixSpec) -> dict:
    cv, sound, complete = circuit_vertex_set(spec)
    if cv.is_empty():
        if complete:
            some = window_vertices(spec)[0]
            return {"answer": "no", "witness": (some, "no circuits exist"), "exact": True}
        return {"answer": "unknown", "witness": None, "exact": False}
    reach = reach_for(spec)
    anc, kind = reach.ancestors(cv)
    missing = spec.universe.full_set().difference(anc)
    if missing.is_empty():
        if sound and kind in (EXACT, LOWER):
            return {"answer": "yes", "witness": None, "exact": True}
        return {"answer": "unknown", "witness": None, "exact": False}
    if complete and kind in (EXACT, UPPER):
        return {"answer": "no", "witness": missing.some_element(), "exact": True}
    return {"answer": "unknown", "witness": None, "exact": False}


def is_cofinal(spec: MatrixSpec) -> dict:
    """From every vertex one can intercept every infinite path.

    Finite: every vertex reaches every nontrivial strongly connected
    component (an infinite path's tail lives inside one).  Tracked: every
    certified tail behaviour (circuit families, ascending diagonal rays,
    rectangle-recurrent landings) must be reachable from everywhere.
    """
    u = spec.universe
    reach = reach_for(spec)
    if u.is_finite:
        verts = list(u.names)
        comps = _scc(verts, lambda v: [w for w in verts if spec.entry(v, w) == 1])
        for comp in comps:
            if len(comp) == 1 and spec.entry(comp[0], comp[0]) == 0:
                continue
            anc, _ = reach.ancestors(IndexSet.of(u, comp))
            for v in verts:
                if not anc.contains(v):
                    return {"answer": "no", "witness": (v, tuple(comp)), "exact": True}
        return {"answer": "yes", "witness": None, "exact": True}
    return _cofinal_tracked(spec)


def _stable_high_ancestors(spec: MatrixSpec, track: str, rho: int, M: int):
    """Ancestors of arbitrarily high members of one class: the limit of
    ancestors({members >= m}); beyond the structural bound the rule system
    is translation-uniform, so consecutive stabilization certifies it."""
    reach = reach_for(spec)
    B = spec.low_bound()
    prev = None
    worst = EXACT
    for k in range(1, 6):
        start = B + k * M + ((rho - B - k * M - 1) % M) + 1
        target = IndexSet(spec.universe, tracks={track: BitStream.tail(start, M)})
        anc, kind = reach.ancestors(target)
        if kind != EXACT:
            worst = kind
        if prev is not None and anc == prev:
            return anc, worst
        prev = anc
    return prev, NONE


def _ascending_ray_classes(spec: MatrixSpec) -> list:
    """Classes on a positive-total-shift cycle of eventually-present
    diagonal edges: tails of paths that march upward forever."""
    edges = _diag_class_edges(spec)
    out = []
    for component in _scc(sorted(edges), lambda v: [w for w, _ in edges.get(v, ())]):
        shifts = _cycle_shifts(component, edges)
        if any(s > 0 for s in shifts):
            out.extend(component)
    return sorted(set(out))


def _cofinal_tracked(spec: MatrixSpec) -> dict:
    u = spec.universe
    reach = reach_for(spec)
    full = u.full_set()
    M = spec.modulus()
    if spec.default == 1:
        # with a conflict-free all-ones background the graph is complete and
        # interception is plain mutual reachability
        tr = is_transitive(spec)
        return dict(tr)
    requirements = []  # (label, ancestor set, kind)
    cv, sound, complete = circuit_vertex_set(spec)
    if not complete:
        return {"answer": "unknown", "witness": "circuit analysis incomplete", "exact": False}
    if not cv.is_empty():
        finite_part = IndexSet(u, tracks={t: s for t, s in cv.tracks.items() if s.is_finite()})
        if not finite_part.is_empty():
            anc, kind = reach.ancestors(finite_part)
            requirements.append(("window circuits", anc, kind))
        for t, s in cv.tracks.items():
            if s.is_finite():
                continue
            for rho in range(M):
                if s.eventually_one_on_class(rho + 1, M):
                    anc, kind = _stable_high_ancestors(spec, t, rho, M)
                    requirements.append((f"circuit class {t}%{rho}", anc, kind))
    for (t, rho) in _ascending_ray_classes(spec):
        anc, kind = _stable_high_ancestors(spec, t, rho, M)
        requirements.append((f"ascending ray {t}%{rho}", anc, kind))
    for r in spec.rules:
        if not (isinstance(r, RectRule) and r.value == 1):
            continue
        anc_rows, _ = reach.ancestors(r.rows)
        if r.cols.intersect(anc_rows).is_empty():
            continue  # the rectangle cannot recur
        for t, s in r.cols.tracks.items():
            if s.is_finite():
                continue
            for rho in range(M):
                if s.eventually_one_on_class(rho + 1, M):
                    anc, kind = _stable_high_ancestors(spec, t, rho, M)
                    requirements.append((f"recurrent landing {t}%{rho}", anc, kind))
    if not requirements:
        # every graph with no zero rows has infinite paths, so finding no
        # behaviour at all means the analysis fell short
        return {"answer": "unknown", "witness": "no tail behaviour certified", "exact": False}
    exact = True
    for label, anc, kind in requirements:
        if anc is None or kind == NONE:
            return {"answer": "unknown", "witness": label, "exact": False}
        missing = full.difference(anc)
        if not missing.is_empty():
            if kind in (EXACT, UPPER):
                return {"answer": "no", "witness": (missing.some_element(), label), "exact": True}
            return {"answer": "unknown", "witness": label, "exact": False}
        if kind not in (EXACT, LOWER):
            exact = False
    return {"answer": "yes" if exact else "unknown", "witness": None, "exact": exact}


# ---------------------------------------------------------------------------
# the analyzer verdict bundle
# ---------------------------------------------------------------------------


def analyze(spec: MatrixSpec, transitory_reading: str = "literal") -> dict:
    """Compose graph conditions into theorem-applicability verdicts.

    Sufficient-only criteria answer unknown when their hypotheses fail;
    every yes/no carries a certificate.
    """
    unital = spec.is_unital()
    unital.pop("_Y", None)
    terminal = has_terminal_circuit(spec)
    trans_lit = has_transitory_circuit(spec, "literal")
    trans_edge = has_transitory_circuit(spec, "edge_departure")
    transitive = is_transitive(spec)
    permutation = is_permutation(spec)
    cofinal = is_cofinal(spec)
    reaches = every_vertex_reaches_circuit(spec)

    topo_free = _negate(terminal)
    trans_cfg = trans_lit if transitory_reading == "literal" else trans_edge

    if transitive["answer"] == "yes" and (
        not spec.universe.is_finite or permutation["answer"] == "no"
    ):
        simple = {
            "answer": "yes",
            "witness": {"transitive": transitive["answer"], "permutation": permutation["answer"]},
            "exact": transitive["exact"] and permutation["exact"],
        }
    else:
        simple = {"answer": "unknown", "witness": None, "exact": True}

    if topo_free["answer"] == "yes" and reaches["answer"] == "yes":
        pure = {
            "answer": "yes",
            "witness": None,
            "exact": topo_free["exact"] and reaches["exact"],
        }
    elif topo_free["answer"] == "no" or reaches["answer"] == "no":
        pure = {"answer": "unknown", "witness": "sufficient conditions fail", "exact": True}
    else:
        pure = {"answer": "unknown", "witness": None, "exact": False}

    return {
        "unital": unital,
        "topologically_free": topo_free,
        "uniqueness_applies": dict(topo_free),
        "simple_sufficient": simple,
        "ideal_classification_applies": _negate(trans_cfg),
        "purely_infinite_sufficient": pure,
        "cofinal": cofinal,
        "is_permutation": permutation,
        "transitive": transitive,
        "terminal_circuit": terminal,
        "transitory_circuit_literal": trans_lit,
        "transitory_circuit_edge_departure": trans_edge,
    }


def _negate(v: dict) -> dict:
    flip = {"yes": "no", "no": "yes", "unknown": "unknown"}
    return {"answer": flip[v["answer"]], "witness": v.get("witness"), "exact": v.get("exact", False)}
