"""Exact integer realization of the generating partial isometries on a
truncated admissible-path basis.

Basis vectors are the admissible words of length 1..N over a chosen
finite generator set; the generator operators shift a letter onto the
front and annihilate what would overflow.  Every word in the generators
and adjoints is then a partial permutation of the basis, so relation
checks, nonzero certificates and projection comparisons are pure integer
computations with zero tolerance.

Truncation bites in two directions: words near length N lose upward
shifts, and length-one words lose downward shifts because the empty path
is not a basis vector.  A relation of upward excursion u and downward
excursion d is therefore verified on the window d < |w| <= N - u, where
neither effect can reach; windows are computed per instance from the
actual token sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .matrix import MatrixSpec
from .words import GroupWord, invert, reduce_concat


class PathBasis:
    """Admissible words of length 1..depth over a finite generator list,
    ordered length-lexicographically by the given generator order."""

    def __init__(self, spec: MatrixSpec, gens: Iterable, depth: int):
        gens = list(gens)
        if not gens:
            raise ValueError("empty generator set")
        if depth < 2:
            raise ValueError("depth must be at least 2")
        for g in gens:
            spec.universe.check_index(g)
        self.spec = spec
        self.gens = gens
        self.depth = depth
        order = {g: i for i, g in enumerate(gens)}
        words = []
        layer = [(g,) for g in gens]
        while layer:
            words.extend(layer)
            if len(layer[0]) == depth:
                break
            layer = [
                w + (g,)
                for w in layer
                for g in gens
                if spec.entry(w[-1], g) == 1
            ]
        self.words = sorted(words, key=lambda w: (len(w), [order[g] for g in w]))
        self.index = {w: i for i, w in enumerate(self.words)}
        if not self.words:
            raise ValueError("empty basis")

    def __len__(self):
        return len(self.words)


@dataclass
class PartialPerm:
    """Column action of a 0/1 partial permutation matrix: dest[c] is the
    row receiving basis column c, or -1."""

    dest: list

    @staticmethod
    def identity(dim: int) -> "PartialPerm":
        return PartialPerm(list(range(dim)))

    @staticmethod
    def zero(dim: int) -> "PartialPerm":
        return PartialPerm([-1] * dim)

    def compose(self, other: "PartialPerm") -> "PartialPerm":
        """self applied after other."""
        return PartialPerm(
            [self.dest[d] if d != -1 else -1 for d in other.dest]
        )

    def transpose(self) -> "PartialPerm":
        out = [-1] * len(self.dest)
        for c, r in enumerate(self.dest):
            if r != -1:
                out[r] = c
        return PartialPerm(out)

    def is_zero(self) -> bool:
        return all(d == -1 for d in self.dest)

    def is_diagonal(self) -> bool:
        return all(d in (-1, c) for c, d in enumerate(self.dest))

    def diag(self) -> list:
        if not self.is_diagonal():
            raise ValueError("operator is not diagonal")
        return [1 if d == c else 0 for c, d in enumerate(self.dest)]

    def to_dense(self) -> list:
        n = len(self.dest)
        rows = [[0] * n for _ in range(n)]
        for c, r in enumerate(self.dest):
            if r != -1:
                rows[r][c] = 1
        return rows


@dataclass
class WindowReport:
    relation: str
    degree: int
    window_lo: int  # exclusive lower bound from downward truncation
    window_hi: int  # inclusive upper bound from upward truncation
    passed: bool
    instances: int
    witness: Optional[dict] = None

    @property
    def result(self) -> str:
        return "exact-pass" if self.passed else "fail"


def token_excursions(tokens) -> tuple:
    """(up, down): extreme word-length changes while applying the tokens
    rightmost first; +1 per generator, -1 per adjoint."""
    up = down = cur = 0
    for _x, sign in reversed(list(tokens)):
        cur += 1 if sign == 1 else -1
        up = max(up, cur)
        down = min(down, cur)
    return up, -down


class TruncatedRep:
    def __init__(self, spec: MatrixSpec, gens: Iterable, depth: int):
        self.spec = spec
        self.basis = PathBasis(spec, gens, depth)
        self.depth = depth
        self.warnings = []
        gset = set(self.basis.gens)
        for g in self.basis.gens:
            if not any(h in gset for h in spec.row_support(g).iter_sample(len(gset) + 4)):
                self.warnings.append(
                    f"generator {spec.universe.format_index(g)} has no continuation "
                    "inside the chosen set; long words cannot pass through it"
                )
        dim = len(self.basis)
        self._L = {}
        for g in self.basis.gens:
            dest = [-1] * dim
            for c, w in enumerate(self.basis.words):
                if len(w) < depth and spec.entry(g, w[0]) == 1:
                    dest[c] = self.basis.index[(g,) + w]
            self._L[g] = PartialPerm(dest)
        self._word_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def generator(self, g) -> PartialPerm:
        return self._L[g]

    def operator(self, tokens) -> PartialPerm:
        """Partial permutation of a word in the generators and adjoints."""
        out = PartialPerm.identity(self.dim)
        for x, sign in tokens:
            if x not in self._L:
                raise ValueError(f"letter {x!r} outside the generator set")
            step = self._L[x] if sign == 1 else self._transpose(x)
            out = out.compose(step)
        return out

    def _transpose(self, x) -> PartialPerm:
        key = (x, -1)
        if key not in self._word_cache:
            self._word_cache[key] = self._L[x].transpose()
        return self._word_cache[key]

    def monomial_matrix(self, tokens) -> list:
        """Dense integer matrix of a word in generators and adjoints."""
        return self.operator(tokens).to_dense()

    def range_projection(self, t: GroupWord) -> PartialPerm:
        """e(t) = u(t) u(t)^*, cached per reduced word."""
        t = tuple(t)
        key = ("e", t)
        if key not in self._word_cache:
            self._word_cache[key] = self.operator(t + invert(t))
        return self._word_cache[key]

    # -- verification ------------------------------------------------------

    def _window(self, *token_lists) -> tuple:
        up = down = 0
        for toks in token_lists:
            u, d = token_excursions(toks)
            up = max(up, u)
            down = max(down, d)
        return down, self.depth - up  # verified on lo < |w| <= hi

    def _compare_ops(self, label, lhs_tokens, rhs_tokens, rhs_scale=1):
        """One relation instance: operators agree on the instance window."""
        lo, hi = self._window(lhs_tokens, rhs_tokens)
        if lo >= hi:
            raise ValueError(f"{label}: window empty (depth too small)")
        lhs = self.operator(lhs_tokens)
        rhs = self.operator(rhs_tokens) if rhs_scale else PartialPerm.zero(self.dim)
        degree = max(len(lhs_tokens), len(rhs_tokens))
        for c, w in enumerate(self.basis.words):
            if not (lo < len(w) <= hi):
                continue
            if lhs.dest[c] != rhs.dest[c]:
                return degree, lo, hi, {
                    "instance": label,
                    "vector": self._fmt_word(w),
                    "lhs": self._fmt_dest(lhs.dest[c]),
                    "rhs": self._fmt_dest(rhs.dest[c]),
                }
        return degree, lo, hi, None

    def _fmt_word(self, w):
        return " ".join(self.spec.universe.format_index(x) for x in w)

    def _fmt_dest(self, d):
        return "0" if d == -1 else self._fmt_word(self.basis.words[d])

    def _aggregate(self, relation, instances) -> WindowReport:
        degree = 0
        lo_all, hi_all = 0, self.depth
        count = 0
        for label, lhs, rhs, scale in instances:
            count += 1
            d, lo, hi, bad = self._compare_ops(label, lhs, rhs, scale)
            degree = max(degree, d)
            lo_all = max(lo_all, lo)
            hi_all = min(hi_all, hi)
            if bad:
                return WindowReport(relation, degree, lo, hi, False, count, bad)
        return WindowReport(relation, degree, lo_all, hi_all, True, count)

    def verify_relation(self, relation: str, **params) -> WindowReport:
        """Verify a named relation family exactly on its window.

        Families: tck1, tck2, tck3, ck1, ck2, elcond (X=, Y=),
        claims (max_len=), semisat (max_len=).
        """
        gens = self.basis.gens
        if relation == "tck1":
            return self._aggregate(
                "tck1",
                (
                    (f"Q{self._fmt_word((i,))} Q{self._fmt_word((j,))} commute",
                     _q(i) + _q(j), _q(j) + _q(i), 1)
                    for i in gens
                    for j in gens
                ),
            )
        if relation == "tck2":
            return self._aggregate(
                "tck2",
                (
                    (f"S*{self._fmt_word((i,))} S{self._fmt_word((j,))} = 0",
                     ((i, -1), (j, 1)), (), 0)
                    for i in gens
                    for j in gens
                    if i != j
                ),
            )
        if relation == "tck3":
            insts = []
            for i in gens:
                for j in gens:
                    lhs = _q(i) + ((j, 1),)
                    rhs = ((j, 1),) if self.spec.entry(i, j) else ()
                    insts.append((f"Q S rule at ({self._fmt_word((i,))},{self._fmt_word((j,))})",
                                  lhs, rhs, self.spec.entry(i, j)))
            return self._aggregate("tck3", insts)
        if relation == "ck1":
            return self._sum_relation("ck1", [], [], identity=True)
        if relation == "ck2":
            report = None
            for i in gens:
                sup = self.spec.row_support(i)
                if not sup.is_finite() or not set(sup.finite_elements()) <= set(gens):
                    raise ValueError(
                        f"ck2 needs the row of {self.spec.universe.format_index(i)} inside the generator set"
                    )
                r = self._sum_relation(f"ck2[{self._fmt_word((i,))}]", [i], [])
                report = _merge_reports("ck2", report, r)
            return report
        if relation == "elcond":
            X = list(params.get("X", ()))
            Y = list(params.get("Y", ()))
            support = self.spec.axyj_support(X, Y)
            if not support.finite:
                raise ValueError("elcond needs a finitely supported (X, Y) pair")
            if not set(support.elements) <= set(gens):
                raise ValueError("elcond support must lie inside the generator set")
            return self._sum_relation(
                f"elcond X={[self._fmt_word((x,)) for x in X]} Y={[self._fmt_word((y,)) for y in Y]}",
                X,
                Y,
            )
        if relation == "claims":
            return self._claims(params.get("max_len", 3))
        if relation == "semisat":
            return self._semisat(params.get("max_len", 3))
        raise ValueError(f"unknown relation {relation!r}")

    def _sum_relation(self, label, X, Y, identity=False) -> WindowReport:
        """prod Q_x prod (1 - Q_y) = sum_j A(X,Y,j) P_j, with the empty
        product read as the identity on the window (ck1)."""
        words = self.basis.words
        lo = 1  # P_j needs one downward step
        hi = self.depth - 1  # Q_y needs one upward step
        if lo >= hi:
            raise ValueError(f"{label}: window empty (depth too small)")
        qs = {g: self.operator(_q(g)).diag() for g in set(X) | set(Y)}
        ps = {g: self.operator(_p(g)).diag() for g in self.basis.gens}
        if identity:
            coeff = {g: 1 for g in self.basis.gens}
        else:
            support = self.spec.axyj_support(X, Y).elements
            coeff = {g: (1 if g in support else 0) for g in self.basis.gens}
        for c, w in enumerate(words):
            if not (lo < len(w) <= hi):
                continue
            lhs = 1
            for x in X:
                lhs *= qs[x][c]
            for y in Y:
                lhs *= 1 - qs[y][c]
            rhs = sum(coeff[g] * ps[g][c] for g in self.basis.gens)
            if lhs != rhs:
                return WindowReport(
                    label, 2 * max(1, len(X) + len(Y)), lo, hi, False, 1,
                    {"vector": self._fmt_word(w), "lhs": lhs, "rhs": rhs},
                )
        return WindowReport(label, 2 * max(1, len(X) + len(Y)), lo, hi, True, 1)

    def _positive_words(self, max_len):
        out = [()]
        layer = [(g,) for g in self.basis.gens]
        for _ in range(max_len):
            out.extend(layer)
            layer = [w + (g,) for w in layer for g in self.basis.gens]
        return out

    def _reduced_words(self, max_len):
        out = [()]
        layer = [((g, s),) for g in self.basis.gens for s in (1, -1)]
        for _ in range(max_len):
            out.extend(layer)
            layer = [
                w + ((g, s),)
                for w in layer
                for g in self.basis.gens
                for s in (1, -1)
                if not (w[-1][0] == g and w[-1][1] == -s)
            ]
        return out

    def _claims(self, max_len: int) -> WindowReport:
        spec = self.spec
        pos = [w for w in self._positive_words(max_len) if w]
        insts = []
        # the source projection of a positive word is the last letter's
        # domain projection, scaled by the adjacency product
        for a in pos:
            delta = 1
            for p, q in zip(a, a[1:]):
                delta &= spec.entry(p, q)
            lhs = _tok_neg(a) + _tok_pos(a)
            rhs = _q(a[-1]) if delta else ()
            insts.append((f"source projection {self._fmt_word(a)}", lhs, rhs, delta))
        # words that do not extend one another have orthogonal ranges
        for a in pos:
            for b in pos:
                prefix = a[: len(b)] == b or b[: len(a)] == a
                if not prefix:
                    insts.append(
                        (f"orthogonality {self._fmt_word(a)} | {self._fmt_word(b)}",
                         _tok_neg(a) + _tok_pos(b), (), 0)
                    )
        # range projections of positive words commute
        for a in pos:
            for b in pos:
                ea, eb = _e(_tok_pos(a)), _e(_tok_pos(b))
                insts.append((f"positive ranges commute {self._fmt_word(a)} | {self._fmt_word(b)}",
                              ea + eb, eb + ea, 1))
        # domain projections commute with conjugated projections
        for x in self.basis.gens:
            for a in pos:
                for inner in [None] + list(self.basis.gens):
                    mid = _q(inner) if inner is not None else ()
                    conj = _tok_pos(a) + mid + _tok_neg(a)
                    insts.append(
                        (f"conjugate commute {self._fmt_word((x,))} | {self._fmt_word(a)}",
                         _q(x) + conj, conj + _q(x), 1)
                    )
        report = self._aggregate("claims:words", insts)
        if not report.passed:
            return report
        # range projections of arbitrary reduced words commute; cached
        # projections keep the quadratic sweep cheap
        r6 = None
        degree = 0
        lo_all, hi_all = 0, self.depth
        count = 0
        reduced = self._reduced_words(max_len)
        for t in reduced:
            for s in reduced:
                count += 1
                lo, hi = self._window(_e(tuple(t)) + _e(tuple(s)))
                degree = max(degree, 2 * (len(t) + len(s)))
                lo_all, hi_all = max(lo_all, lo), min(hi_all, hi)
                et, es = self.range_projection(t), self.range_projection(s)
                bad = self._first_mismatch(et.compose(es), es.compose(et), lo, hi)
                if bad is not None:
                    r6 = WindowReport(
                        "claims:ranges", degree, lo, hi, False, count,
                        {"instance": f"ranges commute {t} | {s}", "vector": bad},
                    )
                    break
            if r6:
                break
        if r6 is None:
            r6 = WindowReport("claims:ranges", degree, lo_all, hi_all, True, count)
        return _merge_reports(f"claims(max_len={max_len})", report, r6)

    def _first_mismatch(self, a: PartialPerm, b: PartialPerm, lo: int, hi: int):
        for c, w in enumerate(self.basis.words):
            if lo < len(w) <= hi and a.dest[c] != b.dest[c]:
                return self._fmt_word(w)
        return None

    def _semisat(self, max_len: int) -> WindowReport:
        degree = 0
        lo_all, hi_all = 0, self.depth
        count = 0
        reduced = self._reduced_words(max_len)
        for t in reduced:
            et = self.range_projection(t)
            for s in reduced:
                ts = reduce_concat(tuple(t), tuple(s))
                if len(ts) != len(t) + len(s) or not ts:
                    continue
                count += 1
                lo, hi = self._window(_e(ts) + _e(tuple(t)))
                degree = max(degree, 2 * len(ts) + 2 * len(t))
                lo_all, hi_all = max(lo_all, lo), min(hi_all, hi)
                ets = self.range_projection(ts)
                bad = self._first_mismatch(ets.compose(et), ets, lo, hi)
                if bad is not None:
                    return WindowReport(
                        f"semisat(max_len={max_len})", degree, lo, hi, False, count,
                        {"instance": f"semisat {t} | {s}", "vector": bad},
                    )
        return WindowReport(f"semisat(max_len={max_len})", degree, lo_all, hi_all, True, count)

    # -- nonzero and order certificates ---------------------------------------

    def check_nonzero(self, alpha) -> bool:
        """Sound nonzero certificate: a nonzero truncated matrix lifts to a
        nonzero operator in the untruncated representation."""
        alpha = tuple(alpha)
        if not alpha:
            raise ValueError("empty word")
        if len(alpha) + 1 > self.depth:
            raise ValueError("word too long for this window (inconclusive)")
        gset = set(self.basis.gens)
        for x in alpha:
            if x not in gset:
                raise ValueError("letters must lie in the generator set")
        if not any(g in gset for g in self.spec.row_support(alpha[-1]).iter_sample(len(gset) + 4)):
            raise ValueError("no continuation inside the generator set (inconclusive)")
        return not self.operator(_tok_pos(alpha)).is_zero()

    def projection_compare(self, p_tokens, q_tokens, lo: int, hi: int) -> str:
        """Pointwise comparison of two diagonal 0/1 operators on the window
        lo < |w| <= hi: 'equal' | 'p<q' | 'q<p' | 'incomparable'."""
        p = self.operator(p_tokens)
        q = self.operator(q_tokens)
        if not (p.is_diagonal() and q.is_diagonal()):
            raise ValueError("projection_compare needs diagonal operators")
        dp, dq = p.diag(), q.diag()
        p_le_q = q_le_p = True
        seen_diff = False
        for c, w in enumerate(self.basis.words):
            if not (lo < len(w) <= hi):
                continue
            a, b = dp[c], dq[c]
            if a > b:
                p_le_q = False
            if b > a:
                q_le_p = False
            if a != b:
                seen_diff = True
        if not seen_diff:
            return "equal"
        if p_le_q:
            return "p<q"
        if q_le_p:
            return "q<p"
        return "incomparable"

    def infinite_projection_witness(self, alpha, gamma) -> dict:
        """For a circuit gamma with last(alpha) = last(gamma), the partial
        isometry v = u(alpha gamma) u(alpha)* has vv* <= v*v on the window,
        strictly when gamma has an exit; the separating vector starts with
        alpha followed by the exit."""
        alpha, gamma = tuple(alpha), tuple(gamma)
        if not gamma or alpha[-1:] != gamma[-1:]:
            raise ValueError("need last(alpha) = last(gamma)")
        if self.spec.entry(gamma[-1], gamma[0]) != 1:
            raise ValueError("gamma is not a circuit")
        v = _tok_pos(alpha + gamma) + _tok_neg(alpha)
        vv = self.operator(v + _adj(v))
        vstarv = self.operator(_adj(v) + v)
        if not (vv.is_diagonal() and vstarv.is_diagonal()):
            raise ValueError("projections did not come out diagonal")
        up, down = token_excursions(v + _adj(v))
        up2, down2 = token_excursions(_adj(v) + v)
        lo, hi = max(down, down2), self.depth - max(up, up2)
        if lo >= hi:
            raise ValueError("window empty (depth too small)")
        cmp = self.projection_compare(v + _adj(v), _adj(v) + v, lo, hi)
        leq = cmp in ("equal", "p<q")
        strict = cmp == "p<q"
        exit_word = None
        separating = None
        if strict:
            exit_word = self._find_exit(gamma)
            if exit_word is not None:
                mu = alpha + exit_word
                d_vsv = vstarv.diag()
                d_vv = vv.diag()
                for c, w in enumerate(self.basis.words):
                    if lo < len(w) <= hi and w[: len(mu)] == mu and d_vsv[c] and not d_vv[c]:
                        separating = self._fmt_word(w)
                        break
        return {
            "comparison": cmp,
            "vv*<=v*v": leq,
            "strict": strict,
            "exit": self._fmt_word(exit_word) if exit_word else None,
            "separating_vector": separating,
            "window": (lo, hi),
        }

    def _find_exit(self, gamma):
        """The departing word at the first exit: the circuit prefix up to the
        exit vertex followed by the off-circuit letter, or the bare letter
        when the exit sits at the closing edge."""
        n = len(gamma)
        for k, v in enumerate(gamma):
            nxt = gamma[(k + 1) % n]
            for y in self.basis.gens:
                if y != nxt and self.spec.entry(v, y) == 1:
                    return ((y,) if k == n - 1 else gamma[: k + 1] + (y,))
        return None


def _q(x) -> tuple:
    return ((x, -1), (x, 1))


def _p(x) -> tuple:
    return ((x, 1), (x, -1))


def _tok_pos(word) -> tuple:
    return tuple((x, 1) for x in word)


def _tok_neg(word) -> tuple:
    return tuple((x, -1) for x in reversed(word))


def _adj(tokens) -> tuple:
    return tuple((x, -s) for x, s in reversed(tokens))


def _e(t: GroupWord) -> tuple:
    return tuple(t) + invert(tuple(t))


def _merge_reports(relation, a: Optional[WindowReport], b: WindowReport) -> WindowReport:
    if a is None:
        return WindowReport(relation, b.degree, b.window_lo, b.window_hi, b.passed, b.instances, b.witness)
    return WindowReport(
        relation,
        max(a.degree, b.degree),
        max(a.window_lo, b.window_lo),
        min(a.window_hi, b.window_hi),
        a.passed and b.passed,
        a.instances + b.instances,
        a.witness or b.witness,
    )


def build_rep(spec: MatrixSpec, gens, depth: int) -> TruncatedRep:
    return TruncatedRep(spec, gens, depth)
