import itertools
import random

import pytest

from ckwork import algebra, spectrum, words
from ckwork.algebra import (
    TAU,
    TILDE,
    ClopenConstraint,
    Monomial,
    ZERO,
    adjoint,
    is_empty,
    is_zero_u,
    leq_projection,
    monomial_to_constraint,
    multiply,
    of_group_word,
    range_monomial,
    rewrite,
    solve,
)
from ckwork.words import from_positive, invert, reduce_letters


def random_tokens(rng, gens, max_len):
    return [(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randrange(max_len + 1))]


def reduced_words(gens, max_len):
    out = [()]
    layer = [((g, s),) for g in gens for s in (1, -1)]
    for _ in range(max_len):
        out.extend(layer)
        layer = [
            w + ((g, s),)
            for w in layer
            for g in gens
            for s in (1, -1)
            if not (w[-1][0] == g and w[-1][1] == -s)
        ]
    return out


def test_rewrite_examples(o2, golden):
    assert rewrite(o2, [("1", -1), ("2", 1)]).is_zero()
    assert rewrite(golden, [("2", 1), ("2", 1)]).is_zero()
    m = rewrite(o2, [("1", 1), ("1", -1), ("1", 1)])
    assert m == Monomial(1, ("1",), frozenset(), ())
    # P_i S_j = delta_ij S_j
    assert rewrite(o2, [("1", 1), ("1", -1), ("2", 1)]).is_zero()
    q = rewrite(golden, [("1", -1), ("1", 1)])
    assert q == Monomial(1, (), frozenset({"1"}), ())


def test_rewrite_multiplicative_random(o2, golden):
    # evaluation order cannot matter: folding a word equals multiplying
    # the canonical forms of any split
    rng = random.Random(41)
    for spec in (o2, golden):
        for _ in range(500):
            tokens = random_tokens(rng, list(spec.universe.names), 10)
            whole = rewrite(spec, tokens)
            k = rng.randrange(len(tokens) + 1)
            left = rewrite(spec, tokens[:k])
            right = rewrite(spec, tokens[k:])
            assert whole == multiply(spec, left, right)


def test_adjoint_involution(o2, golden):
    rng = random.Random(43)
    for spec in (o2, golden):
        for _ in range(200):
            m = rewrite(spec, random_tokens(rng, list(spec.universe.names), 8))
            assert adjoint(adjoint(m)) == m


def test_claim6_constraint_commutativity(o2, golden):
    # products of range projections rewrite to the same canonical monomial
    # in either order
    for spec in (o2, golden):
        for t in reduced_words(list(spec.universe.names), 3):
            et = range_monomial(spec, t)
            for s in reduced_words(list(spec.universe.names), 3):
                es = range_monomial(spec, s)
                assert multiply(spec, et, es) == multiply(spec, es, et)


def test_monomial_to_constraint_examples(o2):
    t = (("1", 1), ("2", -1))
    m = range_monomial(o2, t)
    c = monomial_to_constraint(o2, m)
    assert t in c.positives
    q1 = rewrite(o2, [("1", -1), ("1", 1)])
    c = monomial_to_constraint(o2, q1)
    assert (("1", -1),) in c.positives
    with pytest.raises(ValueError):
        monomial_to_constraint(o2, ZERO)


def test_is_empty_examples(golden):
    pos2 = (("2", -1),)
    neg1 = (("1", -1),)
    assert not is_empty(golden, ClopenConstraint.make([pos2], [], TAU))
    assert not is_empty(golden, ClopenConstraint.make([pos2], [neg1], TAU))
    assert is_empty(golden, ClopenConstraint.make([pos2], [neg1], TILDE))
    # e is in every point
    assert is_empty(golden, ClopenConstraint.make([], [()], TAU))


def test_solver_witnesses_revalidate(o2, golden):
    rng = random.Random(47)
    for spec in (o2, golden):
        vocab = reduced_words(list(spec.universe.names), 3)
        for _ in range(120):
            pos = [rng.choice(vocab) for _ in range(rng.randrange(3))]
            neg = [rng.choice(vocab) for _ in range(rng.randrange(3))]
            for ambient in (TAU, TILDE):
                sol = solve(spec, ClopenConstraint.make(pos, neg, ambient))
                if sol.empty or sol.witness is None:
                    continue
                xi = sol.witness
                for t in pos:
                    assert spectrum.contains(spec, xi, tuple(t))
                for s in neg:
                    assert not spectrum.contains(spec, xi, tuple(s))
                if ambient == TILDE:
                    assert spectrum.in_tilde_omega(spec, xi)


def test_ambient_monotonicity(o2, golden):
    # the boundary sits inside the Toeplitz spectrum: emptiness upstairs
    # forces emptiness downstairs
    rng = random.Random(53)
    for spec in (o2, golden):
        vocab = reduced_words(list(spec.universe.names), 3)
        for _ in range(150):
            pos = [rng.choice(vocab) for _ in range(rng.randrange(3))]
            neg = [rng.choice(vocab) for _ in range(rng.randrange(3))]
            tau_empty = is_empty(spec, ClopenConstraint.make(pos, neg, TAU))
            tilde_empty = is_empty(spec, ClopenConstraint.make(pos, neg, TILDE))
            if tau_empty:
                assert tilde_empty


def test_is_zero_u_examples(o2, golden):
    assert is_zero_u(o2, reduce_letters([("1", -1), ("2", 1)]))
    assert is_zero_u(golden, from_positive(("2", "2")))
    assert not is_zero_u(o2, ())
    assert not is_zero_u(golden, reduce_letters([("2", 1), ("1", -1)]))


def test_leq_projection_examples(o2):
    e12 = ClopenConstraint.make([from_positive(("1", "2"))], (), TAU)
    e1 = ClopenConstraint.make([from_positive(("1",))], (), TAU)
    assert leq_projection(o2, e12, e1)
    assert not leq_projection(o2, e1, e12)
    q1 = ClopenConstraint.make([(("1", -1),)], (), TILDE)
    q2 = ClopenConstraint.make([(("2", -1),)], (), TILDE)
    assert leq_projection(o2, q1, q2)
    p1 = ClopenConstraint.make([from_positive(("1",))], (), TAU)
    p2 = ClopenConstraint.make([from_positive(("2",))], (), TAU)
    assert not leq_projection(o2, p1, p2)
    with pytest.raises(ValueError, match="ambient"):
        leq_projection(o2, q1, e1)


def test_ck_relation_casework(o2, golden, perm2):
    # the finite-support relation: prod Q_x prod (1-Q_y) = sum_j A(X,Y,j) P_j,
    # checked set-theoretically in the boundary ambient
    for spec in (o2, golden, perm2):
        gens = list(spec.universe.names)
        subsets = [()] + [(g,) for g in gens] + [tuple(gens)]
        for X in subsets:
            for Y in subsets:
                if set(X) & set(Y):
                    continue
                support = spec.axyj_support(X, Y)
                if not support.finite:
                    continue
                sup = support.elements
                lhs_pos = [((x, -1),) for x in X]
                lhs_neg = [((y, -1),) for y in Y]
                # no point satisfies the left side while avoiding every P_j
                both = ClopenConstraint.make(
                    lhs_pos, lhs_neg + [from_positive((j,)) for j in sup], TILDE
                )
                assert is_empty(spec, both), (X, Y)
                # each P_j sits under the left side
                for j in sup:
                    pj = ClopenConstraint.make([from_positive((j,))], [], TILDE)
                    lhs = ClopenConstraint.make(lhs_pos, lhs_neg, TILDE)
                    assert leq_projection(spec, pj, lhs), (X, Y, j)


def test_semi_saturation_in_constraints(o2, golden):
    # e(ts) <= e(t) along geodesics, at constraint level
    for spec in (o2, golden):
        vocab = reduced_words(list(spec.universe.names), 2)
        for t in vocab:
            for s in vocab:
                ts = words.reduce_concat(tuple(t), tuple(s))
                if len(ts) != len(t) + len(s) or not ts:
                    continue
                a = ClopenConstraint.make([ts], (), TAU)
                b = ClopenConstraint.make([tuple(t)], (), TAU)
                assert leq_projection(spec, a, b)
