import random

import pytest

from ckwork import dynamics, spectrum, words
from ckwork.dynamics import (
    act,
    e_inclusion_order,
    e_x_contains,
    fixed_point,
    garfo_counterexample_search,
    in_domain,
    isolated_in_orbit,
    pattern_contains,
    sample_points,
)
from ckwork.spectrum import Pattern, contains, equal, make_bounded, make_unbounded
from ckwork.universe import IndexSet
from ckwork.words import EvPeriodicWord, from_positive, invert, reduce_concat, reduce_letters


def random_reduced(rng, gens, max_len):
    return reduce_letters(
        (rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randrange(max_len + 1))
    )


def test_identity_action(o2, golden):
    for spec in (o2, golden):
        for xi in sample_points(spec, 10, seed=3):
            assert in_domain(spec, xi, ())
            assert equal(act(spec, xi, ()), xi)


def test_composition_on_samples(o2, golden):
    rng = random.Random(99)
    checked = 0
    for spec in (o2, golden):
        pts = sample_points(spec, 40, seed=4)
        while checked < 200:
            xi = rng.choice(pts)
            t = random_reduced(rng, list(spec.universe.names), 4)
            s = random_reduced(rng, list(spec.universe.names), 4)
            if not in_domain(spec, xi, s):
                continue
            mid = act(spec, xi, s)
            if not in_domain(spec, mid, t):
                continue
            ts = reduce_concat(t, s)
            if not in_domain(spec, xi, ts):
                continue
            assert equal(act(spec, mid, t), act(spec, xi, ts))
            checked += 1
    assert checked == 200


def test_action_invertible_on_domain(o2, golden):
    rng = random.Random(12)
    for spec in (o2, golden):
        for xi in sample_points(spec, 25, seed=5):
            t = random_reduced(rng, list(spec.universe.names), 4)
            if not in_domain(spec, xi, t):
                continue
            moved = act(spec, xi, t)
            assert in_domain(spec, moved, invert(t))
            assert equal(act(spec, moved, invert(t)), xi)


def test_act_examples(three_tracks, o2):
    xi = make_bounded(three_tracks, (), IndexSet.of(three_tracks.universe, [("x", 1)]))
    moved = act(three_tracks, xi, from_positive((("x", 1),)))
    assert moved.stem == (("x", 1),)
    assert moved.root == xi.root  # tip root carried over
    p = make_unbounded(o2, EvPeriodicWord.make((), ("1",)))
    moved = act(o2, p, from_positive(("2",)))
    assert moved.stem == EvPeriodicWord.make(("2",), ("1",))


def test_domain_examples(o2, golden):
    p = make_unbounded(o2, EvPeriodicWord.make((), ("1",)))
    assert in_domain(o2, p, from_positive(("2",)))
    g = make_unbounded(golden, EvPeriodicWord.make((), ("1",)))
    assert not in_domain(golden, g, from_positive(("2", "2")))
    with pytest.raises(ValueError):
        act(golden, g, from_positive(("2", "2")))


def test_fixed_point_examples(o2, golden):
    xi = fixed_point(o2, from_positive(("1",)))
    assert xi.stem == EvPeriodicWord.make((), ("1",))
    assert fixed_point(golden, from_positive(("2", "2"))) is None
    t = reduce_letters([("1", 1), ("2", 1), ("1", -1)])
    xi = fixed_point(o2, t)
    assert xi.stem == EvPeriodicWord.make(("1",), ("2",))
    with pytest.raises(ValueError):
        fixed_point(o2, ())


def test_fixed_point_soundness_and_uniqueness(o2):
    rng = random.Random(7)
    gens = ["1", "2"]
    pts = sample_points(o2, 80, seed=6)
    for alpha_len in (0, 1, 2):
        for gamma_len in (1, 2):
            for _ in range(3):
                alpha = tuple(rng.choice(gens) for _ in range(alpha_len))
                gamma = tuple(rng.choice(gens) for _ in range(gamma_len))
                t = reduce_concat(
                    reduce_concat(from_positive(alpha), from_positive(gamma)),
                    invert(from_positive(alpha)),
                )
                if not t:
                    continue
                xi = fixed_point(o2, t)
                assert xi is not None
                assert equal(act(o2, xi, t), xi)
                moved = 0
                for eta in pts:
                    if equal(eta, xi) or not in_domain(o2, eta, t):
                        continue
                    assert not equal(act(o2, eta, t), eta)
                    moved += 1
                    if moved >= 50:
                        break


def test_e_x_examples(three_tracks, o2):
    xi = make_bounded(three_tracks, (), IndexSet.of(three_tracks.universe, [("x", 1)]))
    assert e_x_contains(three_tracks, xi, ("x", 1))
    for n in range(1, 11):
        assert not e_x_contains(three_tracks, xi, ("y", n))
    p = make_unbounded(o2, EvPeriodicWord.make((), ("1",)))
    assert e_x_contains(o2, p, "2")


def test_e_x_action_invariance(o2, golden):
    rng = random.Random(8)
    for spec in (o2, golden):
        for xi in sample_points(spec, 20, seed=9):
            t = random_reduced(rng, list(spec.universe.names), 3)
            if not in_domain(spec, xi, t):
                continue
            moved = act(spec, xi, t)
            for x in spec.universe.names:
                assert e_x_contains(spec, xi, x) == e_x_contains(spec, moved, x)


def test_pattern_examples(three_tracks):
    xi = make_bounded(three_tracks, (), IndexSet.of(three_tracks.universe, [("x", 1)]))
    empty = Pattern((), frozenset(), frozenset(), frozenset())
    assert pattern_contains(three_tracks, empty, xi)
    only_x1 = Pattern((), frozenset({("x", 1)}), frozenset(), frozenset())
    assert pattern_contains(three_tracks, only_x1, xi)
    y5 = Pattern((), frozenset({("y", 5)}), frozenset(), frozenset())
    assert not pattern_contains(three_tracks, y5, xi)


def test_pattern_agrees_with_e_x(o2, golden):
    # the singleton-X pattern describes exactly the edge-orbit set
    for spec in (o2, golden):
        for xi in sample_points(spec, 25, seed=10):
            for x in spec.universe.names:
                pat = Pattern((), frozenset({x}), frozenset(), frozenset())
                assert pattern_contains(spec, pat, xi) == e_x_contains(spec, xi, x)


def test_pattern_respects_negatives(golden):
    # a point with 2 in the root but no 1-edge anywhere requires ambient
    # tau; inside it the (X={2}, Y={1}) pattern must hold at the base point
    u = golden.universe
    xi = make_bounded(golden, (), IndexSet.of(u, ["2"]))
    pat = Pattern((), frozenset({"2"}), frozenset(), frozenset())
    assert pattern_contains(golden, pat, xi)
    # Y blocks the tip: every element with a 2-edge here also has a 1-edge
    pat2 = Pattern((), frozenset({"2"}), frozenset({"1"}), frozenset())
    assert pattern_contains(golden, pat2, xi)
    xi2 = make_bounded(golden, (), IndexSet.of(u, ["1", "2"]))
    assert not pattern_contains(golden, pat2, xi2)


def test_inclusion_order(o2, perm2, three_tracks):
    rel = e_inclusion_order(o2, ["1", "2"])
    assert rel["1"] == {"1", "2"} and rel["2"] == {"1", "2"}
    rel = e_inclusion_order(perm2, ["1", "2"])
    assert rel["1"] == {"1", "2"} and rel["2"] == {"1", "2"}
    probe = [("x", 1), ("y", 1), ("z", 1)]
    rel = e_inclusion_order(three_tracks, probe)
    assert rel[("x", 1)] == set(probe)
    assert rel[("y", 1)] == {("y", 1), ("z", 1)}
    assert rel[("z", 1)] == {("z", 1)}


def test_garfo(golden, o2, three_tracks):
    assert garfo_counterexample_search(golden, "2") is None
    assert garfo_counterexample_search(o2, "1") is None
    w = garfo_counterexample_search(three_tracks, ("x", 1))
    assert w is not None
    assert w.stem == () and w.root.finite_elements() == [("x", 1)]


def test_isolated_in_orbit(o2, golden, perm2):
    assert isolated_in_orbit(o2, from_positive(("1",))) is False
    assert isolated_in_orbit(golden, from_positive(("1",))) is False
    assert isolated_in_orbit(perm2, from_positive(("1", "2"))) is True
    assert isolated_in_orbit(perm2, from_positive(("1", "2")), "edge_departure") is True
    with pytest.raises(ValueError):
        isolated_in_orbit(golden, from_positive(("2", "2")))
