import random

import pytest

from ckwork import rep, words
from ckwork.rep import _e, build_rep, token_excursions
from ckwork.words import from_positive, invert


def dense_mult(A, B):
    n = len(A)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if A[i][k]:
                for j in range(n):
                    if B[k][j]:
                        out[i][j] += A[i][k] * B[k][j]
    return out


def dense_of_tokens(R, tokens):
    """Independent oracle: plain matrix products of the generator matrices."""
    n = R.dim
    out = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for x, sign in tokens:
        m = R.generator(x).to_dense()
        if sign == -1:
            m = [[m[j][i] for j in range(n)] for i in range(n)]
        out = dense_mult(out, m)
    return out


def test_basis_counts(o2, golden, three_tracks):
    assert build_rep(o2, ["1", "2"], 3).dim == 2 + 4 + 8
    rg = build_rep(golden, ["1", "2"], 3)
    assert rg.dim == 10
    assert [("".join(w)) for w in rg.basis.words] == [
        "1", "2", "11", "12", "21", "111", "112", "121", "211", "212",
    ]
    # a generator set with no internal continuation warns
    rt = build_rep(three_tracks, [("x", k) for k in (1, 2, 3, 4)], 3)
    assert any("x[1]" in w for w in rt.warnings)


def test_partial_isometry_law(o2, golden):
    for spec in (o2, golden):
        R = build_rep(spec, list(spec.universe.names), 5)
        for g in R.basis.gens:
            L = R.generator(g)
            Lt = L.transpose()
            assert Lt.compose(L).compose(Lt).dest == Lt.dest


def test_operator_matches_dense_oracle(o2, golden):
    rng = random.Random(71)
    for spec in (o2, golden):
        R = build_rep(spec, list(spec.universe.names), 3)
        for _ in range(60):
            tokens = [
                (rng.choice(list(spec.universe.names)), rng.choice((1, -1)))
                for _ in range(rng.randrange(6))
            ]
            assert R.operator(tokens).to_dense() == dense_of_tokens(R, tokens)


def test_monomial_matrix_examples(o2, golden):
    R = build_rep(o2, ["1", "2"], 4)
    q1 = R.operator([("1", -1), ("1", 1)])
    assert q1.is_diagonal()
    assert R.operator([("1", -1), ("2", 1)]).is_zero()
    Rg = build_rep(golden, ["1", "2"], 4)
    assert Rg.operator([("2", 1), ("2", 1)]).is_zero()
    dense = R.monomial_matrix([("1", -1), ("1", 1)])
    assert all(dense[i][j] in (0, 1) for i in range(R.dim) for j in range(R.dim))


def test_relations_exact_pass(o2, golden):
    for spec in (o2, golden):
        R = build_rep(spec, list(spec.universe.names), 6)
        for rel in ("tck1", "tck2", "tck3", "ck1", "ck2"):
            assert R.verify_relation(rel).passed, rel
        assert R.verify_relation("claims", max_len=2).passed
        assert R.verify_relation("semisat", max_len=2).passed


def test_elcond(golden):
    R = build_rep(golden, ["1", "2"], 8)
    # supports computed, not assumed
    assert golden.axyj_support(["2"], []).elements == ["1"]
    assert golden.axyj_support(["1"], ["2"]).elements == ["2"]
    assert R.verify_relation("elcond", X=["2"], Y=[]).passed
    assert R.verify_relation("elcond", X=["1"], Y=["2"]).passed


def test_window_empty_error(o2):
    R = build_rep(o2, ["1", "2"], 2)
    with pytest.raises(ValueError, match="window empty"):
        R.verify_relation("claims", max_len=3)


def test_window_monotonicity(golden):
    # what passes exactly at depth N keeps passing at depth N+1
    for depth in (5, 6):
        R = build_rep(golden, ["1", "2"], depth)
        assert R.verify_relation("claims", max_len=2).passed
        assert R.verify_relation("tck3").passed


def test_check_nonzero(o2, golden):
    R = build_rep(o2, ["1", "2"], 8)
    Rg = build_rep(golden, ["1", "2"], 8)
    assert R.check_nonzero(("1", "2", "1"))
    assert not Rg.check_nonzero(("2", "2"))
    assert Rg.check_nonzero(("2", "1", "1"))
    with pytest.raises(ValueError):
        R.check_nonzero(tuple("12121212"))


def test_projection_compare(golden, o2, perm2):
    Rg = build_rep(golden, ["1", "2"], 8)
    g = from_positive(("1", "2"))
    assert Rg.projection_compare(_e(g), _e(invert(g)), 2, 6) == "p<q"
    Ro = build_rep(o2, ["1", "2"], 8)
    one = from_positive(("1",))
    assert Ro.projection_compare(_e(one), _e(invert(one)), 1, 7) == "p<q"
    Rp = build_rep(perm2, ["1", "2"], 8)
    gp = from_positive(("1", "2"))
    assert Rp.projection_compare(_e(gp), _e(invert(gp)), 2, 6) == "equal"
    with pytest.raises(ValueError, match="diagonal"):
        Rg.projection_compare(((("1"), 1),), _e(one), 1, 6)


def test_infinite_projection_witness(golden, o2, perm2):
    Rg = build_rep(golden, ["1", "2"], 8)
    w = Rg.infinite_projection_witness(("1",), ("2", "1"))
    assert w["vv*<=v*v"] and w["strict"] and w["separating_vector"]
    Ro = build_rep(o2, ["1", "2"], 8)
    w = Ro.infinite_projection_witness(("1",), ("1",))
    assert w["strict"]
    Rp = build_rep(perm2, ["1", "2"], 8)
    w = Rp.infinite_projection_witness(("2", "1"), ("2", "1"))
    assert w["vv*<=v*v"] and not w["strict"] and w["comparison"] == "equal"
    with pytest.raises(ValueError, match="last"):
        Rp.infinite_projection_witness(("1",), ("1", "2"))


def test_token_excursions():
    assert token_excursions([("a", 1)]) == (1, 0)
    assert token_excursions([("a", -1)]) == (0, 1)
    # e(t) for positive t dips |t| down before climbing back
    t = from_positive(("a", "b"))
    assert token_excursions(tuple(t) + invert(tuple(t))) == (0, 2)


def test_depth_validation(o2):
    with pytest.raises(ValueError):
        build_rep(o2, ["1", "2"], 1)
    with pytest.raises(ValueError):
        build_rep(o2, [], 4)
