from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from listlab.errors import InfeasibleError
from listlab.galois import field_new
from listlab.linear_code import (
    LinearCode,
    code_from_json,
    code_to_json,
    full_rs_code,
    hadamard_code,
    puncture_code,
    rs_code,
    sample_code,
)


def test_rs_encode_direct_evaluation():
    f = field_new(5)
    c = rs_code(f, 2, [0, 1, 2])
    assert c.encode((1, 1)) == (1, 2, 3)  # f(x) = 1 + x
    assert c.encode((0, 0)) == (0, 0, 0)
    assert c.encode((0, 1)) == (0, 1, 2)  # basis message -> generator row


def test_rs_distance_on_distinct_points():
    f = field_new(5)
    c = rs_code(f, 2, [0, 1, 2, 3])
    assert c.rank() == 2
    assert c.min_distance_exact() == Fraction(3, 4)


def test_rs_rejects_k_above_q():
    with pytest.raises(ValueError):
        rs_code(field_new(5), 6, [0, 1, 2])


def test_rs_repeated_evaluation_points():
    f = field_new(5)
    c = rs_code(f, 2, [1, 1, 2, 3])
    # a + bx with root at 1 is zero on two coordinates at once
    assert c.min_distance_exact() == Fraction(1, 2)
    distinct = rs_code(f, 2, [0, 1, 2, 3])
    assert c.min_distance_exact() <= distinct.min_distance_exact()


def test_hadamard_enumeration_order():
    c = hadamard_code(field_new(2), 2)
    assert c.n == 4
    cols = [tuple(row[j] for row in c.generator) for j in range(4)]
    assert cols == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_hadamard_distance():
    assert hadamard_code(field_new(3), 1).min_distance_exact() == Fraction(2, 3)
    assert hadamard_code(field_new(3), 2).min_distance_exact() == Fraction(2, 3)


def test_hadamard_budget():
    with pytest.raises(InfeasibleError):
        hadamard_code(field_new(2), 21)


def test_vandermonde_rank_all_gf7_subsets():
    f = field_new(7)
    for r in range(1, 8):
        for points in itertools.combinations(range(7), r):
            for k in range(1, 8):
                c = rs_code(f, k, list(points))
                assert c.rank() == min(k, len(points))


def test_sample_code_seed_reproducible():
    parent = full_rs_code(field_new(7), 2)
    a = sample_code(parent, 5, seed=42)
    b = sample_code(parent, 5, seed=42)
    assert a.generator == b.generator
    assert a.provenance == b.provenance
    c = sample_code(parent, 5, seed=43)
    assert a.generator != c.generator


def test_sample_code_allows_repeats():
    parent = full_rs_code(field_new(5), 2)
    seen_repeat = any(
        len(set(sample_code(parent, 5, seed=s).provenance["columns"])) < 5 for s in range(20)
    )
    assert seen_repeat


def test_puncture_full_length_is_permutation():
    parent = full_rs_code(field_new(7), 2)
    p = puncture_code(parent, 7, seed=3)
    assert sorted(p.provenance["columns"]) == list(range(7))
    with pytest.raises(ValueError):
        puncture_code(parent, 8, seed=0)


def test_puncture_column_frequency():
    parent = full_rs_code(field_new(5), 2)
    n, trials = 3, 4000
    hits = sum(0 in puncture_code(parent, n, seed=s).provenance["columns"] for s in range(trials))
    p = n / parent.n
    se = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) <= 3 * se


def test_sample_preserves_expected_pairwise_distance():
    parent = full_rs_code(field_new(5), 2)
    x, y = (1, 2), (3, 1)
    cx, cy = parent.encode(x), parent.encode(y)
    p_parent = sum(a != b for a, b in zip(cx, cy)) / parent.n
    n, trials = 4, 10_000
    total = 0
    for s in range(trials):
        c = sample_code(parent, n, seed=s)
        sx, sy = c.encode(x), c.encode(y)
        total += sum(a != b for a, b in zip(sx, sy)) / n
    se = math.sqrt(p_parent * (1 - p_parent) / n / trials)
    assert abs(total / trials - p_parent) <= 3 * se


def test_encode_linearity():
    rng = np.random.default_rng(7)
    for q in (5, 4):
        f = field_new(q)
        c = rs_code(f, 3, list(rng.integers(0, q, size=6)))
        for _ in range(100):
            x = [int(v) for v in rng.integers(0, q, size=3)]
            y = [int(v) for v in rng.integers(0, q, size=3)]
            a = int(rng.integers(0, q))
            xy = [f.add(u, v) for u, v in zip(x, y)]
            assert c.encode(xy) == tuple(
                f.add(u, v) for u, v in zip(c.encode(x), c.encode(y))
            )
            ax = [f.mul(a, u) for u in x]
            assert c.encode(ax) == tuple(f.mul(a, u) for u in c.encode(x))


def test_encode_array_matches_scalar_encode():
    rng = np.random.default_rng(11)
    for q in (3, 8):
        f = field_new(q)
        gen = rng.integers(0, q, size=(3, 5))
        c = LinearCode(f, gen.tolist())
        msgs = rng.integers(0, q, size=(40, 3))
        fast = c.encode_array(msgs)
        for i in range(40):
            assert tuple(fast[i]) == c.encode(tuple(int(v) for v in msgs[i]))


def test_codeword_matrix_is_exact_row_space():
    f = field_new(3)
    c = LinearCode(f, [[1, 0, 2, 1], [2, 0, 1, 2], [0, 1, 1, 0]])  # rank 2
    assert c.rank() == 2
    mat = c.codeword_matrix()
    assert mat.shape == (9, 4)
    brute = {
        tuple(c.encode(m)) for m in itertools.product(range(3), repeat=3)
    }
    assert {tuple(int(v) for v in row) for row in mat} == brute
    assert len({tuple(int(v) for v in row) for row in mat}) == 9


def test_min_distance_budget_and_degenerate():
    f = field_new(2)
    eye = [[1 if i == j else 0 for j in range(23)] for i in range(23)]
    big = LinearCode(f, eye)
    with pytest.raises(InfeasibleError):
        big.min_distance_exact()
    zero = LinearCode(f, [[0, 0, 0]])
    with pytest.raises(ValueError):
        zero.min_distance_exact()
    # rank-0 row space still enumerates: it is exactly the zero codeword
    mat = zero.codeword_matrix()
    assert mat.shape == (1, 3)
    assert not mat.any()


def test_contains_membership():
    f = field_new(5)
    c = rs_code(f, 2, [0, 1, 2, 3])
    assert c.contains(c.encode((3, 4)))
    assert c.contains((0, 0, 0, 0))
    assert not c.contains((1, 0, 0, 0))  # constant-term mismatch with slope
    assert not c.contains((1, 1, 1))  # wrong length
    zero = LinearCode(f, [[0, 0]])
    assert zero.contains((0, 0))
    assert not zero.contains((0, 1))


def test_serialization_roundtrip():
    parent = hadamard_code(field_new(4), 2)
    sampled = sample_code(parent, 6, seed=9)
    for code in (parent, sampled, rs_code(field_new(7), 3, [1, 5, 2, 2])):
        doc = code_to_json(code)
        back = code_from_json(doc)
        assert back.generator == code.generator
        assert back.field == code.field
        assert back.provenance == code.provenance
        assert code_to_json(back) == doc
