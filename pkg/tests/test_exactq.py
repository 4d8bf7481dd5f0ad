import random

import pytest

from sigvol import exactq
from sigvol.exactq import (
    MatrixBuilder,
    SparseMatrixQ,
    SubspaceQ,
    det_q,
    intersect,
    nullspace,
    qq,
    rank,
    sum_spaces,
)


def dense_nullspace_oracle(rows, ncols):
    """Naive dense Gaussian elimination over QQ, written independently."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        prow = None
        for rr in range(r, len(m)):
            if m[rr][c] != 0:
                prow = rr
                break
        if prow is None:
            continue
        m[r], m[prow] = m[prow], m[r]
        inv = qq(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for rr in range(len(m)):
            if rr != r and m[rr][c] != 0:
                f = m[rr][c]
                m[rr] = [a - f * b for a, b in zip(m[rr], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [qq(0)] * ncols
        vec[f] = qq(1)
        for i, c in enumerate(pivots):
            vec[c] = -m[i][f]
        basis.append(vec)
    return basis


def random_matrix(rng, nrows, ncols, density=0.6):
    return [
        [
            qq(rng.randint(-6, 6), rng.randint(1, 4)) if rng.random() < density else qq(0)
            for _ in range(ncols)
        ]
        for _ in range(nrows)
    ]


def test_identity_has_trivial_nullspace():
    m = SparseMatrixQ.from_rows([[1, 0], [0, 1]])
    assert nullspace(m).dim == 0


def test_rank_one_matrix_kernel():
    m = SparseMatrixQ.from_rows([[1, 2], [2, 4]])
    ns = nullspace(m)
    # span{(-2, 1)} in reduced echelon form
    assert ns.dense_basis() == [[qq(1), qq(-1, 2)]]


def test_nullspace_against_dense_oracle():
    rng = random.Random(7)
    rows = random_matrix(rng, 6, 10)
    ns = nullspace(SparseMatrixQ.from_rows(rows))
    oracle = dense_nullspace_oracle(rows, 10)
    assert ns.dim == len(oracle)
    for vec in oracle:
        assert ns.contains({i: v for i, v in enumerate(vec) if v != 0})
    for vec in ns.dense_basis():
        for row in rows:
            assert sum(a * b for a, b in zip(row, vec)) == 0


def test_rank_examples():
    zero = SparseMatrixQ(3, 4)
    assert rank(zero) == 0
    eye = SparseMatrixQ.from_rows([[1 if i == j else 0 for j in range(5)] for i in range(5)])
    assert rank(eye) == 5
    # Vandermonde on distinct rationals has full rank
    ts = [qq(0), qq(1), qq(1, 2), qq(-3)]
    vand = SparseMatrixQ.from_rows([[t**j for j in range(4)] for t in ts])
    assert rank(vand) == 4


def test_rank_nullity_property():
    rng = random.Random(11)
    for _ in range(25):
        nrows, ncols = rng.randint(1, 9), rng.randint(1, 9)
        m = SparseMatrixQ.from_rows(random_matrix(rng, nrows, ncols, 0.4))
        assert rank(m) + nullspace(m).dim == ncols


def test_nullspace_independent_of_row_order():
    rng = random.Random(13)
    rows = random_matrix(rng, 7, 8, 0.5)
    shuffled = list(rows)
    rng.shuffle(shuffled)
    a = nullspace(SparseMatrixQ.from_rows(rows))
    b = nullspace(SparseMatrixQ.from_rows(shuffled))
    assert a == b


def test_modular_and_exact_paths_agree():
    rng = random.Random(17)
    saved = exactq.MODULAR_NNZ_THRESHOLD
    try:
        for _ in range(20):
            nrows, ncols = rng.randint(2, 12), rng.randint(2, 12)
            m = SparseMatrixQ.from_rows(random_matrix(rng, nrows, ncols, 0.5))
            exactq.MODULAR_NNZ_THRESHOLD = 0
            modular = nullspace(m)
            exactq.MODULAR_NNZ_THRESHOLD = 10**9
            exact = nullspace(m)
            assert modular == exact
    finally:
        exactq.MODULAR_NNZ_THRESHOLD = saved


def test_empty_matrix_gives_full_space():
    assert nullspace(SparseMatrixQ(0, 4)) == SubspaceQ.full(4)


def test_intersect_examples():
    whole = SubspaceQ.full(3)
    line = SubspaceQ.from_dense([[1, 2, 3]], 3)
    assert intersect(whole, line) == line
    x_axis = SubspaceQ.from_dense([[1, 0]], 2)
    y_axis = SubspaceQ.from_dense([[0, 1]], 2)
    assert intersect(x_axis, y_axis).dim == 0


def test_intersect_dimension_mismatch():
    with pytest.raises(ValueError):
        intersect(SubspaceQ.full(2), SubspaceQ.full(3))


def test_intersect_random_against_stacked_constraint_oracle():
    rng = random.Random(19)
    for _ in range(10):
        a = SubspaceQ.from_dense(random_matrix(rng, 3, 5, 0.8), 5)
        b = SubspaceQ.from_dense(random_matrix(rng, 3, 5, 0.8), 5)
        inter = intersect(a, b)
        # oracle: x in both spans iff x is killed by both orthogonal row systems;
        # check via dim formula and explicit containment
        assert inter.dim == a.dim + b.dim - sum_spaces(a, b).dim
        for row in inter.basis:
            assert a.contains(row) and b.contains(row)
        if a.dim == 3 and b.dim == 3:
            assert inter.dim >= 1


def test_matrix_builder_streaming_columns():
    builder = MatrixBuilder(3)
    builder.add_column(0, {"m1": qq(1), "m2": qq(2)})
    builder.add_column(1, {"m1": qq(2), "m2": qq(4)})
    builder.add_column(2, {"m3": qq(1)})
    m = builder.build()
    assert (m.nrows, m.ncols) == (3, 3)
    ns = nullspace(m)
    assert ns.dim == 1
    assert ns.contains({0: qq(-2), 1: qq(1)})


def test_rational_canonical_form():
    rng = random.Random(23)
    for _ in range(50):
        a, b = rng.randint(-40, 40), rng.randint(1, 40)
        c, d = rng.randint(-40, 40), rng.randint(1, 40)
        x = qq(a, b) + qq(c, d)
        assert x == qq(a * d + c * b, b * d)
        assert x.denominator > 0
        import math

        assert math.gcd(int(x.numerator), int(x.denominator)) == 1


def test_det_q():
    assert det_q([[qq(1), qq(2)], [qq(3), qq(4)]]) == -2
    assert det_q([[qq(2)]]) == 2
    assert det_q([[qq(1), qq(1)], [qq(1), qq(1)]]) == 0
    ts = [qq(1), qq(2), qq(3)]
    vand = [[t**j for j in range(3)] for t in ts]
    assert det_q(vand) == (ts[1] - ts[0]) * (ts[2] - ts[0]) * (ts[2] - ts[1])


def test_subspace_contains_and_reduce():
    s = SubspaceQ.from_dense([[1, 0, 1], [0, 1, 1]], 3)
    assert s.contains({0: qq(2), 1: qq(3), 2: qq(5)})
    assert not s.contains({0: qq(1)})
    assert s.contains_subspace(SubspaceQ.from_dense([[1, 1, 2]], 3))


def test_modular_path_falls_back_when_primes_run_out(monkeypatch):
    # with a single prime the huge kernel entries cannot be reconstructed,
    # so the pure fraction-free path must take over transparently
    rng = random.Random(37)
    rows = [[qq(rng.randint(-(10**8), 10**8)) for _ in range(10)] for _ in range(7)]
    m = SparseMatrixQ.from_rows(rows)
    expected = nullspace(m)
    monkeypatch.setattr(exactq, "_PRIMES", exactq._PRIMES[:1])
    monkeypatch.setattr(exactq, "MODULAR_NNZ_THRESHOLD", 0)
    assert nullspace(m) == expected


def test_modular_path_with_large_entries_needs_several_primes():
    # kernel entries here are ratios of large minors, so rational
    # reconstruction only succeeds after accumulating several primes
    rng = random.Random(29)
    saved = exactq.MODULAR_NNZ_THRESHOLD
    try:
        for _ in range(5):
            rows = [
                [qq(rng.randint(-(10**8), 10**8)) for _ in range(12)] for _ in range(8)
            ]
            m = SparseMatrixQ.from_rows(rows)
            exactq.MODULAR_NNZ_THRESHOLD = 0
            modular = nullspace(m)
            exactq.MODULAR_NNZ_THRESHOLD = 10**9
            exact = nullspace(m)
            assert modular == exact
            assert modular.dim == 4
            for vec in modular.dense_basis():
                for row in rows:
                    assert sum(a * b for a, b in zip(row, vec)) == 0
    finally:
        exactq.MODULAR_NNZ_THRESHOLD = saved
