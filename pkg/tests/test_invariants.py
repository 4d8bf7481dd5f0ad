import random

import pytest

from sigvol import fixtures
from sigvol.exactq import intersect, qq
from sigvol.freealg import (
    TensorElement,
    antipode,
    parse_element,
    shuffle_power,
    volume_element,
)
from sigvol.invariants import (
    GradedBasis,
    conjecture_evidence,
    dim_image,
    inv_d_space,
    invariant_space,
    is_invariant,
    kernel_space,
    loopclosure_membership,
    loopclosure_space,
    timerev_space,
    words_of_degree,
)
from sigvol.posgeom import PermGroup, Permutation, stabilizer_structural
from sigvol.sigpoly import signature_polynomial


# -- invariant spaces -----------------------------------------------------------


def test_degree_three_invariants_of_four_points():
    group = stabilizer_structural(3, 4)
    basis = invariant_space(3, 4, 3, group)
    assert basis.contains(volume_element(3))
    assert dim_image(basis, 4) == 1


def test_degree_zero_is_constants():
    group = stabilizer_structural(3, 4)
    basis = invariant_space(3, 4, 0, group)
    assert basis.dim == 1
    assert basis.contains(TensorElement.unit(3))


def test_no_linear_invariants_for_planar_quadrilateral():
    group = stabilizer_structural(2, 4)
    basis = invariant_space(2, 4, 1, group)
    assert dim_image(basis, 4) == 0


def test_trivial_group_gives_everything():
    trivial = PermGroup.generated(4, [], "trivial")
    basis = invariant_space(2, 4, 2, trivial)
    assert basis.dim == 4


def test_kernel_contained_in_invariants():
    group = stabilizer_structural(2, 4)
    for k in (2, 3):
        inv = invariant_space(2, 4, k, group)
        ker = kernel_space(2, 4, k)
        assert inv.space.contains_subspace(ker.space)


def test_invariants_antitone_in_group():
    cyclic = PermGroup.generated(5, [Permutation((2, 3, 4, 5, 1))], "Z/n")
    dihedral = PermGroup.generated(
        5, [Permutation((2, 3, 4, 5, 1)), Permutation((5, 4, 3, 2, 1))], "D_n"
    )
    trivial = PermGroup.generated(5, [], "trivial")
    for k in (1, 2, 3):
        inv_triv = invariant_space(2, 5, k, trivial)
        inv_cyc = invariant_space(2, 5, k, cyclic)
        inv_dih = invariant_space(2, 5, k, dihedral)
        assert inv_triv.space.contains_subspace(inv_cyc.space)
        assert inv_cyc.space.contains_subspace(inv_dih.space)


# -- kernels ----------------------------------------------------------------------


def test_kernel_trivial_in_degree_one():
    assert kernel_space(2, 3, 1).dim == 0
    assert kernel_space(3, 4, 1).dim == 0


def test_kernel_one_dimensional_alphabet():
    assert kernel_space(1, 2, 2).dim == 0  # the square of the only letter survives


def test_kernel_vanishing_on_concrete_paths():
    rng = random.Random(2)
    ker = kernel_space(2, 3, 3)
    from sigvol.sigpoly import PLPath, pair, pl_signature

    for element in ker.elements:
        for _ in range(5):
            pts = [tuple(qq(rng.randint(-4, 4)) for _ in range(2)) for _ in range(3)]
            sig = pl_signature(PLPath(pts), 3)
            assert pair(sig, element) == 0


def test_dim_image_of_kernel_is_zero():
    ker = kernel_space(2, 3, 3)
    if ker.dim:
        assert dim_image(ker, 3) == 0


def test_dim_image_of_volume_span():
    words = words_of_degree(3, 3)
    index = {w: i for i, w in enumerate(words)}
    from sigvol.exactq import SubspaceQ

    vec = {index[w]: c for w, c in volume_element(3).terms.items()}
    basis = GradedBasis.from_space(3, 3, SubspaceQ(len(words), [vec]))
    assert dim_image(basis, 4) == 1


# -- time reversal ------------------------------------------------------------------


def test_timerev_dimension_d2_k2():
    basis = timerev_space(2, 2)
    assert basis.dim == 3
    for text in ("11", "22", "12 + 21"):
        assert basis.contains(parse_element(text, 2))


def test_timerev_empty_for_single_letter():
    assert timerev_space(1, 1).dim == 0


def test_timerev_contains_volume_element():
    assert timerev_space(3, 3).contains(volume_element(3))


def test_timerev_complement_dimensions():
    from sigvol.exactq import MatrixBuilder, nullspace
    from sigvol.exactq import Q1

    for d, k in ((2, 2), (2, 3), (3, 2)):
        fixed = timerev_space(d, k)
        # the antisymmetric complement: antipode(x) = -x
        words = words_of_degree(d, k)
        builder = MatrixBuilder(len(words))
        sign = Q1 if k % 2 == 0 else -Q1
        for c, w in enumerate(words):
            entries = {w[::-1]: sign}
            entries[w] = entries.get(w, qq(0)) + Q1
            builder.add_column(c, entries)
        anti = nullspace(builder.build())
        assert fixed.dim + anti.dim == d**k
        assert intersect(fixed.space, anti).dim == 0


def test_fixed_space_is_image_of_symmetrization():
    rng = random.Random(3)
    from sigvol.freealg import timerev_project

    basis = timerev_space(2, 3)
    for _ in range(10):
        terms = {
            tuple(rng.randint(1, 2) for _ in range(3)): qq(rng.randint(-3, 3))
            for _ in range(3)
        }
        x = TensorElement(2, terms)
        projected = timerev_project(x)
        if not projected.is_zero():
            assert basis.contains(projected)


# -- loop closure --------------------------------------------------------------------


def test_loopclosure_membership_examples():
    assert loopclosure_membership(TensorElement.unit(2))
    assert loopclosure_membership(volume_element(2))
    assert not loopclosure_membership(TensorElement.from_word(2, (1,)))


def test_loopclosure_space_small():
    basis = loopclosure_space(2, 2)
    assert basis.contains(volume_element(2))
    assert loopclosure_space(1, 1).dim == 0


def test_loopclosure_space_closed_under_antipode():
    basis = loopclosure_space(2, 4)
    for element in basis.elements:
        assert basis.contains(antipode(element))
        assert loopclosure_membership(antipode(element))


def test_loopclosure_segment_override_matches():
    a = loopclosure_space(2, 3, segments=3)
    b = loopclosure_space(2, 3, segments=4)
    assert a.space == b.space


def test_loopclosure_membership_graded():
    mixed = volume_element(2) + TensorElement.unit(2)
    assert loopclosure_membership(mixed)
    mixed_bad = volume_element(2) + TensorElement.from_word(2, (1,))
    assert not loopclosure_membership(mixed_bad)


# -- simultaneous invariants -----------------------------------------------------------


def test_inv_d_degree_zero():
    for d in (2, 3):
        assert inv_d_space(d, 0).dim == 1


def test_inv_d_contains_volume_element():
    basis = inv_d_space(3, 3)
    assert basis.dim == 1
    assert basis.contains(volume_element(3))


def test_inv_d_planar_matches_direct_intersection():
    # cross-check the refinement implementation against the literal
    # three-way intersection for d = 2 (loop closure + two stabilizers)
    for k in (1, 2, 3):
        fast = inv_d_space(2, k)
        lc = loopclosure_space(2, k)
        inv3 = invariant_space(2, 3, k, stabilizer_structural(2, 3))
        inv4 = invariant_space(2, 4, k, stabilizer_structural(2, 4))
        direct = intersect(intersect(lc.space, inv3.space), inv4.space)
        assert fast.space == direct


def test_inv_d_planar_contains_shuffle_square():
    basis = inv_d_space(2, 4)
    assert basis.contains(shuffle_power(volume_element(2), 2))


def test_inv_d_subset_of_timerev_for_d3():
    # (d+1)/2 even: every simultaneous invariant is antipode-fixed
    for k in (2, 3, 4):
        basis = inv_d_space(3, k)
        fixed = timerev_space(3, k)
        assert fixed.space.contains_subspace(basis.space)


def test_inv_d_planar_equals_loopclosure():
    # for d = 2 the stabilizer conditions at 3 and 4 points impose nothing new
    for k in range(1, 5):
        assert inv_d_space(2, k).space == loopclosure_space(2, k).space


def test_inv_d_dimension_four_branch():
    # d even with d/2 even: loop closure AND time reversal, then refinement
    basis = inv_d_space(4, 4)
    assert basis.dim == 1
    assert basis.contains(volume_element(4))


# -- memberships and evidence ------------------------------------------------------------


def test_is_invariant_fixtures():
    assert is_invariant(fixtures.element("w1"), 3, 4)
    assert is_invariant(fixtures.element("w2"), 3, 4)


def test_is_invariant_rejects_single_letter():
    assert not is_invariant(TensorElement.from_word(2, (1,)), 2, 5)


def test_conjecture_evidence_small():
    r2 = conjecture_evidence(2, 2)
    assert (r2["dim_image"], r2["predicted_dim_image"], r2["verdict"]) == (1, 1, "consistent")
    r3 = conjecture_evidence(2, 3)
    assert r3["predicted_dim_image"] == 0
    assert r3["verdict"] == "consistent"
    r4 = conjecture_evidence(2, 4)
    assert (r4["predicted_dim_image"], r4["verdict"]) == (1, "consistent")
    assert r4["witness_in_space"]


def test_graded_basis_round_trip():
    basis = timerev_space(2, 2)
    for element, row in zip(basis.elements, basis.space.basis):
        assert basis.coordinate_vector(element) == row
    with pytest.raises(ValueError):
        basis.coordinate_vector(TensorElement.from_word(2, (1,)))


def test_space_json_schema():
    group = stabilizer_structural(3, 4)
    basis = invariant_space(3, 4, 3, group)
    data = basis.to_json(dim_image=dim_image(basis, 4))
    assert data["d"] == 3 and data["n"] == 4 and data["k"] == 3
    assert data["dim_raw"] == 1 and data["dim_image"] == 1
    assert data["basis"] == ["123 - 132 - 213 + 231 + 312 - 321"]


def test_invariant_space_matches_concrete_path_pairings():
    # implementation-independent cross-check: for every basis element,
    # permuting the control points of a concrete path never changes the
    # signature pairing
    from sigvol.sigpoly import PLPath, pair, pl_signature

    rng = random.Random(31)
    for d, n, maxk in ((2, 4, 3), (3, 4, 3)):
        group = stabilizer_structural(d, n)
        for k in range(1, maxk + 1):
            basis = invariant_space(d, n, k, group)
            for element in basis.elements[:6]:
                for _ in range(3):
                    pts = [
                        tuple(qq(rng.randint(-5, 5), rng.randint(1, 2)) for _ in range(d))
                        for _ in range(n)
                    ]
                    path = PLPath(pts)
                    base = pair(pl_signature(path, k), element)
                    for perm in group.elements:
                        permuted = path.permuted(perm.images)
                        assert pair(pl_signature(permuted, k), element) == base


def test_conjecture_evidence_d3():
    report = conjecture_evidence(3, 3)
    assert (report["dim_image"], report["predicted_dim_image"]) == (1, 1)
    assert report["verdict"] == "consistent"


def test_fixture_elements_properties():
    sq = fixtures.element("vol3_concat_sq")
    assert antipode(sq) == sq
    assert signature_polynomial(sq, 5).is_zero()
    assert not signature_polynomial(sq, 6).is_zero()  # visible with one more point
    loop = fixtures.element("loop_d2_deg6")
    assert loopclosure_membership(loop)
    assert loopclosure_membership(antipode(loop))
