"""Graded bases of invariant subspaces of the word algebra.

All spaces here are computed degree by degree: the symbolic signature map is
graded, so invariance conditions never mix word lengths and every solve
happens in the d**k-dimensional coordinate space of degree-k words (ordered
lexicographically).

The subspaces on offer:

* ``invariant_space``  - elements whose signature polynomial on an n-point
  path is fixed by a permutation group acting on the control points;
* ``kernel_space``     - elements whose signature polynomial on an n-point
  path vanishes identically;
* ``timerev_space``    - antipode-fixed elements (stable under running the
  path backwards);
* ``loopclosure_space``- elements whose signature value survives closing the
  path into a loop on either side;
* ``inv_d_space``      - elements invariant for every number of control
  points at once, assembled from the three pieces above according to the
  parity of d.

Raw dimensions of ``invariant_space`` include the full kernel (the zero
polynomial is invariant under anything), so counts of "visibly distinct"
invariants are reported as image dimensions via ``dim_image``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .exactq import MatrixBuilder, Q0, Q1, QQ, SubspaceQ, intersect, nullspace
from .freealg import TensorElement, Word, shuffle_power, volume_element
from .parallel import pmap
from .posgeom import PermGroup, stabilizer_structural
from .sigpoly import (
    IncrementPolynomial,
    SigPolyCalculator,
    closure_substitution,
    permutation_substitution,
)


def words_of_degree(d: int, k: int) -> list[Word]:
    """All degree-k words over 1..d in lexicographic order."""
    return [tuple(w) for w in product(range(1, d + 1), repeat=k)]


@dataclass
class GradedBasis:
    """A subspace of the degree-k slice, as coordinates and as elements."""

    d: int
    k: int
    space: SubspaceQ
    elements: list[TensorElement] = field(default_factory=list)
    n: int | None = None
    group_tag: str | None = None

    @classmethod
    def from_space(cls, d: int, k: int, space: SubspaceQ, **extra) -> "GradedBasis":
        words = words_of_degree(d, k)
        elements = [
            TensorElement(d, {words[c]: v for c, v in row.items()})
            for row in space.basis
        ]
        return cls(d, k, space, elements, **extra)

    @property
    def dim(self) -> int:
        return self.space.dim

    def coordinate_vector(self, x: TensorElement) -> dict[int, QQ]:
        if x.d != self.d:
            raise ValueError("alphabet mismatch")
        if not x.is_zero() and x.degrees() != [self.k]:
            raise ValueError(f"element is not homogeneous of degree {self.k}")
        index = {w: c for c, w in enumerate(words_of_degree(self.d, self.k))}
        return {index[w]: coeff for w, coeff in x.terms.items()}

    def contains(self, x: TensorElement) -> bool:
        return self.space.contains(self.coordinate_vector(x))

    def to_json(self, dim_image: int | None = None) -> dict:
        from .freealg import element_to_text

        data: dict = {"d": self.d}
        if self.n is not None:
            data["n"] = self.n
        data["k"] = self.k
        if self.group_tag is not None:
            data["group"] = self.group_tag
        data["dim_raw"] = self.dim
        if dim_image is not None:
            data["dim_image"] = dim_image
        data["basis"] = [element_to_text(x) for x in self.elements]
        return data


# ---------------------------------------------------------------------------
# core solvers
# ---------------------------------------------------------------------------


def kernel_space(d: int, n: int, k: int) -> GradedBasis:
    """Degree-k elements that every n-point path signature annihilates."""
    words = words_of_degree(d, k)
    calc = SigPolyCalculator(d, n)
    builder = MatrixBuilder(len(words))
    columns = pmap(lambda w: calc._poly(1, w), words)
    for c, poly in enumerate(columns):
        builder.add_column(c, poly)
    space = nullspace(builder.build())
    return GradedBasis.from_space(d, k, space, n=n, group_tag="kernel")


def invariant_space(d: int, n: int, k: int, group: PermGroup) -> GradedBasis:
    """Elements whose signature polynomial is fixed by the group action.

    One block of linear conditions per group generator: the difference
    between the permuted and the original polynomial must vanish.
    """
    if group.n != n:
        raise ValueError("group acts on the wrong number of points")
    words = words_of_degree(d, k)
    generators = [g for g in group.generators if not g.is_identity()]
    if not generators:
        space = SubspaceQ.full(len(words))
        return GradedBasis.from_space(d, k, space, n=n, group_tag=group.structure_tag)
    calc = SigPolyCalculator(d, n)
    substitutions = [permutation_substitution(d, n, g.images) for g in generators]
    builder = MatrixBuilder(len(words))

    def column(w: Word) -> dict:
        base = IncrementPolynomial(d, n, calc._poly(1, w))
        entries: dict = {}
        for gi, sub in enumerate(substitutions):
            diff = sub.apply(base) - base
            for mono, coeff in diff.terms.items():
                entries[(gi, mono)] = coeff
        return entries

    for c, entries in enumerate(pmap(column, words)):
        builder.add_column(c, entries)
    space = nullspace(builder.build())
    return GradedBasis.from_space(d, k, space, n=n, group_tag=group.structure_tag)


def timerev_space(d: int, k: int) -> GradedBasis:
    """Fixed space of the antipode on degree-k words."""
    words = words_of_degree(d, k)
    index = {w: c for c, w in enumerate(words)}
    sign = Q1 if k % 2 == 0 else -Q1
    builder = MatrixBuilder(len(words))
    for c, w in enumerate(words):
        entries = {w[::-1]: sign}
        entries[w] = entries.get(w, Q0) - Q1
        builder.add_column(c, entries)
    space = nullspace(builder.build())
    return GradedBasis.from_space(d, k, space, group_tag="timerev")


def _closure_diffs(
    x_or_word, d: int, m: int, calc_small: SigPolyCalculator, calc_big: SigPolyCalculator, subs
) -> list[IncrementPolynomial]:
    if isinstance(x_or_word, TensorElement):
        small = calc_small.element_poly(x_or_word)
        big = calc_big.element_poly(x_or_word)
    else:
        small = calc_small.word_poly(x_or_word)
        big = calc_big.word_poly(x_or_word)
    return [sub.apply(big) - small for sub in subs]


def _closure_context(d: int, m: int):
    calc_small = SigPolyCalculator(d, m + 1)
    calc_big = SigPolyCalculator(d, m + 2)
    subs = [closure_substitution(d, m, "right"), closure_substitution(d, m, "left")]
    return calc_small, calc_big, subs


def loopclosure_membership(x: TensorElement, segments: int | None = None) -> bool:
    """Whether closing an m-segment path to a loop (either side) is invisible.

    Checked as two exact polynomial identities per homogeneous part, with
    m = deg(part) segments before closure (overridable).
    """
    for k, part in x.graded_parts().items():
        if k == 0:
            continue
        m = segments if segments is not None else k
        calc_small, calc_big, subs = _closure_context(x.d, m)
        diffs = _closure_diffs(part, x.d, m, calc_small, calc_big, subs)
        if any(not diff.is_zero() for diff in diffs):
            return False
    return True


def loopclosure_space(d: int, k: int, segments: int | None = None) -> GradedBasis:
    """Degree-k elements stable under left and right loop closure."""
    words = words_of_degree(d, k)
    if k == 0:
        return GradedBasis.from_space(d, k, SubspaceQ.full(1), group_tag="loopclosure")
    m = segments if segments is not None else k
    calc_small, calc_big, subs = _closure_context(d, m)
    builder = MatrixBuilder(len(words))

    def column(w: Word) -> dict:
        entries: dict = {}
        for side, diff in enumerate(_closure_diffs(w, d, m, calc_small, calc_big, subs)):
            for mono, coeff in diff.terms.items():
                entries[(side, mono)] = coeff
        return entries

    for c, entries in enumerate(pmap(column, words)):
        builder.add_column(c, entries)
    space = nullspace(builder.build())
    return GradedBasis.from_space(d, k, space, group_tag="loopclosure")


# ---------------------------------------------------------------------------
# the simultaneous invariants
# ---------------------------------------------------------------------------


def _refine_by_group(basis: GradedBasis, n: int, group: PermGroup) -> GradedBasis:
    """Cut a graded basis down by the invariance conditions of one group.

    The conditions are imposed on the current basis elements rather than on
    all words, which keeps the solve at (current dimension) many columns.
    """
    generators = [g for g in group.generators if not g.is_identity()]
    if not generators or basis.dim == 0:
        return basis
    d, k = basis.d, basis.k
    calc = SigPolyCalculator(d, n)
    substitutions = [permutation_substitution(d, n, g.images) for g in generators]
    builder = MatrixBuilder(basis.dim)

    def column(element: TensorElement) -> dict:
        base = calc.element_poly(element)
        entries: dict = {}
        for gi, sub in enumerate(substitutions):
            diff = sub.apply(base) - base
            for mono, coeff in diff.terms.items():
                entries[(gi, mono)] = coeff
        return entries

    for c, entries in enumerate(pmap(column, basis.elements)):
        builder.add_column(c, entries)
    solutions = nullspace(builder.build())
    vectors: list[dict[int, QQ]] = []
    old_rows = basis.space.basis
    for sol in solutions.basis:
        vec: dict[int, QQ] = {}
        for j, lam in sol.items():
            for c, v in old_rows[j].items():
                nv = vec.get(c, Q0) + lam * v
                if nv == 0:
                    vec.pop(c, None)
                else:
                    vec[c] = nv
        if vec:
            vectors.append(vec)
    space = SubspaceQ(basis.space.ambient_dim, vectors)
    return GradedBasis.from_space(d, k, space, n=basis.n, group_tag=basis.group_tag)


def inv_d_space(d: int, k: int) -> GradedBasis:
    """Degree-k elements invariant for every number of control points.

    The piece shared by all point counts >= d+3 is determined by the parity
    of d (time reversal, loop closure, their intersection, or no condition);
    the finitely many remaining conditions (n = d+1 and n = d+2) are then
    imposed on that piece.
    """
    if d % 2 == 1:
        if ((d + 1) // 2) % 2 == 0:
            base = timerev_space(d, k)
        else:
            base = GradedBasis.from_space(d, k, SubspaceQ.full(d**k))
    else:
        if (d // 2) % 2 == 0:
            lc = loopclosure_space(d, k)
            tr = timerev_space(d, k)
            base = GradedBasis.from_space(d, k, intersect(lc.space, tr.space))
        else:
            base = loopclosure_space(d, k)
    base.group_tag = "volume-invariants"
    for n in (d + 1, d + 2):
        base = _refine_by_group(base, n, stabilizer_structural(d, n))
        base.group_tag = "volume-invariants"
    base.n = None
    return base


# ---------------------------------------------------------------------------
# membership, image dimension and conjecture evidence
# ---------------------------------------------------------------------------


def is_invariant(x: TensorElement, d: int, n: int) -> bool:
    """Whether the signature polynomial of x on n points is stabilizer-fixed."""
    group = stabilizer_structural(d, n)
    calc = SigPolyCalculator(d, n)
    base = calc.element_poly(x)
    for g in group.generators:
        if g.is_identity():
            continue
        if permutation_substitution(d, n, g.images).apply(base) != base:
            return False
    return True


def dim_image(basis: GradedBasis, n: int) -> int:
    """Dimension of the image of the basis span under the n-point map."""
    if basis.dim == 0:
        return 0
    kernel = kernel_space(basis.d, n, basis.k)
    if kernel.dim == 0:
        return basis.dim
    return basis.dim - intersect(basis.space, kernel.space).dim


def conjecture_evidence(d: int, k: int) -> dict:
    """Evidence report for the minimal-generation conjecture at n = d+2.

    Compares the image dimension of the degree-k invariants on d+2 points
    with the predicted dimension of the span of shuffle powers of the
    signed-volume element (1 when d divides k and the power is visible on
    d+2 points, else 0).  The verdict reports consistency only, never proof.
    """
    n = d + 2
    group = stabilizer_structural(d, n)
    inv = invariant_space(d, n, k, group)
    image_dim = dim_image(inv, n)
    predicted = 0
    witness = None
    if k % d == 0:
        power = shuffle_power(volume_element(d), k // d)
        calc = SigPolyCalculator(d, n)
        if k == 0 or not calc.element_poly(power).is_zero():
            predicted = 1
            witness = power
    report = {
        "d": d,
        "n": n,
        "k": k,
        "group": group.structure_tag,
        "dim_raw": inv.dim,
        "dim_image": image_dim,
        "predicted_dim_image": predicted,
        "verdict": "consistent" if image_dim == predicted else "inconsistent",
    }
    if witness is not None:
        report["witness_in_space"] = inv.contains(witness)
    return report
