import random

import pytest

from sigvol.exactq import qq
from sigvol.freealg import TensorElement, antipode, parse_element, shuffle, volume_element
from sigvol.sigpoly import (
    IncrementPolynomial,
    PLPath,
    SigPolyCalculator,
    chen_product,
    pair,
    parse_polynomial,
    permute_control_points,
    pl_signature,
    polynomial_to_text,
    segment_signature,
    signature_polynomial,
    substitute_collinear,
    trivial_signature,
)


def random_path(rng, d, n):
    return PLPath(
        [tuple(qq(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(d)) for _ in range(n)]
    )


PENTAGON = PLPath([(t, t * t) for t in range(5)])


# -- segment signatures and the concatenation product -------------------------


def test_segment_signature_product_formula():
    sig = segment_signature((qq(1), qq(2)), 2)
    assert sig.coeff((1, 2)) == 1  # 1*2/2!
    assert sig.coeff(()) == 1
    assert sig.coeff((1,)) == 1
    assert sig.coeff((2, 2)) == 2


def test_segment_signature_zero_increment():
    sig = segment_signature((qq(0), qq(0)), 3)
    assert sig == trivial_signature(2, 3)


def test_chen_unit():
    s = pl_signature(PENTAGON, 2)
    assert chen_product(s, trivial_signature(2, 2)) == s
    assert chen_product(trivial_signature(2, 2), s) == s


def test_chen_hand_example():
    x = PLPath([(0, 0), (1, 0)])
    y = PLPath([(1, 0), (1, 1)])
    prod = chen_product(pl_signature(x, 2), pl_signature(y, 2))
    assert prod.coeff((1, 2)) == 1
    assert prod.coeff((2, 1)) == 0
    assert prod == pl_signature(PLPath([(0, 0), (1, 0), (1, 1)]), 2)


def test_chen_associative():
    rng = random.Random(3)
    for _ in range(10):
        d = rng.choice([2, 3])
        sigs = [pl_signature(random_path(rng, d, 2), 3) for _ in range(3)]
        left = chen_product(chen_product(sigs[0], sigs[1]), sigs[2])
        right = chen_product(sigs[0], chen_product(sigs[1], sigs[2]))
        assert left == right


def test_chen_identity_for_concatenated_paths():
    rng = random.Random(4)
    for _ in range(15):
        d = rng.choice([2, 3])
        left = random_path(rng, d, rng.randint(2, 4))
        right = PLPath([left.points[-1]] + list(random_path(rng, d, 2).points))
        whole = left.concat(right)
        maxdeg = rng.randint(1, 4)
        assert pl_signature(whole, maxdeg) == chen_product(
            pl_signature(left, maxdeg), pl_signature(right, maxdeg)
        )


# -- path signatures ----------------------------------------------------------


def test_single_point_path_is_trivial():
    assert pl_signature(PLPath([(1, 2)]), 3) == trivial_signature(2, 3)


def test_pentagon_signed_area():
    sig = pl_signature(PENTAGON, 2)
    assert pair(sig, volume_element(2).scale(qq(1, 2))) == 10


def test_doubled_control_point_is_invisible():
    a = PLPath([(0, 0), (1, 1), (1, 1), (2, 0)])
    b = PLPath([(0, 0), (1, 1), (2, 0)])
    assert pl_signature(a, 3) == pl_signature(b, 3)


def test_pair_unit_and_degree_overflow():
    sig = pl_signature(PENTAGON, 2)
    assert pair(sig, TensorElement.unit(2)) == 1
    with pytest.raises(ValueError):
        pair(sig, TensorElement.from_word(2, (1, 1, 1)))


def test_pair_is_multiplicative_over_shuffle():
    rng = random.Random(5)
    for _ in range(25):
        d = rng.choice([2, 3])
        path = random_path(rng, d, rng.randint(2, 4))
        sig = pl_signature(path, 6)
        p = parse_element("12 - 2*21", d) if d >= 2 else None
        q = TensorElement.from_word(d, tuple(rng.randint(1, d) for _ in range(3)))
        assert pair(sig, shuffle(p, q)) == pair(sig, p) * pair(sig, q)


def test_time_reversal_is_antipode():
    rng = random.Random(6)
    for _ in range(20):
        d = rng.choice([2, 3])
        path = random_path(rng, d, rng.randint(2, 5))
        x = TensorElement(
            d,
            {
                tuple(rng.randint(1, d) for _ in range(rng.randint(0, 4))): qq(rng.randint(-3, 3))
                for _ in range(3)
            },
        )
        assert pair(pl_signature(path.reversed(), 4), x) == pair(
            pl_signature(path, 4), antipode(x)
        )


# -- the symbolic map ----------------------------------------------------------


def test_two_point_formula():
    poly = signature_polynomial((1, 1, 2), 2, d=2)
    assert poly == parse_polynomial("1/6*a[1][1]^2*a[1][2]", 2, 2)


def test_three_point_word_123():
    poly = signature_polynomial((1, 2, 3), 3, d=3)
    expected = parse_polynomial(
        "1/6*a[2][1]*a[2][2]*a[2][3] + 1/2*a[1][1]*a[2][2]*a[2][3]"
        " + 1/2*a[1][1]*a[1][2]*a[2][3] + 1/6*a[1][1]*a[1][2]*a[1][3]",
        3,
        3,
    )
    assert poly == expected


def test_empty_word_maps_to_one():
    for n in (1, 2, 4):
        assert signature_polynomial((), n, d=3) == IncrementPolynomial.constant(3, n)


def test_polynomial_matches_concrete_paths():
    rng = random.Random(7)
    for _ in range(30):
        d = rng.choice([2, 3])
        n = rng.randint(2, 5)
        path = random_path(rng, d, n)
        w = tuple(rng.randint(1, d) for _ in range(rng.randint(0, 3)))
        poly = signature_polynomial(w, n, d=d)
        value = poly.evaluate(path.increments())
        expected = pair(pl_signature(path, max(len(w), 1)), TensorElement.from_word(d, w))
        assert value == expected


def test_shuffle_homomorphism():
    rng = random.Random(8)
    for _ in range(15):
        d = rng.choice([2, 3])
        n = rng.randint(2, 4)
        p = TensorElement.from_word(d, tuple(rng.randint(1, d) for _ in range(rng.randint(1, 2))))
        q = TensorElement.from_word(d, tuple(rng.randint(1, d) for _ in range(rng.randint(1, 2))))
        assert signature_polynomial(shuffle(p, q), n) == signature_polynomial(
            p, n
        ) * signature_polynomial(q, n)


def test_polynomial_degree_homogeneous():
    rng = random.Random(9)
    for _ in range(20):
        d = rng.choice([2, 3])
        n = rng.randint(2, 4)
        k = rng.randint(1, 4)
        w = tuple(rng.randint(1, d) for _ in range(k))
        poly = signature_polynomial(w, n, d=d)
        assert poly.is_zero() or (poly.is_homogeneous() and poly.degree() == k)


# -- substitutions -------------------------------------------------------------


def test_permute_identity_is_noop():
    poly = signature_polynomial((1, 2), 3, d=2)
    assert permute_control_points(poly, (1, 2, 3)) is poly


def test_full_reversal_equals_antipode():
    rng = random.Random(10)
    for _ in range(15):
        d = rng.choice([2, 3])
        n = rng.randint(2, 4)
        x = TensorElement.from_word(d, tuple(rng.randint(1, d) for _ in range(rng.randint(0, 3))))
        reversal = tuple(range(n, 0, -1))
        lhs = permute_control_points(signature_polynomial(x, n), reversal)
        rhs = signature_polynomial(antipode(x), n)
        assert lhs == rhs


def test_rotation_fixes_signed_area_polynomial():
    poly = SigPolyCalculator(2, 5).element_poly(volume_element(2))
    assert permute_control_points(poly, (2, 3, 4, 5, 1)) == poly


def test_permutation_validation():
    poly = signature_polynomial((1,), 3, d=2)
    with pytest.raises(ValueError):
        permute_control_points(poly, (1, 1, 2))


def test_collinear_merges_to_fewer_points():
    rng = random.Random(11)
    for _ in range(15):
        d = rng.choice([2, 3])
        n = rng.randint(3, 5)
        w = tuple(rng.randint(1, d) for _ in range(rng.randint(1, 3)))
        poly = signature_polynomial(w, n, d=d)
        i = rng.randint(2, n - 1)
        results = [substitute_collinear(poly, i, lam) for lam in (qq(0), qq(1, 3), qq(1))]
        assert results[0] == results[1] == results[2]
        assert results[0] == signature_polynomial(w, n - 1, d=d)


def test_collinear_negative_control():
    bare = IncrementPolynomial.variable(2, 3, 1, 1)
    r0 = substitute_collinear(bare, 2, qq(0))
    r1 = substitute_collinear(bare, 2, qq(1))
    assert r0 != r1


def test_collinear_index_validation():
    poly = signature_polynomial((1,), 3, d=2)
    with pytest.raises(ValueError):
        substitute_collinear(poly, 1, qq(1, 2))
    with pytest.raises(ValueError):
        substitute_collinear(poly, 3, qq(1, 2))


# -- polynomial type and text --------------------------------------------------


def test_polynomial_arithmetic():
    a = IncrementPolynomial.variable(2, 3, 1, 1)
    b = IncrementPolynomial.variable(2, 3, 2, 2)
    prod = a * b
    assert prod.degree() == 2
    assert (a + b) - b == a
    assert a.scale(0).is_zero()
    with pytest.raises(ValueError):
        a + IncrementPolynomial.variable(2, 4, 1, 1)


def test_polynomial_text_round_trip():
    rng = random.Random(12)
    for _ in range(30):
        d, n = rng.choice([(2, 3), (3, 3), (3, 4)])
        terms = {}
        for _ in range(rng.randint(0, 5)):
            mono = tuple(rng.randint(0, 2) for _ in range((n - 1) * d))
            terms[mono] = qq(rng.randint(-7, 7), rng.randint(1, 5))
        poly = IncrementPolynomial(d, n, terms)
        assert parse_polynomial(polynomial_to_text(poly), d, n) == poly


def test_polynomial_text_examples():
    poly = parse_polynomial("-3*a[1][3]^3*a[2][2]*a[3][1]", 3, 4)
    assert poly.degree() == 5
    assert polynomial_to_text(poly) == "-3*a[1][3]^3*a[2][2]*a[3][1]"
    assert parse_polynomial("0", 2, 2).is_zero()


def test_point_coordinate_rendering():
    from sigvol.sigpoly import polynomial_to_x_text

    poly = signature_polynomial((1, 2), 2, d=2)
    assert (
        polynomial_to_x_text(poly)
        == "1/2*x[1][1]*x[1][2] - 1/2*x[1][1]*x[2][2] - 1/2*x[1][2]*x[2][1] + 1/2*x[2][1]*x[2][2]"
    )
    assert polynomial_to_x_text(IncrementPolynomial(2, 3)) == "0"
    # displacement: x2 - x1 in the first coordinate
    assert polynomial_to_x_text(signature_polynomial((1,), 2, d=2)) == "-x[1][1] + x[2][1]"


def test_path_validation():
    with pytest.raises(ValueError):
        PLPath([])
    with pytest.raises(ValueError):
        PLPath([(1, 2), (1, 2, 3)])
    with pytest.raises(ValueError):
        PLPath([(0, 0), (1, 1)]).permuted((1, 1))
