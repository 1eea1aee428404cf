import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opentropy.channel import KrausChannel, entropy_point, validate
from opentropy.errors import InvalidL, InvalidParameter, NotUnitary, UnknownName, Unsupported
from opentropy.families import (
    AMatrix,
    LMatrix,
    all_L_matrices,
    binary_entropy,
    boundary_curve,
    complementary_L,
    entropies_from_A,
    entropies_from_L,
    interpolate,
    interpolation_matrix,
    kraus_from_A,
    kraus_from_L,
    lower_boundary,
    named_channel,
    phi4_L,
    product_saturating_channel,
    qubit_extremal_channel,
    saturating_L_example,
    violation_depth,
)
from opentropy.linalg import RngStream, haar_unitary

LN2, LN3, LN4 = math.log(2), math.log(3), math.log(4)
PHI4 = math.log(27 / 4) / 3


def H(q):
    return -sum(p * math.log(p) for p in (q, 1 - q) if p > 0)


def raw_triangle_ops(bits, n):
    """Kraus operators straight from 0/1 triangle entries, no validity checks."""
    ops = np.zeros((n, n, n))
    it = iter(bits)
    for i in range(n):
        for j in range(n - i):
            ops[i, j, j + i] = next(it)
    return ops


def brute_force_valid_triangles(n):
    size = n * (n + 1) // 2
    found = set()
    for bits in itertools.product((0, 1), repeat=size):
        ops = raw_triangle_ops(bits, n)
        total = np.einsum("kji,kjl->il", ops, ops)
        if np.array_equal(total, np.eye(n)):
            found.add(bits)
    return found


def flatten(L):
    return tuple(v for r in L.rows for v in r)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(n):
    enumerated = [flatten(L) for L in all_L_matrices(n)]
    assert len(enumerated) == math.factorial(n)
    assert len(set(enumerated)) == len(enumerated)
    assert set(enumerated) == brute_force_valid_triangles(n)


def test_parse_and_examples():
    ident = kraus_from_L(LMatrix.parse("111;00;0"))
    assert ident.m == 3
    np.testing.assert_array_equal(ident.operators[0], np.eye(3))
    assert not ident.operators[1:].any()
    em = kraus_from_L(LMatrix.parse("100;10;1"))
    for i in range(3):
        expected = np.zeros((3, 3))
        expected[0, i] = 1
        np.testing.assert_array_equal(em.operators[i], expected)
    assert str(LMatrix.parse(" 101 ; 10 ; 0 ")) == "101;10;0"
    with pytest.raises(InvalidL):
        LMatrix.parse("10;0")
    with pytest.raises(InvalidL):
        LMatrix.parse("12;0")
    with pytest.raises(InvalidL):
        LMatrix.parse("100;1;0")


def test_transpose_examples():
    assert complementary_L(LMatrix.parse("10;1")) == LMatrix.parse("11;0")
    assert complementary_L(LMatrix.parse("11;0")) == LMatrix.parse("10;1")
    p = entropies_from_L(phi4_L())
    q = entropies_from_L(complementary_L(phi4_L()))
    assert p.as_tuple() == q.as_tuple()
    self_dual = LMatrix.parse("101;10;0")
    assert entropies_from_L(self_dual).s == entropies_from_L(self_dual).s_tilde


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_transpose_swaps_entropies_exactly(n):
    for L in all_L_matrices(n):
        p, q = entropies_from_L(L), entropies_from_L(complementary_L(L))
        assert (q.s, q.s_tilde) == (p.s_tilde, p.s)
        c = entropy_point(kraus_from_L(complementary_L(L)))
        assert abs(c.s - p.s_tilde) < 1e-9 and abs(c.s_tilde - p.s) < 1e-9


def test_L_entropy_examples():
    p = entropies_from_L(LMatrix.parse("111;00;0"))
    assert p.s == 0 and abs(p.s_tilde - LN3) < 1e-15
    p = entropies_from_L(phi4_L())
    assert abs(p.s - (LN3 - 2 * LN2 / 3)) < 1e-15
    assert round(p.s, 6) == 0.636514
    p = entropies_from_L(LMatrix.parse("100;11;0"))
    assert abs(p.s - (LN3 - 2 * LN2 / 3)) < 1e-15


def test_interpolation():
    L1, L2 = LMatrix.parse("100;10;1"), LMatrix.parse("100;11;0")
    assert interpolate(L1, L2, 1.0) == kraus_from_L(L1)
    assert interpolate(L1, L2, 0.0) == kraus_from_L(L2)
    for bad in (-0.01, 1.01):
        with pytest.raises(InvalidParameter):
            interpolate(L1, L2, bad)
    a = interpolation_matrix(L1, L2, 0.3)
    assert a.rows[1][1] == pytest.approx(math.sqrt(0.7))
    assert a.rows[2][0] == pytest.approx(math.sqrt(0.3))


def test_qutrit_two_operator_family():
    a = 0.2
    ch = interpolate(LMatrix.parse("111;00;0"), phi4_L(), 1 - 3 * a)
    nonzero = [k for k in ch.operators if np.any(k)]
    assert len(nonzero) == 2
    np.testing.assert_allclose(nonzero[0], np.diag([1, math.sqrt(1 - 3 * a), 1]), atol=1e-15)
    expected = np.zeros((3, 3))
    expected[0, 1] = math.sqrt(3 * a)
    np.testing.assert_allclose(nonzero[1], expected, atol=1e-15)


def test_A_matrix_validation():
    with pytest.raises(InvalidL):
        AMatrix([[1, 0], [0.5]])
    A = AMatrix([[1, math.sqrt(0.5)], [math.sqrt(0.5)]])
    validate(kraus_from_A(A))


@settings(max_examples=40, deadline=None)
@given(pair=st.tuples(st.integers(0, 23), st.integers(0, 23)), x=st.floats(0, 1))
def test_A_entropies_match_eigendecomposition(pair, x):
    Ls = list(all_L_matrices(4))
    A = interpolation_matrix(Ls[pair[0]], Ls[pair[1]], x)
    p, q = entropies_from_A(A), entropy_point(kraus_from_A(A))
    assert abs(p.s - q.s) < 1e-9 and abs(p.s_tilde - q.s_tilde) < 1e-9


def test_named_channels():
    cg = named_channel("coarse_graining", 2)
    np.testing.assert_array_equal(cg.operators, [np.diag([1, 0]), np.diag([0, 1])])
    p = entropy_point(cg)
    assert abs(p.s - LN2) < 1e-9 and abs(p.s_tilde - LN2) < 1e-9
    p = entropy_point(named_channel("emission", 3))
    assert abs(p.s - LN3) < 1e-9 and abs(p.s_tilde) < 1e-9
    p = entropy_point(named_channel("identity", 4))
    assert abs(p.s) < 1e-9 and abs(p.s_tilde - LN4) < 1e-9
    with pytest.raises(UnknownName):
        named_channel("depolarizing", 2)
    with pytest.raises(Unsupported):
        named_channel("phi4", 4)


def test_qubit_extremal_examples():
    assert qubit_extremal_channel(0.0) == KrausChannel([np.eye(2), np.zeros((2, 2))])
    p = entropy_point(qubit_extremal_channel(0.5))
    assert abs(p.s - LN2) < 1e-12 and abs(p.s_tilde) < 1e-12
    p = entropy_point(qubit_extremal_channel(0.25))
    assert round(p.s, 6) == 0.562335 and round(p.s_tilde, 6) == 0.562335
    with pytest.raises(InvalidParameter):
        qubit_extremal_channel(0.6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_curves_are_realised_by_their_channels(n):
    for curve in boundary_curve(n):
        for a in np.linspace(curve.a_min, curve.a_max, 21):
            ch = curve.channel(float(a))
            validate(ch)
            p = entropy_point(ch)
            s, st_ = curve(float(a))
            assert abs(p.s - s) < 1e-10 and abs(p.s_tilde - st_) < 1e-10


def test_curve_formulas_against_direct_evaluation():
    (q,) = boundary_curve(2)
    for a in np.linspace(0, 0.5, 11):
        assert q(a) == pytest.approx((H(a), H(0.5 - a)), abs=1e-14)
    main = boundary_curve(3)[0]
    a = 0.1
    expected = LN3 / 3 - (a + 1 / 3) * math.log(a + 1 / 3) - (1 / 3 - a) * math.log(1 / 3 - a)
    assert main(a) == pytest.approx((H(a), expected), abs=1e-14)


def test_curve_endpoints():
    (q,) = boundary_curve(2)
    assert q(0.0) == (0.0, pytest.approx(LN2, abs=1e-15))
    assert q(0.5) == (pytest.approx(LN2, abs=1e-15), 0.0)
    main, mirror = boundary_curve(3)
    assert main(0.0) == pytest.approx((0.0, LN3), abs=1e-12)
    assert main(1 / 3) == pytest.approx((PHI4, PHI4), abs=1e-12)
    assert mirror(0.0) == pytest.approx((LN3, 0.0), abs=1e-12)
    c = {k.branch: k for k in boundary_curve(4)}
    assert c["first"](0.0) == pytest.approx((0.0, LN4), abs=1e-12)
    # the branches meet at a cusp on each side of the diagonal
    assert c["first"](0.25) == pytest.approx(c["second_mirror"](0.75), abs=1e-12)
    assert c["second_mirror"](0.5) == pytest.approx((LN2, LN2), abs=1e-12)
    assert c["second"](0.5) == pytest.approx((LN2, LN2), abs=1e-12)
    assert c["second"](0.75) == pytest.approx(c["first_mirror"](0.25), abs=1e-12)
    assert c["first_mirror"](0.0) == pytest.approx((LN4, 0.0), abs=1e-12)
    with pytest.raises(Unsupported):
        boundary_curve(5)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_curve_points_respect_trade_off_bound(n):
    for curve in boundary_curve(n):
        _, s, st_ = curve.sample(512)
        assert np.all(s + st_ >= math.log(n) - 1e-9)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lower_boundary_on_curves(n):
    for curve in boundary_curve(n):
        _, s, st_ = curve.sample(101)
        assert np.max(np.abs(violation_depth(n, s, st_))) < 1e-7
    assert lower_boundary(n, math.log(n) + 0.1) == 0.0
    assert violation_depth(n, 0.0, math.log(n) - 0.01) == pytest.approx(0.01, abs=1e-12)


def test_product_saturating():
    root = RngStream(8)
    for n_a, n_b in [(2, 2), (2, 3), (3, 2), (1, 4)]:
        pts = []
        for k in range(100):
            ch = product_saturating_channel(n_a, n_b, haar_unitary(n_a * n_b, root.spawn(k)))
            validate(ch)
            pts.append(entropy_point(ch).as_tuple())
        pts = np.array(pts)
        expected = [math.log(n_b), math.log(n_a)]
        assert np.max(np.abs(pts - expected)) < 1e-9
    with pytest.raises(NotUnitary):
        product_saturating_channel(2, 2, np.ones((4, 4)))


def test_saturating_L_example():
    L = saturating_L_example()
    assert L.row_sums == (2, 2, 0, 0)
    assert sorted(L.column_sums, reverse=True)[:2] == [2, 2]
    p = entropies_from_L(L)
    assert abs(p.s - LN2) < 1e-15 and abs(p.s_tilde - LN2) < 1e-15
    assert abs(p.total - LN4) < 1e-15
    q = entropy_point(kraus_from_L(L))
    assert abs(q.s - p.s) < 1e-9 and abs(q.s_tilde - p.s_tilde) < 1e-9


def test_binary_entropy():
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(LN2, abs=1e-15)
    assert math.copysign(1, binary_entropy(0.0)) == 1
