import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vbsneg.numbers import HalfInt, SignedSqrtRational, exact_sum
from vbsneg.su2 import (cache_info, cg_orthogonality_check, clebsch_gordan, clear_cache,
                        f_matrix, six_j, six_j_from_clebsch, three_j)

H = HalfInt.parse
LABELS = [HalfInt(t) for t in range(7)]  # 0 .. 3 in steps of 1/2


def ssr(sign, num, den=1):
    return SignedSqrtRational.from_signed_square(sign, Fraction(num, den))


# Reference values cross-checked with sympy.physics.wigner.
@pytest.mark.parametrize("args, expected", [
    (("1/2", "1/2", "1/2", "-1/2", 1, 0), ssr(1, 1, 2)),
    (("1/2", "-1/2", "1/2", "1/2", 0, 0), ssr(-1, 1, 2)),
    ((1, 1, 1, -1, 0, 0), ssr(1, 1, 3)),
    ((1, 0, 1, 0, 0, 0), ssr(-1, 1, 3)),
    ((1, 0, 1, 0, 1, 0), SignedSqrtRational.zero()),
    ((1, 1, "1/2", "-1/2", "3/2", "1/2"), ssr(1, 1, 3)),
    ((1, 0, "1/2", "1/2", "1/2", "1/2"), ssr(-1, 1, 3)),
    ((2, 0, 2, 0, 2, 0), ssr(-1, 2, 7)),
])
def test_clebsch_gordan_values(args, expected):
    assert clebsch_gordan(*args) == expected


@pytest.mark.parametrize("args, expected", [
    (("1/2", "1/2", 1, "1/2", "1/2", 0), ssr(1, 1, 4)),
    (("1/2", "1/2", 0, "1/2", "1/2", 0), ssr(-1, 1, 4)),
    ((1, 1, 1, 1, 1, 1), ssr(1, 1, 36)),
    ((1, 1, 0, 1, 1, 0), ssr(1, 1, 9)),
    ((2, 2, 2, 2, 2, 2), ssr(-1, 9, 4900)),
    (("3/2", "3/2", 1, "3/2", "3/2", 2), ssr(1, 1, 400)),
])
def test_six_j_values(args, expected):
    assert six_j(*args) == expected


def test_invalid_couplings_are_exact_zero():
    assert not clebsch_gordan(1, 1, 1, 1, 1, 1)          # M mismatch
    assert not clebsch_gordan(1, 0, 1, 0, 3, 0)          # triangle
    assert not clebsch_gordan("1/2", "1/2", 1, 0, 1, "1/2")  # parity
    assert not six_j(1, 1, 3, 1, 1, 1)
    with pytest.raises(ValueError):
        clebsch_gordan(-1, 0, 1, 0, 1, 0)


def test_three_j_symmetry_and_value():
    a = three_j(1, 1, 0, 0, 0, 0)
    assert a == ssr(-1, 1, 3)
    # odd column swap picks up (-1)^(j1+j2+j3)
    for j1, j2, j3 in [(1, 1, 1), (1, 2, 2), ("1/2", "3/2", 1)]:
        x = three_j(j1, j2, j3, 0 if HalfInt.parse(str(j1)).is_integer else "1/2",
                    0 if HalfInt.parse(str(j2)).is_integer else "-1/2", 0)
        y = three_j(j2, j1, j3, 0 if HalfInt.parse(str(j2)).is_integer else "-1/2",
                    0 if HalfInt.parse(str(j1)).is_integer else "1/2", 0)
        s = sum(HalfInt.parse(str(j)).value for j in (j1, j2, j3))
        assert x == y * (-1) ** int(s)


@pytest.mark.parametrize("j1, j2", [(H("1/2"), H("1/2")), (H("3/2"), HalfInt(2)), (HalfInt(4), HalfInt(4))])
def test_orthogonality_selected_pairs(j1, j2):
    assert cg_orthogonality_check(j1, j2)


def _tetrahedral_images(t):
    # column permutations and the swaps of upper/lower entries in two columns
    cols = list(zip(t[:3], t[3:]))
    for perm in itertools.permutations(cols):
        for flips in itertools.product((0, 1), repeat=3):
            if sum(flips) % 2:
                continue
            top = [c[f] for c, f in zip(perm, flips)]
            bot = [c[1 - f] for c, f in zip(perm, flips)]
            yield tuple(top + bot)


@settings(max_examples=200, deadline=None)
@given(st.tuples(*[st.sampled_from(LABELS)] * 6))
def test_six_j_tetrahedral_symmetry(t):
    ref = six_j(*t)
    for img in _tetrahedral_images(t):
        assert six_j(*img) == ref


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.sampled_from(LABELS[:5])] * 6))
def test_six_j_matches_clebsch_contraction(t):
    assert six_j_from_clebsch(*t) == six_j(*t)


def test_six_j_orthogonality_relation():
    # sum_x [x][j3] {j1 j2 x; j4 j5 j3} {j1 j2 x; j4 j5 j3'} = delta
    j1, j2, j4, j5 = H("3/2"), HalfInt(2), H("1/2"), HalfInt(3)
    xs = [HalfInt(t) for t in range(0, 13)]
    for j3, j3p in itertools.product(xs, xs):
        terms = [six_j(j1, j2, x, j4, j5, j3) * six_j(j1, j2, x, j4, j5, j3p)
                 * ((x.twice + 1) * (j3.twice + 1)) for x in xs]
        total = exact_sum(terms)
        valid = any(six_j(j1, j2, x, j4, j5, j3) for x in xs)
        expected = 1 if (j3 == j3p and valid) else 0
        assert total == SignedSqrtRational.from_rational(expected)


def test_f_matrix_round_trip_sample():
    J1, J2, J3, J4 = HalfInt(2), H("3/2"), H("1/2"), HalfInt(3)
    Ns = [HalfInt(t) for t in range(0, 13)]
    for N, Np in itertools.product(Ns, Ns):
        total = exact_sum(f_matrix(J1, J2, J3, J4, N, J) * f_matrix(J1, J3, J2, J4, J, Np)
                          for J in Ns)
        live = any(f_matrix(J1, J2, J3, J4, N, J) for J in Ns)
        assert total == SignedSqrtRational.from_rational(1 if (N == Np and live) else 0)


def _isometry(j1, j2, J):
    """CG coefficients as a ``(d1*d2, dJ)`` matrix mapping ``|J M>`` into ``j1 x j2``."""
    p1, p2, pJ = j1.projections(), j2.projections(), J.projections()
    out = np.zeros((len(p1) * len(p2), len(pJ)))
    for (a, m1), (b, m2), (c, M) in itertools.product(enumerate(p1), enumerate(p2), enumerate(pJ)):
        out[a * len(p2) + b, c] = float(clebsch_gordan(j1, m1, j2, m2, J, M))
    return out


def _triangle(a, b, c):
    return abs(a.twice - b.twice) <= c.twice <= a.twice + b.twice and (a.twice + b.twice + c.twice) % 2 == 0


@pytest.mark.parametrize("labels", [
    ("1/2", "1/2", "1/2", "1/2"),
    ("1", "1/2", "1", "3/2"),
    ("1", "1", "1", "1"),
    ("3/2", "1", "1/2", "2"),
    ("2", "3/2", "1", "3/2"),
])
def test_f_move_matches_dense_recoupling(labels):
    """Overlap of the fusion trees ``((J2 J1) N, J3) J4`` and ``(J2, (J1 J3) J) J4``.

    Built from dense CG isometries it equals ``+-sqrt([N][J]) {J2 J1 N; J3 J4 J}``,
    and ``|F_NJ|`` is that overlap times ``sqrt([J]/[N])``.
    """
    J1, J2, J3, J4 = (H(x) for x in labels)
    eye = {j: np.eye(j.twice + 1) for j in (J2, J3)}
    ks = [HalfInt(t) for t in range(0, 16)]
    checked = 0
    for N, J in itertools.product(ks, ks):
        if not (_triangle(J2, J1, N) and _triangle(N, J3, J4)
                and _triangle(J1, J3, J) and _triangle(J2, J, J4)):
            continue
        left = np.kron(_isometry(J2, J1, N), eye[J3]) @ _isometry(N, J3, J4)
        right = np.kron(eye[J2], _isometry(J1, J3, J)) @ _isometry(J2, J, J4)
        ov = left.T @ right
        overlap = ov[0, 0]
        assert np.allclose(ov, overlap * np.eye(J4.twice + 1), atol=1e-12)
        expect = math.sqrt((N.twice + 1) * (J.twice + 1)) * float(six_j(J2, J1, N, J3, J4, J))
        assert abs(abs(overlap) - abs(expect)) < 1e-12
        f = float(f_matrix(J1, J2, J3, J4, N, J))
        assert abs(abs(f) - abs(overlap) * math.sqrt((J.twice + 1) / (N.twice + 1))) < 1e-12
        checked += 1
    assert checked > 0


def test_cache_is_transparent():
    a = six_j(2, 2, 2, 2, 2, 2)
    clear_cache()
    assert cache_info()["six_j"].currsize == 0
    assert six_j(2, 2, 2, 2, 2, 2) == a
