"""Exact SU(2) coupling symbols: Clebsch-Gordan coefficients, 6j symbols, F-matrices.

All values are returned as :class:`~vbsneg.numbers.SignedSqrtRational` in the
Condon-Shortley convention.  Internally every label is handled as twice its
value, so the public functions accept ``HalfInt``, ``int``, ``Fraction`` or
strings like ``"3/2"``.

Results are memoized per process (``functools.lru_cache``); a cache hit returns
the same immutable object a fresh computation would produce.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from .numbers import HalfInt, SignedSqrtRational, as_halfint, exact_sum

__all__ = [
    "FACTORIAL_CAP",
    "clebsch_gordan",
    "six_j",
    "f_matrix",
    "three_j",
    "cg_orthogonality_check",
    "six_j_from_clebsch",
    "cache_info",
    "clear_cache",
]

# Largest factorial argument allowed; covers spins S <= 12 with room to spare.
FACTORIAL_CAP = 2 * (4 * 12 + 2)


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"negative factorial argument {n}")
    if n > FACTORIAL_CAP:
        raise ValueError(
            f"factorial argument {n} exceeds cap {FACTORIAL_CAP}; labels too large")
    return 1 if n < 2 else n * _factorial(n - 1)


def _half(t: int) -> int:
    # t is twice a value known to be integral
    return t // 2


def _triangle(ta: int, tb: int, tc: int) -> bool:
    return (ta >= 0 and tb >= 0 and tc >= 0
            and abs(ta - tb) <= tc <= ta + tb
            and (ta + tb + tc) % 2 == 0)


def _delta_sq(ta: int, tb: int, tc: int) -> Fraction:
    # squared triangle coefficient Delta(a b c)^2
    return Fraction(
        _factorial(_half(ta + tb - tc)) * _factorial(_half(ta - tb + tc))
        * _factorial(_half(-ta + tb + tc)),
        _factorial(_half(ta + tb + tc) + 1))


@lru_cache(maxsize=None)
def _cg(tj1, tm1, tj2, tm2, tJ, tM) -> SignedSqrtRational:
    if tm1 + tm2 != tM or not _triangle(tj1, tj2, tJ):
        return SignedSqrtRational.zero()
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tM) > tJ:
        return SignedSqrtRational.zero()
    if (tj1 - tm1) % 2 or (tj2 - tm2) % 2 or (tJ - tM) % 2:
        return SignedSqrtRational.zero()
    f = _factorial
    pref = Fraction(
        (tJ + 1) * f(_half(tJ + tj1 - tj2)) * f(_half(tJ - tj1 + tj2))
        * f(_half(tj1 + tj2 - tJ)),
        f(_half(tj1 + tj2 + tJ) + 1))
    pref *= (f(_half(tJ + tM)) * f(_half(tJ - tM)) * f(_half(tj1 - tm1))
             * f(_half(tj1 + tm1)) * f(_half(tj2 - tm2)) * f(_half(tj2 + tm2)))
    kmin = max(0, _half(tj2 - tJ - tm1), _half(tj1 - tJ + tm2))
    kmax = min(_half(tj1 + tj2 - tJ), _half(tj1 - tm1), _half(tj2 + tm2))
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        total += Fraction(
            (-1) ** k,
            f(k) * f(_half(tj1 + tj2 - tJ) - k) * f(_half(tj1 - tm1) - k)
            * f(_half(tj2 + tm2) - k) * f(_half(tJ - tj2 + tm1) + k)
            * f(_half(tJ - tj1 - tm2) + k))
    if total == 0:
        return SignedSqrtRational.zero()
    return SignedSqrtRational.from_signed_square(
        1 if total > 0 else -1, pref * total * total)


@lru_cache(maxsize=None)
def _sixj(t1, t2, t3, t4, t5, t6) -> SignedSqrtRational:
    triads = ((t1, t2, t3), (t1, t5, t6), (t4, t2, t6), (t4, t5, t3))
    if not all(_triangle(*tr) for tr in triads):
        return SignedSqrtRational.zero()
    rad = Fraction(1)
    for tr in triads:
        rad *= _delta_sq(*tr)
    a = [sum(tr) // 2 for tr in triads]
    b = [(t1 + t2 + t4 + t5) // 2, (t2 + t3 + t5 + t6) // 2, (t3 + t1 + t6 + t4) // 2]
    f = _factorial
    total = 0
    for t in range(max(a), min(b) + 1):
        num = (-1) ** t * f(t + 1)
        den = 1
        for x in a:
            den *= f(t - x)
        for y in b:
            den *= f(y - t)
        total += Fraction(num, den)
    if total == 0:
        return SignedSqrtRational.zero()
    return SignedSqrtRational.from_signed_square(
        1 if total > 0 else -1, rad * total * total)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> SignedSqrtRational:
    """Clebsch-Gordan coefficient ``<j1 m1 j2 m2 | J M>``.

    Invalid couplings (``m1 + m2 != M``, broken triangle rule, ``|m| > j``)
    give an exact zero rather than an error.
    """
    args = [as_halfint(x).twice for x in (j1, m1, j2, m2, J, M)]
    if args[0] < 0 or args[2] < 0 or args[4] < 0:
        raise ValueError("spin magnitudes must be non-negative")
    return _cg(*args)


def three_j(j1, j2, j3, m1, m2, m3) -> SignedSqrtRational:
    """Wigner 3j symbol, obtained from the Clebsch-Gordan coefficient."""
    t = [as_halfint(x).twice for x in (j1, j2, j3, m1, m2, m3)]
    c = _cg(t[0], t[3], t[1], t[4], t[2], -t[5])
    if not c:
        return c
    phase = (t[0] - t[1] - t[5]) // 2
    return c * (-1) ** (phase % 2) / SignedSqrtRational.from_signed_square(1, t[2] + 1)


def six_j(j1, j2, j3, j4, j5, j6) -> SignedSqrtRational:
    """Wigner 6j symbol ``{j1 j2 j3; j4 j5 j6}`` via the Racah single sum.

    The sum runs over exact rationals under the common square root of the
    four triangle coefficients, so the result stays in closed form.
    """
    args = [as_halfint(x).twice for x in (j1, j2, j3, j4, j5, j6)]
    if min(args) < 0:
        return SignedSqrtRational.zero()
    return _sixj(*args)


def f_matrix(J1, J2, J3, J4, N, J) -> SignedSqrtRational:
    """Recoupling matrix ``F^{J1 J2 J3 J4}_{N J}``.

    ``F = (-1)^(J1 - 2 J3 - J4 + N - J) (2J + 1) {J1 J2 N; J4 J3 J}``, which is
    nonzero only when ``N`` couples ``(J1, J2)`` and ``(J4, J3)`` and ``J``
    couples ``(J1, J3)`` and ``(J4, J2)``.  Its inverse move is
    ``F^{J1 J3 J2 J4}`` with the two lower labels exchanged.
    """
    t1, t2, t3, t4, tN, tJ = [as_halfint(x).twice for x in (J1, J2, J3, J4, N, J)]
    w = six_j(*(HalfInt(t) for t in (t1, t2, tN, t4, t3, tJ)))
    if not w:
        return w
    tphase = t1 - 2 * t3 - t4 + tN - tJ
    if tphase % 2:
        # a non-integer phase only arises on vanishing symbols
        raise ValueError("F-matrix phase is not an integer")
    sign = -1 if (tphase // 2) % 2 else 1
    return w * (sign * (tJ + 1))


def cg_orthogonality_check(j1, j2) -> bool:
    """Exact check of ``sum_{m1 m2} C^{JM} C^{J'M'} = delta_JJ' delta_MM'``."""
    j1, j2 = as_halfint(j1), as_halfint(j2)
    Js = [HalfInt(t) for t in range(abs(j1.twice - j2.twice), j1.twice + j2.twice + 1, 2)]
    pairs = [(J, M) for J in Js for M in J.projections()]
    m_pairs = list(product(j1.projections(), j2.projections()))
    for (J, M), (Jp, Mp) in product(pairs, pairs):
        s = exact_sum(
            clebsch_gordan(j1, m1, j2, m2, J, M) * clebsch_gordan(j1, m1, j2, m2, Jp, Mp)
            for m1, m2 in m_pairs)
        expected = 1 if (J == Jp and M == Mp) else 0
        if s != SignedSqrtRational.from_rational(expected):
            return False
    return True


def six_j_from_clebsch(j1, j2, j3, j4, j5, j6) -> SignedSqrtRational:
    """6j symbol by explicit contraction of four 3j symbols over all projections.

    Independent of the Racah sum used by :func:`six_j`; only meant as a check.
    Projection conservation in three of the 3j symbols fixes ``m3, m4, m6``
    from ``m1, m2, m5``; the fourth symbol vanishes unless it is also balanced.
    """
    j = [as_halfint(x) for x in (j1, j2, j3, j4, j5, j6)]
    terms = []
    for m1, m2, m5 in product(j[0].projections(), j[1].projections(), j[4].projections()):
        m3 = -(m1 + m2)
        m6 = m5 - m1
        m4 = m6 - m2
        if abs(m3) > j[2] or abs(m6) > j[5] or abs(m4) > j[3]:
            continue
        a = three_j(j[0], j[1], j[2], -m1, -m2, -m3)
        if not a:
            continue
        b = three_j(j[0], j[4], j[5], m1, -m5, m6)
        if not b:
            continue
        c = three_j(j[3], j[1], j[5], m4, m2, -m6)
        if not c:
            continue
        d = three_j(j[3], j[4], j[2], -m4, m5, m3)
        if not d:
            continue
        ms = (m1, m2, m3, m4, m5, m6)
        tphase = sum(x.twice - m.twice for x, m in zip(j, ms))
        terms.append(a * b * c * d * (-1) ** ((tphase // 2) % 2))
    return exact_sum(terms)


def cache_info() -> dict:
    return {
        "factorial": _factorial.cache_info(),
        "clebsch_gordan": _cg.cache_info(),
        "six_j": _sixj.cache_info(),
    }


def clear_cache() -> None:
    _factorial.cache_clear()
    _cg.cache_clear()
    _sixj.cache_clear()
