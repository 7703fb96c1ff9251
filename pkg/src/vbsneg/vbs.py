"""Analytic quantities of the spin-S valence bond solid chain.

Conventions
-----------
* Auxiliary (virtual) labels ``a, b`` run over ``-S/2 .. S/2`` in increasing
  order and are stored at array positions ``0 .. S``.
* The site tensor is ``g[a, b, m] = c * <S/2 a, S/2 -b | S m> * (-1)^(S/2 - b)``
  with ``c = sqrt((S+1)/(2S+1))``.  The real phase ``(-1)^(S/2-b)`` differs from
  ``(-1)^b`` by a global constant, and ``c`` makes the leading transfer-matrix
  eigenvalue exactly one.
* The transfer matrix is returned as a map from the right auxiliary pair
  ``(b, d)`` to the left pair ``(a, c)``: ``E[(a, c), (b, d)] = sum_m g[a,b,m] g[c,d,m]``.

Transfer eigenvalues and block weights are exact ``Fraction`` values; the 6j
symbols entering them have only ``S/2`` legs besides ``j`` and ``N`` and are
therefore rational.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numbers import HalfInt, as_halfint
from .su2 import clebsch_gordan, f_matrix, six_j

__all__ = [
    "Boundary",
    "ChainSpec",
    "lambda_spectrum",
    "transfer_matrix",
    "mps_tensor",
    "eta",
    "eta_from_f",
    "eta_limit",
    "eta_table",
    "pbc_normalization",
    "spin_value",
]


class Boundary(str, enum.Enum):
    PERIODIC = "pbc"
    EDGES = "edges"
    GENERAL = "general"


def spin_value(S) -> int:
    """Validate a physical spin and return it as a Python int."""
    s = as_halfint(S)
    if not s.is_integer or s.twice < 2:
        raise ValueError(f"spin S must be a positive integer, got {s}")
    return int(s)


@dataclass(frozen=True)
class ChainSpec:
    """Spin ``S`` and the five consecutive region lengths ``L1, LA, L2, LB, L3``.

    Regions 1, 2 and 3 are traced out; ``A`` and ``B`` are the two blocks kept.
    For ``Boundary.EDGES`` an extra spin-S/2 particle sits at each end of the
    open chain and is traced out along with regions 1 and 3.
    """

    S: int
    L1: int
    LA: int
    L2: int
    LB: int
    L3: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        object.__setattr__(self, "S", spin_value(self.S))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        for name in ("L1", "LA", "L2", "LB", "L3"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.LA < 1 or self.LB < 1:
            raise ValueError("blocks A and B need at least one site each")

    @property
    def total_length(self) -> int:
        return self.L1 + self.LA + self.L2 + self.LB + self.L3

    @property
    def adjacent(self) -> bool:
        return self.L1 == self.L2 == self.L3 == 0

    @property
    def separated(self) -> bool:
        """True when A and B share no boundary."""
        if self.L2 == 0:
            return False
        if self.boundary is Boundary.PERIODIC:
            return self.L1 + self.L3 > 0
        return True

    def swapped(self) -> "ChainSpec":
        """Mirror image: ``(L1, LA) <-> (L3, LB)``."""
        return ChainSpec(self.S, self.L3, self.LB, self.L2, self.LA, self.L1, self.boundary)

    def as_dict(self) -> dict:
        return {"S": self.S, "L1": self.L1, "LA": self.LA, "L2": self.L2,
                "LB": self.LB, "L3": self.L3, "boundary": self.boundary.value}


@lru_cache(maxsize=None)
def lambda_spectrum(S) -> tuple[Fraction, ...]:
    """Exact transfer-matrix eigenvalues ``lambda_j`` for ``j = 0..S``.

    ``lambda_j = (-1)^j (S!)^2 (S+1) / ((S-j)! (S+j+1)!)``
    """
    S = spin_value(S)
    f = math.factorial
    return tuple(
        Fraction((-1) ** j * f(S) ** 2 * (S + 1), f(S - j) * f(S + j + 1))
        for j in range(S + 1))


@lru_cache(maxsize=None)
def _mps_tensor(S: int, normalized: bool) -> np.ndarray:
    d, p = S + 1, 2 * S + 1
    g = np.zeros((d, d, p))
    for ia in range(d):
        for ib in range(d):
            ta, tb = 2 * ia - S, 2 * ib - S
            phase = -1.0 if ((S - tb) // 2) % 2 else 1.0
            for im in range(p):
                c = clebsch_gordan(HalfInt(S), HalfInt(ta), HalfInt(S), HalfInt(-tb),
                                   HalfInt(2 * S), HalfInt(2 * im - 2 * S))
                g[ia, ib, im] = phase * float(c)
    if normalized:
        g *= math.sqrt((S + 1) / (2 * S + 1))
    g.setflags(write=False)
    return g


def mps_tensor(S, normalized: bool = True) -> np.ndarray:
    """Site tensor ``g[a, b, m]`` (auxiliary left, auxiliary right, physical)."""
    return _mps_tensor(spin_value(S), normalized)


def transfer_matrix(S, normalized: bool = True) -> np.ndarray:
    """Dense ``(S+1)^2 x (S+1)^2`` transfer matrix ``E[(a,c),(b,d)]``.

    With ``normalized=True`` its eigenvalues are ``lambda_j`` with multiplicity
    ``2j+1``.  The unnormalized matrix is larger by ``(2S+1)/(S+1)``.
    """
    g = mps_tensor(S, normalized)
    d = g.shape[0]
    return np.einsum("abm,cdm->acbd", g, g).reshape(d * d, d * d)


def _check_block(S: int, N: int, L: int) -> None:
    if not 0 <= N <= S:
        raise ValueError(f"channel N={N} outside [0, {S}]")
    if L < 0:
        raise ValueError(f"block length must be non-negative, got {L}")


@lru_cache(maxsize=None)
def _sixj_half_legs(S: int, j: int, N: int) -> Fraction:
    h = HalfInt(S)
    return six_j(h, h, HalfInt(2 * j), h, h, HalfInt(2 * N)).to_rational()


@lru_cache(maxsize=None)
def _eta(S: int, N: int, L: int) -> Fraction:
    lam = lambda_spectrum(S)
    total = Fraction(0)
    for j in range(S + 1):
        sign = -1 if (N + j + S) % 2 else 1
        total += sign * (2 * j + 1) * lam[j] ** L * _sixj_half_legs(S, j, N)
    return total


def eta(S, N: int, L: int) -> Fraction:
    """Weight of the total-spin-``N`` channel of an ``L``-site block.

    ``eta_N^(L) = sum_j (2j+1) (-1)^(N+j+S) lambda_j^L {S/2 S/2 j; S/2 S/2 N}``.
    It is the squared norm of each state ``sum_ab C^{N n}_{S/2 a, S/2 -b} G_L[a, b]``
    built from the normalized site tensors.  For ``L = 1`` only ``N = S`` survives.
    """
    S = spin_value(S)
    _check_block(S, N, L)
    return _eta(S, N, L)


def eta_from_f(S, N: int, L: int) -> Fraction:
    """Same weight through the recoupling matrix: ``sum_k lambda_k^L F_{N k}``."""
    S = spin_value(S)
    _check_block(S, N, L)
    h = HalfInt(S)
    lam = lambda_spectrum(S)
    return sum((lam[k] ** L * f_matrix(h, h, h, h, HalfInt(2 * N), HalfInt(2 * k)).to_rational()
                for k in range(S + 1)), Fraction(0))


def eta_limit(S, N: int) -> Fraction:
    """``eta_N`` for an infinitely long block, where only ``lambda_0 = 1`` survives."""
    S = spin_value(S)
    _check_block(S, N, 1)
    sign = -1 if (N + S) % 2 else 1
    return sign * _sixj_half_legs(S, 0, N)


def eta_table(S, L: int) -> list[Fraction]:
    """``[eta_0^(L), ..., eta_S^(L)]``; ``L=None`` gives the infinite-block limit."""
    S = spin_value(S)
    if L is None:
        return [eta_limit(S, N) for N in range(S + 1)]
    return [eta(S, N, L) for N in range(S + 1)]


def pbc_normalization(S, L_T: int) -> Fraction:
    """Squared norm of the periodic chain state, ``sum_j (2j+1) lambda_j^L_T``."""
    lam = lambda_spectrum(S)
    if L_T < 1:
        raise ValueError("chain length must be positive")
    return sum(((2 * j + 1) * x ** L_T for j, x in enumerate(lam)), Fraction(0))
