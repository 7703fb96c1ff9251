"""Two-block reduced density matrix of the VBS chain in the coupled sector basis.

The state of blocks ``A`` and ``B`` commutes with their total spin, so in the
basis ``|N_A, N_B; R r>`` (``N_A``, ``N_B`` the block channels, ``R`` their
total spin) it splits into sector matrices indexed by the pairs ``(N_A, N_B)``
compatible with ``R``, each repeated ``2R+1`` times.  The partial transpose on
``A`` has the same block structure.

Three constructions are provided:

``gamma_tensor``
    periodic chain, any gaps; a sextuple 6j sum over ``p, q, j1, j2``.
``y_tensor``
    open chain ending in two spin-S/2 particles; a triple 6j sum over ``j2``.
    This is also the ``L1 + L3 -> infinity`` limit of the periodic chain.
``x_tensor``
    the boundary-agnostic tensor from which both follow by
    :func:`contract_pbc` and :func:`contract_edges`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .linalg import NumericalContractError, jacobi_eigh, real_eigvals
from .numbers import HalfInt
from .su2 import f_matrix, six_j
from .vbs import (Boundary, ChainSpec, eta_table, lambda_spectrum, pbc_normalization,
                  spin_value)

__all__ = [
    "SectorMatrix",
    "SectorSpectrum",
    "Spectrum",
    "gamma_tensor",
    "y_tensor",
    "edge_sectors",
    "x_tensor",
    "contract_pbc",
    "contract_edges",
    "rho_sectors",
    "thermodynamic_weights",
    "thermodynamic_eigenvalues",
    "diagonalize",
    "SYMMETRY_TOL",
    "ZERO_CUTOFF",
]

SYMMETRY_TOL = 1e-10
ZERO_CUTOFF = 1e-13


@dataclass
class SectorMatrix:
    """One block of the density matrix (or its partial transpose) at total spin ``R``."""

    R: int
    labels: list[tuple[int, int]]
    matrix: np.ndarray
    key: tuple = ()

    @property
    def degeneracy(self) -> int:
        return 2 * self.R + 1

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def asymmetry(self) -> float:
        if self.matrix.size == 0:
            return 0.0
        return float(np.max(np.abs(self.matrix - self.matrix.T)))


@dataclass
class SectorSpectrum:
    R: int
    labels: list[tuple[int, int]]
    eigenvalues: np.ndarray

    @property
    def degeneracy(self) -> int:
        return 2 * self.R + 1


@dataclass
class Spectrum:
    """Eigenvalues with multiplicities; ``source`` is ``"analytic"`` or ``"numeric"``."""

    pairs: list[tuple[float, int]]
    source: str = "numeric"
    sectors: list[SectorSpectrum] = field(default_factory=list)

    def values(self) -> np.ndarray:
        """All eigenvalues, repeated by multiplicity, ascending."""
        out = [np.full(m, v) for v, m in self.pairs if m > 0]
        if not out:
            return np.zeros(0)
        return np.sort(np.concatenate(out))

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.pairs)

    @property
    def trace(self) -> float:
        return float(np.sum(self.values()))

    @property
    def min_eigenvalue(self) -> float:
        v = self.values()
        return float(v[0]) if v.size else 0.0

    @property
    def negative_sum(self) -> float:
        v = self.values()
        return float(np.sum(v[v < 0]))

    @property
    def trace_norm(self) -> float:
        return float(np.sum(np.abs(self.values())))

    def nonzero(self, cutoff: float = ZERO_CUTOFF) -> np.ndarray:
        v = self.values()
        return v[np.abs(v) >= cutoff]


# -- symbol tables --------------------------------------------------------------

def _f(x) -> float:
    return float(x)


@lru_cache(maxsize=None)
def _w_table(S: int) -> np.ndarray:
    # W[n, j, p] = {n j p; S/2 S/2 S/2}
    h = HalfInt(S)
    w = np.zeros((S + 1,) * 3)
    for n, j, p in product(range(S + 1), repeat=3):
        w[n, j, p] = _f(six_j(HalfInt(2 * n), HalfInt(2 * j), HalfInt(2 * p), h, h, h))
    w.setflags(write=False)
    return w


@lru_cache(maxsize=None)
def _k_table(S: int, R: int) -> np.ndarray:
    # K[q, p, n1, n2, j] = {q p R; n1 n2 j}
    k = np.zeros((S + 1,) * 5)
    tR = HalfInt(2 * R)
    for q, p, n1, n2, j in product(range(S + 1), repeat=5):
        k[q, p, n1, n2, j] = _f(six_j(HalfInt(2 * q), HalfInt(2 * p), tR,
                                      HalfInt(2 * n1), HalfInt(2 * n2), HalfInt(2 * j)))
    k.setflags(write=False)
    return k


@lru_cache(maxsize=None)
def _f_tables(S: int) -> tuple[np.ndarray, np.ndarray]:
    # Fa[n, j, P] = F^{n j h h}_{P h},  Fb[n, j, P] = F^{h h n j}_{P h}
    h = HalfInt(S)
    fa = np.zeros((S + 1,) * 3)
    fb = np.zeros((S + 1,) * 3)
    for n, j, P in product(range(S + 1), repeat=3):
        tn, tj, tP = HalfInt(2 * n), HalfInt(2 * j), HalfInt(2 * P)
        fa[n, j, P] = _f(f_matrix(tn, tj, h, h, tP, h))
        fb[n, j, P] = _f(f_matrix(h, h, tn, tj, tP, h))
    fa.setflags(write=False)
    fb.setflags(write=False)
    return fa, fb


def _parity(n) -> np.ndarray:
    return np.where(np.arange(n) % 2, -1.0, 1.0)


def _block_amplitudes(S: int, L: int) -> np.ndarray:
    # sqrt((2n+1) eta_n^(L)); eta is exact and non-negative
    eta = eta_table(S, L)
    if any(e < 0 for e in eta):
        raise NumericalContractError(f"negative block weight for S={S}, L={L}")
    return np.array([np.sqrt(float((2 * n + 1) * e)) for n, e in enumerate(eta)])


def _powers(S: int, L: int) -> np.ndarray:
    return np.array([float(x ** L) for x in lambda_spectrum(S)])


def _to_sectors(S: int, full: dict[int, np.ndarray], amp_a, amp_b) -> dict[int, SectorMatrix]:
    live_a = [n for n in range(S + 1) if amp_a[n] > 0]
    live_b = [n for n in range(S + 1) if amp_b[n] > 0]
    sectors = {}
    for R, mat in full.items():
        labels = [(na, nb) for na in live_a for nb in live_b if abs(na - nb) <= R <= na + nb]
        if not labels:
            continue
        idx = [na * (S + 1) + nb for na, nb in labels]
        sectors[R] = SectorMatrix(R, labels, mat[np.ix_(idx, idx)].copy(), key=(R,))
    return sectors


def _require(spec: ChainSpec, boundary: Boundary) -> None:
    if spec.boundary is not boundary:
        raise ValueError(f"expected a {boundary.value} chain, got {spec.boundary.value}")


# -- periodic chain -------------------------------------------------------------

def gamma_tensor(spec: ChainSpec, transposed: bool = False) -> dict[int, SectorMatrix]:
    """Sector matrices of the periodic-chain state (or its partial transpose on A).

    Entry ``(n1, n2), (n3, n4)`` of sector ``R`` is::

        (-1)^(n1+n2) prod_k sqrt((2n_k+1) eta_{n_k}) / N_PBC
          * sum_{p q j1 j2} [p][q][j1][j2] (-1)^(p+q) s(j1) s(j2)
            lambda_j1^(L1+L3) lambda_j2^L2
            {q p R; n3 n4 j2} {n1 j1 p; h h h} {n2 j1 q; h h h}
            {q p R; n1 n2 j1} {n3 j2 p; h h h} {n4 j2 q; h h h}

    with ``[x] = 2x+1``, ``h = S/2`` and ``s(j) = (-1)^j`` for the state,
    ``s(j) = 1`` for its partial transpose.  ``n1, n3`` label block A and
    ``n2, n4`` block B.
    """
    _require(spec, Boundary.PERIODIC)
    S = spec.S
    amp_a = _block_amplitudes(S, spec.LA)
    amp_b = _block_amplitudes(S, spec.LB)
    d = np.arange(S + 1) * 2.0 + 1.0
    par = _parity(S + 1)
    sgn = np.ones(S + 1) if transposed else par
    a = d * sgn * _powers(S, spec.L1 + spec.L3)
    b = d * sgn * _powers(S, spec.L2)
    w = _w_table(S)
    pq = np.outer(d * par, d * par)
    pre_a = np.einsum("i,j->ij", amp_a * par, amp_b * par)  # (-1)^(n1+n2) amplitudes
    pre_b = np.einsum("i,j->ij", amp_a, amp_b)
    norm = float(pbc_normalization(S, spec.total_length))
    full = {}
    for R in range(2 * S + 1):
        k = _k_table(S, R)
        left = np.einsum("j,xjp,yjq,qpxyj->xypq", a, w, w, k)
        right = np.einsum("j,xjp,yjq,qpxyj->xypq", b, w, w, k)
        g = np.einsum("xypq,pq,zwpq->xyzw", left, pq, right)
        g *= pre_a[:, :, None, None] * pre_b[None, None, :, :] / norm
        full[R] = g.reshape((S + 1) ** 2, (S + 1) ** 2)
    return _to_sectors(S, full, amp_a, amp_b)


# -- spin-S/2 edges -------------------------------------------------------------

def y_tensor(spec: ChainSpec, transposed: bool = False) -> dict[tuple[int, int], SectorMatrix]:
    """Components ``(j2, R)`` of the edge-terminated chain state.

    ``Y = lambda_j2^L2 (-1)^(n1+n3+R+j2) [j2] {n1 n3 j2; h h h} {h h j2; n2 n4 h}
    {n2 n4 j2; n3 n1 R} prod_k sqrt((2n_k+1) eta_{n_k}) / (S+1)``, the last factor
    giving unit trace; the partial transpose
    carries an extra ``(-1)^j2``.  Summing over ``j2`` gives the sector of total
    spin ``R``.  The lengths ``L1`` and ``L3`` drop out: tracing a free spin-S/2
    edge through any number of sites leaves the dominant transfer eigenvector.
    """
    _require(spec, Boundary.EDGES)
    S = spec.S
    h = HalfInt(S)
    amp_a = _block_amplitudes(S, spec.LA)
    amp_b = _block_amplitudes(S, spec.LB)
    lam = _powers(S, spec.L2)
    rng = range(S + 1)
    comps = {}
    for j2 in rng:
        tj = HalfInt(2 * j2)
        for R in range(2 * S + 1):
            tR = HalfInt(2 * R)
            full = np.zeros(((S + 1) ** 2,) * 2)
            for n1, n2, n3, n4 in product(rng, repeat=4):
                amp = amp_a[n1] * amp_b[n2] * amp_a[n3] * amp_b[n4]
                if amp == 0:
                    continue
                t1, t2, t3, t4 = (HalfInt(2 * x) for x in (n1, n2, n3, n4))
                v = six_j(t2, t4, tj, t3, t1, tR)
                if not v:
                    continue
                v = v * six_j(t1, t3, tj, h, h, h) * six_j(h, h, tj, t2, t4, h)
                if not v:
                    continue
                e = n1 + n3 + R + j2 + (j2 if transposed else 0)
                sign = -1.0 if e % 2 else 1.0
                full[n1 * (S + 1) + n2, n3 * (S + 1) + n4] = (
                    sign * (2 * j2 + 1) * lam[j2] * float(v) * amp / (S + 1))
            if not full.any():
                continue
            for R_, sec in _to_sectors(S, {R: full}, amp_a, amp_b).items():
                sec.key = (j2, R_)
                comps[(j2, R_)] = sec
    return comps


def _sum_components(comps: dict[tuple[int, int], SectorMatrix]) -> dict[int, SectorMatrix]:
    out: dict[int, SectorMatrix] = {}
    for (_, R), sec in sorted(comps.items()):
        if R in out:
            out[R].matrix = out[R].matrix + sec.matrix
        else:
            out[R] = SectorMatrix(R, list(sec.labels), sec.matrix.copy(), key=(R,))
    return out


def edge_sectors(spec: ChainSpec, transposed: bool = False) -> dict[int, SectorMatrix]:
    """Sector matrices of the edge-terminated chain (components summed over ``j2``)."""
    return _sum_components(y_tensor(spec, transposed))


# -- general boundary tensor ------------------------------------------------------

def x_tensor(spec: ChainSpec) -> np.ndarray:
    """Boundary-agnostic tensor ``X[n1, n2, n3, n4, P, Q, j1, j2, j3]``.

    ``X = [j2]^(1/2) (-1)^(n1+n2+j2+j3) prod_k sqrt((2n_k+1) eta_{n_k}) / (S+1)
    * prod_p [j_p]^(1/2) lambda_{j_p}^{L_p}
    * F^{n1 j1 h h}_{P h} F^{h h n3 j2}_{P h} F^{n2 j3 h h}_{Q h} F^{h h n4 j2}_{Q h}``

    where ``j1, j2, j3`` run along regions 1, 2, 3.  No overall normalization is
    applied; :func:`contract_pbc` and :func:`contract_edges` supply it.
    """
    S = spec.S
    amp_a = _block_amplitudes(S, spec.LA) / (S + 1)
    amp_b = _block_amplitudes(S, spec.LB) / (S + 1)
    d = np.arange(S + 1) * 2.0 + 1.0
    par = _parity(S + 1)
    fa, fb = _f_tables(S)
    r1 = np.sqrt(d) * _powers(S, spec.L1)
    r2 = d * par * _powers(S, spec.L2)  # sqrt([j2]) twice, (-1)^j2
    r3 = np.sqrt(d) * par * _powers(S, spec.L3)
    return np.einsum(
        "a,b,c,e,i,j,k,aip,cjp,bkq,ejq->abcepqijk",
        amp_a * par, amp_b * par, amp_a, amp_b, r1, r2, r3, fa, fb, fa, fb)


def contract_pbc(X: np.ndarray, spec: ChainSpec, transposed: bool = False) -> dict[int, SectorMatrix]:
    """Close the outer legs of ``X`` around the ring.

    Sets ``j3 = j1`` and recouples the ``(P, Q)`` pair to total spin ``R``::

        Gamma(R) = (-1)^(n1+n2) / N_PBC * sum_{P Q j1 j2} [P][Q] (-1)^(P+Q)
                   {Q P R; n1 n2 j1} {Q P R; n3 n4 j2} X[..., P, Q, j1, j2, j1]

    The partial transpose takes an additional ``(-1)^(j1+j2)``.
    """
    _require(spec, Boundary.PERIODIC)
    S = spec.S
    d = np.arange(S + 1) * 2.0 + 1.0
    par = _parity(S + 1)
    xd = np.einsum("abcepqiji->abcepqij", X)
    if transposed:
        xd = np.einsum("abcepqij,i,j->abcepqij", xd, par, par)
    norm = float(pbc_normalization(S, spec.total_length))
    pq = np.outer(d * par, d * par)
    full = {}
    for R in range(2 * S + 1):
        k = _k_table(S, R)
        g = np.einsum("pq,qpabi,qpcej,abcepqij->abce", pq, k, k, xd)
        g *= np.outer(par, par)[:, :, None, None] / norm
        full[R] = g.reshape((S + 1) ** 2, (S + 1) ** 2)
    amp_a = _block_amplitudes(S, spec.LA)
    amp_b = _block_amplitudes(S, spec.LB)
    return _to_sectors(S, full, amp_a, amp_b)


def contract_edges(X: np.ndarray, spec: ChainSpec, transposed: bool = False) -> dict[int, SectorMatrix]:
    """Terminate the outer legs of ``X`` on spin-S/2 edges.

    Takes ``j1 = j3 = 0``, ``P = n1`` and ``Q = n2`` and recouples the middle
    leg ``j2`` into total spin ``R``::

        rho(R) = sum_j2 sqrt([n1][n2]) (-1)^(n2+n3+R) {n2 n4 j2; n3 n1 R}
                 s(j2) X[n1, n2, n3, n4, n1, n2, 0, j2, 0]

    with ``s(j2) = (-1)^j2`` for the partial transpose and 1 otherwise.
    """
    _require(spec, Boundary.EDGES)
    S = spec.S
    n = np.arange(S + 1)
    par = _parity(S + 1)
    xe = np.einsum("abceabj->abcej", X[..., 0, :, 0])
    if transposed:
        xe = xe * par[None, None, None, None, :]
    root = np.sqrt(np.outer(2 * n + 1, 2 * n + 1).astype(float))
    full = {}
    for R in range(2 * S + 1):
        k6 = np.zeros((S + 1,) * 5)
        tR = HalfInt(2 * R)
        for n1, n2, n3, n4, j2 in product(range(S + 1), repeat=5):
            k6[n1, n2, n3, n4, j2] = _f(six_j(HalfInt(2 * n2), HalfInt(2 * n4), HalfInt(2 * j2),
                                              HalfInt(2 * n3), HalfInt(2 * n1), tR))
        phase = np.einsum("b,c->bc", par, par) * (-1.0) ** R
        g = np.einsum("abcej,abcej->abce", k6, xe)
        g *= root[:, :, None, None] * phase[None, :, :, None]
        full[R] = g.reshape((S + 1) ** 2, (S + 1) ** 2)
    amp_a = _block_amplitudes(S, spec.LA)
    amp_b = _block_amplitudes(S, spec.LB)
    return _to_sectors(S, full, amp_a, amp_b)


def rho_sectors(spec: ChainSpec, transposed: bool = False) -> dict[int, SectorMatrix]:
    """Sector matrices for the boundary recorded in ``spec``."""
    if spec.boundary is Boundary.PERIODIC:
        return gamma_tensor(spec, transposed)
    if spec.boundary is Boundary.EDGES:
        return edge_sectors(spec, transposed)
    raise ValueError("no closed-form reduced density matrix for a general boundary")


# -- infinite chain, closed form ---------------------------------------------------

def thermodynamic_weights(S, LA: int, LB: int, L2: int) -> dict[tuple[int, int, int], float]:
    """Closed-form weights ``Lambda^R_{N M}`` for ``L1 + L3 -> infinity``.

    ``Lambda = (2N+1)(2M+1) eta_N^(LA) eta_M^(LB) / (S+1) * sum_j [j] lambda_j^L2
    (-1)^(R+j) {M M j; N N R} {N N j; h h h} {h h j; M M h}``,
    keyed by ``(N, M, R)`` with ``R`` in the triangle of ``N`` and ``M``.

    This is the diagonal of :func:`edge_sectors` in the ``(N, M)`` basis, so the
    weights sum to one with multiplicity ``2R+1``.  They are the eigenvalues
    only when every sector is one-dimensional (``LA = LB = 1``) or when ``L2``
    is long enough for the off-diagonal couplings, which carry ``lambda_j^L2``
    with ``j >= 1``, to have decayed.
    """
    S = spin_value(S)
    if LA < 1 or LB < 1 or L2 < 0:
        raise ValueError("need LA, LB >= 1 and L2 >= 0")
    h = HalfInt(S)
    lam = _powers(S, L2)
    ea, eb = eta_table(S, LA), eta_table(S, LB)
    out = {}
    for N in range(S + 1):
        for M in range(S + 1):
            w = (2 * N + 1) * (2 * M + 1) * float(ea[N] * eb[M]) / (S + 1)
            tN, tM = HalfInt(2 * N), HalfInt(2 * M)
            for R in range(abs(N - M), N + M + 1):
                tR = HalfInt(2 * R)
                acc = 0.0
                for j in range(S + 1):
                    tj = HalfInt(2 * j)
                    v = six_j(tM, tM, tj, tN, tN, tR)
                    if not v:
                        continue
                    v = v * six_j(tN, tN, tj, h, h, h) * six_j(h, h, tj, tM, tM, h)
                    acc += (-1) ** (R + j) * (2 * j + 1) * lam[j] * float(v)
                out[(N, M, R)] = w * acc
    return out


def thermodynamic_eigenvalues(S, LA: int, LB: int, L2: int) -> Spectrum:
    """:func:`thermodynamic_weights` as a spectrum, each value with multiplicity ``2R+1``."""
    weights = thermodynamic_weights(S, LA, LB, L2)
    by_r: dict[int, list] = {}
    for (N, M, R), v in sorted(weights.items()):
        by_r.setdefault(R, []).append(((N, M), v))
    sectors = [SectorSpectrum(R, [lab for lab, _ in rows], np.array([v for _, v in rows]))
               for R, rows in sorted(by_r.items())]
    pairs = [(v, 2 * R + 1) for (_, _, R), v in sorted(weights.items())]
    return Spectrum(pairs, "analytic", sectors)


# -- diagonalization ---------------------------------------------------------------

def diagonalize(sectors, symmetric: bool = True, source: str = "numeric") -> Spectrum:
    """Diagonalize every sector and collect eigenvalues with multiplicity ``2R+1``.

    With ``symmetric=True`` each block must be symmetric to within
    :data:`SYMMETRY_TOL`; it is then symmetrized and handed to the Jacobi solver.
    Otherwise a general real eigensolver is used and complex eigenvalues are an error.
    """
    items = sectors.values() if isinstance(sectors, dict) else sectors
    pairs, details = [], []
    for sec in items:
        if sec.dimension == 0:
            continue
        if symmetric:
            asym = sec.asymmetry()
            if asym > SYMMETRY_TOL:
                raise NumericalContractError(
                    f"sector R={sec.R} key={sec.key} is not symmetric (max deviation {asym:.3g})")
            m = 0.5 * (sec.matrix + sec.matrix.T)
            w, _ = jacobi_eigh(m)
        else:
            w = real_eigvals(sec.matrix)
        details.append(SectorSpectrum(sec.R, list(sec.labels), w))
        pairs.extend((float(x), sec.degeneracy) for x in w)
    return Spectrum(pairs, source, details)
