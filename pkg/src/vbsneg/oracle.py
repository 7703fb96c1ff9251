"""Brute-force reference built from dense tensor contraction.

The VBS state is assembled site by site from Clebsch-Gordan coefficients alone
(no 6j symbols, no transfer-matrix eigenvalues).  Two routes are offered:

* :func:`build_state` returns the full amplitude array, for checks such as the
  parent Hamiltonian annihilating the state.
* :func:`reduced_density` first replaces each kept block by an orthonormal basis
  of the span of its block states.  That span contains the support of the
  block's reduced density matrix, so nothing is lost, and since the basis is
  real it commutes with the partial transpose.  Only the traced sites stay dense.

Every dense array is checked against ``cap`` amplitudes before it is allocated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numbers import HalfInt
from .su2 import clebsch_gordan
from .vbs import Boundary, ChainSpec, mps_tensor

__all__ = [
    "DEFAULT_CAP",
    "OracleTooLarge",
    "DenseState",
    "DenseOperator",
    "hamiltonian",
    "build_state",
    "block_basis",
    "reduced_density",
    "reduce",
    "partial_transpose",
    "bond_projector",
    "apply_hamiltonian",
    "energy",
    "oracle_spectra",
    "oracle_negativity",
    "compare",
]

DEFAULT_CAP = 10 ** 7


class OracleTooLarge(MemoryError):
    """The requested dense contraction would exceed the amplitude cap."""


def _guard(size: int, cap: int, what: str) -> None:
    if size > cap:
        raise OracleTooLarge(f"{what} needs {size} amplitudes, cap is {cap}")


@dataclass
class DenseState:
    """Amplitudes ``psi`` with one axis per leg; ``roles[i]`` tags leg ``i``.

    Roles are ``"1"``, ``"A"``, ``"2"``, ``"B"``, ``"3"`` for chain sites and
    ``"edge"`` for the free auxiliary spins of an open chain.
    """

    psi: np.ndarray
    roles: list[str]
    spec: ChainSpec

    @property
    def dims(self) -> list[int]:
        return list(self.psi.shape)

    def legs(self, role: str) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r == role]

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.psi, self.psi))


@dataclass
class DenseOperator:
    """Square real matrix on a product of factors of dimensions ``dims``."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        n = int(np.prod(self.dims))
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match factors {self.dims}")

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def eigenvalues(self) -> np.ndarray:
        m = 0.5 * (self.matrix + self.matrix.T)
        return np.linalg.eigvalsh(m)


def _regions(spec: ChainSpec) -> list[tuple[str, int]]:
    return [("1", spec.L1), ("A", spec.LA), ("2", spec.L2), ("B", spec.LB), ("3", spec.L3)]


def _site_tensor(S: int) -> np.ndarray:
    # T[a, m, b]
    return np.ascontiguousarray(mps_tensor(S).transpose(0, 2, 1))


def _chain(tensors: list[np.ndarray], cap: int) -> np.ndarray:
    """Contract ``T[a, x, b]`` tensors into ``M[a, x1, x2, ..., b]``."""
    out = tensors[0]
    for t in tensors[1:]:
        _guard(out.size // out.shape[-1] * t.shape[1] * t.shape[2], cap, "chain contraction")
        out = np.tensordot(out, t, axes=([-1], [0]))
    return out


def _close(m: np.ndarray, boundary: Boundary) -> tuple[np.ndarray, bool]:
    if boundary is Boundary.PERIODIC:
        return np.trace(m, axis1=0, axis2=m.ndim - 1), False
    if boundary is Boundary.EDGES:
        return m, True
    raise ValueError("the dense reference covers periodic and edge-terminated chains only")


def build_state(spec: ChainSpec, cap: int = DEFAULT_CAP) -> DenseState:
    """Full amplitude array of the chain state (not normalized)."""
    S = spec.S
    p, d = 2 * S + 1, S + 1
    size = p ** spec.total_length * (d * d if spec.boundary is Boundary.EDGES else d)
    _guard(size, cap, "dense state")
    t = _site_tensor(S)
    roles = [r for r, n in _regions(spec) for _ in range(n)]
    psi, edges = _close(_chain([t] * spec.total_length, cap), spec.boundary)
    if edges:
        roles = ["edge"] + roles + ["edge"]
    return DenseState(psi, roles, spec)


def block_basis(S: int, L: int, cap: int = DEFAULT_CAP, tol: float = 1e-12):
    """Orthonormal basis of the block states ``G_L[a, :, b]`` and the compressed block.

    Returns ``(U, Gc)`` with ``U`` of shape ``(p^L, r)`` and ``Gc[a, k, b]`` the
    block tensor expressed in that basis.
    """
    p, d = 2 * S + 1, S + 1
    _guard(d * d * p ** L, cap, "block tensor")
    g = _chain([_site_tensor(S)] * L, cap).reshape(d, p ** L, d)
    span = g.transpose(1, 0, 2).reshape(p ** L, d * d)
    u, s, _ = np.linalg.svd(span, full_matrices=False)
    r = int(np.sum(s > tol * s[0]))
    U = u[:, :r]
    gc = np.einsum("xk,axb->akb", U, g)
    return U, gc


def reduced_density(spec: ChainSpec, cap: int = DEFAULT_CAP) -> DenseOperator:
    """Density matrix of ``A`` and ``B`` in the compressed block bases."""
    S = spec.S
    t = _site_tensor(S)
    _, ga = block_basis(S, spec.LA, cap)
    _, gb = block_basis(S, spec.LB, cap)
    tensors, roles = [], []
    for role, n in _regions(spec):
        if role == "A":
            tensors.append(ga)
            roles.append("A")
        elif role == "B":
            tensors.append(gb)
            roles.append("B")
        else:
            tensors.extend([t] * n)
            roles.extend([role] * n)
    psi, edges = _close(_chain(tensors, cap), spec.boundary)
    if edges:
        roles = ["edge"] + roles + ["edge"]
    return reduce(DenseState(psi, roles, spec))


def reduce(state: DenseState, keep=("A", "B"), cap: int = DEFAULT_CAP) -> DenseOperator:
    """Trace out every leg whose role is not in ``keep``.

    The result is a normalized operator on two factors: the legs of the first
    kept role, then those of all other kept roles.
    """
    keep = tuple(keep)
    a = state.legs(keep[0])
    b = [i for r in keep[1:] for i in state.legs(r)]
    rest = [i for i in range(len(state.roles)) if i not in a + b]
    dims = state.dims
    da = int(np.prod([dims[i] for i in a]))
    db = int(np.prod([dims[i] for i in b]))
    _guard((da * db) ** 2, cap, "two-block density matrix")
    m = np.transpose(state.psi, a + b + rest).reshape(da * db, -1)
    rho = m @ m.T
    rho /= np.trace(rho)
    return DenseOperator(rho, (da, db))


def partial_transpose(op: DenseOperator, factor: str = "A") -> DenseOperator:
    """Transpose the indices of one factor (``"A"`` first, ``"B"`` second)."""
    if len(op.dims) != 2:
        raise ValueError(f"partial transpose needs two factors, got {len(op.dims)}")
    da, db = op.dims
    r = op.matrix.reshape(da, db, da, db)
    if factor == "A":
        r = r.transpose(2, 1, 0, 3)
    elif factor == "B":
        r = r.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"factor must be 'A' or 'B', got {factor!r}")
    return DenseOperator(r.reshape(da * db, da * db), op.dims)


def bond_projector(S: int, J: int) -> np.ndarray:
    """Projector onto total spin ``J`` of two spin-``S`` sites, as a ``p^2 x p^2`` matrix."""
    p = 2 * S + 1
    tS = HalfInt(2 * S)
    vecs = np.zeros((2 * J + 1, p * p))
    for iM, tM in enumerate(range(-2 * J, 2 * J + 1, 2)):
        for i1 in range(p):
            for i2 in range(p):
                vecs[iM, i1 * p + i2] = float(clebsch_gordan(
                    tS, HalfInt(2 * i1 - 2 * S), tS, HalfInt(2 * i2 - 2 * S),
                    HalfInt(2 * J), HalfInt(tM)))
    return vecs.T @ vecs


def _bonds(state: DenseState) -> list[tuple[int, int]]:
    sites = [i for i, r in enumerate(state.roles) if r != "edge"]
    bonds = list(zip(sites[:-1], sites[1:]))
    if state.spec.boundary is Boundary.PERIODIC and len(sites) > 2:
        bonds.append((sites[-1], sites[0]))
    return bonds


def hamiltonian(spec: ChainSpec, cap: int = DEFAULT_CAP) -> DenseOperator:
    """Dense parent Hamiltonian ``sum_bonds sum_{J > S} P_J`` on the chain sites.

    Edge spins are not acted on, so for ``Boundary.EDGES`` the operator covers
    the physical sites only.
    """
    S, L = spec.S, spec.total_length
    p = 2 * S + 1
    dim = p ** L
    _guard(dim * dim, cap, "dense Hamiltonian")
    h = sum(bond_projector(S, J) for J in range(S + 1, 2 * S + 1))
    bonds = [(i, i + 1) for i in range(L - 1)]
    if spec.boundary is Boundary.PERIODIC and L > 2:
        bonds.append((L - 1, 0))
    out = np.zeros((dim, dim))
    h4 = h.reshape(p, p, p, p)
    eye = np.eye(dim).reshape((p,) * L + (dim,))
    for i, j in bonds:
        moved = np.tensordot(h4, eye, axes=([2, 3], [i, j]))
        out += np.moveaxis(moved, (0, 1), (i, j)).reshape(dim, dim)
    return DenseOperator(out, (p,) * L)


def apply_hamiltonian(state: DenseState) -> np.ndarray:
    """``H psi`` for ``H = sum_bonds sum_{J > S} P_J``, applied bond by bond."""
    S = state.spec.S
    p = 2 * S + 1
    h = sum(bond_projector(S, J) for J in range(S + 1, 2 * S + 1)).reshape(p, p, p, p)
    out = np.zeros_like(state.psi)
    for i, j in _bonds(state):
        moved = np.tensordot(h, state.psi, axes=([2, 3], [i, j]))
        out += np.moveaxis(moved, (0, 1), (i, j))
    return out


def energy(state: DenseState) -> float:
    """``<psi|H|psi> / <psi|psi>``; zero for the VBS state."""
    return float(np.vdot(state.psi, apply_hamiltonian(state)) / state.norm2)


def oracle_spectra(spec: ChainSpec, cap: int = DEFAULT_CAP) -> tuple[np.ndarray, np.ndarray]:
    """Ascending spectra of the two-block state and of its partial transpose."""
    red = reduced_density(spec, cap)
    return red.eigenvalues(), partial_transpose(red).eigenvalues()


def oracle_negativity(spec: ChainSpec, cap: int = DEFAULT_CAP) -> float:
    """Sum of the magnitudes of the negative partial-transpose eigenvalues."""
    _, pt = oracle_spectra(spec, cap)
    return 0.0 - float(np.sum(pt[pt < 0]))


def compare(spec: ChainSpec, cap: int = DEFAULT_CAP) -> dict:
    """Side-by-side spectra and negativity from the sector formulas and the dense reference."""
    from .reduced import diagonalize, rho_sectors

    rho_o, pt_o = oracle_spectra(spec, cap)
    rho_a = diagonalize(rho_sectors(spec)).values()
    pt_a = diagonalize(rho_sectors(spec, transposed=True), symmetric=False).values()
    same_dim = rho_a.size == rho_o.size and pt_a.size == pt_o.size
    out = {
        "spec": spec.as_dict(),
        "dimension": {"oracle": int(rho_o.size), "analytic": int(rho_a.size)},
        "negativity": {"oracle": 0.0 - float(np.sum(pt_o[pt_o < 0])),
                       "analytic": 0.0 - float(np.sum(pt_a[pt_a < 0]))},
        "rho_max_deviation": float(np.max(np.abs(rho_o - rho_a))) if same_dim else None,
        "ptdm_max_deviation": float(np.max(np.abs(pt_o - pt_a))) if same_dim else None,
    }
    out["negativity"]["deviation"] = abs(out["negativity"]["oracle"] - out["negativity"]["analytic"])
    return out

