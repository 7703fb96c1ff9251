"""Negativity of two blocks of the VBS chain.

``Neg = (||rho^T_A||_1 - 1) / 2``, i.e. minus the sum of the negative eigenvalues
of the partial transpose.  Adjacent blocks covering a whole periodic chain have
a closed form; every other configuration goes through the sector matrices of
:mod:`vbsneg.reduced`.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .reduced import Spectrum, diagonalize, rho_sectors
from .vbs import Boundary, ChainSpec, eta_table, pbc_normalization, spin_value

__all__ = [
    "ZERO_THRESHOLD",
    "NegativityResult",
    "adjacent_negativity",
    "ptdm_spectrum_adjacent",
    "numeric_negativity",
    "negativity_from_spectrum",
    "ConjectureRow",
    "ConjectureReport",
    "conjecture_scan",
    "figure_data",
    "figure_plateau",
]

# absolute threshold on the negative-eigenvalue sum for calling a negativity zero
ZERO_THRESHOLD = 1e-11


@dataclass
class NegativityResult:
    value: float
    negative_eigenvalue_sum: float
    method: str
    spec: ChainSpec
    trace_norm: float | None = None

    @property
    def vanishes(self) -> bool:
        return abs(self.value) < ZERO_THRESHOLD

    def as_dict(self) -> dict:
        out = {
            "value": self.value,
            "negative_eigenvalue_sum": self.negative_eigenvalue_sum,
            "method": self.method,
            "spec": self.spec.as_dict(),
            "vanishes": self.vanishes,
        }
        if self.trace_norm is not None:
            out["trace_norm"] = self.trace_norm
        return out


def _sqrt(x: Fraction) -> float:
    return math.sqrt(x) if x > 0 else 0.0


def _closed_form(S: int, eta_a, eta_b, norm) -> float:
    # (1/norm) sum_N [N] r_N [N r_N + sum_{M>N} [M] r_M],  r_N = sqrt(eta_a[N] eta_b[N])
    r = [_sqrt(eta_a[n] * eta_b[n]) for n in range(S + 1)]
    total = 0.0
    for n in range(S + 1):
        tail = sum((2 * m + 1) * r[m] for m in range(n + 1, S + 1))
        total += (2 * n + 1) * r[n] * (n * r[n] + tail)
    return total / float(norm)


def adjacent_negativity(S, LA: int, LB: int) -> NegativityResult:
    """Closed-form negativity of two adjacent blocks forming a periodic chain of ``LA + LB`` sites."""
    S = spin_value(S)
    spec = ChainSpec(S, 0, LA, 0, LB, 0, Boundary.PERIODIC)
    value = _closed_form(S, eta_table(S, LA), eta_table(S, LB), pbc_normalization(S, LA + LB))
    return NegativityResult(value, -value, "ClosedForm", spec, 2 * value + 1)


def ptdm_spectrum_adjacent(S, LA: int, LB: int) -> Spectrum:
    """Partial-transpose spectrum for adjacent blocks covering a periodic chain.

    The partial transpose acts as ``(W x W) SWAP`` on the states ``x = (N, n)``
    with ``w_x^2 = eta_N^(LA) eta_N^(LB) / N_PBC``.  Each ``x`` gives ``w_x^2``,
    each unordered pair ``x != y`` (including equal ``N``) gives ``+w_x w_y`` and
    ``-w_x w_y``.  Multiplicities are counted by enumerating the labels.  Zeros
    fill the rest of the space spanned by the two blocks.
    """
    S = spin_value(S)
    ea, eb = eta_table(S, LA), eta_table(S, LB)
    norm = pbc_normalization(S, LA + LB)
    states = [(N, n) for N in range(S + 1) for n in range(-N, N + 1) if ea[N] * eb[N] > 0]
    counts: Counter = Counter()
    for i, (N, _) in enumerate(states):
        counts[("d", N, N)] += 1
        for M, _ in states[i + 1:]:
            counts[("p", N, M)] += 1
    pairs = []
    for (kind, N, M), c in sorted(counts.items()):
        w = _sqrt(ea[N] * eb[N] / norm) * _sqrt(ea[M] * eb[M] / norm)
        if kind == "d":
            pairs.append((w, c))
        else:
            pairs.extend([(w, c), (-w, c)])
    dim_a = sum(2 * N + 1 for N in range(S + 1) if ea[N] > 0)
    dim_b = sum(2 * N + 1 for N in range(S + 1) if eb[N] > 0)
    filled = sum(c for _, c in pairs)
    if dim_a * dim_b > filled:
        pairs.append((0.0, dim_a * dim_b - filled))
    return Spectrum(pairs, "analytic")


def negativity_from_spectrum(spectrum: Spectrum, spec: ChainSpec, method: str) -> NegativityResult:
    neg = spectrum.negative_sum
    return NegativityResult(0.0 - neg, neg, method, spec, spectrum.trace_norm)


def numeric_negativity(spec: ChainSpec) -> NegativityResult:
    """Negativity from the eigenvalues of the partial-transpose sector matrices.

    The blocks are handed to a general real eigensolver; a complex spectrum is
    reported as a :class:`~vbsneg.linalg.NumericalContractError`.
    """
    spectrum = diagonalize(rho_sectors(spec, transposed=True), symmetric=False)
    return negativity_from_spectrum(spectrum, spec, "NumericPTDM")


# -- separated blocks ----------------------------------------------------------------

@dataclass
class ConjectureRow:
    spec: ChainSpec
    value: float
    minimal: bool = False

    @property
    def vanishes(self) -> bool:
        return abs(self.value) < ZERO_THRESHOLD

    def as_dict(self) -> dict:
        return {**self.spec.as_dict(), "negativity": self.value,
                "vanishes": self.vanishes, "minimal": self.minimal}


@dataclass
class ConjectureReport:
    S_max: int
    budget: int
    rows: list[ConjectureRow] = field(default_factory=list)
    locc_violations: list[dict] = field(default_factory=list)

    @property
    def counterexamples(self) -> list[ConjectureRow]:
        return [r for r in self.rows if not r.vanishes]

    def minimal(self, S: int) -> ConjectureRow:
        return next(r for r in self.rows if r.minimal and r.spec.S == S)

    @property
    def all_vanish(self) -> bool:
        return not self.counterexamples

    def as_dict(self) -> dict:
        return {
            "S_max": self.S_max,
            "budget": self.budget,
            "threshold": ZERO_THRESHOLD,
            "all_vanish": self.all_vanish,
            "minimal": [self.minimal(S).as_dict() for S in range(1, self.S_max + 1)],
            "counterexamples": [r.as_dict() for r in self.counterexamples],
            "locc_consistent": not self.locc_violations,
            "locc_violations": self.locc_violations,
            "rows": [r.as_dict() for r in self.rows],
        }


def _separated_specs(S: int, budget: int):
    # periodic: only L1 + L3 matters, so the whole gap is put in region 1
    for L13, LA, L2, LB in product(range(1, budget + 1), repeat=4):
        if L13 + LA + L2 + LB <= budget:
            yield ChainSpec(S, L13, LA, L2, LB, 0, Boundary.PERIODIC)
    # edges: L1 and L3 drop out entirely
    for LA, L2, LB in product(range(1, budget + 1), repeat=3):
        if LA + L2 + LB <= budget:
            yield ChainSpec(S, 0, LA, L2, LB, 0, Boundary.EDGES)


def conjecture_scan(S_max, length_budget: int) -> ConjectureReport:
    """Negativity of non-touching blocks for every ``S <= S_max``.

    Covers the minimal separation ``L1 + L3 = L2 = 1`` with spin-S/2 edges and
    every separated periodic or edge configuration whose sites (excluding edge
    spins) number at most ``length_budget``.  Values above
    :data:`ZERO_THRESHOLD` are reported as counterexamples.  Along each edge
    family with fixed ``(LA, LB)`` a vanishing value at separation ``L2`` must
    persist for all larger ``L2``; breaks of that rule are listed too.
    """
    S_max = spin_value(S_max)
    if length_budget < 4:
        raise ValueError("a separated configuration needs at least 4 sites")
    report = ConjectureReport(S_max, length_budget)
    for S in range(1, S_max + 1):
        minimal = ChainSpec(S, 1, 1, 1, 1, 0, Boundary.EDGES)
        report.rows.append(ConjectureRow(minimal, numeric_negativity(minimal).value, True))
        for spec in _separated_specs(S, length_budget):
            report.rows.append(ConjectureRow(spec, numeric_negativity(spec).value))
        families: dict[tuple, list[ConjectureRow]] = {}
        for row in report.rows:
            sp = row.spec
            if sp.S == S and sp.boundary is Boundary.EDGES and not row.minimal:
                families.setdefault((sp.LA, sp.LB), []).append(row)
        for (LA, LB), rows in sorted(families.items()):
            rows.sort(key=lambda r: r.spec.L2)
            first_zero = next((r.spec.L2 for r in rows if r.vanishes), None)
            if first_zero is None:
                continue
            for r in rows:
                if r.spec.L2 > first_zero and not r.vanishes:
                    report.locc_violations.append(
                        {"S": S, "LA": LA, "LB": LB, "zero_at": first_zero,
                         "L2": r.spec.L2, "negativity": r.value})
    return report


# -- block-length curves -------------------------------------------------------------

def figure_data(S_list, LB: int, LA_max: int) -> list[tuple[int, int, float]]:
    """Rows ``(S, LA, negativity)`` of adjacent blocks for ``LA = 1..LA_max``, sorted."""
    rows = []
    for S in sorted(spin_value(s) for s in S_list):
        for LA in range(1, LA_max + 1):
            rows.append((S, LA, adjacent_negativity(S, LA, LB).value))
    return rows


def figure_plateau(S, LB: int) -> float:
    """Limit of :func:`adjacent_negativity` as ``LA -> infinity`` at fixed ``LB``."""
    S = spin_value(S)
    return _closed_form(S, eta_table(S, None), eta_table(S, LB), 1)

