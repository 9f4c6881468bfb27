"""Concurrence, tangles and per-chain entanglement reports.

For an X-form two-qubit state the Wootters concurrence has the closed form

    C = 2 max(0, |z| - sqrt(p_uu p_dd), |w| - sqrt(p_ud p_du)),

which is exact; the generic spin-flip construction (square roots of the
eigenvalues of rho rho~ with rho~ = (sy x sy) rho* (sy x sy)) is also
implemented and used for cross-validation.  The one-tangle of site i is
tau_1 = 4 det rho_i = 1 - <sigma^z_i>^2 and the residual tangle is the
monogamy deficit tau_1(i) - sum_j C_{ij}^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._version import __version__ as _code_version
from .chain import ChainSpec, resolve_couplings, validate_mirror_symmetry
from .correlators import (PairState, pair_correlators, pair_correlators_from_q,
                          pairs_from_site, q_matrix)
from .fermion import ModeBasis, ZERO_MODE_TOL, energy_gap, solve

CLAMP_TOL = 1e-8
SPIN_CONVENTION = "S = sigma/2; couplings in units of J; hopping J/4"


def x_state_concurrence(p_uu: float, p_ud: float, p_du: float, p_dd: float,
                        z: complex, w: complex) -> float:
    """Closed-form concurrence of an X state; populations may carry tiny
    negative round-off (clamped for the square roots)."""
    inner = abs(z) - np.sqrt(max(p_uu, 0.0) * max(p_dd, 0.0))
    outer = abs(w) - np.sqrt(max(p_ud, 0.0) * max(p_du, 0.0))
    return float(2.0 * max(0.0, inner, outer))


def concurrence(p: PairState) -> float:
    """Concurrence of a PairState (X-state fast path)."""
    p.validate()
    return x_state_concurrence(p.p_uu, p.p_ud, p.p_du, p.p_dd, p.z, p.w)


def _sqrtm_psd(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


_SY_SY = np.array([[0, 0, 0, -1],
                   [0, 0, 1, 0],
                   [0, 1, 0, 0],
                   [-1, 0, 0, 0]], dtype=float)


def concurrence_general(rho: np.ndarray) -> float:
    """Spin-flip concurrence of an arbitrary two-qubit density matrix.

    Evaluated through the singular values of sqrt(rho)* (sy x sy) sqrt(rho),
    which equal the square-rooted eigenvalues of rho rho~ but avoid the
    non-Hermitian eigenproblem.
    """
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError("expected a 4x4 density matrix")
    r = _sqrtm_psd(rho)
    lam = np.linalg.svd(r.conj() @ _SY_SY @ r, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def one_tangle(m: ModeBasis, i: int = 1) -> float:
    """tau_1(i) = 1 - <sigma^z_i>^2 (4 times the single-site RDM determinant)."""
    if not (1 <= i <= m.size):
        raise ValueError(f"site {i} out of range 1..{m.size}")
    sz = 2.0 * m.correlation[i - 1, i - 1] - 1.0
    return float(1.0 - sz * sz)


def _clamp_tangle(value: float, tol: float = CLAMP_TOL) -> float:
    if value < -tol:
        raise ValueError(f"residual tangle {value} below -{tol}: monogamy violated "
                         "beyond round-off, likely a bug upstream")
    return max(0.0, value) if value < 0.0 else value


def residual_tangle(m: ModeBasis, i: int = 1) -> float:
    """CKW monogamy deficit tau_1(i) - sum_{j != i} C_{ij}^2, clamped at zero
    when round-off makes it marginally negative."""
    total = sum(concurrence(p) ** 2 for p in pairs_from_site(m, i))
    return _clamp_tangle(one_tangle(m, i) - total)


@dataclass(frozen=True)
class EntanglementReport:
    """Entanglement observables of a single chain.

    pairwise_from_first[j - 2] is C_{1,j} for j = 2..n_t; residual/one tangle
    refer to site 1.  degenerate flags a zero-mode ground manifold, in which
    case the observables describe the maximally mixed ground state.
    """

    chain: dict
    total_sites: int
    end_to_end_concurrence: float
    pairwise_from_first: list[float]
    one_tangle: float
    residual_tangle: float
    sqrt_residual_tangle: float
    gap: float
    ground_state_energy: float
    degenerate: bool
    mirror_symmetric: bool
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": "modchain.report/1",
            "chain": self.chain,
            "total_sites": self.total_sites,
            "end_to_end_concurrence": self.end_to_end_concurrence,
            "pairwise_from_first": list(self.pairwise_from_first),
            "one_tangle": self.one_tangle,
            "residual_tangle": self.residual_tangle,
            "sqrt_residual_tangle": self.sqrt_residual_tangle,
            "gap": self.gap,
            "ground_state_energy": self.ground_state_energy,
            "degenerate": self.degenerate,
            "mirror_symmetric": self.mirror_symmetric,
            "metadata": self.metadata,
        }


def report_from_modes(m: ModeBasis, chain_echo: dict | None = None,
                      method: str = "free-fermion") -> EntanglementReport:
    """Assemble the full report from a solved ModeBasis."""
    nt = m.size
    q = q_matrix(m)
    pairwise = [concurrence(pair_correlators_from_q(q, 1, j))
                for j in range(2, nt + 1)]
    tau1 = float(1.0 - q[0, 0] ** 2)
    tau_res = _clamp_tangle(tau1 - sum(c * c for c in pairwise))
    symmetric, _ = validate_mirror_symmetry(m.couplings)
    return EntanglementReport(
        chain=chain_echo if chain_echo is not None
        else {"couplings": [float(x) for x in m.couplings], "total_sites": nt},
        total_sites=nt,
        end_to_end_concurrence=pairwise[-1],
        pairwise_from_first=pairwise,
        one_tangle=tau1,
        residual_tangle=tau_res,
        sqrt_residual_tangle=float(np.sqrt(tau_res)),
        gap=energy_gap(m),
        ground_state_energy=m.ground_state_energy(),
        degenerate=m.zero_mode_count > 0,
        mirror_symmetric=symmetric,
        metadata={
            "method": method,
            "spin_convention": SPIN_CONVENTION,
            "zero_mode_tolerance": ZERO_MODE_TOL,
            "clamp_tolerance": CLAMP_TOL,
            "code_version": _code_version,
        },
    )


def report(spec: ChainSpec) -> EntanglementReport:
    """Solve a chain spec and compute its EntanglementReport."""
    c = resolve_couplings(spec)
    return report_from_modes(solve(c), chain_echo=spec.describe())


def end_to_end_concurrence(spec: ChainSpec) -> float:
    """C_{1, n_t} only; cheaper than a full report (two determinants)."""
    m = solve(resolve_couplings(spec))
    return concurrence(pair_correlators(m, 1, m.size))
