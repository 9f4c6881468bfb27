"""Dense exact-diagonalization reference for small chains.

The spin Hamiltonian conserves total sigma^z, so it block-diagonalizes into
magnetization sectors indexed by the number of up spins.  In the number
basis (bit b of a state integer is the sigma^z = +1 occupation of site
b + 1) each bond contributes the exchange element J/4 between configurations
differing by one adjacent swap, with no diagonal part.  Every sector is
diagonalized densely, so the full many-body spectrum is available and the
gap definition (E_1 - E_0 over all sectors) matches the free-fermion one.

Degenerate ground manifolds (within 1e-9) are returned in full; reduced
density matrices average over the manifold with equal weights, which is the
same maximally mixed state the fermionic path builds from half-occupied
zero modes.  Intended for n_t <= 14 (largest sector 3432 states).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .chain import ChainSpec, CouplingVector, resolve_couplings, validate_mirror_symmetry
from .correlators import PairState, _pair_from_correlators, pair_correlators_from_q, q_matrix
from .entanglement import (EntanglementReport, SPIN_CONVENTION, _clamp_tangle,
                           _code_version, concurrence, residual_tangle)
from .fermion import energy_gap, solve

ED_MAX_SITES = 14
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class DenseSpectrum:
    """Ground-level data from sector-resolved dense diagonalization."""

    total_sites: int
    ground_energy: float
    first_excited: float
    ground_states: list = field(repr=False)   # full 2^n_t vectors
    ground_sectors: list                      # up-spin count per ground state
    degeneracy: int
    sector_dims: list

    @property
    def gap(self) -> float:
        return self.first_excited - self.ground_energy


def _sector_basis(nt: int, n_up: int) -> np.ndarray:
    states = [sum(1 << p for p in comb) for comb in combinations(range(nt), n_up)]
    return np.array(sorted(states), dtype=np.int64)


def _sector_hamiltonian(c: np.ndarray, basis: np.ndarray) -> np.ndarray:
    nt = c.size + 1
    index = {int(s): a for a, s in enumerate(basis)}
    h = np.zeros((basis.size, basis.size))
    for a, s in enumerate(basis):
        s = int(s)
        for b in range(nt - 1):
            m1, m2 = 1 << b, 1 << (b + 1)
            if ((s & m1) != 0) != ((s & m2) != 0):
                h[index[s ^ m1 ^ m2], a] += c[b] / 4.0
    return h


def ed_solve(c: CouplingVector | np.ndarray) -> DenseSpectrum:
    """Full-spectrum dense ED over all magnetization sectors."""
    v = c.values if isinstance(c, CouplingVector) else np.asarray(c, dtype=float)
    nt = v.size + 1
    if nt > ED_MAX_SITES:
        raise ValueError(f"ED capped at {ED_MAX_SITES} sites, got {nt}")
    if not np.all(np.isfinite(v)):
        raise ValueError("couplings must be finite")

    levels = []            # (energy, n_up, column)
    eigvecs = {}
    sector_dims = []
    for n_up in range(nt + 1):
        basis = _sector_basis(nt, n_up)
        sector_dims.append(int(basis.size))
        h = _sector_hamiltonian(v, basis)
        w, vv = np.linalg.eigh(h)
        eigvecs[n_up] = (basis, vv)
        levels.extend((float(e), n_up, k) for k, e in enumerate(w))
    levels.sort(key=lambda x: x[0])

    e0 = levels[0][0]
    e1 = levels[1][0]
    ground_states, ground_sectors = [], []
    for energy, n_up, k in levels:
        if energy - e0 > DEGENERACY_TOL:
            break
        basis, vv = eigvecs[n_up]
        full = np.zeros(1 << nt)
        full[basis] = vv[:, k]
        ground_states.append(full)
        ground_sectors.append(n_up)
    return DenseSpectrum(total_sites=nt, ground_energy=e0, first_excited=e1,
                         ground_states=ground_states, ground_sectors=ground_sectors,
                         degeneracy=len(ground_states), sector_dims=sector_dims)


def _strip_bit(s: np.ndarray, pos: int) -> np.ndarray:
    return ((s >> (pos + 1)) << pos) | (s & ((1 << pos) - 1))


def ed_pair_rdm(spectrum: DenseSpectrum, i: int, j: int) -> np.ndarray:
    """4x4 RDM of sites i < j (1-based), basis (uu, ud, du, dd), averaged
    with equal weights over the ground manifold."""
    nt = spectrum.total_sites
    if not (1 <= i < j <= nt):
        raise ValueError(f"need 1 <= i < j <= {nt}, got ({i}, {j})")
    pi, pj = i - 1, j - 1
    s = np.arange(1 << nt, dtype=np.int64)
    bi = (s >> pi) & 1
    bj = (s >> pj) & 1
    rest = _strip_bit(_strip_bit(s, max(pi, pj)), min(pi, pj))
    row = 2 * (1 - bi) + (1 - bj)
    rho = np.zeros((4, 4))
    for psi in spectrum.ground_states:
        m = np.zeros((4, 1 << (nt - 2)))
        m[row, rest] = psi
        rho += m @ m.T
    return rho / spectrum.degeneracy


def ed_pair_state(spectrum: DenseSpectrum, i: int, j: int) -> PairState:
    """PairState extracted from the ED reduced density matrix."""
    rho = ed_pair_rdm(spectrum, i, j)
    p = np.diag(rho)
    sz_i = float(p[0] + p[1] - p[2] - p[3])
    sz_j = float(p[0] - p[1] + p[2] - p[3])
    szsz = float(p[0] - p[1] - p[2] + p[3])
    z = float(rho[1, 2])
    w = float(rho[0, 3])
    # xx/yy reconstructed from the coherences: xx = 2(z + w), yy = 2(z - w)
    return _pair_from_correlators(i, j, sz_i, sz_j, szsz,
                                  xx=2.0 * (z + w), yy=2.0 * (z - w))


def ed_one_tangle(spectrum: DenseSpectrum, i: int = 1) -> float:
    other = 2 if i == 1 else 1
    lo, hi = (i, other) if i < other else (other, i)
    rho = ed_pair_rdm(spectrum, lo, hi)
    p = np.diag(rho)
    sz = float(p[0] + p[1] - p[2] - p[3]) if i == lo else float(p[0] - p[1] + p[2] - p[3])
    return 1.0 - sz * sz


def ed_report(c: CouplingVector | np.ndarray | ChainSpec) -> EntanglementReport:
    """EntanglementReport computed entirely from the ED ground manifold."""
    if isinstance(c, ChainSpec):
        chain_echo = c.describe()
        cv = resolve_couplings(c)
    else:
        cv = c if isinstance(c, CouplingVector) else CouplingVector(np.asarray(c, float))
        chain_echo = {"couplings": [float(x) for x in cv.values],
                      "total_sites": cv.total_sites}
    spectrum = ed_solve(cv)
    nt = spectrum.total_sites
    pairwise = [concurrence(ed_pair_state(spectrum, 1, j)) for j in range(2, nt + 1)]
    tau1 = ed_one_tangle(spectrum, 1)
    tau_res = _clamp_tangle(tau1 - sum(cc * cc for cc in pairwise))
    symmetric, _ = validate_mirror_symmetry(cv)
    return EntanglementReport(
        chain=chain_echo,
        total_sites=nt,
        end_to_end_concurrence=pairwise[-1],
        pairwise_from_first=pairwise,
        one_tangle=tau1,
        residual_tangle=tau_res,
        sqrt_residual_tangle=float(np.sqrt(tau_res)),
        gap=spectrum.gap,
        ground_state_energy=spectrum.ground_energy,
        degenerate=spectrum.degeneracy > 1,
        mirror_symmetric=symmetric,
        metadata={
            "method": "dense-ed",
            "spin_convention": SPIN_CONVENTION,
            "degeneracy_tolerance": DEGENERACY_TOL,
            "code_version": _code_version,
        },
    )


# ---------------------------------------------------------------------------
# free-fermion vs ED equivalence grid
# ---------------------------------------------------------------------------

DEFAULT_GRID = {
    "sites_per_modulus": (2, 3, 4, 6),
    "moduli_count": (1, 2, 3),
    "end_bond": (0.1, 0.5, 1.0),
    "inter_modulus": (0.05, 0.5, 1.0, 4.0),
}

EQUIV_TOL_ENERGY = 1e-9
EQUIV_TOL_RDM = 1e-8


def grid_specs(max_sites: int = 12, grid: dict | None = None):
    """Deduplicated ChainSpecs of the verification grid (n_t <= max_sites)."""
    g = grid or DEFAULT_GRID
    seen = set()
    specs = []
    for n in g["sites_per_modulus"]:
        for big_n in g["moduli_count"]:
            if n * big_n > max_sites:
                continue
            for lam in g["end_bond"]:
                for lam_i in g["inter_modulus"]:
                    key = (n, big_n, lam, lam_i if big_n > 1 else None)
                    if key in seen:
                        continue
                    seen.add(key)
                    specs.append(ChainSpec(moduli_count=big_n, sites_per_modulus=n,
                                           end_bond=lam, inter_modulus=lam_i))
    return specs


def check_equivalence(spec: ChainSpec) -> dict:
    """Compare every observable of the two solver paths on one chain."""
    cv = resolve_couplings(spec)
    m = solve(cv)
    spectrum = ed_solve(cv)
    q = q_matrix(m)
    nt = m.size

    d_e0 = abs(m.ground_state_energy() - spectrum.ground_energy)
    d_gap = abs(energy_gap(m) - spectrum.gap)

    d_rdm = 0.0
    d_conc = 0.0
    for i in range(1, nt + 1):
        for j in range(i + 1, nt + 1):
            ps_ff = pair_correlators_from_q(q, i, j)
            ps_ed = ed_pair_state(spectrum, i, j)
            d_rdm = max(d_rdm, float(np.max(np.abs(
                ps_ff.density_matrix() - ps_ed.density_matrix()))))
            d_conc = max(d_conc, abs(concurrence(ps_ff) - concurrence(ps_ed)))

    tau_ff = residual_tangle(m, 1)
    pairwise_ed = [concurrence(ed_pair_state(spectrum, 1, j)) for j in range(2, nt + 1)]
    tau_ed = _clamp_tangle(ed_one_tangle(spectrum, 1) - sum(c * c for c in pairwise_ed))
    d_tau = abs(tau_ff - tau_ed)

    ok = (d_e0 <= EQUIV_TOL_ENERGY and d_gap <= EQUIV_TOL_ENERGY
          and d_rdm <= EQUIV_TOL_RDM and d_conc <= EQUIV_TOL_RDM
          and d_tau <= EQUIV_TOL_RDM)
    return {
        "moduli_count": spec.moduli_count,
        "sites_per_modulus": spec.sites_per_modulus,
        "end_bond": spec.end_bond,
        "inter_modulus": spec.inter_modulus,
        "total_sites": nt,
        "degenerate": spectrum.degeneracy > 1,
        "delta_energy": d_e0,
        "delta_gap": d_gap,
        "delta_rdm": d_rdm,
        "delta_concurrence": d_conc,
        "delta_residual_tangle": d_tau,
        "pass": ok,
    }


def run_equivalence_grid(max_sites: int = 12, grid: dict | None = None) -> list[dict]:
    return [check_equivalence(spec) for spec in grid_specs(max_sites, grid)]
