"""Free-fermion solution of the open XX chain.

Conventions
-----------
The chain Hamiltonian is

    H = (1/2) sum_i J_{i,i+1} (S^x_i S^x_{i+1} + S^y_i S^y_{i+1}),

with spin-1/2 operators S = sigma/2 and couplings in units of the bulk
exchange J.  A Jordan-Wigner transformation (sigma^z_l = 2 n_l - 1) maps it
to free spinless fermions,

    H = sum_i t_i (c^dag_i c_{i+1} + h.c.),    t_i = J_{i,i+1} / 4,

i.e. a symmetric tridiagonal single-particle matrix T with zero diagonal.
The spectrum is bipartite (eigenvalues come in +/- pairs), the many-body
ground state fills all negative modes, and

    G_{ij} = <c^dag_i c_j> = sum_{eps_k < 0} phi_k(i) phi_k(j)
             + (1/2) sum_{eps_k = 0} phi_k(i) phi_k(j),

where exact zero modes are taken half-occupied (the maximally mixed Gaussian
state over the degenerate ground manifold, so Wick's theorem stays valid).

Numerical notes
---------------
Mirror-symmetric chains are diagonalized in reflection-parity sectors: the
two members of the near-zero edge-mode pair land in different sectors, so
their eigenvectors stay accurate even when the pair splitting is far below
machine resolution of the plain tridiagonal solver.  The minimum |eps_k| is
recomputed to high *relative* accuracy through inverse iteration on the
bipartite (bidiagonal) block of T; edge-pair splittings down to ~1e-300 are
then meaningful, which a dense eigensolver (absolute accuracy ~1e-16 ||T||)
cannot deliver.  The sign of an unresolvably small pair is assigned from the
exact sign of det(T_sector), evaluated with an overflow-safe recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_triangular

from .chain import CouplingVector

ZERO_MODE_TOL = 1e-12
# below this splitting the plain eigensolver cannot order the edge pair
_PAIR_RESCUE_TOL = 1e-8


@dataclass(frozen=True)
class HoppingMatrix:
    """Single-particle hopping matrix: tridiagonal, zero diagonal, t_i = J_i/4."""

    size: int
    offdiag: np.ndarray = field(repr=False)

    def dense(self) -> np.ndarray:
        m = np.zeros((self.size, self.size))
        idx = np.arange(self.size - 1)
        m[idx, idx + 1] = self.offdiag
        m[idx + 1, idx] = self.offdiag
        return m


@dataclass(frozen=True)
class ModeBasis:
    """Eigen-decomposition of the hopping matrix plus ground-state correlations.

    energies are ascending; modes[:, k] is the eigenvector of energies[k];
    correlation is the G matrix defined in the module docstring.  min_abs_energy
    carries the relative-accuracy value of min_k |eps_k| (it can be far below
    the resolution of the entries of ``energies``).
    """

    energies: np.ndarray = field(repr=False)
    modes: np.ndarray = field(repr=False)
    zero_mode_count: int
    correlation: np.ndarray = field(repr=False)
    min_abs_energy: float
    couplings: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.energies.size

    def ground_state_energy(self) -> float:
        """E_0 = sum of negative mode energies (zero modes contribute nothing)."""
        w = self.energies
        return float(np.sum(w[w < -ZERO_MODE_TOL]))


def hopping_matrix(c: CouplingVector | np.ndarray) -> HoppingMatrix:
    v = c.values if isinstance(c, CouplingVector) else np.asarray(c, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("couplings must be finite")
    return HoppingMatrix(size=v.size + 1, offdiag=v / 4.0)


def _segment_lengths(t: np.ndarray) -> list[int]:
    """Site counts of the sub-chains obtained by cutting at exactly-zero bonds."""
    segs, run = [], 1
    for x in t:
        if x == 0.0:
            segs.append(run)
            run = 1
        else:
            run += 1
    segs.append(run)
    return segs


def _bidiagonal_block(t: np.ndarray) -> np.ndarray:
    """Lower-bidiagonal odd/even block B of T (T = [[0, B], [B^T, 0]] after
    odd/even permutation); eigenvalues of T are +/- singular values of B."""
    nt = t.size + 1
    q = nt // 2
    b = np.zeros((nt - q, q))
    for j in range(q):
        b[j, j] = t[2 * j]
        if 2 * j + 1 < t.size:
            b[j + 1, j] = t[2 * j + 1]
    return b


def _sigma_min(t: np.ndarray) -> float:
    """Smallest singular value of the bipartite block, to high relative accuracy.

    Inverse power iteration on (B^T B)^{-1} using bidiagonal triangular
    solves; each solve is componentwise stable, so splittings far below
    eps*||T|| are resolved.  Requires even n_t and no exactly-zero bond.
    """
    b = _bidiagonal_block(t)
    m = b.shape[0]
    if m == 1:
        return abs(b[0, 0])
    rng = np.random.default_rng(0x5EED)
    x = rng.standard_normal(m)
    x /= np.linalg.norm(x)
    est = np.inf
    for _ in range(500):
        y = solve_triangular(b, x, lower=True, trans="T", check_finite=False)
        z = solve_triangular(b, y, lower=True, check_finite=False)
        norm = float(np.linalg.norm(z))
        x = z / norm
        if abs(norm / est - 1.0) < 1e-13:
            est = norm
            break
        est = norm
    return 1.0 / np.sqrt(est)


def _tridiag_det_sign(diag: np.ndarray, off: np.ndarray) -> float:
    """Sign of det of a symmetric tridiagonal matrix, overflow/underflow safe.

    Runs the standard leading-minor recurrence D_k = d_k D_{k-1} - e_{k-1}^2
    D_{k-2} in (sign, log-magnitude) form.  With an (almost) zero diagonal the
    minors alternate between zero and pure coupling products, so no
    cancellation occurs and the sign is exact.
    """
    s2, l2 = 1.0, 0.0
    s1 = float(np.sign(diag[0]))
    l1 = np.log(abs(diag[0])) if diag[0] != 0 else -np.inf
    for k in range(1, diag.size):
        terms = []
        if s1 != 0.0 and diag[k] != 0.0:
            terms.append((float(np.sign(diag[k])) * s1, np.log(abs(diag[k])) + l1))
        if s2 != 0.0 and off[k - 1] != 0.0:
            terms.append((-s2, 2.0 * np.log(abs(off[k - 1])) + l2))
        if not terms:
            s, lg = 0.0, -np.inf
        elif len(terms) == 1:
            s, lg = terms[0]
        else:
            (sa, la), (sb, lb) = terms
            if la < lb:
                (sa, la), (sb, lb) = (sb, lb), (sa, la)
            val = sa + sb * np.exp(lb - la)
            s, lg = (0.0, -np.inf) if val == 0.0 else (float(np.sign(val)), la + np.log(abs(val)))
        s2, l2, s1, l1 = s1, l1, s, lg
    return s1


def _eigh_folded(t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonalize a mirror-symmetric zero-diagonal tridiagonal T in parity sectors.

    Returns (energies ascending, modes, parity per mode: +1 even / -1 odd).
    Folding halves the problem and, crucially, separates the two members of
    the edge-mode pair into different sectors where each is well isolated.
    """
    nt = t.size + 1
    m = nt // 2
    if nt % 2 == 0:
        diag_e = np.zeros(m)
        diag_e[-1] = +t[m - 1]
        diag_o = np.zeros(m)
        diag_o[-1] = -t[m - 1]
        off = t[: m - 1]
        if m == 1:
            we, ve = np.array([diag_e[0]]), np.eye(1)
            wo, vo = np.array([diag_o[0]]), np.eye(1)
        else:
            we, ve = eigh_tridiagonal(diag_e, off)
            wo, vo = eigh_tridiagonal(diag_o, off)
        v_even = np.vstack([ve, ve[::-1]]) / np.sqrt(2.0)
        v_odd = np.vstack([vo, -vo[::-1]]) / np.sqrt(2.0)
    else:
        # center site joins the even sector with a sqrt(2)-enhanced bond
        off_e = np.concatenate([t[: m - 1], [np.sqrt(2.0) * t[m - 1]]])
        we, ve = eigh_tridiagonal(np.zeros(m + 1), off_e)
        if m == 1:
            wo, vo = np.zeros(1), np.eye(1)
        else:
            wo, vo = eigh_tridiagonal(np.zeros(m), t[: m - 1])
        v_even = np.vstack([ve[:m], ve[m: m + 1] * np.sqrt(2.0), ve[:m][::-1]]) / np.sqrt(2.0)
        v_odd = np.vstack([vo, np.zeros((1, vo.shape[1])), -vo[::-1]]) / np.sqrt(2.0)
    w = np.concatenate([we, wo])
    v = np.hstack([v_even, v_odd])
    parity = np.concatenate([np.full(we.size, 1, dtype=int), np.full(wo.size, -1, dtype=int)])
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], parity[order]


def _sector_tiny_sign(t: np.ndarray, sector_energies: np.ndarray) -> float:
    """Sign of the unresolved near-zero eigenvalue of the even parity sector.

    sign(tiny) = sign(det) / prod(sign of the resolved eigenvalues).
    """
    m = (t.size + 1) // 2
    diag_e = np.zeros(m)
    diag_e[-1] = +t[m - 1]
    det_sign = _tridiag_det_sign(diag_e, t[: m - 1])
    resolved = sector_energies[np.abs(sector_energies) > _PAIR_RESCUE_TOL]
    prod_sign = float(np.prod(np.sign(resolved))) if resolved.size else 1.0
    return det_sign / prod_sign


def solve(c: CouplingVector | np.ndarray) -> ModeBasis:
    """Diagonalize the chain and build the ground-state correlation matrix."""
    hop = hopping_matrix(c)
    t = hop.offdiag
    nt = hop.size
    values = t * 4.0

    mirror_exact = bool(np.array_equal(values, values[::-1]))
    if mirror_exact:
        w, v, parity = _eigh_folded(t)
    else:
        w, v = eigh_tridiagonal(np.zeros(nt), t) if nt > 1 else (np.zeros(1), np.eye(1))
        parity = None

    # exact zero modes: one per odd-length disconnected segment
    n_zero = sum(1 for s in _segment_lengths(t) if s % 2 == 1)

    occupied = w < 0.0
    half = np.zeros(nt, dtype=bool)
    if n_zero > 0:
        order = np.argsort(np.abs(w), kind="stable")
        zero_idx = order[:n_zero]
        w = w.copy()
        w[zero_idx] = 0.0
        occupied[zero_idx] = False
        half[zero_idx] = True
        min_abs = 0.0
    else:
        # even n_t, all bonds nonzero: refine min |eps| to relative accuracy
        sigma = _sigma_min(t)
        min_abs = float(sigma)
        if sigma < _PAIR_RESCUE_TOL and mirror_exact:
            order = np.argsort(np.abs(w), kind="stable")
            i1, i2 = order[0], order[1]
            even_energies = w[parity == 1]
            s_even = _sector_tiny_sign(t, even_energies)
            w = w.copy()
            for i in (i1, i2):
                sgn = s_even if parity[i] == 1 else -s_even
                w[i] = sgn * sigma
                occupied[i] = sgn < 0
            reorder = np.argsort(w, kind="stable")
            w, v, occupied, half = w[reorder], v[:, reorder], occupied[reorder], half[reorder]

    g = v[:, occupied] @ v[:, occupied].T
    if half.any():
        vz = v[:, half]
        g = g + 0.5 * (vz @ vz.T)
    g = 0.5 * (g + g.T)

    return ModeBasis(energies=w, modes=v, zero_mode_count=n_zero,
                     correlation=g, min_abs_energy=min_abs,
                     couplings=np.array(values, dtype=float))


def energy_gap(m: ModeBasis) -> float:
    """Lowest many-body excitation energy E_1 - E_0 = min_k |eps_k|, in units of J.

    Zero when zero modes are present (degenerate ground manifold).
    """
    if m.zero_mode_count > 0:
        return 0.0
    return m.min_abs_energy
