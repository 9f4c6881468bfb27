"""Spin-spin correlators and two-site reduced density matrices via Wick's theorem.

All contractions run through the matrix Q = 2G - 1, whose entries are the
basic fermionic contractions <B_l A_m> with A = c^dag + c, B = c^dag - c.
For the number-conserving XX chain the standard string-operator reduction
gives determinants of contiguous Q sub-blocks:

    <sigma^z_l>            = Q_{ll}
    <sigma^z_i sigma^z_j>  = Q_{ii} Q_{jj} - Q_{ij} Q_{ji}
    <sigma^x_i sigma^x_j>  = det Q[i..j-1, i+1..j]      (1-based, inclusive)
    <sigma^y_i sigma^y_j>  = det Q[i+1..j, i..j-1]

Determinants are evaluated by LU factorization with partial pivoting
(np.linalg.det), O((j-i)^3) per pair.  U(1) symmetry forces every pair state
into X form with vanishing outer coherence: w = (xx - yy)/4 = 0 because the
yy sub-block is the transpose of the xx sub-block for symmetric Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .fermion import ModeBasis

POPULATION_TOL = 1e-10


def q_matrix(m: ModeBasis) -> np.ndarray:
    """Contraction matrix Q = 2G - identity; Q_{ll} = <sigma^z_l>."""
    return 2.0 * m.correlation - np.eye(m.size)


def det_plu(a: np.ndarray) -> float:
    """Determinant via LU with partial pivoting (LAPACK getrf).

    The explicit pivot-sign times U-diagonal product makes the 1x1 case an
    exact passthrough of the entry, which keeps the adjacent-site correlator
    shortcut bit-identical to the general determinant path.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 0:
        return 1.0
    lu, piv, _info = lapack.dgetrf(a)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    sign = -1.0 if swaps % 2 else 1.0
    return float(sign * np.prod(np.diag(lu)))


@dataclass(frozen=True)
class PairState:
    """Two-site reduced density matrix in X form, plus its source correlators.

    Basis order is (uu, ud, du, dd) with u meaning sigma^z = +1.  z is the
    inner coherence <ud|rho|du>, w the outer coherence <uu|rho|dd> (zero for
    the XX chain).  Sites are 1-based.
    """

    sites: tuple[int, int]
    p_uu: float
    p_ud: float
    p_du: float
    p_dd: float
    z: float
    w: float
    sz_i: float
    sz_j: float
    szsz: float
    xx: float
    yy: float

    def populations(self) -> np.ndarray:
        return np.array([self.p_uu, self.p_ud, self.p_du, self.p_dd])

    def validate(self, tol: float = POPULATION_TOL) -> None:
        p = self.populations()
        if np.any(p < -tol):
            raise ValueError(f"negative population beyond tolerance: {p}")
        if abs(float(p.sum()) - 1.0) > tol:
            raise ValueError(f"populations sum to {p.sum()}, not 1")

    def density_matrix(self) -> np.ndarray:
        """Dense 4x4 X-form matrix (basis uu, ud, du, dd)."""
        rho = np.diag(self.populations())
        rho[1, 2] = rho[2, 1] = self.z
        rho[0, 3] = rho[3, 0] = self.w
        return rho


def _pair_from_correlators(i: int, j: int, sz_i: float, sz_j: float,
                           szsz: float, xx: float, yy: float) -> PairState:
    return PairState(
        sites=(i, j),
        p_uu=(1.0 + sz_i + sz_j + szsz) / 4.0,
        p_ud=(1.0 + sz_i - sz_j - szsz) / 4.0,
        p_du=(1.0 - sz_i + sz_j - szsz) / 4.0,
        p_dd=(1.0 - sz_i - sz_j + szsz) / 4.0,
        z=(xx + yy) / 4.0,
        w=(xx - yy) / 4.0,
        sz_i=sz_i, sz_j=sz_j, szsz=szsz, xx=xx, yy=yy,
    )


def pair_correlators_from_q(q: np.ndarray, i: int, j: int) -> PairState:
    """PairState of (1-based) sites i < j from a precomputed Q matrix."""
    nt = q.shape[0]
    if not (1 <= i < j <= nt):
        raise ValueError(f"need 1 <= i < j <= {nt}, got ({i}, {j})")
    a, b = i - 1, j - 1
    sz_i = float(q[a, a])
    sz_j = float(q[b, b])
    szsz = sz_i * sz_j - float(q[a, b] * q[b, a])
    if j == i + 1:
        xx = float(q[a, b])
        yy = float(q[b, a])
    else:
        xx = det_plu(q[a:b, a + 1:b + 1])
        yy = det_plu(q[a + 1:b + 1, a:b])
    return _pair_from_correlators(i, j, sz_i, sz_j, szsz, xx, yy)


def pair_correlators(m: ModeBasis, i: int, j: int) -> PairState:
    """Two-site reduced state of sites i < j (1-based) of a solved chain."""
    return pair_correlators_from_q(q_matrix(m), i, j)


def pairs_from_site(m: ModeBasis, i: int = 1) -> list[PairState]:
    """PairStates of site i with every other site, ordered by partner index."""
    q = q_matrix(m)
    out = []
    for j in range(1, m.size + 1):
        if j == i:
            continue
        lo, hi = (i, j) if i < j else (j, i)
        out.append(pair_correlators_from_q(q, lo, hi))
    return out
