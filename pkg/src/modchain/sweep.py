"""Parameter scans, threshold detection and asymptote estimation.

Grid points are independent chain solves; tables are assembled in grid
order, so results are deterministic regardless of the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ._version import __version__ as _code_version
from .chain import ChainSpec, resolve_couplings
from .entanglement import EntanglementReport, end_to_end_concurrence, report
from .fermion import energy_gap, solve
from .output import dumps_canonical, rows_to_csv

THRESHOLD_CONCURRENCE_TOL = 1e-8
THRESHOLD_BRACKET_WIDTH = 1e-6
THRESHOLD_SCAN_STEP = 0.05
THRESHOLD_SCAN_MAX = 8.0
ASYMPTOTE_TOL = 1e-4

SWEEP_COLUMNS = ["axis_value", "N", "n", "lam", "lam_i", "C_end",
                 "C_single_modulus", "C_nn_end", "sqrt_tau_res", "gap", "degenerate"]


@dataclass(frozen=True)
class SweepTable:
    """Ordered per-grid-point summaries with provenance."""

    axis: str
    values: list[float]
    rows: list[dict]
    reports: list[EntanglementReport] = field(repr=False)
    provenance: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        return rows_to_csv(SWEEP_COLUMNS, self.rows, self.provenance)

    def to_json(self) -> str:
        return dumps_canonical({
            "schema": "modchain.sweep/1",
            "axis": self.axis,
            "values": list(self.values),
            "provenance": self.provenance,
            "rows": self.rows,
            "reports": [r.to_dict() for r in self.reports],
        })

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows], dtype=float)


@dataclass(frozen=True)
class ThresholdResult:
    """Onset coupling of end-to-end entanglement.

    The bracket (lo, hi) satisfies C(lo) <= tol < C(hi); threshold is the
    bracket midpoint.  found is False when no onset exists on (0, scan_max].
    """

    found: bool
    threshold: float | None
    bracket: tuple[float, float] | None
    ratio: float | None
    concurrence_tol: float
    bracket_width: float
    scan_step: float
    scan_max: float
    converged: bool
    evaluations: int
    odd_modulus: bool

    def to_dict(self) -> dict:
        return {
            "schema": "modchain.threshold/1",
            "found": self.found,
            "threshold": self.threshold,
            "bracket": list(self.bracket) if self.bracket else None,
            "ratio": self.ratio,
            "concurrence_tol": self.concurrence_tol,
            "bracket_width": self.bracket_width,
            "scan_step": self.scan_step,
            "scan_max": self.scan_max,
            "converged": self.converged,
            "evaluations": self.evaluations,
            "odd_modulus": self.odd_modulus,
        }


def _provenance(base: ChainSpec, axis: str, extra: dict | None = None) -> dict:
    prov = {"tool": "modchain", "code_version": _code_version, "axis": axis,
            "chain": base.describe()}
    if extra:
        prov.update(extra)
    return prov


def _summary_row(axis_value: float, spec: ChainSpec, rep: EntanglementReport,
                 c_single: float) -> dict:
    return {
        "axis_value": float(axis_value),
        "N": spec.moduli_count,
        "n": spec.sites_per_modulus,
        "lam": spec.end_bond,
        "lam_i": spec.inter_modulus,
        "C_end": rep.end_to_end_concurrence,
        "C_single_modulus": c_single,
        "C_nn_end": rep.pairwise_from_first[0],
        "sqrt_tau_res": rep.sqrt_residual_tangle,
        "tau_res": rep.residual_tangle,
        "gap": rep.gap,
        "degenerate": rep.degenerate,
    }


def _map_ordered(fn, items, jobs: int = 1):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def single_modulus_concurrence(spec: ChainSpec) -> float:
    """End-to-end concurrence of one isolated modulus (N = 1 chain)."""
    one = ChainSpec(moduli_count=1, sites_per_modulus=spec.sites_per_modulus,
                    end_bond=spec.end_bond)
    return end_to_end_concurrence(one)


def sweep_lambda_i(base: ChainSpec, grid, jobs: int = 1) -> SweepTable:
    """Reports along an ascending inter-modulus coupling grid.

    Each row also carries the lam_i-independent single-modulus end-to-end
    concurrence (N = 1 solve) and the end-pair C_{1,2} of the full chain.
    """
    if not base.is_pattern:
        raise ValueError("sweep_lambda_i needs a pattern-form ChainSpec")
    grid = [float(x) for x in grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be nonempty and strictly ascending")
    if grid[0] < 0:
        raise ValueError("inter-modulus couplings must be >= 0")
    c_single = single_modulus_concurrence(base)

    def one(lam_i: float):
        spec = replace(base, inter_modulus=lam_i)
        return spec, report(spec)

    results = _map_ordered(one, grid, jobs)
    rows = [_summary_row(g, spec, rep, c_single)
            for g, (spec, rep) in zip(grid, results)]
    return SweepTable(axis="inter_modulus", values=grid, rows=rows,
                      reports=[rep for _, rep in results],
                      provenance=_provenance(base, "inter_modulus",
                                             {"grid": [grid[0], grid[-1], len(grid)]}))


def sweep_moduli(base: ChainSpec, max_moduli: int, jobs: int = 1) -> SweepTable:
    """Reports for N = 1..max_moduli plus a saturation estimate.

    provenance["asymptote"] holds the last value, the last increment and a
    convergence flag (|C(N_max) - C(N_max - 1)| < 1e-4).
    """
    if not base.is_pattern:
        raise ValueError("sweep_moduli needs a pattern-form ChainSpec")
    if max_moduli < 2:
        raise ValueError("max_moduli must be >= 2")
    values = list(range(1, max_moduli + 1))

    def one(big_n: int):
        spec = replace(base, moduli_count=big_n)
        return spec, report(spec)

    results = _map_ordered(one, values, jobs)
    c_single = results[0][1].end_to_end_concurrence
    rows = [_summary_row(big_n, spec, rep, c_single)
            for big_n, (spec, rep) in zip(values, results)]
    c_last = rows[-1]["C_end"]
    delta = abs(c_last - rows[-2]["C_end"])
    prov = _provenance(base, "moduli_count", {
        "max_moduli": max_moduli,
        "asymptote": {"value": c_last, "last_increment": delta,
                      "converged": bool(delta < ASYMPTOTE_TOL),
                      "tolerance": ASYMPTOTE_TOL},
    })
    return SweepTable(axis="moduli_count", values=[float(v) for v in values],
                      rows=rows, reports=[rep for _, rep in results], provenance=prov)


def gap_scan(base: ChainSpec, max_moduli: int, jobs: int = 1) -> SweepTable:
    """Gap-only scan over N (no pair correlators; cheap at large sizes)."""
    if not base.is_pattern:
        raise ValueError("gap_scan needs a pattern-form ChainSpec")
    values = list(range(1, max_moduli + 1))

    def one(big_n: int):
        spec = replace(base, moduli_count=big_n)
        m = solve(resolve_couplings(spec))
        return {
            "axis_value": float(big_n),
            "N": big_n,
            "n": spec.sites_per_modulus,
            "lam": spec.end_bond,
            "lam_i": spec.inter_modulus,
            "n_t": m.size,
            "gap": energy_gap(m),
            "degenerate": m.zero_mode_count > 0,
        }

    rows = _map_ordered(one, values, jobs)
    return SweepTable(axis="moduli_count", values=[float(v) for v in values],
                      rows=rows, reports=[],
                      provenance=_provenance(base, "moduli_count",
                                             {"max_moduli": max_moduli, "gap_only": True}))


GAP_SCAN_COLUMNS = ["axis_value", "N", "n", "lam", "lam_i", "n_t", "gap", "degenerate"]


def find_threshold(base: ChainSpec,
                   concurrence_tol: float = THRESHOLD_CONCURRENCE_TOL,
                   scan_step: float = THRESHOLD_SCAN_STEP,
                   scan_max: float = THRESHOLD_SCAN_MAX,
                   bracket_width: float = THRESHOLD_BRACKET_WIDTH) -> ThresholdResult:
    """Smallest lam_i with nonzero end-to-end concurrence.

    Ascending coarse scan over (0, scan_max] locates the first point with
    C > tol; bisection then shrinks the bracket below bracket_width.  The
    X-state form C = 2 max(0, |z| - sqrt(p_uu p_dd)) makes "nonzero" a
    genuine root crossing rather than a numerical judgement call.  Odd
    moduli are scanned too (flagged; no onset is expected).
    """
    if not base.is_pattern:
        raise ValueError("find_threshold needs a pattern-form ChainSpec")
    if base.moduli_count is None or base.moduli_count < 2:
        raise ValueError("threshold detection needs at least two moduli")
    evaluations = 0

    def c_at(lam_i: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return end_to_end_concurrence(replace(base, inter_modulus=lam_i))

    odd = base.sites_per_modulus % 2 == 1
    lo = 0.0
    hi = None
    k = 1
    while True:
        x = k * scan_step
        if x > scan_max + 1e-12:
            break
        if c_at(x) > concurrence_tol:
            hi = x
            break
        lo = x
        k += 1
    if hi is None:
        return ThresholdResult(found=False, threshold=None, bracket=None, ratio=None,
                               concurrence_tol=concurrence_tol, bracket_width=bracket_width,
                               scan_step=scan_step, scan_max=scan_max, converged=False,
                               evaluations=evaluations, odd_modulus=odd)
    while hi - lo > bracket_width:
        mid = 0.5 * (lo + hi)
        if c_at(mid) > concurrence_tol:
            hi = mid
        else:
            lo = mid
    th = 0.5 * (lo + hi)
    return ThresholdResult(found=True, threshold=th, bracket=(lo, hi),
                           ratio=th / base.end_bond,
                           concurrence_tol=concurrence_tol, bracket_width=bracket_width,
                           scan_step=scan_step, scan_max=scan_max, converged=True,
                           evaluations=evaluations, odd_modulus=odd)
