"""Exact ground-state entanglement of modular XX spin-1/2 chains.

Open chains assembled from N repeated blocks ("moduli") of n sites are
solved two independent ways: a free-fermion route (arbitrary size, exact)
and a dense exact-diagonalization oracle (small sizes) used to validate
every observable of the first.  Reported observables: pairwise and
end-to-end concurrences, one-tangle and residual tangle of the first site,
ground energy and many-body gap.
"""

from ._version import __version__
from .chain import (ChainSpec, CouplingVector, build_couplings,
                    resolve_couplings, validate_mirror_symmetry)
from .correlators import PairState, pair_correlators, pairs_from_site, q_matrix
from .entanglement import (EntanglementReport, concurrence, concurrence_general,
                           end_to_end_concurrence, one_tangle, report,
                           report_from_modes, residual_tangle, x_state_concurrence)
from .fermion import HoppingMatrix, ModeBasis, energy_gap, hopping_matrix, solve
from .oracle import (DenseSpectrum, ed_pair_rdm, ed_pair_state, ed_report,
                     ed_solve, run_equivalence_grid)
from .sweep import (SweepTable, ThresholdResult, find_threshold, gap_scan,
                    sweep_lambda_i, sweep_moduli)

__all__ = [
    "__version__",
    "ChainSpec", "CouplingVector", "build_couplings", "resolve_couplings",
    "validate_mirror_symmetry",
    "HoppingMatrix", "ModeBasis", "hopping_matrix", "solve", "energy_gap",
    "PairState", "q_matrix", "pair_correlators", "pairs_from_site",
    "EntanglementReport", "concurrence", "concurrence_general",
    "x_state_concurrence", "one_tangle", "residual_tangle", "report",
    "report_from_modes", "end_to_end_concurrence",
    "DenseSpectrum", "ed_solve", "ed_report", "ed_pair_rdm", "ed_pair_state",
    "run_equivalence_grid",
    "SweepTable", "ThresholdResult", "sweep_lambda_i", "sweep_moduli",
    "find_threshold", "gap_scan",
]
