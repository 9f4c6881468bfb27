import numpy as np
import pytest

from modchain import (ChainSpec, build_couplings, concurrence, ed_pair_rdm,
                      ed_pair_state, ed_report, ed_solve, energy_gap,
                      pair_correlators, report, solve)
from modchain.oracle import check_equivalence

SQ2 = np.sqrt(2.0)


def pattern(N, n, lam, lam_i=None):
    return ChainSpec(moduli_count=N, sites_per_modulus=n, end_bond=lam,
                     inter_modulus=lam_i)


def test_sector_dimensions_sum_to_hilbert_space():
    spec = ed_solve(np.array([1.0, 0.5, 1.0]))
    assert sum(spec.sector_dims) == 2 ** 4
    assert spec.sector_dims == [1, 4, 6, 4, 1]


def test_two_site_convention_consistency():
    # singlet energy: both solver paths must give E0 = -1/4 in units of J
    c = np.array([1.0])
    spec = ed_solve(c)
    m = solve(c)
    assert spec.ground_energy == pytest.approx(-0.25, abs=1e-12)
    assert spec.ground_energy == pytest.approx(m.ground_state_energy(), abs=1e-12)
    assert spec.gap == pytest.approx(0.25, abs=1e-12)
    assert spec.degeneracy == 1
    rho = ed_pair_rdm(spec, 1, 2)
    assert rho[1, 2] == pytest.approx(-0.5, abs=1e-12)  # singlet coherence


def test_three_site_degenerate_ground_level():
    spec = ed_solve(np.array([1.0, 1.0]))
    assert spec.degeneracy == 2
    assert sorted(spec.ground_sectors) == [1, 2]  # magnetization +/- 1 sectors
    assert spec.ground_energy == pytest.approx(-SQ2 / 4, abs=1e-12)
    assert spec.gap == pytest.approx(0.0, abs=1e-12)
    # equal mixture over the degenerate pair: separable end pair
    ps = ed_pair_state(spec, 1, 3)
    assert concurrence(ps) == 0.0
    assert abs(ps.z) == pytest.approx(0.25, abs=1e-12)


def test_gap_matches_free_fermion_lde_chain():
    spec = pattern(2, 2, 0.1, 1.0)
    c = build_couplings(spec)
    m = solve(c)
    ed = ed_solve(c)
    assert energy_gap(m) == pytest.approx(ed.gap, abs=1e-10)


def test_all_pairwise_concurrences_match():
    spec = pattern(2, 4, 0.1, 0.5)
    ff = report(spec)
    ed = ed_report(spec)
    for a, b in zip(ff.pairwise_from_first, ed.pairwise_from_first):
        assert a == pytest.approx(b, abs=1e-8)
    assert ff.residual_tangle == pytest.approx(ed.residual_tangle, abs=1e-8)
    assert ff.ground_state_energy == pytest.approx(ed.ground_state_energy, abs=1e-9)


def test_degenerate_mixture_matches_zero_mode_half_filling():
    # odd chain: ED equal mixture over the two ground states == Gaussian
    # half-filled zero mode, element by element
    c = np.array([0.7, 1.3, 1.3, 0.7])
    m = solve(c)
    ed = ed_solve(c)
    assert m.zero_mode_count == 1
    assert ed.degeneracy == 2
    for i in range(1, 6):
        for j in range(i + 1, 6):
            d = np.max(np.abs(pair_correlators(m, i, j).density_matrix()
                              - ed_pair_state(ed, i, j).density_matrix()))
            assert d < 1e-8


def test_size_cap():
    with pytest.raises(ValueError):
        ed_solve(np.ones(15))


def test_ed_report_flags_degeneracy():
    rep = ed_report(np.array([1.0, 1.0]))
    assert rep.degenerate
    assert rep.gap == pytest.approx(0.0, abs=1e-12)
    assert rep.metadata["method"] == "dense-ed"


def test_check_equivalence_row_fields():
    row = check_equivalence(pattern(2, 2, 0.5, 1.0))
    assert row["pass"]
    assert row["total_sites"] == 4
    for key in ("delta_energy", "delta_gap", "delta_rdm",
                "delta_concurrence", "delta_residual_tangle"):
        assert row[key] < 1e-10
