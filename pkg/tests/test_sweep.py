import numpy as np
import pytest

from modchain import (ChainSpec, end_to_end_concurrence, find_threshold, gap_scan,
                      sweep_lambda_i, sweep_moduli)
from modchain.oracle import ed_report
from dataclasses import replace


def pattern(N, n, lam, lam_i=None):
    return ChainSpec(moduli_count=N, sites_per_modulus=n, end_bond=lam,
                     inter_modulus=lam_i)


def test_lambda_i_sweep_rows():
    base = pattern(2, 2, 0.1, 0.0)
    grid = [0.0, 0.5, 1.0, 1.5]
    table = sweep_lambda_i(base, grid)
    assert table.column("axis_value").tolist() == grid
    # lam_i = 0: disconnected moduli
    assert table.rows[0]["C_end"] == 0.0
    # single-modulus column is the lam_i independent N=1 value
    c_single = table.column("C_single_modulus")
    assert np.all(c_single == c_single[0])
    assert c_single[0] == pytest.approx(1.0, abs=1e-12)  # lone dimer
    # saturating LDE: last point entangled
    assert table.rows[-1]["C_end"] > 0.9


def test_sweep_grid_validation():
    base = pattern(2, 2, 0.1, 0.0)
    with pytest.raises(ValueError):
        sweep_lambda_i(base, [])
    with pytest.raises(ValueError):
        sweep_lambda_i(base, [0.5, 0.5])
    with pytest.raises(ValueError):
        sweep_lambda_i(base, [-0.1, 0.5])


def test_threshold_bracket_invariant():
    base = pattern(2, 2, 0.1, None)
    res = find_threshold(base)
    assert res.found and res.converged
    lo, hi = res.bracket
    assert hi - lo <= res.bracket_width
    # re-evaluate the bracket ends against the detection tolerance
    assert end_to_end_concurrence(replace(base, inter_modulus=lo)) <= res.concurrence_tol
    assert end_to_end_concurrence(replace(base, inter_modulus=hi)) > res.concurrence_tol
    # frozen onset value for the minimal weak-end-bond chain
    assert res.threshold == pytest.approx(0.0910183, abs=1e-5)
    assert res.ratio == pytest.approx(0.910183, abs=1e-4)


def test_threshold_bracket_confirmed_by_ed():
    # the onset bracket of the 4-site chain is independently checkable by ED
    base = pattern(2, 2, 0.1, None)
    res = find_threshold(base)
    lo, hi = res.bracket
    ed_lo = ed_report(replace(base, inter_modulus=lo))
    ed_hi = ed_report(replace(base, inter_modulus=hi))
    assert ed_lo.end_to_end_concurrence <= res.concurrence_tol + 1e-8
    assert ed_hi.end_to_end_concurrence > 0.0


def test_threshold_scale_invariance_two_site_moduli():
    # the (lam, lam_i, lam) chain depends only on lam_i / lam
    r1 = find_threshold(pattern(2, 2, 0.1, None))
    r2 = find_threshold(pattern(2, 2, 0.5, None))
    assert r1.ratio == pytest.approx(r2.ratio, abs=1e-4)


def test_no_threshold_for_odd_moduli():
    res = find_threshold(pattern(2, 3, 0.1, None), scan_max=4.0)
    assert not res.found
    assert res.odd_modulus
    assert res.threshold is None and res.ratio is None


def test_threshold_requires_two_moduli():
    with pytest.raises(ValueError):
        find_threshold(pattern(1, 4, 0.1, None))


def test_monotone_onset_after_threshold():
    base = pattern(2, 2, 0.5, 0.0)
    grid = [round(0.05 * k, 10) for k in range(0, 61)]
    table = sweep_lambda_i(base, grid)
    c = table.column("C_end")
    onset = np.nonzero(c > 1e-8)[0]
    assert onset.size
    diffs = np.diff(c[onset[0]:])
    assert diffs.min() > -1e-6


def test_sweep_moduli_asymptote():
    base = pattern(2, 2, 0.1, 1.0)
    table = sweep_moduli(base, 12)
    asym = table.provenance["asymptote"]
    assert asym["converged"]
    assert asym["value"] == pytest.approx(table.rows[-1]["C_end"], abs=1e-15)
    assert table.rows[0]["N"] == 1 and table.rows[-1]["N"] == 12
    # N = 1 chain is a lone dimer
    assert table.rows[0]["C_end"] == pytest.approx(1.0, abs=1e-12)


def test_gap_scan_rows():
    table = gap_scan(pattern(2, 2, 0.1, 1.0), 8)
    gaps = np.array([row["gap"] for row in table.rows])
    assert gaps.size == 8
    assert np.all(gaps[1:] < gaps[:-1] + 1e-15)  # decreasing with N here
    assert table.rows[3]["n_t"] == 8


def test_saturation_increments_shrink():
    # in an entangling regime the N -> N+1 increments decay once past small N
    table = sweep_moduli(pattern(2, 2, 0.1, 1.0), 14)
    c = table.column("C_end")
    inc = np.abs(np.diff(c))[3:]  # beyond small N
    assert np.all(np.diff(inc) <= 1e-12)
    assert inc[-1] < 1e-6


def test_determinism_and_jobs_equivalence():
    base = pattern(2, 4, 0.1, 0.0)
    grid = [0.0, 0.3, 0.6, 0.9]
    a = sweep_lambda_i(base, grid, jobs=1).to_csv()
    b = sweep_lambda_i(base, grid, jobs=1).to_csv()
    c = sweep_lambda_i(base, grid, jobs=4).to_csv()
    assert a == b == c
