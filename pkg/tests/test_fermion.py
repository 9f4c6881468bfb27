import numpy as np
import pytest

from modchain import (ChainSpec, build_couplings, energy_gap, hopping_matrix,
                      resolve_couplings, solve)
from modchain.oracle import ed_solve, grid_specs

SQ2 = np.sqrt(2.0)


def solve_pattern(N, n, lam, lam_i=None):
    return solve(build_couplings(ChainSpec(moduli_count=N, sites_per_modulus=n,
                                           end_bond=lam, inter_modulus=lam_i)))


def random_couplings(rng, symmetric=False):
    nb = int(rng.integers(1, 14))
    c = rng.uniform(0.05, 2.0, nb)
    if symmetric:
        c = 0.5 * (c + c[::-1])
    return c


def test_hopping_matrix_structure():
    h = hopping_matrix(np.array([0.4, 1.2]))
    t = h.dense()
    assert np.array_equal(np.diag(t), np.zeros(3))
    assert t[0, 1] == 0.1 and t[1, 2] == 0.3
    assert np.array_equal(t, t.T)


def test_two_site_chain():
    m = solve_pattern(1, 2, 1.0)
    assert np.allclose(m.energies, [-0.25, 0.25], atol=1e-14)
    assert np.allclose(m.correlation, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-14)
    assert m.zero_mode_count == 0
    assert energy_gap(m) == pytest.approx(0.25, abs=1e-14)
    assert m.ground_state_energy() == pytest.approx(-0.25, abs=1e-14)


def test_three_site_chain():
    # hand eigendecomposition: energies -sqrt(2)/4, 0, +sqrt(2)/4;
    # half-filled zero mode gives G_11 = 1/2 and G_13 = 0
    m = solve(np.array([1.0, 1.0]))
    assert np.allclose(m.energies, [-SQ2 / 4, 0.0, SQ2 / 4], atol=1e-14)
    assert m.zero_mode_count == 1
    assert m.correlation[0, 0] == pytest.approx(0.5, abs=1e-12)
    assert m.correlation[0, 2] == pytest.approx(0.0, abs=1e-12)
    assert energy_gap(m) == 0.0


def test_mode_invariants_random_chains():
    rng = np.random.default_rng(7)
    for trial in range(40):
        c = random_couplings(rng, symmetric=trial % 2 == 0)
        m = solve(c)
        nt = m.size
        t = hopping_matrix(c).dense()
        # completeness
        assert np.max(np.abs(m.modes @ m.modes.T - np.eye(nt))) < 1e-10
        # eigen-residual per mode
        res = t @ m.modes - m.modes * m.energies
        assert np.max(np.linalg.norm(res, axis=0)) < 1e-10
        # bipartite +/- pairing
        w = np.sort(m.energies)
        assert np.max(np.abs(w + w[::-1])) < 1e-12
        # G spectrum within [0, 1], trace n_t / 2
        gw = np.linalg.eigvalsh(m.correlation)
        assert gw.min() > -1e-12 and gw.max() < 1 + 1e-12
        assert np.trace(m.correlation) == pytest.approx(nt / 2, abs=1e-10)
        # projector property without zero modes
        if m.zero_mode_count == 0:
            g = m.correlation
            assert np.max(np.abs(g @ g - g)) < 1e-10


def test_grid_even_chains_have_no_zero_modes():
    for spec in grid_specs(max_sites=12):
        if spec.total_sites % 2 == 0:
            m = solve(resolve_couplings(spec))
            assert m.zero_mode_count == 0, spec


def test_odd_chains_have_one_zero_mode():
    for nb in (2, 4, 6, 8):
        rng = np.random.default_rng(nb)
        m = solve(rng.uniform(0.1, 2.0, nb))
        assert m.zero_mode_count == 1
        assert energy_gap(m) == 0.0


def test_disconnected_zero_couplings():
    # two 3-site segments -> two exact zero modes
    m = solve(np.array([1.0, 1.0, 0.0, 1.0, 1.0]))
    assert m.zero_mode_count == 2
    assert energy_gap(m) == 0.0
    # two dimers -> no zero modes, gap set by a dimer
    m = solve(np.array([0.4, 0.0, 0.4]))
    assert m.zero_mode_count == 0
    assert energy_gap(m) == pytest.approx(0.1, abs=1e-14)


def test_energy_and_gap_match_ed_small_chains():
    rng = np.random.default_rng(11)
    for trial in range(8):
        c = rng.uniform(0.05, 2.0, int(rng.integers(1, 10)))
        m = solve(c)
        spec = ed_solve(c)
        assert m.ground_state_energy() == pytest.approx(spec.ground_energy, abs=1e-9)
        assert energy_gap(m) == pytest.approx(spec.gap, abs=1e-9)


def test_deep_edge_pair_gap_relative_accuracy():
    # alternating chain (lam, lam_i)*: edge-pair splitting ~ (lam_i/4) r^N (1 - r^2),
    # r = lam / lam_i; far below eps*||T||, so only a relative-accuracy method sees it
    lam, lam_i, N = 0.1, 1.0, 20
    m = solve_pattern(N, 2, lam, lam_i)
    r = lam / lam_i
    expected = (lam_i / 4.0) * r ** N * (1.0 - r * r)
    assert m.zero_mode_count == 0
    assert energy_gap(m) == pytest.approx(expected, rel=1e-6)


def test_deep_edge_pair_correlations_remain_physical():
    # the near-degenerate pair must be filled with its symmetric member:
    # G then stays a projector and end-to-end correlations saturate
    m = solve_pattern(20, 2, 0.1, 1.0)
    g = m.correlation
    assert np.max(np.abs(g @ g - g)) < 1e-10
    q_end = 2.0 * g[0, -1]
    assert abs(q_end) > 0.9  # strong end-to-end coherence, not noise


def test_non_finite_couplings_rejected():
    with pytest.raises(ValueError):
        solve(np.array([1.0, np.nan]))
