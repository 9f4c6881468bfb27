import numpy as np
import pytest

from modchain import ChainSpec, CouplingVector, build_couplings, validate_mirror_symmetry


def pattern(N, n, lam, lam_i=None):
    return ChainSpec(moduli_count=N, sites_per_modulus=n, end_bond=lam,
                     inter_modulus=lam_i)


def test_two_moduli_of_four_sites():
    c = build_couplings(pattern(2, 4, 0.1, 0.5))
    assert np.array_equal(c.values, [0.1, 1.0, 0.1, 0.5, 0.1, 1.0, 0.1])


def test_single_bond_modulus():
    c = build_couplings(pattern(1, 2, 1.0))
    assert np.array_equal(c.values, [1.0])


def test_three_two_site_moduli():
    c = build_couplings(pattern(3, 2, 0.1, 1.0))
    assert np.array_equal(c.values, [0.1, 1.0, 0.1, 1.0, 0.1])


def test_three_site_modulus_has_no_bulk():
    c = build_couplings(pattern(2, 3, 0.3, 0.7))
    assert np.array_equal(c.values, [0.3, 0.3, 0.7, 0.3, 0.3])


def test_uniform_chain_when_all_couplings_one():
    c = build_couplings(pattern(3, 4, 1.0, 1.0))
    assert np.array_equal(c.values, np.ones(11))


def test_single_modulus_ignores_inter_coupling():
    a = build_couplings(pattern(1, 5, 0.2, 0.9))
    b = build_couplings(pattern(1, 5, 0.2, 3.3))
    assert np.array_equal(a.values, b.values)


def test_pattern_output_is_palindrome():
    rng = np.random.default_rng(42)
    for _ in range(50):
        N = int(rng.integers(1, 6))
        n = int(rng.integers(2, 9))
        lam = float(rng.uniform(0.05, 2.0))
        lam_i = float(rng.uniform(0.0, 4.0))
        c = build_couplings(pattern(N, n, lam, lam_i))
        assert len(c) == N * n - 1
        assert validate_mirror_symmetry(c)[0]


@pytest.mark.parametrize("kwargs", [
    dict(moduli_count=0, sites_per_modulus=2, end_bond=1.0),
    dict(moduli_count=2, sites_per_modulus=1, end_bond=1.0, inter_modulus=1.0),
    dict(moduli_count=1, sites_per_modulus=2, end_bond=0.0),
    dict(moduli_count=1, sites_per_modulus=2, end_bond=-0.5),
    dict(moduli_count=2, sites_per_modulus=2, end_bond=1.0, inter_modulus=-0.1),
])
def test_invalid_pattern_specs_rejected(kwargs):
    with pytest.raises(ValueError):
        ChainSpec(**kwargs)


def test_missing_inter_modulus_rejected_at_build():
    spec = ChainSpec(moduli_count=2, sites_per_modulus=2, end_bond=1.0)
    with pytest.raises(ValueError):
        build_couplings(spec)


def test_explicit_and_pattern_fields_are_exclusive():
    cv = CouplingVector(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        ChainSpec(moduli_count=1, explicit_couplings=cv)


def test_explicit_couplings_must_be_finite():
    with pytest.raises(ValueError):
        CouplingVector(np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        CouplingVector(np.array([np.nan]))


def test_mirror_symmetry_examples():
    assert validate_mirror_symmetry(np.array([0.1, 1.0, 0.1]))[0]
    ok, msg = validate_mirror_symmetry(np.array([0.1, 1.0, 0.2]))
    assert not ok
    assert "mirror" in msg


def test_explicit_spec_round_trip():
    cv = CouplingVector(np.array([0.3, 0.7, 0.3]))
    spec = ChainSpec(explicit_couplings=cv)
    assert spec.total_sites == 4
    assert spec.describe()["couplings"] == [0.3, 0.7, 0.3]


def test_two_and_four_site_moduli_coincide_at_unit_inter_coupling():
    # with lam_i = 1 the (lam, 1, lam) modulus pattern joined by unit bonds
    # degenerates into the same alternating chain as two-site moduli; the two
    # descriptions are then physically identical at equal total size
    a = build_couplings(pattern(10, 2, 0.1, 1.0))
    b = build_couplings(pattern(5, 4, 0.1, 1.0))
    assert np.array_equal(a.values, b.values)
