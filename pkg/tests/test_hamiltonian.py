"""Spin-orbital Hamiltonian build, denominators, and MP2."""

import numpy as np
import pytest

from uccps.errors import DegenerateDenominatorError
from uccps.fcidump import SpatialIntegrals, parse_fcidump
from uccps.hamiltonian import denominators, mp2, to_spin_orbital
from uccps.sector import enumerate_sector, hamiltonian_matrix, w_n_matrix
from uccps.singles import oracle_singles_projection

from conftest import (ONE_ORBITAL_TEXT, doubles_projection, random_integrals,
                      rhf_canonicalize)


def test_one_orbital_example():
    h = to_spin_orbital(parse_fcidump(ONE_ORBITAL_TEXT))
    assert h.n_so == 2
    assert h.n_occ == 2
    assert h.v_anti[0, 1, 0, 1] == pytest.approx(0.625, abs=1e-14)
    assert h.e_hf == pytest.approx(0.713 + 2 * (-1.252) + 0.625, abs=1e-12)


def test_same_spin_diagonal_block():
    ints = random_integrals(3, 4, seed=1)
    h = to_spin_orbital(ints)
    # both-alpha <pq||pq> = (pp|qq) - (pq|qp) for spatial p != q
    for p in range(3):
        for q in range(3):
            if p == q:
                continue
            want = ints.g[p, p, q, q] - ints.g[p, q, q, p]
            assert h.v_anti[2 * p, 2 * q, 2 * p, 2 * q] == pytest.approx(
                want, abs=1e-12)


def test_v_anti_symmetries_random():
    h = to_spin_orbital(random_integrals(3, 4, seed=2))
    h.validate()


def test_odd_electron_count_rejected():
    ints = random_integrals(3, 4, seed=3)
    odd = SpatialIntegrals(n_orb=3, n_electrons=3, ms2=1, e_core=ints.e_core,
                           h=ints.h, g=ints.g)
    with pytest.raises(ValueError, match="open-shell"):
        to_spin_orbital(odd)


def test_denominators_two_level():
    ints = SpatialIntegrals(n_orb=2, n_electrons=2, ms2=0, e_core=0.0,
                            h=np.diag([-1.0, 1.0]), g=np.zeros((2,) * 4))
    d = denominators(to_spin_orbital(ints))
    assert d.d1[0, 0] == pytest.approx(-2.0)
    assert np.allclose(
        d.d2, d.d1[:, None, :, None] + d.d1[None, :, None, :], atol=1e-14)


def test_denominators_degenerate_all_zero():
    ints = SpatialIntegrals(n_orb=2, n_electrons=2, ms2=0, e_core=0.0,
                            h=np.zeros((2, 2)), g=np.zeros((2,) * 4))
    d = denominators(to_spin_orbital(ints))
    assert np.all(d.d1 == 0.0)
    assert np.all(d.d2 == 0.0)


def test_mp2_zero_interaction():
    ints = SpatialIntegrals(n_orb=3, n_electrons=2, ms2=0, e_core=0.3,
                            h=np.diag([-1.0, 0.5, 1.0]), g=np.zeros((3,) * 4))
    amps, e_mp2 = mp2(to_spin_orbital(ints))
    assert e_mp2 == 0.0
    assert not amps.t2.any()


def test_mp2_no_virtuals():
    _, e_mp2 = mp2(to_spin_orbital(parse_fcidump(ONE_ORBITAL_TEXT)))
    assert e_mp2 == 0.0


def test_mp2_degenerate_denominator_raises():
    # h[1, 1] tuned so the exchange contribution cancels the virtual Fock
    # diagonal: D2 = 0 exactly while <01||23> = 0.2 contributes.
    g = np.zeros((2, 2, 2, 2))
    g[0, 1, 0, 1] = g[1, 0, 0, 1] = g[0, 1, 1, 0] = g[1, 0, 1, 0] = 0.2
    ints = SpatialIntegrals(n_orb=2, n_electrons=2, ms2=0, e_core=0.0,
                            h=np.diag([0.0, 0.2]), g=g)
    h = to_spin_orbital(ints)
    d = denominators(h)
    assert abs(d.d2[0, 1, 0, 1]) < 1e-14
    with pytest.raises(DegenerateDenominatorError):
        mp2(h)


def test_mp2_against_sector_oracle(h2_like):
    """E_MP2 equals the doubles-resolved <0|W D2^-1 W|0> in the sector basis."""
    canonical = rhf_canonicalize(h2_like)
    h = to_spin_orbital(canonical)
    _, e_mp2 = mp2(h)
    sector = enumerate_sector(h.n_so, h.n_occ // 2, h.n_occ // 2)
    w = w_n_matrix(sector, h)
    d = denominators(h)
    proj = doubles_projection(sector, w)
    e_oracle = 0.0
    for (i, j, a, b), amp in proj.items():
        e_oracle += amp * amp / d.d2[i, j, a - h.n_occ, b - h.n_occ]
    assert e_mp2 == pytest.approx(e_oracle, abs=1e-10)
    assert e_mp2 <= 0.0


def test_mp2_oracle_on_synthetic_canonical(small_canonical):
    h = to_spin_orbital(small_canonical)
    assert h.max_f_ov <= 1e-8
    _, e_mp2 = mp2(h)
    sector = enumerate_sector(h.n_so, h.n_occ // 2, h.n_occ // 2)
    w = w_n_matrix(sector, h)
    d = denominators(h)
    e_oracle = sum(amp * amp / d.d2[i, j, a - h.n_occ, b - h.n_occ]
                   for (i, j, a, b), amp
                   in doubles_projection(sector, w).items())
    assert e_mp2 == pytest.approx(e_oracle, abs=1e-10)
    assert e_mp2 <= 0.0


def test_e_hf_matches_sector_expectation(small_canonical):
    h = to_spin_orbital(small_canonical)
    sector = enumerate_sector(h.n_so, h.n_occ // 2, h.n_occ // 2)
    hmat = hamiltonian_matrix(sector, h)
    hf = sector.hf_vector()
    assert float(hf @ (hmat.mat @ hf)) == pytest.approx(h.e_hf, abs=1e-10)


def test_w_n_has_no_reference_expectation(small_canonical):
    """<0|W_N|0> = 0 and the singles block of W_N is the (vanishing) f_ov."""
    h = to_spin_orbital(small_canonical)
    sector = enumerate_sector(h.n_so, h.n_occ // 2, h.n_occ // 2)
    w = w_n_matrix(sector, h)
    hf = sector.hf_vector()
    assert abs(float(hf @ (w.mat @ hf))) < 1e-10
    singles_block = oracle_singles_projection(sector, w)
    assert np.max(np.abs(singles_block), initial=0.0) <= 1e-8
