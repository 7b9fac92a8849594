"""Shared fixtures: tiny analytic systems and synthetic canonical integrals."""

import numpy as np
import pytest

from uccps.fcidump import SpatialIntegrals

ONE_ORBITAL_TEXT = """\
 &FCI NORB=1,NELEC=2,MS2=0,
  ORBSYM=1,
  ISYM=1,
 &END
 0.6250 1 1 1 1
 -1.2520 1 1 0 0
 0.7130 0 0 0 0
"""


def symmetrize_two_electron(g):
    """Project a rank-4 array onto full 8-fold (pq|rs) symmetry."""
    g = 0.5 * (g + g.transpose(1, 0, 2, 3))
    g = 0.5 * (g + g.transpose(0, 1, 3, 2))
    g = 0.5 * (g + g.transpose(2, 3, 0, 1))
    return g


def random_integrals(n_orb, n_electrons, seed, scale=0.2):
    """Random symmetric integrals with a spread-out one-electron spectrum."""
    rng = np.random.default_rng(seed)
    h = np.diag(np.linspace(-2.0, -0.3, n_orb))
    noise = rng.standard_normal((n_orb, n_orb)) * 0.05
    h = h + 0.5 * (noise + noise.T)
    g = symmetrize_two_electron(rng.standard_normal((n_orb,) * 4) * scale)
    # keep a repulsive-dominant diagonal so RHF stays well behaved
    for p in range(n_orb):
        for q in range(n_orb):
            g[p, p, q, q] = abs(g[p, p, q, q]) + 0.3
    g = symmetrize_two_electron(g)
    return SpatialIntegrals(n_orb=n_orb, n_electrons=n_electrons, ms2=0,
                            e_core=float(rng.uniform(0.0, 1.0)),
                            h=h, g=g).validate()


def rhf_canonicalize(ints, max_iter=2000, tol=1e-12):
    """Solve closed-shell RHF over the given integrals and rotate them into
    the canonical MO basis (occupied-virtual Fock block numerically zero).

    Works in the orthonormal basis the integrals are expressed in; converges
    on the [F, D] commutator so the MO-basis f_ov block is tight.  This is a
    test oracle, not production code.
    """
    n, nocc = ints.n_orb, ints.n_electrons // 2
    _, coeff = np.linalg.eigh(ints.h)
    for _ in range(max_iter):
        dens = 2.0 * coeff[:, :nocc] @ coeff[:, :nocc].T
        fock = (ints.h + np.einsum("pqrs,rs->pq", ints.g, dens)
                - 0.5 * np.einsum("prqs,rs->pq", ints.g, dens))
        eps, coeff = np.linalg.eigh(fock)
        if np.max(np.abs(fock @ dens - dens @ fock)) < tol:
            break
    h_mo = coeff.T @ ints.h @ coeff
    g_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", ints.g, coeff, coeff,
                     coeff, coeff, optimize=True)
    return SpatialIntegrals(n_orb=n, n_electrons=ints.n_electrons,
                            ms2=ints.ms2, e_core=ints.e_core,
                            h=0.5 * (h_mo + h_mo.T),
                            g=symmetrize_two_electron(g_mo),
                            orbital_energies=eps).validate()


def doubles_projection(sector, op):
    """<Phi_ij^ab|op|0> for all i<j, a<b, via the operator's HF column."""
    from uccps.sector import apply_string
    n_occ = sector.n_alpha + sector.n_beta
    hf = sector.dets[sector.hf_index:sector.hf_index + 1]
    col = np.asarray(op.mat[:, [sector.hf_index]].todense()).ravel()
    out = {}
    for i in range(n_occ):
        for j in range(i + 1, n_occ):
            for a in range(n_occ, sector.n_so):
                for b in range(a + 1, sector.n_so):
                    ok, tgt, sign = apply_string(hf, [a, b], [i, j])
                    if not ok[0]:
                        continue
                    try:
                        idx = sector.index_of(int(tgt[0]))
                    except KeyError:
                        continue
                    out[(i, j, a, b)] = sign[0] * col[idx]
    return out


@pytest.fixture(scope="session")
def h2_like():
    """Two-orbital closed-shell system with H2/minimal-basis-like integrals."""
    g = np.zeros((2, 2, 2, 2))
    entries = {(0, 0, 0, 0): 0.6746, (1, 1, 1, 1): 0.6975,
               (0, 0, 1, 1): 0.6636, (0, 1, 0, 1): 0.1813}
    for (p, q, r, s), val in entries.items():
        for a, b in ((p, q), (q, p)):
            for c, d in ((r, s), (s, r)):
                g[a, b, c, d] = val
                g[c, d, a, b] = val
    return SpatialIntegrals(n_orb=2, n_electrons=2, ms2=0, e_core=0.7137,
                            h=np.diag([-1.2528, -0.4756]), g=g).validate()


@pytest.fixture(scope="session")
def small_canonical():
    """Four-orbital, four-electron canonical system from synthetic integrals."""
    return rhf_canonicalize(random_integrals(4, 4, seed=7))


@pytest.fixture(scope="session")
def medium_canonical():
    """Five-orbital, six-electron canonical system (odd occupied count)."""
    return rhf_canonicalize(random_integrals(5, 6, seed=11))
