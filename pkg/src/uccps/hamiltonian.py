"""Spin-orbital Hamiltonian quantities for a closed-shell RHF reference.

Spin orbitals are interleaved, p = 2P + sigma with sigma = 0 for alpha and
1 for beta, which keeps each (P, Pbar) pair adjacent.  The occupied spin
orbitals are the lowest n_electrons, assuming the FCIDUMP producer delivered
energy-ordered canonical orbitals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominatorError
from .fcidump import SpatialIntegrals

DENOM_TOL = 1e-10
CANONICAL_FOV_TOL = 1e-8


@dataclass(frozen=True)
class SpinOrbitalHamiltonian:
    """Fock matrix and antisymmetrized two-electron tensor <pq||rs>.

    The Fock diagonal is the one-body (diagonal) part of the normal-ordered
    Hamiltonian; the occupied-virtual Fock blocks and v_anti make up the
    perturbation.  e_hf is the reference expectation value including e_core.
    """

    n_so: int
    n_occ: int
    e_core: float
    e_hf: float
    fock: np.ndarray
    v_anti: np.ndarray

    @property
    def n_virt(self):
        return self.n_so - self.n_occ

    @property
    def occ(self):
        return slice(0, self.n_occ)

    @property
    def virt(self):
        return slice(self.n_occ, self.n_so)

    @property
    def max_f_ov(self) -> float:
        """Largest occupied-virtual Fock element (zero for canonical HF)."""
        block = self.fock[self.occ, self.virt]
        return float(np.max(np.abs(block), initial=0.0))

    def validate(self, tol=1e-12):
        v = self.v_anti
        assert np.max(np.abs(self.fock - self.fock.T), initial=0.0) <= tol
        assert np.max(np.abs(v + v.transpose(1, 0, 2, 3)), initial=0.0) <= tol
        assert np.max(np.abs(v + v.transpose(0, 1, 3, 2)), initial=0.0) <= tol
        assert np.max(np.abs(v - v.transpose(2, 3, 0, 1)), initial=0.0) <= tol
        return self


@dataclass(frozen=True)
class Denominators:
    """Orbital-energy denominators D1[i, a] and D2[i, j, a, b]."""

    d1: np.ndarray
    d2: np.ndarray


def to_spin_orbital(ints: SpatialIntegrals) -> SpinOrbitalHamiltonian:
    """Build the spin-orbital Fock matrix, <pq||rs>, and the HF energy."""
    if ints.n_electrons % 2 != 0:
        raise ValueError("open-shell references are unsupported "
                         f"(n_electrons = {ints.n_electrons})")
    n_so = 2 * ints.n_orb
    n_occ = ints.n_electrons

    h_so = np.kron(ints.h, np.eye(2))

    # <pq||rs> = (pr|qs) d(sp,sr) d(sq,ss) - (ps|qr) d(sp,ss) d(sq,sr)
    eye2 = np.eye(2)
    coul = np.einsum("PRQS,ac,bd->PaQbRcSd", ints.g, eye2, eye2)
    coul = coul.reshape(n_so, n_so, n_so, n_so)
    v_anti = coul - coul.transpose(0, 1, 3, 2)

    occ = slice(0, n_occ)
    fock = h_so + np.einsum("piqi->pq", v_anti[:, occ, :, occ])
    e_hf = (ints.e_core + np.trace(h_so[occ, occ])
            + 0.5 * np.einsum("ijij->", v_anti[occ, occ, occ, occ]))
    return SpinOrbitalHamiltonian(n_so=n_so, n_occ=n_occ, e_core=ints.e_core,
                                  e_hf=float(e_hf), fock=fock, v_anti=v_anti)


def denominators(h: SpinOrbitalHamiltonian) -> Denominators:
    """Moller-Plesset denominators from the Fock diagonal."""
    eps = np.diag(h.fock)
    e_occ = eps[h.occ]
    e_virt = eps[h.virt]
    d1 = e_occ[:, None] - e_virt[None, :]
    d2 = (e_occ[:, None, None, None] + e_occ[None, :, None, None]
          - e_virt[None, None, :, None] - e_virt[None, None, None, :])
    return Denominators(d1=d1, d2=d2)


def mp2(h: SpinOrbitalHamiltonian):
    """First-order doubles amplitudes and the MP2 correlation energy.

    Returns (Amplitudes, e_mp2).  Raises DegenerateDenominatorError when a
    contributing doubles block has a vanishing denominator.
    """
    from .ansatz import Amplitudes

    d2 = denominators(h).d2
    v_oovv = h.v_anti[h.occ, h.occ, h.virt, h.virt]
    small = np.abs(d2) < DENOM_TOL
    if np.any(small & (np.abs(v_oovv) > DENOM_TOL)):
        idx = tuple(int(x[0]) for x in
                    np.where(small & (np.abs(v_oovv) > DENOM_TOL)))
        raise DegenerateDenominatorError(
            f"vanishing doubles denominator at (i j a b) = {idx}")
    t2 = np.where(small, 0.0, v_oovv / np.where(small, 1.0, d2))
    e_mp2 = 0.25 * float(np.sum(v_oovv * t2))
    t1 = np.zeros((h.n_occ, h.n_virt))
    return Amplitudes(t1=t1, t2=t2), e_mp2
