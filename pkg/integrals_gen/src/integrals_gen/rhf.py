"""Closed-shell restricted Hartree-Fock over the generated AO integrals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ScfError(RuntimeError):
    pass


@dataclass
class RhfResult:
    energy: float
    orbital_energies: np.ndarray
    coefficients: np.ndarray
    density: np.ndarray
    converged: bool
    iterations: int
    commutator_norm: float


def rhf(s, hcore, eri, n_electrons, e_nuc, max_iter=300, conv_tol=1e-11,
        comm_tol=1e-9, level_shift=0.0, diis_depth=10, dens0=None,
        damping=0.0):
    """Solve RHF; converges on both the energy and the [F, D] commutator.

    The commutator criterion keeps the occupied-virtual Fock block tight,
    which downstream perturbative corrections rely on.  dens0 warm-starts
    the iteration (scan continuation); damping mixes in the previous
    density, useful for stretched geometries.
    """
    if n_electrons % 2 != 0:
        raise ScfError("closed-shell RHF needs an even electron count")
    nocc = n_electrons // 2

    svals, svecs = np.linalg.eigh(s)
    if np.min(svals) < 1e-10:
        raise ScfError("overlap matrix is numerically singular")
    x = svecs @ np.diag(svals ** -0.5) @ svecs.T

    def fock_from_density(dens):
        j = np.einsum("pqrs,rs->pq", eri, dens)
        k = np.einsum("prqs,rs->pq", eri, dens)
        return hcore + j - 0.5 * k

    def density_from_coeff(c):
        return 2.0 * c[:, :nocc] @ c[:, :nocc].T

    if dens0 is not None:
        dens = dens0
    else:
        _, c_prime = np.linalg.eigh(x.T @ hcore @ x)  # core guess
        coeff = x @ c_prime
        dens = density_from_coeff(coeff)

    energy = 0.0
    fock_list, err_list = [], []
    converged = False
    comm_norm = np.inf
    eps = np.zeros(s.shape[0])
    for it in range(1, max_iter + 1):
        fock = fock_from_density(dens)
        comm = fock @ dens @ s - s @ dens @ fock
        comm_norm = float(np.max(np.abs(comm)))
        new_energy = 0.5 * np.sum(dens * (hcore + fock)) + e_nuc

        err_list.append(x.T @ comm @ x)
        fock_list.append(fock)
        if len(err_list) > diis_depth:
            err_list.pop(0)
            fock_list.pop(0)
        if len(err_list) > 1:
            m = len(err_list)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    b[i, j] = np.sum(err_list[i] * err_list[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                coeffs = np.linalg.solve(b, rhs)[:m]
                fock = sum(c * f for c, f in zip(coeffs, fock_list))
            except np.linalg.LinAlgError:
                pass

        fock_eff = fock
        if level_shift:
            # shift virtual orbitals up to damp oscillations
            fock_eff = fock + level_shift * (s - 0.5 * s @ dens @ s)

        eps, c_prime = np.linalg.eigh(x.T @ fock_eff @ x)
        coeff = x @ c_prime
        new_dens = density_from_coeff(coeff)
        dens = (1.0 - damping) * new_dens + damping * dens if damping else new_dens

        if abs(new_energy - energy) < conv_tol and comm_norm < comm_tol:
            energy = new_energy
            converged = True
            break
        energy = new_energy

    if converged and level_shift:
        # recompute canonical orbital energies without the shift
        fock = fock_from_density(dens)
        eps, c_prime = np.linalg.eigh(x.T @ fock @ x)
        coeff = x @ c_prime
        dens = density_from_coeff(coeff)
        fock = fock_from_density(dens)
        energy = 0.5 * np.sum(dens * (hcore + fock)) + e_nuc
        comm = fock @ dens @ s - s @ dens @ fock
        comm_norm = float(np.max(np.abs(comm)))

    return RhfResult(energy=float(energy), orbital_energies=eps,
                     coefficients=coeff, density=dens, converged=converged,
                     iterations=it, commutator_norm=comm_norm)
