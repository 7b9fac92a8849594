"""RHF-driven FCIDUMP generation with a metadata sidecar."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .basis import build_shells
from .integrals import (eri_tensor, kinetic_matrix, nuclear_matrix,
                        nuclear_repulsion, overlap_matrix)
from .molecules import MoleculeSpec
from .rhf import RhfResult, ScfError, rhf

WRITE_THRESHOLD = 1e-12


def ao_integrals(spec: MoleculeSpec):
    shells = build_shells(spec.symbols, spec.coords_bohr)
    s = overlap_matrix(shells)
    hcore = kinetic_matrix(shells) + nuclear_matrix(
        shells, spec.symbols, spec.coords_bohr)
    g = eri_tensor(shells)
    e_nuc = nuclear_repulsion(spec.symbols, spec.coords_bohr)
    return s, hcore, g, e_nuc


def _converge(s, hcore, g, n_electrons, e_nuc, dens0, level_shift=0.0):
    result = rhf(s, hcore, g, n_electrons, e_nuc,
                 level_shift=level_shift, dens0=dens0)
    if not result.converged:
        # stretched/degenerate cases oscillate; escalate stabilization
        for shift, damp in ((0.25, 0.0), (0.5, 0.3), (1.0, 0.5)):
            result = rhf(s, hcore, g, n_electrons, e_nuc,
                         level_shift=shift, max_iter=2000, dens0=dens0,
                         damping=damp)
            if result.converged:
                break
    return result


def run_rhf(spec: MoleculeSpec, level_shift=0.0, dens0=None,
            search_swaps=None) -> tuple:
    """Converge RHF; unless continuing a scan branch, probe near-Fermi
    occupation swaps and keep the lowest converged solution (the aufbau
    core guess can trap multiply bonded systems in an excited SCF state).
    """
    s, hcore, g, e_nuc = ao_integrals(spec)
    result = _converge(s, hcore, g, spec.n_electrons, e_nuc, dens0,
                       level_shift=level_shift)
    if search_swaps is None:
        search_swaps = dens0 is None
    if search_swaps and result.converged:
        nocc = spec.n_electrons // 2
        n = s.shape[0]
        base_coeff = result.coefficients
        for i, a in ((nocc - 1, nocc), (nocc - 2, nocc), (nocc - 1, nocc + 1),
                     (nocc - 2, nocc + 1), (nocc - 3, nocc)):
            if i < 0 or a >= n:
                continue
            order = list(range(n))
            order[i], order[a] = order[a], order[i]
            swapped = base_coeff[:, order]
            guess = 2.0 * swapped[:, :nocc] @ swapped[:, :nocc].T
            trial = _converge(s, hcore, g, spec.n_electrons, e_nuc, guess)
            if trial.converged and trial.energy < result.energy - 1e-10:
                result = trial
    if not result.converged:
        raise ScfError(
            f"RHF failed for {spec.name}/{spec.geometry_tag}: "
            f"commutator {result.commutator_norm:.2e} after "
            f"{result.iterations} iterations")
    return (s, hcore, g, e_nuc), result


def mo_integrals(hcore, g, coeff):
    h_mo = coeff.T @ hcore @ coeff
    g_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", g, coeff, coeff, coeff, coeff,
                     optimize=True)
    return 0.5 * (h_mo + h_mo.T), g_mo


def write_fcidump_file(path, n_orb, n_electrons, e_core, h_mo, g_mo,
                       orbital_energies=None, ms2=0):
    lines = [f" &FCI NORB={n_orb},NELEC={n_electrons},MS2={ms2},",
             "  ORBSYM=" + "1," * n_orb, "  ISYM=1,", " &END"]
    fmt = " {0:> .16E} {1:4d} {2:4d} {3:4d} {4:4d}"
    for i in range(n_orb):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    val = g_mo[i, j, k, l]
                    if abs(val) > WRITE_THRESHOLD:
                        lines.append(fmt.format(val, i + 1, j + 1, k + 1, l + 1))
    for i in range(n_orb):
        for j in range(i + 1):
            if abs(h_mo[i, j]) > WRITE_THRESHOLD:
                lines.append(fmt.format(h_mo[i, j], i + 1, j + 1, 0, 0))
    if orbital_energies is not None:
        for i, eps in enumerate(orbital_energies):
            lines.append(fmt.format(eps, i + 1, 0, 0, 0))
    lines.append(fmt.format(e_core, 0, 0, 0, 0))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def generate_fcidump(spec: MoleculeSpec, out_path, level_shift=0.0,
                     dens0=None) -> RhfResult:
    """Run RHF for the molecule and emit FCIDUMP plus a JSON sidecar."""
    (s, hcore, g, e_nuc), scf = run_rhf(spec, level_shift=level_shift,
                                        dens0=dens0)
    h_mo, g_mo = mo_integrals(hcore, g, scf.coefficients)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_fcidump_file(out_path, spec.n_orb, spec.n_electrons, e_nuc,
                       h_mo, g_mo, orbital_energies=scf.orbital_energies)
    sidecar = {
        "molecule": spec.name,
        "geometry_tag": spec.geometry_tag,
        "basis": spec.basis,
        "symbols": list(spec.symbols),
        "coords_angstrom": np.asarray(spec.coords).tolist(),
        "provenance": spec.provenance,
        "n_orb": spec.n_orb,
        "n_electrons": spec.n_electrons,
        "scf_energy": scf.energy,
        "nuclear_repulsion": e_nuc,
        "scf_converged": bool(scf.converged),
        "scf_iterations": scf.iterations,
        "scf_commutator_norm": scf.commutator_norm,
    }
    sidecar_path = out_path.with_suffix(out_path.suffix + ".meta.json")
    with open(sidecar_path, "w", encoding="utf-8") as f:
        json.dump(sidecar, f, indent=1)
        f.write("\n")
    return scf
