"""Generator sets and unitary coupled-cluster state preparation.

A generator is an excitation string (creators, annihilators); its
anti-hermitian combination tau = E - E+ satisfies tau^3 = -tau, so each
Trotter factor has the closed form
exp(theta tau) = 1 + sin(theta) tau + (1 - cos(theta)) tau^2,
which acts as a Givens rotation on the coupled determinant pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .hamiltonian import SpinOrbitalHamiltonian
from .sector import (DeterminantSector, SectorOperator, SectorVector,
                     apply_string, excitation_matrix, expm_apply)

KINDS = ("doubles-full", "doubles-paired", "singles+doubles-full")


@dataclass(frozen=True)
class Amplitudes:
    """Antisymmetrized t1/t2 tensors over occupied x virtual spin orbitals."""

    t1: np.ndarray
    t2: np.ndarray

    @property
    def n_occ(self):
        return self.t1.shape[0]

    @property
    def n_virt(self):
        return self.t1.shape[1]

    def validate(self, tol=1e-12):
        t2 = self.t2
        assert np.max(np.abs(t2 + t2.transpose(1, 0, 2, 3)), initial=0.0) <= tol
        assert np.max(np.abs(t2 + t2.transpose(0, 1, 3, 2)), initial=0.0) <= tol
        no, nv = self.t1.shape
        spin_occ = np.arange(no) % 2
        spin_virt = np.arange(nv) % 2
        bad1 = spin_occ[:, None] != spin_virt[None, :]
        assert np.max(np.abs(self.t1[bad1]), initial=0.0) == 0.0
        sz = (spin_occ[:, None, None, None] + spin_occ[None, :, None, None]
              - spin_virt[None, None, :, None] - spin_virt[None, None, None, :])
        assert np.max(np.abs(t2[sz != 0]), initial=0.0) == 0.0
        return self


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered excitation strings defining a UCC ansatz."""

    kind: str
    trotterized: bool
    generators: tuple
    n_so: int
    n_occ: int

    @property
    def param_count(self):
        return len(self.generators)

    @property
    def n_virt(self):
        return self.n_so - self.n_occ

    @property
    def has_singles(self):
        return self.kind == "singles+doubles-full"


def _doubles_full(n_occ, n_so):
    groups = {0: [], 2: [], 1: []}
    for i in range(n_occ):
        for j in range(i + 1, n_occ):
            for a in range(n_occ, n_so):
                for b in range(a + 1, n_so):
                    if (i % 2 + j % 2) != (a % 2 + b % 2):
                        continue
                    groups[i % 2 + j % 2].append(((a, b), (i, j)))
    # alpha-alpha factors first, then beta-beta, then mixed spin
    return groups[0] + groups[2] + groups[1]


def _doubles_paired(n_occ, n_so):
    gens = []
    for cap_i in range(n_occ // 2):
        for cap_a in range(n_occ // 2, n_so // 2):
            gens.append(((2 * cap_a, 2 * cap_a + 1), (2 * cap_i, 2 * cap_i + 1)))
    return gens


def _singles(n_occ, n_so):
    return [((a,), (i,)) for i in range(n_occ)
            for a in range(n_occ, n_so) if (a - i) % 2 == 0]


def build_generators(h: SpinOrbitalHamiltonian, kind: str,
                     trotterized: bool) -> GeneratorSet:
    """Enumerate the S_z-conserving excitation strings for the given ansatz."""
    if kind not in KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    n_occ, n_so = h.n_occ, h.n_so
    if kind == "doubles-paired":
        gens = _doubles_paired(n_occ, n_so)
    else:
        gens = _doubles_full(n_occ, n_so)
        if kind == "singles+doubles-full":
            gens = gens + _singles(n_occ, n_so)
    return GeneratorSet(kind=kind, trotterized=trotterized,
                        generators=tuple(gens), n_so=n_so, n_occ=n_occ)


class CompiledAnsatz:
    """Generator tables resolved against a concrete determinant sector.

    Each generator E maps a set of source determinants one-to-one onto
    target determinants with signs; tau = E - E+ rotates each (src, tgt)
    pair.  The compiled tables drive state preparation and gradients.
    """

    def __init__(self, gens: GeneratorSet, sector: DeterminantSector):
        if gens.n_so != sector.n_so:
            raise ValueError("generator set and sector disagree on n_so")
        self.gens = gens
        self.sector = sector
        self.tables = []
        for creators, annihilators in gens.generators:
            ok, targets, signs = apply_string(sector.dets, creators, annihilators)
            ok &= sector.member_mask(np.where(ok, targets, sector.dets[0]))
            src = np.nonzero(ok)[0]
            tgt = sector.index_of(targets[ok])
            self.tables.append((src, tgt, signs[ok]))

        # Flattened tau entries for the summed generator and for bulk
        # contractions: entry (tgt, src, +s) and (src, tgt, -s) per pair.
        srcs = [t[0] for t in self.tables]
        tgts = [t[1] for t in self.tables]
        sgns = [t[2] for t in self.tables]
        gids = [np.full(len(s), k) for k, s in enumerate(srcs)]
        src_all = np.concatenate(srcs) if srcs else np.zeros(0, dtype=int)
        tgt_all = np.concatenate(tgts) if tgts else np.zeros(0, dtype=int)
        sgn_all = np.concatenate(sgns) if sgns else np.zeros(0)
        gid_all = np.concatenate(gids) if gids else np.zeros(0, dtype=int)
        self.rows = np.concatenate([tgt_all, src_all])
        self.cols = np.concatenate([src_all, tgt_all])
        self.vals = np.concatenate([sgn_all, -sgn_all])
        self.gid = np.concatenate([gid_all, gid_all])

        nnz = len(self.rows)
        template = sp.coo_matrix(
            (np.arange(1, nnz + 1, dtype=np.float64), (self.rows, self.cols)),
            shape=(sector.dim, sector.dim)).tocsr()
        if template.nnz != nnz:
            raise AssertionError("generator tau entries collided")
        self._perm = template.data.astype(np.int64) - 1
        self._csr = template

        # Trotter application order: the doubles product is read right to
        # left (mixed-spin factors act on the reference first), singles act
        # after all doubles.
        doubles = [k for k, (c, _) in enumerate(gens.generators) if len(c) == 2]
        singles = [k for k, (c, _) in enumerate(gens.generators) if len(c) == 1]
        self.app_order = list(reversed(doubles)) + singles

    @property
    def param_count(self):
        return self.gens.param_count

    def generator_sum(self, params) -> sp.csr_matrix:
        """Sparse matrix of sum_mu theta_mu (E_mu - E_mu+)."""
        mat = self._csr.copy()
        mat.data = (self.vals * np.asarray(params)[self.gid])[self._perm]
        return mat

    def rotate(self, v, k, theta, inverse=False):
        """Apply exp(theta tau_k) (or its inverse) in place."""
        src, tgt, sgn = self.tables[k]
        c = np.cos(theta)
        s = -np.sin(theta) if inverse else np.sin(theta)
        vs = v[src]
        vt = v[tgt]
        v[src] = c * vs - s * sgn * vt
        v[tgt] = c * vt + s * sgn * vs
        return v

    def prepare(self, params) -> SectorVector:
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (self.param_count,):
            raise ValueError(f"expected {self.param_count} parameters, "
                             f"got shape {params.shape}")
        v = self.sector.hf_vector()
        if self.gens.trotterized:
            for k in self.app_order:
                self.rotate(v, k, params[k])
        elif self.param_count:
            v = expm_apply(self.generator_sum(params), v)
        norm = float(np.linalg.norm(v))
        return v / norm


def prepare_state(gens: GeneratorSet, params, sector: DeterminantSector) -> SectorVector:
    """UCC state for a parameter vector (unit norm)."""
    return CompiledAnsatz(gens, sector).prepare(params)


def params_to_t2(gens: GeneratorSet, params) -> Amplitudes:
    """Map optimizer parameters onto the antisymmetrized t2 tensor.

    Only doubles kinds are convertible; singles-bearing parameter vectors
    are never fed to the perturbative corrections.
    """
    if gens.has_singles:
        raise ValueError("singles-bearing generator sets do not map to t2")
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (gens.param_count,):
        raise ValueError(f"expected {gens.param_count} parameters")
    n_occ, n_virt = gens.n_occ, gens.n_virt
    t2 = np.zeros((n_occ, n_occ, n_virt, n_virt))
    for theta, (creators, annihilators) in zip(params, gens.generators):
        a, b = (c - n_occ for c in creators)
        i, j = annihilators
        t2[i, j, a, b] = theta
        t2[j, i, a, b] = -theta
        t2[i, j, b, a] = -theta
        t2[j, i, b, a] = theta
    return Amplitudes(t1=np.zeros((n_occ, n_virt)), t2=t2)


def t2_to_params(gens: GeneratorSet, amps: Amplitudes) -> np.ndarray:
    """Read generator parameters off a t2 tensor (inverse of params_to_t2)."""
    params = np.zeros(gens.param_count)
    n_occ = gens.n_occ
    for k, (creators, annihilators) in enumerate(gens.generators):
        if len(creators) != 2:
            continue
        a, b = (c - n_occ for c in creators)
        i, j = annihilators
        params[k] = amps.t2[i, j, a, b]
    return params


def amplitudes_to_operator(sector: DeterminantSector, amps: Amplitudes) -> SectorOperator:
    """Sector matrix of T1 + T2 for the given amplitude tensors."""
    n_occ = amps.n_occ
    mat = sp.csr_matrix((sector.dim, sector.dim))
    for i in range(n_occ):
        for a in range(amps.n_virt):
            if amps.t1[i, a] != 0.0:
                mat = mat + amps.t1[i, a] * excitation_matrix(
                    sector, [n_occ + a], [i]).mat
    for i in range(n_occ):
        for j in range(i + 1, n_occ):
            for a in range(amps.n_virt):
                for b in range(a + 1, amps.n_virt):
                    val = amps.t2[i, j, a, b]
                    if val != 0.0:
                        mat = mat + val * excitation_matrix(
                            sector, [n_occ + a, n_occ + b], [i, j]).mat
    return SectorOperator(mat, symmetry="general")


def save_amplitudes(amps: Amplitudes, dest) -> None:
    """Write nonzero t2 entries as 'i j a b value' (0-based spin orbitals)."""
    own = isinstance(dest, str)
    f = open(dest, "w", encoding="utf-8") if own else dest
    try:
        f.write(f"# n_occ={amps.n_occ} n_virt={amps.n_virt}\n")
        n_occ = amps.n_occ
        for i in range(n_occ):
            for j in range(i + 1, n_occ):
                for a in range(amps.n_virt):
                    for b in range(a + 1, amps.n_virt):
                        val = amps.t2[i, j, a, b]
                        if val != 0.0:
                            f.write(f"{i} {j} {n_occ + a} {n_occ + b} "
                                    f"{val:.16e}\n")
    finally:
        if own:
            f.close()


def load_amplitudes(source, n_occ=None, n_virt=None) -> Amplitudes:
    """Read the 'i j a b value' table back into an Amplitudes record."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as f:
            text = f.read()
    else:
        text = source.read()
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                key, _, val = token.partition("=")
                if key == "n_occ":
                    n_occ = int(val)
                elif key == "n_virt":
                    n_virt = int(val)
            continue
        i, j, a, b, value = line.split()
        entries.append((int(i), int(j), int(a), int(b), float(value)))
    if n_occ is None or n_virt is None:
        raise ValueError("amplitude table lacks dimension header")
    t2 = np.zeros((n_occ, n_occ, n_virt, n_virt))
    for i, j, a, b, value in entries:
        a -= n_occ
        b -= n_occ
        t2[i, j, a, b] = value
        t2[j, i, a, b] = -value
        t2[i, j, b, a] = -value
        t2[j, i, b, a] = value
    return Amplitudes(t1=np.zeros((n_occ, n_virt)), t2=t2)
