"""Determinant-basis representation of states and second-quantized operators.

All states live in the fixed (n_alpha, n_beta) particle sector, which every
ansatz in this package conserves.  Determinants are occupation bitmasks (bit
p set means spin orbital p occupied); the phase convention creates orbitals
in ascending index order.  Vectors over the sector are plain float64 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError
from .hamiltonian import SpinOrbitalHamiltonian

SYMMETRY_TOL = 1e-12
EXP_TERM_TOL = 1e-15
EXP_MAX_TERMS = 300

# A sector vector is just a dense real coefficient array of length sector.dim.
SectorVector = np.ndarray


@dataclass(frozen=True)
class DeterminantSector:
    """Ordered basis of Slater determinants at fixed (n_alpha, n_beta)."""

    n_so: int
    n_alpha: int
    n_beta: int
    dets: np.ndarray
    hf_index: int

    @property
    def dim(self):
        return len(self.dets)

    def index_of(self, det):
        """Position(s) of determinant bitmask(s) in the basis ordering."""
        pos = np.searchsorted(self.dets, det)
        if np.isscalar(det) or np.ndim(det) == 0:
            if pos >= self.dim or self.dets[pos] != det:
                raise KeyError(f"determinant {det:#x} not in sector")
            return int(pos)
        return pos

    def member_mask(self, dets):
        """Boolean mask of which bitmasks belong to this sector."""
        pos = np.searchsorted(self.dets, dets)
        pos_clipped = np.minimum(pos, self.dim - 1)
        return self.dets[pos_clipped] == dets

    def hf_vector(self) -> SectorVector:
        v = np.zeros(self.dim)
        v[self.hf_index] = 1.0
        return v

    def occupancy(self) -> np.ndarray:
        """Dense (dim, n_so) 0/1 matrix of orbital occupations."""
        bits = (self.dets[:, None] >> np.arange(self.n_so)[None, :]) & 1
        return bits.astype(np.float64)


def enumerate_sector(n_so: int, n_alpha: int, n_beta: int) -> DeterminantSector:
    """Enumerate all determinants with the given spin occupations."""
    if n_so % 2 != 0:
        raise ValueError("n_so must be even (interleaved spin orbitals)")
    n_orb = n_so // 2
    if not (0 <= n_alpha <= n_orb and 0 <= n_beta <= n_orb):
        raise ValueError(f"cannot place ({n_alpha}, {n_beta}) electrons "
                         f"in {n_orb} spatial orbitals")
    alpha_masks = np.array(
        [sum(1 << (2 * p) for p in c) for c in combinations(range(n_orb), n_alpha)],
        dtype=np.int64)
    beta_masks = np.array(
        [sum(1 << (2 * p + 1) for p in c) for c in combinations(range(n_orb), n_beta)],
        dtype=np.int64)
    dets = np.sort((alpha_masks[:, None] | beta_masks[None, :]).ravel())
    hf_det = (sum(1 << (2 * p) for p in range(n_alpha))
              | sum(1 << (2 * p + 1) for p in range(n_beta)))
    hf_index = int(np.searchsorted(dets, hf_det))
    return DeterminantSector(n_so=n_so, n_alpha=n_alpha, n_beta=n_beta,
                             dets=dets, hf_index=hf_index)


class SectorOperator:
    """Sparse real operator over the sector basis with a symmetry contract."""

    def __init__(self, mat, symmetry="general"):
        mat = sp.csr_matrix(mat)
        if symmetry not in ("hermitian", "anti-hermitian", "general"):
            raise ValueError(f"unknown symmetry flag {symmetry!r}")
        if symmetry == "hermitian":
            dev = _sparse_max_abs(mat - mat.T)
            if dev > SYMMETRY_TOL:
                raise ValueError(f"operator not hermitian (deviation {dev:.2e})")
        elif symmetry == "anti-hermitian":
            dev = _sparse_max_abs(mat + mat.T)
            if dev > SYMMETRY_TOL:
                raise ValueError(f"operator not anti-hermitian (deviation {dev:.2e})")
        self.mat = mat
        self.symmetry = symmetry

    @property
    def shape(self):
        return self.mat.shape

    def dot(self, v):
        return self.mat @ v

    def adjoint(self):
        return SectorOperator(self.mat.T.tocsr(), symmetry=self.symmetry)

    def __matmul__(self, other):
        if isinstance(other, SectorOperator):
            return SectorOperator(self.mat @ other.mat)
        return self.mat @ other


def _sparse_max_abs(mat):
    mat = sp.coo_matrix(mat)
    return float(np.max(np.abs(mat.data), initial=0.0))


def apply_string(dets: np.ndarray, creators, annihilators, out_of_order=False):
    """Apply a creation/annihilation string to an array of determinants.

    The string is prod a+(creators) prod a(annihilators, reverse order), so
    annihilators act in list order and creators in reversed list order.
    Returns (valid, targets, signs); invalid rows are masked out.
    """
    occ = np.asarray(dets, dtype=np.int64).copy()
    sign = np.ones(occ.shape)
    ok = np.ones(occ.shape, dtype=bool)
    one = np.int64(1)
    for p in annihilators:
        bit = one << p
        ok &= (occ & bit) != 0
        parity = np.bitwise_count(occ & (bit - one)) & 1
        sign = np.where(parity == 1, -sign, sign)
        occ &= ~bit
    for p in reversed(list(creators)):
        bit = one << p
        ok &= (occ & bit) == 0
        parity = np.bitwise_count(occ & (bit - one)) & 1
        sign = np.where(parity == 1, -sign, sign)
        occ |= bit
    return ok, occ, sign


def excitation_matrix(sector: DeterminantSector, creators, annihilators) -> SectorOperator:
    """Sector matrix of the normal-ordered excitation string.

    Illegal moves (Pauli blocking, or targets outside the sector) give zero
    columns; the result has at most one nonzero per column.
    """
    ok, targets, signs = apply_string(sector.dets, creators, annihilators)
    ok &= sector.member_mask(np.where(ok, targets, sector.dets[0]))
    src = np.nonzero(ok)[0]
    tgt = sector.index_of(targets[ok])
    mat = sp.csr_matrix((signs[ok], (tgt, src)),
                        shape=(sector.dim, sector.dim))
    return SectorOperator(mat, symmetry="general")


def _bare_one_electron(h: SpinOrbitalHamiltonian) -> np.ndarray:
    """Recover the bare one-electron spin-orbital integrals from the Fock matrix."""
    occ = h.occ
    return h.fock - np.einsum("piqi->pq", h.v_anti[:, occ, :, occ])


def hamiltonian_matrix(sector: DeterminantSector, h: SpinOrbitalHamiltonian) -> SectorOperator:
    """Full Hamiltonian over the sector by Slater-Condon rules (hermitian)."""
    if sector.n_so != h.n_so or sector.n_alpha + sector.n_beta != h.n_occ:
        raise ValueError("sector and Hamiltonian disagree on size or filling")
    dets = sector.dets
    dim = sector.dim
    n_so = sector.n_so
    one = np.int64(1)
    h_bare = _bare_one_electron(h)
    v = h.v_anti
    occm = sector.occupancy()

    # Diagonal: e_core + sum_p h_pp + 1/2 sum_pq <pq||pq> over occupied p, q.
    diag = (h.e_core + occm @ np.diag(h_bare)
            + 0.5 * np.einsum("xp,pq,xq->x", occm,
                              np.einsum("pqpq->pq", v), occm))
    rows = [np.arange(dim)]
    cols = [np.arange(dim)]
    vals = [diag]

    # Single excitations i -> a: <D'|H|D> = sign * (h_ia + sum_k <ik||ak>).
    w_single = np.einsum("ikak->ika", v)
    for i in range(n_so):
        for a in range(n_so):
            if a == i or (a - i) % 2 != 0:
                continue
            bit_i, bit_a = one << i, one << a
            sel = np.nonzero(((dets & bit_i) != 0) & ((dets & bit_a) == 0))[0]
            if len(sel) == 0:
                continue
            sub = dets[sel]
            lo, hi = (i, a) if i < a else (a, i)
            mask = (one << hi) - (one << (lo + 1))
            parity = np.bitwise_count(sub & mask) & 1
            sign = np.where(parity == 1, -1.0, 1.0)
            value = h_bare[i, a] + occm[sel] @ w_single[i, :, a]
            tgt = sector.index_of(sub ^ (bit_i | bit_a))
            rows.append(tgt)
            cols.append(sel)
            vals.append(sign * value)

    # Double excitations (i<j) -> (a<b): <D'|H|D> = sign * <ab||ij>.
    pairs = [(p, q) for p in range(n_so) for q in range(p + 1, n_so)]
    for i, j in pairs:
        for a, b in pairs:
            if len({i, j, a, b}) != 4:
                continue
            val = v[a, b, i, j]
            if val == 0.0:
                continue
            bits_ann = (one << i) | (one << j)
            bits_cre = (one << a) | (one << b)
            sel = np.nonzero(((dets & bits_ann) == bits_ann)
                             & ((dets & bits_cre) == 0))[0]
            if len(sel) == 0:
                continue
            sub = dets[sel]
            _, targets, signs = apply_string(sub, [a, b], [i, j])
            tgt = sector.index_of(targets)
            rows.append(tgt)
            cols.append(sel)
            vals.append(signs * val)

    mat = sp.csr_matrix((np.concatenate(vals),
                         (np.concatenate(rows), np.concatenate(cols))),
                        shape=(dim, dim))
    return SectorOperator(mat, symmetry="hermitian")


def hamiltonian_matrix_from_strings(sector: DeterminantSector,
                                    h: SpinOrbitalHamiltonian) -> SectorOperator:
    """Hamiltonian assembled term by term from excitation strings.

    Independent (slow) construction path used to cross-check the
    Slater-Condon rules; intended for small sectors.
    """
    h_bare = _bare_one_electron(h)
    n_so = h.n_so
    mat = sp.csr_matrix((sector.dim, sector.dim))
    mat += h.e_core * sp.identity(sector.dim, format="csr")
    for p in range(n_so):
        for q in range(n_so):
            if h_bare[p, q] != 0.0:
                mat = mat + h_bare[p, q] * excitation_matrix(sector, [p], [q]).mat
    for p in range(n_so):
        for q in range(p + 1, n_so):
            for r in range(n_so):
                for s in range(r + 1, n_so):
                    val = h.v_anti[p, q, r, s]
                    if val != 0.0:
                        mat = mat + val * excitation_matrix(
                            sector, [p, q], [r, s]).mat
    return SectorOperator(mat, symmetry="hermitian")


def f_n_matrix(sector: DeterminantSector, h: SpinOrbitalHamiltonian) -> SectorOperator:
    """Diagonal one-body part of the normal-ordered Hamiltonian."""
    eps = np.diag(h.fock)
    diag = sector.occupancy() @ eps - eps[:h.n_occ].sum()
    return SectorOperator(sp.diags(diag).tocsr(), symmetry="hermitian")


def w_n_matrix(sector: DeterminantSector, h: SpinOrbitalHamiltonian,
               h_matrix: SectorOperator | None = None) -> SectorOperator:
    """Perturbation part of the normal-ordered Hamiltonian (H - e_hf - f_N)."""
    if h_matrix is None:
        h_matrix = hamiltonian_matrix(sector, h)
    mat = (h_matrix.mat - h.e_hf * sp.identity(sector.dim, format="csr")
           - f_n_matrix(sector, h).mat)
    return SectorOperator(mat, symmetry="hermitian")


def expm_apply(mat, v: SectorVector, term_tol=EXP_TERM_TOL) -> SectorVector:
    """exp(mat) @ v by scaled Taylor summation (no symmetry assumptions)."""
    norm1 = _one_norm(mat)
    steps = 1
    if norm1 > 1.0:
        steps = int(2 ** np.ceil(np.log2(norm1)))
    scaled = mat * (1.0 / steps)
    w = np.asarray(v, dtype=np.float64).copy()
    tol = term_tol * max(1.0, float(np.max(np.abs(w), initial=0.0)))
    for _ in range(steps):
        term = w.copy()
        acc = w.copy()
        for k in range(1, EXP_MAX_TERMS + 1):
            term = scaled @ term / k
            acc += term
            if np.max(np.abs(term), initial=0.0) <= tol:
                break
        else:
            raise ConvergenceError("exponential Taylor series did not settle")
        w = acc
    return w


def _one_norm(mat):
    col_sums = np.asarray(np.abs(mat).sum(axis=0)).ravel()
    return float(np.max(col_sums, initial=0.0))


def apply_exponential(gen: SectorOperator, v: SectorVector) -> SectorVector:
    """exp(gen) @ v for an anti-hermitian generator (unitary propagation)."""
    if not isinstance(gen, SectorOperator) or gen.symmetry != "anti-hermitian":
        raise ValueError("apply_exponential requires an anti-hermitian "
                         "SectorOperator")
    return expm_apply(gen.mat, v)
