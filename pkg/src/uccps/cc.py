"""Projective spin-orbital CCD and CCSD with DIIS acceleration.

The amplitude equations follow the standard intermediate formulation, but
keep the full Fock matrix inside the intermediates so that the computed
residuals equal the similarity-transform projections <Phi_mu|e^-T H e^T|0>
exactly.  Iterations are Jacobi steps t += r/D accelerated by DIIS over the
amplitude vector with the residual as error vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import Amplitudes
from .hamiltonian import SpinOrbitalHamiltonian, denominators

einsum = np.einsum


@dataclass
class CcConfig:
    residual_tol: float = 1e-8
    max_iter: int = 200
    diis_depth: int = 8

    def __post_init__(self):
        if self.residual_tol <= 0 or self.max_iter <= 0 or self.diis_depth <= 0:
            raise ValueError("CcConfig values must be positive")


@dataclass
class CcResult:
    method: str
    e_corr: float
    amplitudes: Amplitudes
    converged: bool
    iterations: int
    residual_norm: float


class Diis:
    """Direct inversion in the iterative subspace over amplitude vectors."""

    def __init__(self, depth=8, start=2):
        self.depth = depth
        self.start = start
        self.vectors = []
        self.errors = []

    def extrapolate(self, vec, err):
        self.vectors.append(vec)
        self.errors.append(err)
        if len(self.vectors) > self.depth:
            self.vectors.pop(0)
            self.errors.pop(0)
        n = len(self.vectors)
        if n < self.start:
            return vec
        b = np.empty((n + 1, n + 1))
        b[:n, :n] = np.array([[ei @ ej for ej in self.errors]
                              for ei in self.errors])
        b[n, :] = -1.0
        b[:, n] = -1.0
        b[n, n] = 0.0
        rhs = np.zeros(n + 1)
        rhs[n] = -1.0
        try:
            coeff = np.linalg.solve(b, rhs)[:n]
        except np.linalg.LinAlgError:
            coeff, *_ = np.linalg.lstsq(b, rhs, rcond=None)
            coeff = coeff[:n]
        return sum(c * v for c, v in zip(coeff, self.vectors))


def cc_energy(h: SpinOrbitalHamiltonian, t1, t2) -> float:
    o, v = h.occ, h.virt
    fov = h.fock[o, v]
    voovv = h.v_anti[o, o, v, v]
    return float(einsum("ia,ia->", fov, t1)
                 + 0.25 * einsum("ijab,ijab->", voovv, t2)
                 + 0.5 * einsum("ijab,ia,jb->", voovv, t1, t1))


def cc_residuals(h: SpinOrbitalHamiltonian, t1, t2):
    """Full singles/doubles residuals <Phi_mu|e^-T H e^T|0>."""
    o, v = h.occ, h.virt
    f = h.fock
    w = h.v_anti
    fov = f[o, v]

    tau_t = t2 + 0.5 * (einsum("ia,jb->ijab", t1, t1)
                        - einsum("ib,ja->ijab", t1, t1))
    tau = t2 + (einsum("ia,jb->ijab", t1, t1)
                - einsum("ib,ja->ijab", t1, t1))

    f_ae = (f[v, v] - 0.5 * einsum("me,ma->ae", fov, t1)
            + einsum("mf,mafe->ae", t1, w[o, v, v, v])
            - 0.5 * einsum("mnaf,mnef->ae", tau_t, w[o, o, v, v]))
    f_mi = (f[o, o] + 0.5 * einsum("ie,me->mi", t1, fov)
            + einsum("ne,mnie->mi", t1, w[o, o, o, v])
            + 0.5 * einsum("inef,mnef->mi", tau_t, w[o, o, v, v]))
    f_me = fov + einsum("nf,mnef->me", t1, w[o, o, v, v])

    w_mnij = w[o, o, o, o] + 0.25 * einsum("ijef,mnef->mnij", tau, w[o, o, v, v])
    tmp = einsum("je,mnie->mnij", t1, w[o, o, o, v])
    w_mnij = w_mnij + tmp - tmp.transpose(0, 1, 3, 2)

    w_abef = w[v, v, v, v] + 0.25 * einsum("mnab,mnef->abef", tau, w[o, o, v, v])
    tmp = einsum("mb,amef->abef", t1, w[v, o, v, v])
    w_abef = w_abef - (tmp - tmp.transpose(1, 0, 2, 3))

    w_mbej = (w[o, v, v, o]
              + einsum("jf,mbef->mbej", t1, w[o, v, v, v])
              - einsum("nb,mnej->mbej", t1, w[o, o, v, o])
              - einsum("jnfb,mnef->mbej",
                       0.5 * t2 + einsum("jf,nb->jnfb", t1, t1),
                       w[o, o, v, v]))

    r1 = (fov
          + einsum("ie,ae->ia", t1, f_ae)
          - einsum("ma,mi->ia", t1, f_mi)
          + einsum("imae,me->ia", t2, f_me)
          - einsum("nf,naif->ia", t1, w[o, v, o, v])
          - 0.5 * einsum("imef,maef->ia", t2, w[o, v, v, v])
          - 0.5 * einsum("mnae,nmei->ia", t2, w[o, o, v, o]))

    r2 = w[o, o, v, v].copy()
    tmp = einsum("ijae,be->ijab",
                 t2, f_ae - 0.5 * einsum("mb,me->be", t1, f_me))
    r2 += tmp - tmp.transpose(0, 1, 3, 2)
    tmp = einsum("imab,mj->ijab",
                 t2, f_mi + 0.5 * einsum("je,me->mj", t1, f_me))
    r2 -= tmp - tmp.transpose(1, 0, 2, 3)
    r2 += 0.5 * einsum("mnab,mnij->ijab", tau, w_mnij)
    r2 += 0.5 * einsum("ijef,abef->ijab", tau, w_abef)
    tmp = (einsum("imae,mbej->ijab", t2, w_mbej)
           - einsum("ie,ma,mbej->ijab", t1, t1, w[o, v, v, o]))
    tmp = tmp - tmp.transpose(1, 0, 2, 3)
    r2 += tmp - tmp.transpose(0, 1, 3, 2)
    tmp = einsum("ie,abej->ijab", t1, w[v, v, v, o])
    r2 += tmp - tmp.transpose(1, 0, 2, 3)
    tmp = einsum("ma,mbij->ijab", t1, w[o, v, o, o])
    r2 -= tmp - tmp.transpose(0, 1, 3, 2)
    return r1, r2


def _solve(h: SpinOrbitalHamiltonian, cfg: CcConfig, with_singles: bool,
           method: str) -> CcResult:
    d = denominators(h)
    no, nv = h.n_occ, h.n_virt
    t1 = np.zeros((no, nv))
    t2 = np.zeros((no, no, nv, nv))
    diis = Diis(depth=cfg.diis_depth)
    res_norm = np.inf
    converged = False
    iterations = 0
    for iterations in range(cfg.max_iter + 1):
        r1, r2 = cc_residuals(h, t1, t2)
        if not with_singles:
            r1 = np.zeros_like(r1)
        res_norm = max(float(np.max(np.abs(r1), initial=0.0)),
                       float(np.max(np.abs(r2), initial=0.0)))
        if not np.isfinite(res_norm):
            break
        if res_norm < cfg.residual_tol:
            converged = True
            break
        t1_new = t1 + (r1 / d.d1 if with_singles else 0.0)
        t2_new = t2 + r2 / d.d2
        vec = diis.extrapolate(
            np.concatenate([t1_new.ravel(), t2_new.ravel()]),
            np.concatenate([r1.ravel(), r2.ravel()]))
        t1 = vec[:no * nv].reshape(no, nv)
        t2 = vec[no * nv:].reshape(no, no, nv, nv)
    amps = Amplitudes(t1=t1, t2=t2)
    return CcResult(method=method, e_corr=cc_energy(h, t1, t2),
                    amplitudes=amps, converged=converged,
                    iterations=iterations, residual_norm=res_norm)


def ccd_solve(h: SpinOrbitalHamiltonian, cfg: CcConfig | None = None) -> CcResult:
    """Coupled-cluster doubles (t1 frozen at zero)."""
    return _solve(h, cfg or CcConfig(), with_singles=False, method="CCD")


def ccsd_solve(h: SpinOrbitalHamiltonian, cfg: CcConfig | None = None) -> CcResult:
    """Coupled-cluster singles and doubles."""
    return _solve(h, cfg or CcConfig(), with_singles=True, method="CCSD")
