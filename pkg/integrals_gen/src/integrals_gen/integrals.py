"""McMurchie-Davidson molecular integrals over contracted s/p Gaussians.

Hermite expansion coefficients are evaluated on the primitive-pair grid of
each shell pair (vectorized 6x6 arrays); Coulomb tensors come from the
Hermite-integral recursion with Boys functions evaluated by a stable
downward recursion.
"""

from __future__ import annotations

import numpy as np
from scipy.special import hyp1f1

from .basis import NUCLEAR_CHARGE, Shell, basis_functions


def boys(nmax, t):
    """F_0..F_nmax at (vectorized) argument t, downward recursion from hyp1f1."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty((nmax + 1,) + t.shape)
    out[nmax] = hyp1f1(nmax + 0.5, nmax + 1.5, -t) / (2 * nmax + 1)
    if nmax > 0:
        expt = np.exp(-t)
        for m in range(nmax, 0, -1):
            out[m - 1] = (2.0 * t * out[m] + expt) / (2 * m - 1)
    return out


class ShellPair:
    """Primitive-pair data for two shells, flattened to length-36 arrays."""

    def __init__(self, sh1: Shell, sh2: Shell):
        a = np.repeat(sh1.exps, len(sh2.exps))
        b = np.tile(sh2.exps, len(sh1.exps))
        self.a, self.b = a, b
        self.p = a + b
        self.q = a * b / self.p
        self.coef = np.repeat(sh1.coefs, len(sh2.coefs)) * np.tile(
            sh2.coefs, len(sh1.coefs))
        self.ab = sh1.center - sh2.center
        self.centers = (sh1.center, sh2.center)
        self.pc = (a[:, None] * sh1.center[None, :]
                   + b[:, None] * sh2.center[None, :]) / self.p[:, None]
        self._e_cache = {}

    def hermite(self, i, j, t, dim):
        """E_t^{ij} along one dimension, array over primitive pairs."""
        key = (i, j, t, dim)
        if key in self._e_cache:
            return self._e_cache[key]
        qx = self.ab[dim]
        if t < 0 or t > i + j or i < 0 or j < 0:
            val = np.zeros_like(self.p)
        elif i == j == t == 0:
            val = np.exp(-self.q * qx * qx)
        elif j == 0:
            val = (self.hermite(i - 1, j, t - 1, dim) / (2.0 * self.p)
                   - (self.q * qx / self.a) * self.hermite(i - 1, j, t, dim)
                   + (t + 1) * self.hermite(i - 1, j, t + 1, dim))
        else:
            val = (self.hermite(i, j - 1, t - 1, dim) / (2.0 * self.p)
                   + (self.q * qx / self.b) * self.hermite(i, j - 1, t, dim)
                   + (t + 1) * self.hermite(i, j - 1, t + 1, dim))
        self._e_cache[key] = val
        return val

    def overlap_1d(self, i, j, dim):
        return self.hermite(i, j, 0, dim) * np.sqrt(np.pi / self.p)

    def overlap(self, ang1, ang2):
        val = np.ones_like(self.p)
        for dim in range(3):
            val = val * self.overlap_1d(ang1[dim], ang2[dim], dim)
        return float(self.coef @ val)

    def kinetic(self, ang1, ang2):
        s = [self.overlap_1d(ang1[d], ang2[d], d) for d in range(3)]
        total = np.zeros_like(self.p)
        for d in range(3):
            j = ang2[d]
            term = self.b * (2 * j + 1) * s[d]
            term = term - 2.0 * self.b ** 2 * self.overlap_1d(ang1[d], j + 2, d)
            if j >= 2:
                term = term - 0.5 * j * (j - 1) * self.overlap_1d(ang1[d], j - 2, d)
            others = np.ones_like(self.p)
            for o in range(3):
                if o != d:
                    others = others * s[o]
            total = total + term * others
        return float(self.coef @ total)


def _hermite_coulomb_table(lmax, rho, pc_vec):
    """R^0_{tuv} arrays for t+u+v <= lmax; pc_vec shape (..., 3)."""
    t_arg = rho * np.sum(pc_vec * pc_vec, axis=-1)
    fb = boys(lmax, t_arg)
    cache = {}

    def r(t, u, v, n):
        if t < 0 or u < 0 or v < 0:
            return 0.0
        key = (t, u, v, n)
        if key in cache:
            return cache[key]
        if t == u == v == 0:
            val = (-2.0 * rho) ** n * fb[n]
        elif t > 0:
            val = ((t - 1) * r(t - 2, u, v, n + 1)
                   + pc_vec[..., 0] * r(t - 1, u, v, n + 1))
        elif u > 0:
            val = ((u - 1) * r(t, u - 2, v, n + 1)
                   + pc_vec[..., 1] * r(t, u - 1, v, n + 1))
        else:
            val = ((v - 1) * r(t, u, v - 2, n + 1)
                   + pc_vec[..., 2] * r(t, u, v - 1, n + 1))
        cache[key] = val
        return val

    return r


def overlap_matrix(shells):
    funcs = basis_functions(shells)
    n = len(funcs)
    pairs = {}
    out = np.zeros((n, n))
    for mu, (si, ai) in enumerate(funcs):
        for nu, (sj, aj) in enumerate(funcs):
            if nu > mu:
                continue
            pair = pairs.setdefault((si, sj), ShellPair(shells[si], shells[sj]))
            out[mu, nu] = out[nu, mu] = pair.overlap(ai, aj)
    return out


def kinetic_matrix(shells):
    funcs = basis_functions(shells)
    n = len(funcs)
    pairs = {}
    out = np.zeros((n, n))
    for mu, (si, ai) in enumerate(funcs):
        for nu, (sj, aj) in enumerate(funcs):
            if nu > mu:
                continue
            pair = pairs.setdefault((si, sj), ShellPair(shells[si], shells[sj]))
            out[mu, nu] = out[nu, mu] = pair.kinetic(ai, aj)
    return out


def nuclear_matrix(shells, symbols, coords_bohr):
    funcs = basis_functions(shells)
    n = len(funcs)
    out = np.zeros((n, n))
    charges = [NUCLEAR_CHARGE[s] for s in symbols]
    pair_cache = {}
    for si in range(len(shells)):
        for sj in range(si + 1):
            pair = pair_cache.setdefault(
                (si, sj), ShellPair(shells[si], shells[sj]))
            lmax = shells[si].l + shells[sj].l
            tables = []
            for charge, center in zip(charges, coords_bohr):
                pc = pair.pc - np.asarray(center)[None, :]
                tables.append((charge, _hermite_coulomb_table(
                    lmax, pair.p, pc)))
            for mu, (fsi, ai) in enumerate(funcs):
                if fsi != si:
                    continue
                for nu, (fsj, aj) in enumerate(funcs):
                    if fsj != sj or nu > mu:
                        continue
                    val = np.zeros_like(pair.p)
                    for charge, table in tables:
                        acc = np.zeros_like(pair.p)
                        for t in range(ai[0] + aj[0] + 1):
                            ex = pair.hermite(ai[0], aj[0], t, 0)
                            for u in range(ai[1] + aj[1] + 1):
                                ey = pair.hermite(ai[1], aj[1], u, 1)
                                for v in range(ai[2] + aj[2] + 1):
                                    ez = pair.hermite(ai[2], aj[2], v, 2)
                                    acc = acc + ex * ey * ez * table(t, u, v, 0)
                        val = val - charge * acc
                    val = val * (2.0 * np.pi / pair.p)
                    out[mu, nu] = out[nu, mu] = float(pair.coef @ val)
    return out


def eri_tensor(shells):
    """Full (pq|rs) tensor in chemists' notation (8-fold symmetric)."""
    funcs = basis_functions(shells)
    n = len(funcs)
    g = np.zeros((n, n, n, n))
    n_sh = len(shells)
    pairs = {}
    func_by_shell = {}
    for idx, (si, ang) in enumerate(funcs):
        func_by_shell.setdefault(si, []).append((idx, ang))

    for si in range(n_sh):
        for sj in range(si + 1):
            bra = pairs.setdefault((si, sj), ShellPair(shells[si], shells[sj]))
            for sk in range(si + 1):
                for sl in range(sk + 1):
                    if (sk, sl) > (si, sj):
                        continue
                    ket = pairs.setdefault(
                        (sk, sl), ShellPair(shells[sk], shells[sl]))
                    lmax = (shells[si].l + shells[sj].l
                            + shells[sk].l + shells[sl].l)
                    rho = np.multiply.outer(bra.p, ket.p) / np.add.outer(
                        bra.p, ket.p)
                    pq = bra.pc[:, None, :] - ket.pc[None, :, :]
                    table = _hermite_coulomb_table(lmax, rho, pq)
                    pref = (2.0 * np.pi ** 2.5
                            / (np.multiply.outer(bra.p, ket.p)
                               * np.sqrt(np.add.outer(bra.p, ket.p))))
                    wb = np.outer(bra.coef, ket.coef) * pref
                    for mu, ai in func_by_shell[si]:
                        for nu, aj in func_by_shell[sj]:
                            for lam, ak in func_by_shell[sk]:
                                for sig, al in func_by_shell[sl]:
                                    val = _contract_eri(
                                        bra, ket, ai, aj, ak, al, table, wb)
                                    _fill_eri(g, mu, nu, lam, sig, val)
    return g


def _contract_eri(bra, ket, ai, aj, ak, al, table, wb):
    acc = 0.0
    for t in range(ai[0] + aj[0] + 1):
        e1x = bra.hermite(ai[0], aj[0], t, 0)
        for u in range(ai[1] + aj[1] + 1):
            e1y = bra.hermite(ai[1], aj[1], u, 1)
            for v in range(ai[2] + aj[2] + 1):
                e1z = bra.hermite(ai[2], aj[2], v, 2)
                e_bra = e1x * e1y * e1z
                for tt in range(ak[0] + al[0] + 1):
                    e2x = ket.hermite(ak[0], al[0], tt, 0)
                    for uu in range(ak[1] + al[1] + 1):
                        e2y = ket.hermite(ak[1], al[1], uu, 1)
                        for vv in range(ak[2] + al[2] + 1):
                            e2z = ket.hermite(ak[2], al[2], vv, 2)
                            sign = (-1.0) ** (tt + uu + vv)
                            e_ket = e2x * e2y * e2z
                            rterm = table(t + tt, u + uu, v + vv, 0)
                            acc += sign * float(
                                (e_bra[:, None] * rterm * e_ket[None, :]
                                 * wb).sum())
    return acc


def _fill_eri(g, p, q, r, s, val):
    g[p, q, r, s] = g[q, p, r, s] = g[p, q, s, r] = g[q, p, s, r] = val
    g[r, s, p, q] = g[s, r, p, q] = g[r, s, q, p] = g[s, r, q, p] = val


def nuclear_repulsion(symbols, coords_bohr):
    e = 0.0
    for i in range(len(symbols)):
        for j in range(i):
            r = np.linalg.norm(np.asarray(coords_bohr[i])
                               - np.asarray(coords_bohr[j]))
            e += NUCLEAR_CHARGE[symbols[i]] * NUCLEAR_CHARGE[symbols[j]] / r
    return e
