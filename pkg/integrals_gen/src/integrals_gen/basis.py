"""STO-6G basis construction.

Six-Gaussian least-squares expansions of Slater 1s and (shared-exponent)
2s/2p functions at zeta = 1, scaled per element by the standard molecular
Slater exponents (Hehre/Stewart/Pople scheme: alpha -> alpha * zeta^2).
The zeta = 1 expansion parameters below match an independent refit of the
Slater overlaps to ~1e-6.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# zeta = 1 fits: exponents shared within a shell, coefficients per function
STO6G_1S_EXP = np.array([
    23.10303149, 4.235915534, 1.185056519,
    0.4070988982, 0.1580884151, 0.06510953954])
STO6G_1S_COEF = np.array([
    0.00916359628, 0.04936149294, 0.16853830490,
    0.37056279970, 0.41649152980, 0.13033408410])

STO6G_2SP_EXP = np.array([
    10.30869835, 2.040359519, 0.6341422177,
    0.2439773685, 0.1059836929, 0.0485690950])
STO6G_2S_COEF = np.array([
    -0.01325278809, -0.04699171014, -0.03378537151,
    0.25024178610, 0.59511725260, 0.24070617630])
STO6G_2P_COEF = np.array([
    0.00375969662, 0.03767936984, 0.17389674350,
    0.41803643470, 0.42585954770, 0.10170829550])

# standard molecular Slater exponents (zeta_1s, zeta_2sp)
SLATER_ZETA = {
    "H": (1.24, None),
    "Li": (2.69, 0.80),
    "Be": (3.68, 1.15),
    "B": (4.68, 1.45),
    "C": (5.67, 1.72),
    "N": (6.67, 1.95),
    "O": (7.66, 2.25),
    "F": (8.65, 2.55),
}

NUCLEAR_CHARGE = {"H": 1, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8, "F": 9}

ANGSTROM_TO_BOHR = 1.0 / 0.529177210903


@dataclass
class Shell:
    """Contracted shell: l = 0 (s) or 1 (p), primitive-normalized coefficients."""

    center: np.ndarray
    l: int
    exps: np.ndarray
    coefs: np.ndarray


def _primitive_norm(alpha, l):
    if l == 0:
        return (2.0 * alpha / np.pi) ** 0.75
    return (128.0 * alpha ** 5 / np.pi ** 3) ** 0.25


def _normalized_shell(center, l, exps, raw_coefs):
    # raw_coefs refer to unit-normalized primitives; renormalize the
    # contraction exactly, then fold the primitive norms in
    power = 1.5 if l == 0 else 2.5
    pair = (2.0 * np.sqrt(np.outer(exps, exps))
            / np.add.outer(exps, exps)) ** power
    self_overlap = raw_coefs @ pair @ raw_coefs
    coefs = raw_coefs / np.sqrt(self_overlap) * _primitive_norm(exps, l)
    return Shell(center, l, exps, coefs)


def build_shells(symbols, coords_bohr):
    """STO-6G shells for a molecule; coordinates in bohr."""
    shells = []
    for sym, xyz in zip(symbols, coords_bohr):
        if sym not in SLATER_ZETA:
            raise ValueError(f"no STO-6G parameters for element {sym!r}")
        zeta1, zeta2 = SLATER_ZETA[sym]
        center = np.asarray(xyz, dtype=np.float64)
        shells.append(_normalized_shell(center, 0, STO6G_1S_EXP * zeta1 ** 2,
                                        STO6G_1S_COEF))
        if zeta2 is not None:
            exps2 = STO6G_2SP_EXP * zeta2 ** 2
            shells.append(_normalized_shell(center, 0, exps2, STO6G_2S_COEF))
            shells.append(_normalized_shell(center, 1, exps2, STO6G_2P_COEF))
    return shells


def basis_functions(shells):
    """Expand shells into (shell_index, cartesian_component) basis functions.

    Components: s -> (0,0,0); p -> x, y, z unit powers.
    """
    funcs = []
    for idx, shell in enumerate(shells):
        if shell.l == 0:
            funcs.append((idx, (0, 0, 0)))
        else:
            funcs.append((idx, (1, 0, 0)))
            funcs.append((idx, (0, 1, 0)))
            funcs.append((idx, (0, 0, 1)))
    return funcs


def count_basis_functions(symbols):
    n = 0
    for sym in symbols:
        n += 1 if SLATER_ZETA[sym][1] is None else 5
    return n


def count_electrons(symbols, charge=0):
    return sum(NUCLEAR_CHARGE[s] for s in symbols) - charge
