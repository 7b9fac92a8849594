"""FCIDUMP reading/writing and frozen-core folding.

Integrals are stored over spatial molecular orbitals: ``h[p, q]`` is the
one-electron matrix, ``g[p, q, r, s]`` the two-electron tensor in chemists'
(pq|rs) convention, both in Hartree.  Real orbitals are assumed throughout,
so ``g`` carries the full 8-fold permutational symmetry.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import FcidumpError

SYMMETRY_TOL = 1e-12
DUPLICATE_TOL = 1e-10
WRITE_THRESHOLD = 1e-12

_END_MARKERS = ("&END", "/END", "/")


@dataclass(frozen=True)
class SpatialIntegrals:
    """One- and two-electron integrals over spatial orbitals plus core energy."""

    n_orb: int
    n_electrons: int
    ms2: int
    e_core: float
    h: np.ndarray
    g: np.ndarray
    orbital_energies: np.ndarray | None = None

    def validate(self):
        """Check the type invariants; raises FcidumpError on violation."""
        n = self.n_orb
        if self.h.shape != (n, n) or self.g.shape != (n, n, n, n):
            raise FcidumpError("integral tensor shapes do not match n_orb")
        if not 0 < self.n_electrons <= 2 * n:
            raise FcidumpError(
                f"electron count {self.n_electrons} invalid for {n} orbitals")
        if np.max(np.abs(self.h - self.h.T), initial=0.0) > SYMMETRY_TOL:
            raise FcidumpError("one-electron integrals not symmetric")
        g = self.g
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(g - g.transpose(perm)), initial=0.0) > SYMMETRY_TOL:
                raise FcidumpError("two-electron integrals lack 8-fold symmetry")
        return self


def _canonical_two_electron(i, j, k, l):
    """Representative of the 8-fold symmetry class of (ij|kl)."""
    ij = (i, j) if i >= j else (j, i)
    kl = (k, l) if k >= l else (l, k)
    return (ij, kl) if ij >= kl else (kl, ij)


def parse_fcidump(source) -> SpatialIntegrals:
    """Parse FCIDUMP text (string or file-like) into SpatialIntegrals.

    Index patterns on body lines "value i j k l" (1-based):
    all nonzero -> (ij|kl); k = l = 0 -> h[i, j]; j = k = l = 0 ->
    orbital energy of i; all zero -> scalar core energy.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = source.read().splitlines()

    header_tokens = []
    body_start = None
    for lineno, line in enumerate(lines):
        stripped = line.strip()
        if lineno == 0:
            if not stripped.upper().startswith("&FCI"):
                raise FcidumpError("line 1: missing &FCI namelist header")
            stripped = stripped[4:]
        tokens = stripped.replace(",", " ").split()
        done = False
        kept = []
        for tok in tokens:
            if tok.upper() in _END_MARKERS:
                done = True
                break
            kept.append(tok)
        header_tokens.extend(kept)
        if done:
            body_start = lineno + 1
            break
    if body_start is None:
        raise FcidumpError("namelist not terminated by &END")

    # Re-join so values split from their key ("NORB = 4") still pair up.
    header = {}
    text = " ".join(header_tokens)
    text = text.replace("=", " = ")
    toks = text.split()
    i = 0
    while i < len(toks):
        if i + 1 < len(toks) and toks[i + 1] == "=":
            key = toks[i].upper()
            vals = []
            i += 2
            while i < len(toks) and (i + 1 >= len(toks) or toks[i + 1] != "="):
                if i + 1 < len(toks) and toks[i + 1] == "=":
                    break
                vals.append(toks[i])
                i += 1
            header[key] = vals
        else:
            i += 1

    def int_key(name):
        if name not in header or not header[name]:
            raise FcidumpError(f"namelist missing {name}")
        try:
            return int(header[name][0])
        except ValueError as exc:
            raise FcidumpError(f"namelist {name} not an integer") from exc

    n_orb = int_key("NORB")
    n_electrons = int_key("NELEC")
    ms2 = int_key("MS2") if "MS2" in header else 0
    if n_orb <= 0:
        raise FcidumpError("NORB must be positive")

    h = np.zeros((n_orb, n_orb))
    g = np.zeros((n_orb, n_orb, n_orb, n_orb))
    e_core = 0.0
    orb_e = np.full(n_orb, np.nan)
    seen = {}

    def record(key, value, lineno):
        if key in seen:
            old_value, old_line = seen[key]
            if abs(old_value - value) > DUPLICATE_TOL:
                raise FcidumpError(
                    f"line {lineno}: entry {key} = {value:.12g} conflicts with "
                    f"line {old_line} ({old_value:.12g})")
        else:
            seen[key] = (value, lineno)

    for offset, line in enumerate(lines[body_start:]):
        lineno = body_start + offset + 1
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 5:
            raise FcidumpError(f"line {lineno}: expected 'value i j k l'")
        try:
            value = float(fields[0])
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError as exc:
            raise FcidumpError(f"line {lineno}: unparseable fields") from exc
        for idx in (i, j, k, l):
            if not 0 <= idx <= n_orb:
                raise FcidumpError(
                    f"line {lineno}: orbital index {idx} outside [0, {n_orb}]")
        if i and j and k and l:
            record(("g",) + _canonical_two_electron(i, j, k, l), value, lineno)
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in ((a, b, c, d), (b, a, c, d), (a, b, d, c),
                               (b, a, d, c), (c, d, a, b), (d, c, a, b),
                               (c, d, b, a), (d, c, b, a)):
                g[p, q, r, s] = value
        elif i and j and k == 0 and l == 0:
            record(("h", max(i, j), min(i, j)), value, lineno)
            h[i - 1, j - 1] = value
            h[j - 1, i - 1] = value
        elif i and j == 0 and k == 0 and l == 0:
            record(("eps", i), value, lineno)
            orb_e[i - 1] = value
        elif i == 0 and j == 0 and k == 0 and l == 0:
            record(("e_core",), value, lineno)
            e_core = value
        else:
            raise FcidumpError(f"line {lineno}: unrecognized index pattern "
                               f"({i} {j} {k} {l})")

    energies = None if np.isnan(orb_e).all() else np.where(np.isnan(orb_e), 0.0, orb_e)
    return SpatialIntegrals(n_orb=n_orb, n_electrons=n_electrons, ms2=ms2,
                            e_core=e_core, h=h, g=g,
                            orbital_energies=energies).validate()


def write_fcidump(ints: SpatialIntegrals) -> str:
    """Emit canonical FCIDUMP text (unique permutation representatives only)."""
    n = ints.n_orb
    out = [f" &FCI NORB={n},NELEC={ints.n_electrons},MS2={ints.ms2},"]
    out.append("  ORBSYM=" + "1," * n)
    out.append("  ISYM=1,")
    out.append(" &END")
    fmt = " {0:> .16E} {1:4d} {2:4d} {3:4d} {4:4d}"
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    val = ints.g[i, j, k, l]
                    if abs(val) > WRITE_THRESHOLD:
                        out.append(fmt.format(val, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            if abs(ints.h[i, j]) > WRITE_THRESHOLD:
                out.append(fmt.format(ints.h[i, j], i + 1, j + 1, 0, 0))
    if ints.orbital_energies is not None:
        for i, eps in enumerate(ints.orbital_energies):
            out.append(fmt.format(eps, i + 1, 0, 0, 0))
    out.append(fmt.format(ints.e_core, 0, 0, 0, 0))
    return "\n".join(out) + "\n"


def load_fcidump(path) -> SpatialIntegrals:
    with open(path, "r", encoding="utf-8") as f:
        return parse_fcidump(f)


def save_fcidump(ints: SpatialIntegrals, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_fcidump(ints))


def freeze_core(ints: SpatialIntegrals, n_frozen: int) -> SpatialIntegrals:
    """Fold the first n_frozen (doubly occupied) orbitals into an effective
    valence-only integral set.

    The frozen orbitals contribute a scalar shift and a mean-field potential:
    e_core' = e_core + sum_c 2 h[c,c] + sum_cd [2 (cc|dd) - (cd|dc)] and
    h'[p,q] = h[p,q] + sum_c [2 (pq|cc) - (pc|cq)].
    """
    if n_frozen == 0:
        return ints
    if n_frozen < 0 or n_frozen >= ints.n_orb:
        raise ValueError(f"cannot freeze {n_frozen} of {ints.n_orb} orbitals")
    if 2 * n_frozen > ints.n_electrons:
        raise ValueError(
            f"cannot freeze {n_frozen} doubly occupied orbitals with "
            f"{ints.n_electrons} electrons")
    c = slice(0, n_frozen)
    a = slice(n_frozen, ints.n_orb)
    e_core = (ints.e_core
              + 2.0 * np.trace(ints.h[c, c])
              + 2.0 * np.einsum("ccdd->", ints.g[c, c, c, c])
              - np.einsum("cddc->", ints.g[c, c, c, c]))
    h_eff = (ints.h[a, a]
             + 2.0 * np.einsum("pqcc->pq", ints.g[a, a, c, c])
             - np.einsum("pccq->pq", ints.g[a, c, c, a]))
    energies = None
    if ints.orbital_energies is not None:
        energies = ints.orbital_energies[n_frozen:].copy()
    return SpatialIntegrals(
        n_orb=ints.n_orb - n_frozen,
        n_electrons=ints.n_electrons - 2 * n_frozen,
        ms2=ints.ms2,
        e_core=float(e_core),
        h=h_eff.copy(),
        g=ints.g[a, a, a, a].copy(),
        orbital_energies=energies,
    ).validate()
