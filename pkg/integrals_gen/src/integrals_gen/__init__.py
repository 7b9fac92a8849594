"""STO-6G RHF integral generator emitting FCIDUMP files."""

from .basis import build_shells
from .generate import generate_fcidump, run_rhf, write_fcidump_file
from .molecules import (MoleculeSpec, diatomic, get_preset, hydrogen_chain,
                        load_preset, save_preset, water)
from .rhf import RhfResult, ScfError, rhf

__all__ = [
    "build_shells", "generate_fcidump", "run_rhf", "write_fcidump_file",
    "MoleculeSpec", "diatomic", "get_preset", "hydrogen_chain",
    "load_preset", "save_preset", "water", "RhfResult", "ScfError", "rhf",
]
