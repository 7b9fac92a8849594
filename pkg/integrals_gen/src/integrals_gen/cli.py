"""Command line front end: generate FCIDUMP files from geometry presets."""

from __future__ import annotations

import argparse
import sys

from .generate import generate_fcidump
from .molecules import GEOMETRY_DIR, get_preset


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="integrals-gen",
        description="Generate STO-6G RHF FCIDUMP files for preset molecules")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate one FCIDUMP + metadata sidecar")
    gen.add_argument("--molecule", required=True)
    gen.add_argument("--tag", required=True, help="geometry tag of the preset")
    gen.add_argument("--out", required=True, help="output FCIDUMP path")
    gen.add_argument("--level-shift", type=float, default=0.0)

    sub.add_parser("list", help="list available geometry presets")

    args = parser.parse_args(argv)
    if args.command == "list":
        for path in sorted(GEOMETRY_DIR.glob("*.json")):
            print(path.stem.replace("__", "  "))
        return 0

    spec = get_preset(args.molecule, args.tag)
    scf = generate_fcidump(spec, args.out, level_shift=args.level_shift)
    print(f"{spec.name}/{spec.geometry_tag}: E_SCF = {scf.energy:.10f} "
          f"({scf.iterations} iterations)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
