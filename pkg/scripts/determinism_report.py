"""Print the verification, info and exploration reports of the bundled instances.

The output is meant to be compared byte for byte across runs and thread
counts (set SFORGE_THREADS before running).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys

from sforge import cli
from sforge.examples import NakayamaParams, WSAParams, symmetric_nakayama, weighted_surface_example


def bundled():
    return {
        "dual_numbers": symmetric_nakayama(NakayamaParams(1, 2)),
        "nakayama_2_3": symmetric_nakayama(NakayamaParams(2, 3)),
        "wsa": weighted_surface_example(WSAParams()),
        "wsa_b1": weighted_surface_example(WSAParams(b=1)),
    }


def reports(names=None) -> dict[str, str]:
    out = {}
    for name, pres in bundled().items():
        if names and name not in names:
            continue
        out[f"{name}/info"] = cli.cmd_info(pres, periods=True)[0]
        for v in pres.quiver.vertices:
            text, code = cli.cmd_verify(pres, v)
            out[f"{name}/verify/{v}"] = f"{code}\n{text}"
        out[f"{name}/explore"] = cli.cmd_explore(pres, 1)[0]
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", nargs="*", help="restrict to these instance names")
    ap.add_argument("--digest", action="store_true", help="print one sha256 per report instead of the text")
    args = ap.parse_args(argv)
    reps = reports(args.only)
    if args.digest:
        reps = {k: hashlib.sha256(v.encode("utf-8")).hexdigest() for k, v in reps.items()}
    sys.stdout.write(json.dumps(reps, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
