"""Sweep the cyclic Nakayama algebras: symmetry, simple periods and the verify verdict per vertex."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from sforge import cli
from sforge.algebra import build_algebra
from sforge.examples import NakayamaParams, symmetric_nakayama
from sforge.representations import period_of_simple


@dataclass
class Config:
    max_n: int = 3
    max_ell: int = 5
    prime: int = 5


def run(cfg: Config):
    print(f"{'n':>2} {'ell':>3} {'dim':>4} {'symmetric':>9} {'periods':<14} verdicts")
    for n in range(1, cfg.max_n + 1):
        for ell in range(2, cfg.max_ell + 1):
            pres = symmetric_nakayama(NakayamaParams(n, ell, cfg.prime))
            alg = build_algebra(pres)
            sym = alg.check_symmetric() is not None
            periods = [period_of_simple(alg, i) for i in alg.vertices]
            verdicts = []
            if sym:
                for v in alg.vertices:
                    rep, _ = cli.verify(pres, v)
                    verdicts.append(rep.verdict["verdict"])
            print(f"{n:>2} {ell:>3} {alg.dim:>4} {str(sym):>9} {str(periods):<14} {' '.join(verdicts) or '-'}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--max-ell", type=int, default=5)
    ap.add_argument("--prime", type=int, default=5)
    a = ap.parse_args()
    run(Config(a.max_n, a.max_ell, a.prime))


if __name__ == "__main__":
    main()
