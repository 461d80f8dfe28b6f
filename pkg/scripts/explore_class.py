"""Bounded breadth-first exploration of a mutation class, written as DOT plus a node table."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from sforge.algebra import build_algebra
from sforge.examples import NakayamaParams, WSAParams, symmetric_nakayama, weighted_surface_example
from sforge.mutation import explore_mutation_class


@dataclass
class Config:
    instance: str = "wsa"
    depth: int = 2
    vertices: tuple[int, ...] | None = (1, 5)
    node_cap: int = 32
    threads: int = 1


def load(name):
    if name == "wsa":
        return weighted_surface_example(WSAParams())
    if name == "wsa_b1":
        return weighted_surface_example(WSAParams(b=1))
    if name.startswith("nakayama"):
        _, n, ell = name.split("_")
        return symmetric_nakayama(NakayamaParams(int(n), int(ell)))
    raise SystemExit(f"unknown instance {name}")


def run(cfg: Config):
    alg = build_algebra(load(cfg.instance))
    res = explore_mutation_class(alg, cfg.depth, list(cfg.vertices) if cfg.vertices else None,
                                 node_cap=cfg.node_cap, threads=cfg.threads)
    for row in res.table():
        print(f"// {row['node']} dim {row['dim']} loewy {row['loewy_length']} cartan {row['cartan']}")
    print(f"// {len(res.nodes)} classes, {len(res.edges)} edges, truncated: {res.truncated}")
    return res


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instance", default="wsa", help="wsa, wsa_b1 or nakayama_<n>_<ell>")
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--vertices", type=int, nargs="*")
    ap.add_argument("--node-cap", type=int, default=32)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("-o", "--output", help="write DOT here")
    a = ap.parse_args()
    res = run(Config(a.instance, a.depth, tuple(a.vertices) if a.vertices else None, a.node_cap, a.threads))
    dot = res.to_dot()
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(dot)
    else:
        print(dot, end="")


if __name__ == "__main__":
    main()
