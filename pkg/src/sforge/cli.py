"""Command-line frontend.

Exit codes: 0 success, 2 bad input or arguments, 3 non-split endomorphism
ring, 4 inconclusive, 5 distinct.  ``SFORGE_THREADS`` sets the worker count
for the parallel parts; ``SFORGE_CACHE_DIR`` enables the result cache.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .algebra import AlgebraError, AlgebraPresentation, Inconclusive, build_algebra
from .endo import NonSplitEndomorphism, present
from .equivalence import (
    HypothesisNotMet,
    Inconclusive as InconclusiveVerdict,
    IsoBudget,
    Isomorphic,
    PhiVerificationFailed,
    construct_phi,
    iso_search,
    socle_equivalence_search,
)
from .examples import (MetadataMissing, NakayamaParams, WSAParams, classify_loops, symmetric_nakayama,
                       weighted_surface_example)
from .mutation import build_addq_resolution, explore_mutation_class, from_projective_resolution, mutate
from .complexes import is_tilting
from .representations import period_of_simple

EXIT_OK, EXIT_INPUT, EXIT_NONSPLIT, EXIT_INCONCLUSIVE, EXIT_DISTINCT = 0, 2, 3, 4, 5


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# plumbing


def threads() -> int:
    raw = os.environ.get("SFORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"SFORGE_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise InputError(f"SFORGE_THREADS must be a positive integer, got {raw!r}")
    return n


def load_presentation(path) -> AlgebraPresentation:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    try:
        return AlgebraPresentation.from_json(obj)
    except (AlgebraError, ValueError) as exc:
        raise InputError(f"{path}: {exc}")


def content_hash(pres: AlgebraPresentation) -> str:
    return hashlib.sha256(pres.canonical().encode("utf-8")).hexdigest()


def _cache_path(pres, command, flags):
    root = os.environ.get("SFORGE_CACHE_DIR")
    if not root:
        return None
    key = json.dumps({"presentation": pres.canonical(), "command": command, "flags": flags},
                     sort_keys=True, separators=(",", ":"))
    return Path(root) / f"{hashlib.sha256(key.encode('utf-8')).hexdigest()}.json"


def cached(pres, command, flags, compute):
    """Run ``compute() -> (text, code)`` through the on-disk cache when enabled."""
    path = _cache_path(pres, command, flags)
    if path is not None and path.exists():
        obj = json.loads(path.read_text(encoding="utf-8"))
        return obj["output"], obj["exit"]
    text, code = compute()
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"output": text, "exit": code}), encoding="utf-8")
        tmp.replace(path)
    return text, code


def _build(pres):
    try:
        return build_algebra(pres)
    except AlgebraError as exc:
        raise InputError(str(exc))


def _check_vertex(alg, i):
    if i not in alg.vertices:
        raise InputError(f"vertex {i} is out of range 1..{alg.n}")


def _require_symmetric(alg, assume):
    if assume:
        return
    if alg.check_symmetric() is None:
        raise InputError("the algebra is not symmetric (pass --assume-symmetric to skip this check)")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_info(pres, periods=False):
    alg = _build(pres)
    try:
        form = alg.check_symmetric()
        sym = "yes" if form is not None else "no"
    except Inconclusive:
        sym = "unknown"
    lines = [f"dim {alg.dim}, symmetric: {sym}",
             f"vertices {alg.n}, arrows {len(pres.quiver.arrows)}",
             f"loewy length {alg.loewy_length}"]
    try:
        nu = alg.nakayama_permutation()
        lines.append("nakayama: " + ("identity" if all(nu[i] == i for i in nu)
                                     else " ".join(f"{i}->{nu[i]}" for i in sorted(nu))))
    except AlgebraError:
        lines.append("nakayama: not self-injective")
    lines.append("cartan:")
    lines.extend("  " + " ".join(str(x) for x in row) for row in alg.cartan().tolist())
    if periods:
        vs = list(alg.vertices)
        try:
            with ThreadPoolExecutor(max_workers=threads()) as pool:
                ps = list(pool.map(lambda i: period_of_simple(alg, i), vs))
        except AlgebraError:
            ps = [None] * len(vs)
        lines.append("periods: " + ", ".join(f"{i}:{'-' if p is None else p}" for i, p in zip(vs, ps)))
        for d in sorted({p for p in ps if p is not None}):
            lines.append(f"period-{d} simples: {sum(p == d for p in ps)}/{len(vs)}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_mutate(pres, vertex, steps, assume_symmetric=False):
    if steps < 0:
        raise InputError("--steps must be non-negative")
    alg = _build(pres)
    _check_vertex(alg, vertex)
    if steps == 0:
        return pres.dumps(), EXIT_OK
    _require_symmetric(alg, assume_symmetric)
    state = mutate(alg, vertex, steps)
    out = present(alg, state.summands()).presentation
    out.meta = {}
    return out.dumps(), EXIT_OK


@dataclass
class VerificationReport:
    algebra_id: str
    vertex: int
    period: int | None
    hypothesis: str
    resolution: dict
    steps: int
    tilting: list
    mutated: dict
    phi: dict
    iso_search: dict
    verdict: dict
    timings: dict = field(default_factory=dict)

    def to_json(self, with_timings=False):
        d = asdict(self)
        if not with_timings:
            d.pop("timings")
        return d


def _verdict_exit(v):
    if v.holds:
        return EXIT_OK
    return EXIT_DISTINCT if v.kind == "Distinct" else EXIT_INCONCLUSIVE


def _border_loop_vertices(pres):
    try:
        kinds = classify_loops(pres)
    except MetadataMissing:
        return set()
    return {v for v, kind in kinds.items() if kind == "border"}


def verify(pres, vertex, budget=IsoBudget(), assume_symmetric=False) -> tuple[VerificationReport, int]:
    """The full pipeline at one vertex: period, resolution, mutation, comparison."""
    clock = {}
    t0 = time.perf_counter()
    alg = _build(pres)
    _check_vertex(alg, vertex)
    _require_symmetric(alg, assume_symmetric)
    d = period_of_simple(alg, vertex)
    clock["period"] = time.perf_counter() - t0

    t = time.perf_counter()
    res = from_projective_resolution(alg, vertex)
    hypothesis = "projective resolution in add Q"
    if res is None:
        res = build_addq_resolution(alg, vertex, max_len=max(d or 4, 2))
        hypothesis = "add Q resolution with closure" if res.d_plus is not None else "none"
    if res.d_plus is not None:
        steps = res.length
    else:
        steps = (d - 2) if d else 0
    clock["resolution"] = time.perf_counter() - t
    summary = {"terms": [list(x) for x in res.terms()], "closure": res.d_plus is not None,
               "ker_f1_is_socle": res.ker_f1_is_socle, "cok_is_top": res.cok_is_top}
    if res.d_plus is not None:
        summary["d_plus"] = res.d_plus.to_json()
    if steps < 1:
        why = "period unknown" if d is None else f"period {d} leaves no steps to iterate"
        v = InconclusiveVerdict([f"no usable resolution: {why} and no closure"])
        rep = VerificationReport(content_hash(pres), vertex, d, hypothesis, summary, 0, [], {}, {}, {}, v.to_json(),
                                 clock)
        return rep, EXIT_INCONCLUSIVE

    t = time.perf_counter()
    state = res.state(steps) if steps <= res.length else mutate(alg, vertex, steps)
    tilting = [is_tilting(res.state(k).tilting_complex()).holds if k <= res.length
               else is_tilting(mutate(alg, vertex, k).tilting_complex()).holds for k in range(1, steps + 1)]
    presented = present(alg, state.summands())
    B = presented.algebra
    clock["mutation"] = time.perf_counter() - t

    t = time.perf_counter()
    phi, phi_info = None, {}
    if res.d_plus is not None and steps == res.length:
        try:
            phi = construct_phi(alg, res)
            phi_info = phi.to_json()
        except (HypothesisNotMet, PhiVerificationFailed) as exc:
            phi_info = {"failed": str(exc)}
    else:
        phi_info = {"skipped": "no periodic closure of the add Q resolution"}
    clock["phi"] = time.perf_counter() - t

    t = time.perf_counter()
    iso = iso_search(alg, B, budget)
    clock["iso_search"] = time.perf_counter() - t
    if phi is not None:
        verdict = phi
    elif vertex in _border_loop_vertices(pres):
        # the socle of P_i may deform here, so the socle-level statement is the verdict
        verdict = socle_equivalence_search(alg, B, vertex, budget)
        if not verdict.holds:
            verdict = iso if isinstance(iso, Isomorphic) else verdict
    elif isinstance(iso, Isomorphic):
        verdict = iso
    else:
        soc = socle_equivalence_search(alg, B, vertex, budget)
        if soc.holds:
            verdict = soc
        elif iso.kind == "Distinct" and soc.kind == "Distinct":
            verdict = iso
        else:
            verdict = InconclusiveVerdict(list(getattr(iso, "log", [])) + list(getattr(soc, "log", [])))
    mutated = {"dim": int(B.dim), "cartan": B.cartan().tolist(), "presentation": presented.presentation.to_json()}
    rep = VerificationReport(content_hash(pres), vertex, d, hypothesis, summary, steps, tilting, mutated,
                             phi_info, iso.to_json(), verdict.to_json(), clock)
    return rep, _verdict_exit(verdict)


def cmd_verify(pres, vertex, budget=IsoBudget(), assume_symmetric=False, timings=False):
    rep, code = verify(pres, vertex, budget, assume_symmetric)
    return _dumps(rep.to_json(with_timings=timings)), code


def cmd_explore(pres, depth, vertices=None, node_cap=32):
    alg = _build(pres)
    if depth < 0:
        raise InputError("--depth must be non-negative")
    for v in vertices or []:
        _check_vertex(alg, v)
    res = explore_mutation_class(alg, depth, vertices, node_cap=node_cap, threads=threads())
    lines = []
    for row in res.table():
        lines.append(f"// {row['node']} dim {row['dim']} loewy {row['loewy_length']} cartan {row['cartan']}")
    if res.truncated:
        lines.append(f"// truncated at {node_cap} nodes")
    for a, b in res.unresolved:
        lines.append(f"// undecided: n{a} vs n{b}")
    return "\n".join(lines) + "\n" + res.to_dot(), EXIT_OK


def cmd_export_dot(pres):
    q = pres.quiver
    lines = ["digraph quiver {"]
    for v in q.vertices:
        lines.append(f"  {v};")
    for a in q.arrows:
        lines.append(f'  {a.source} -> {a.target} [label="{a.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n", EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _coeff(text):
    try:
        return int(text)
    except ValueError:
        return text


def _vertex_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated vertices, got {text!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="sforge", description="Mutations of symmetric algebras given by quiver and relations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="summary of an algebra")
    s.add_argument("file")
    s.add_argument("--periods", action="store_true", help="also compute the periods of the simple modules")

    s = sub.add_parser("mutate", help="presentation of the k-fold mutation at a vertex")
    s.add_argument("file")
    s.add_argument("--vertex", type=int, required=True)
    s.add_argument("--steps", type=int, default=1)
    s.add_argument("--assume-symmetric", action="store_true")
    s.add_argument("-o", "--output")

    s = sub.add_parser("verify", help="check that the mutated algebra is equivalent to the input")
    s.add_argument("file")
    s.add_argument("--vertex", type=int, required=True)
    s.add_argument("--budget", type=int, default=IsoBudget().max_nodes, help="node budget of the isomorphism search")
    s.add_argument("--assume-symmetric", action="store_true")
    s.add_argument("--timings", action="store_true", help="include wall-clock timings (disables the cache)")
    s.add_argument("-o", "--output")

    s = sub.add_parser("explore", help="bounded exploration of the mutation class")
    s.add_argument("file")
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--vertices", type=_vertex_list)
    s.add_argument("--node-cap", type=int, default=32)
    s.add_argument("-o", "--output")

    s = sub.add_parser("gen-wsa", help="weighted surface algebra on the five-vertex quiver")
    for name, default in (("m", 1), ("n", 2), ("p", 3)):
        s.add_argument(f"--{name}", type=int, default=default)
    for name, default in (("a", 1), ("b", 0), ("c", 1), ("d", 1)):
        s.add_argument(f"--{name}", type=_coeff, default=default)
    s.add_argument("--prime", type=int, default=5, help="field size; 0 for the rationals")
    s.add_argument("--allow-n1", action="store_true")
    s.add_argument("-o", "--output")

    s = sub.add_parser("gen-nakayama", help="cyclic Nakayama algebra")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--ell", type=int, default=3)
    s.add_argument("--prime", type=int, default=5, help="field size; 0 for the rationals")
    s.add_argument("-o", "--output")

    s = sub.add_parser("export-dot", help="the quiver in Graphviz syntax")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    return p


def run(args):
    cmd = args.command
    if cmd == "gen-wsa":
        params = WSAParams(args.m, args.n, args.p, args.a, args.c, args.d, args.b,
                           None if args.prime == 0 else args.prime, args.allow_n1)
        return weighted_surface_example(params).dumps(), EXIT_OK
    if cmd == "gen-nakayama":
        params = NakayamaParams(args.n, args.ell, None if args.prime == 0 else args.prime)
        return symmetric_nakayama(params).dumps(), EXIT_OK
    threads()  # validate early
    pres = load_presentation(args.file)
    if cmd == "info":
        return cached(pres, cmd, {"periods": args.periods}, lambda: cmd_info(pres, args.periods))
    if cmd == "mutate":
        flags = {"vertex": args.vertex, "steps": args.steps, "assume_symmetric": args.assume_symmetric}
        return cached(pres, cmd, flags, lambda: cmd_mutate(pres, args.vertex, args.steps, args.assume_symmetric))
    if cmd == "verify":
        budget = IsoBudget(max_nodes=args.budget)
        run_it = lambda: cmd_verify(pres, args.vertex, budget, args.assume_symmetric, args.timings)  # noqa: E731
        if args.timings:
            return run_it()
        flags = {"vertex": args.vertex, "budget": args.budget, "assume_symmetric": args.assume_symmetric}
        return cached(pres, cmd, flags, run_it)
    if cmd == "explore":
        flags = {"depth": args.depth, "vertices": args.vertices, "node_cap": args.node_cap}
        return cached(pres, cmd, flags, lambda: cmd_explore(pres, args.depth, args.vertices, args.node_cap))
    if cmd == "export-dot":
        return cmd_export_dot(pres)
    raise InputError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = run(args)
    except InputError as exc:
        print(f"sforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonSplitEndomorphism as exc:
        print(f"sforge: non-split endomorphism ring: {exc}", file=sys.stderr)
        return EXIT_NONSPLIT
    except Inconclusive as exc:
        print(f"sforge: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except AlgebraError as exc:
        print(f"sforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
