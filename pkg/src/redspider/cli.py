"""Command-line front end.

Every subcommand prints one JSON report (sorted keys, no timing unless
``--timing``) so identical inputs give byte-identical output.

Exit codes: 0 ok, 1 usage, 2 bad input file, 3 a budget ran out before the
answer was known, 4 a property the construction guarantees failed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__

log = logging.getLogger("redspider")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET, EXIT_DISCREPANCY = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# Input helpers


def _read_json(path: str, digests: Dict[str, str]):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    digests[path] = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _parse(loader: Callable, obj, what: str):
    try:
        return loader(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed {what}: {exc}") from exc


BUILTIN_MACHINES = ("halt", "loop", "halt-grid")


def _machine(arg: str, digests: Dict[str, str]):
    from . import rainworm as rw
    if arg in BUILTIN_MACHINES:
        return {"halt": rw.delta_halt, "loop": rw.delta_loop, "halt-grid": rw.delta_halt_grid}[arg]()
    m = _parse(rw.RainwormMachine.from_json, _read_json(arg, digests), "machine")
    bad = rw.validate_machine(m)
    if bad:
        raise InputError("invalid machine: " + "; ".join(bad))
    return m


def _grid_symbols(codes=None) -> Dict[str, Optional[int]]:
    from .sepexample import DEFAULT_CODES
    return (codes or DEFAULT_CODES).symbol_table()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=repr)
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


# --------------------------------------------------------------------------
# Subcommands: each returns (result payload, exit code, symbol table)


def cmd_chase(a, digests):
    from .chase import chase, tgds_for_queries
    from .relcore import ConjunctiveQuery, Structure
    from .spider import decompile_structure
    if a.queries:
        qs = [_parse(ConjunctiveQuery.from_json, q, "query") for q in _read_json(a.queries, digests)]
        s = a.s
    else:
        from .greengraph import precompile_rules
        from .sepexample import t_inf
        from .swarm import compile_rules, universe_for
        l1 = precompile_rules(t_inf())
        s = universe_for(l1)
        qs = [b.canonical for b in compile_rules(l1, s)]
    if a.input:
        d = _parse(Structure.from_json, _read_json(a.input, digests), "structure")
    else:
        from .sepexample import level0_seed
        d = level0_seed(s)
    res = chase(tgds_for_queries(qs), d, a.stages)
    out = {"stages_run": res.stages_run, "reached_fixpoint": res.reached_fixpoint,
           "stage_sizes": list(res.stage_sizes), "triggers": len(res.trigger_log), "s": s}
    if s:
        out["decompiled"] = decompile_structure(res.structure, s).to_json()
    if a.full:
        out["structure"] = res.structure.to_json()
    return out, EXIT_OK, None


def cmd_compile(a, digests):
    from .spider import compile_swarm
    from .swarm import RuleL1, Swarm, compile_rules, universe_for
    if bool(a.rules) == bool(a.swarm):
        raise InputError("give exactly one of --rules or --swarm")
    if a.rules:
        rules = [_parse(RuleL1.from_json, r, "level-1 rule") for r in _read_json(a.rules, digests)]
        s = a.s or universe_for(rules)
        return {"s": s, "queries": [b.canonical.to_json() for b in compile_rules(rules, s)]}, EXIT_OK, None
    sw = _parse(Swarm.from_json, _read_json(a.swarm, digests), "swarm")
    if not a.s:
        raise InputError("--swarm needs --s")
    return {"s": a.s, "structure": compile_swarm(sw, a.s).to_json()}, EXIT_OK, None


def cmd_precompile(a, digests):
    from .greengraph import GreenGraph, RuleL2, precompile_rules
    from .swarm import PreconditionError, precompile_map
    rules = [_parse(RuleL2.from_json, r, "level-2 rule") for r in _read_json(a.rules, digests)]
    out = {"rules": [r.to_json() for r in precompile_rules(rules)]}
    if a.graph:
        g = _parse(GreenGraph.from_json, _read_json(a.graph, digests), "green graph")
        try:
            out["swarm"] = precompile_map(g, rules).to_json()
        except PreconditionError as exc:
            raise InputError(str(exc)) from exc
    return out, EXIT_OK, None


def cmd_simulate(a, digests):
    from . import rainworm as rw
    m = _machine(a.machine, digests)
    res = rw.run(m, a.budget)
    bad = [(i, rw.config_violations(m, c)) for i, c in enumerate(res.trace[1:], start=1)]
    bad = [(i, v) for i, v in bad if v]
    if a.trace_out:
        with open(a.trace_out, "w") as fh:
            fh.write("\n".join(" ".join(c) for c in res.trace) + "\n")
    out = {"halted": res.halted, "k": res.steps, "u": list(res.final) if res.final else None,
           "steps_run": len(res.trace) - 1, "last": " ".join(res.trace[-1]),
           "config_violations": bad[:20]}
    codes, _ = rw.machine_codes(m)
    code = EXIT_DISCREPANCY if bad else (EXIT_OK if res.halted else EXIT_BUDGET)
    return out, code, codes


def cmd_finite_model(a, digests):
    from . import rainworm as rw
    m = _machine(a.machine, digests)
    try:
        ce = rw.full_counterexample(m, a.budget)
    except rw.ConsistencyError as exc:
        return {"error": str(exc)}, EXIT_BUDGET, None
    fm = rw.finite_model_procedure(m, a.budget)
    inv = {}
    for j, g in enumerate(fm.snapshots):
        bad = {k: len(v) for k, v in rw.loop_invariants(fm, m, g).items() if v}
        if bad:
            inv[j] = bad
    final_matches = [x for x in rw.find_matches(fm.graph, fm.rules) if x.interesting]
    report = dict(ce.report)
    report["snapshot_invariant_failures"] = inv
    report["interesting_matches_in_M"] = len(final_matches)
    report["M"] = fm.graph.to_json()
    if a.full:
        report["frak_M"] = ce.graph.to_json()
    bad = ce.report["discrepancies"] or inv or final_matches
    symbols = dict(fm.codes)
    symbols.update({k: v for k, v in fm.grid_codes.symbol_table().items() if v not in (None,)})
    return report, EXIT_DISCREPANCY if bad else EXIT_OK, symbols


def cmd_compile_rainworm(a, digests):
    from . import rainworm as rw
    m = _machine(a.machine, digests)
    codes, _ = rw.machine_codes(m)
    rules = rw.compile_to_greengraph(m, codes)
    return {"rules": [r.to_json() for r in rules], "pretty": [str(r) for r in rules]}, EXIT_OK, codes


def cmd_grid(a, digests):
    from .greengraph import has_12_pattern
    from .sepexample import build_Mt
    mt = build_Mt(a.t)
    found, where = has_12_pattern(mt.graph)
    out = {"t": a.t, "stages": mt.stages, "reached_fixpoint": mt.reached_fixpoint,
           "foam_edges": len(mt.foam), "pattern_found": found, "graph": mt.graph.to_json()}
    code = EXIT_DISCREPANCY if found else (EXIT_OK if mt.reached_fixpoint else EXIT_BUDGET)
    return out, code, _grid_symbols()


def cmd_separation_demo(a, digests):
    from .sepexample import grid_experiment
    rep = grid_experiment(a.t, a.tprime, a.budget)
    if rep["status"] == "inconclusive":
        code = EXIT_BUDGET
    elif rep["pattern_found"] != (a.t != a.tprime):
        code = EXIT_DISCREPANCY
    else:
        code = EXIT_OK
    return rep, code, _grid_symbols()


def cmd_truncate(a, digests):
    from .greengraph import has_12_pattern
    from .sepexample import build_M_truncated, foam_lemma_report, frontier_violations
    tr = build_M_truncated(a.depth)
    found, where = has_12_pattern(tr.graph)
    viol = frontier_violations(tr, distance=a.distance)
    foam = foam_lemma_report(tr)
    out = {"depth": a.depth, "edges": len(tr.graph), "grids": sorted(tr.grids),
           "pattern_found": found, "local_violations": len(viol["local"]),
           "nonlocal_violations": [[k, list(fr)] for k, fr in viol["nonlocal"]],
           "foam_items": {k: len(v) for k, v in foam.items()}}
    bad = found or viol["nonlocal"] or any(foam.values())
    return out, EXIT_DISCREPANCY if bad else EXIT_OK, _grid_symbols()


def cmd_dy_dn(a, digests):
    from .sepexample import build_Dy_Dn
    rep = build_Dy_Dn(a.i, with_grids=a.with_grids)
    rep.pop("D_yes")
    rep.pop("D_no")
    bad = not rep["yes_has_spider"] or rep["no_has_spider"]
    return rep, EXIT_DISCREPANCY if bad else EXIT_OK, _grid_symbols()


# --------------------------------------------------------------------------
# DOT export


def to_dot(g, names: Dict, name: str = "G", positions: Optional[Dict[str, tuple]] = None) -> str:
    """DOT text; vertices get ``pos`` hints when positions are known."""
    def q(s):
        return '"' + str(s).replace('"', '\\"') + '"'
    lines = [f"digraph {q(name)} {{", "  node [shape=point];"]
    for v in g.vertices:
        attrs = [f"xlabel={q(v)}"]
        if v in g.constants:
            attrs.append("shape=circle")
        if positions and v in positions:
            x, y = positions[v]
            attrs.append(f'pos="{x},{y}!"')
        lines.append(f"  {q(v)} [{', '.join(attrs)}];")
    for lab, x, y in g.edges:
        text = names.get(lab, str(lab)) if isinstance(lab, (int, type(None))) else str(lab)
        lines.append(f"  {q(x)} -> {q(y)} [label={q(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _figure(n: int, a):
    from . import sepexample as se
    if n == 1:
        return se.chase_inf(a.stages).graph
    if n == 2:
        return se.build_two_path(a.t, a.tprime)
    if n == 3:
        from .edgegraph import saturate
        from .greengraph import rules_tgds
        g = se.build_two_path(a.t, a.tprime)
        return saturate(rules_tgds(se.t_inf() + se.t_box()), g, 4 * max(a.t, a.tprime) + 8,
                        stop_when=lambda h: se.has_12_pattern(h)[0]).graph
    return se.build_Mt(a.t).graph


def cmd_export_dot(a, digests):
    from .greengraph import GreenGraph
    from .sepexample import DEFAULT_CODES
    from .swarm import Swarm
    if a.figure:
        g = _figure(a.figure, a)
    elif a.input:
        obj = _read_json(a.input, digests)
        edges = obj.get("edges", []) if isinstance(obj, dict) else []
        is_swarm = any(isinstance(e.get("label"), dict) for e in edges)
        g = _parse(Swarm.from_json if is_swarm else GreenGraph.from_json, obj, "graph")
    else:
        raise InputError("give --in or --figure")
    dot = to_dot(g, DEFAULT_CODES.names(), name=f"figure{a.figure}" if a.figure else "graph")
    return {"dot": dot}, EXIT_OK, None


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="redspider", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--seed", type=int, default=0, help="accepted for interface parity; runs are deterministic")
        sp.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("chase", cmd_chase, "Level-0 chase of compiled queries")
    sp.add_argument("--queries", help="JSON list of conjunctive queries (default: the compiled path rules)")
    sp.add_argument("--in", dest="input", help="colored structure JSON (default: green seed spider)")
    sp.add_argument("--s", type=int, default=0, help="spider size, for decompiling the result")
    sp.add_argument("--stages", type=int, default=3)
    sp.add_argument("--full", action="store_true", help="include the chased structure")

    sp = add("compile", cmd_compile, "Level-1 rules to queries, or a swarm to a structure")
    sp.add_argument("--rules")
    sp.add_argument("--swarm")
    sp.add_argument("--s", type=int, default=0)

    sp = add("precompile", cmd_precompile, "Level-2 rules to Level-1 rules (and a green graph to a swarm)")
    sp.add_argument("--rules", required=True)
    sp.add_argument("--graph")

    for name, fn, help_ in (("simulate", cmd_simulate, "run a rainworm machine"),
                            ("finite-model", cmd_finite_model, "build and check the finite counter-model"),
                            ("compile-rainworm", cmd_compile_rainworm, "machine to green-graph rules")):
        sp = add(name, fn, help_)
        sp.add_argument("--machine", required=True, help=f"JSON file or one of {', '.join(BUILTIN_MACHINES)}")
        sp.add_argument("--budget", type=int, default=10000, help="step budget")
        if name == "simulate":
            sp.add_argument("--trace-out", help="write one configuration per line")
        if name == "finite-model":
            sp.add_argument("--full", action="store_true", help="include the grid-closed model")

    sp = add("grid", cmd_grid, "the honest grid over one chase path")
    sp.add_argument("--t", type=int, required=True)

    sp = add("separation-demo", cmd_separation_demo, "two glued paths: does a 1-2 pattern appear")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--tprime", type=int, required=True)
    sp.add_argument("--budget", type=int, default=None, help="stage budget")

    sp = add("truncate-M", cmd_truncate, "finite truncation of the infinite model")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--distance", type=int, default=0, help="locality radius for rule violations")

    sp = add("dy-dn", cmd_dy_dn, "the two view-equivalent disjoint unions")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--with-grids", action="store_true")

    sp = add("export-dot", cmd_export_dot, "DOT text for a graph file or a built-in figure")
    sp.add_argument("--in", dest="input")
    sp.add_argument("--figure", type=int, choices=(1, 2, 3, 4))
    sp.add_argument("--stages", type=int, default=6, help="figure 1: chase stages")
    sp.add_argument("--t", type=int, default=2)
    sp.add_argument("--tprime", type=int, default=1)
    return p


def _setup_logging() -> None:
    level = os.environ.get("REDSPIDER_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def run_command(argv: Sequence[str]) -> int:
    _setup_logging()
    parser = build_parser()
    a = parser.parse_args(list(argv))
    if not a.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    digests: Dict[str, str] = {}
    start = time.perf_counter()
    try:
        result, code, symbols = a.func(a, digests)
    except InputError as exc:
        print(f"redspider: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if a.command == "export-dot":
        if a.out:
            with open(a.out, "w") as fh:
                fh.write(result["dot"])
        else:
            sys.stdout.write(result["dot"])
        return code
    report = {"command": [a.command] + [x for x in argv if x != a.command],
              "version": __version__, "inputs": digests,
              "symbols": symbols, "result": _jsonable(result), "exit_code": code}
    if a.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    text = json.dumps(_jsonable(report), sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
