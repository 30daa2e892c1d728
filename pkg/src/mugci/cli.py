"""Command-line interface.

Exit codes: 0 when the queried property holds (or the command produced its
artifact), 1 when a statement does not follow or a structure is invalid,
2 on any parse or validation error.  Output is deterministic for fixed
input and flags.
"""

from __future__ import annotations

import argparse
import json
import sys

from .derivation import (
    Exhausted,
    MoveScript,
    initial_mug,
    replay_chain,
    search,
    verify_script,
)
from .dsep import build_join_tree
from .errors import ModelError
from .graphoid import AxiomStep, closure, verify_chain
from .model import (
    TRIVIALLY_TRUE,
    Statement,
    canonicalize,
    format_set,
    statement_key,
)
from .modelfile import (
    ModelFile,
    format_jointree,
    format_ugraph,
    parse_model,
)
from .mug import AddArcs, Combine, Delete, Merge, Mug, Split

SEARCH_DEFAULT_MOVES = 5
SEARCH_DEFAULT_GRAPHS = 10


def _parse_elements(text: str) -> frozenset:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    names = [part.strip() for part in body.split(",") if part.strip()]
    return frozenset(names)


def _parse_statement_arg(text: str) -> Statement:
    parts = text.split("|")
    if len(parts) != 3:
        raise ModelError(f"statement must look like '{{x}}|{{z}}|{{y}}': {text!r}")
    x, z, y = (_parse_elements(p) for p in parts)
    return Statement(x, z, y)


def _load_model(path: str) -> ModelFile:
    with open(path, encoding="utf-8") as handle:
        return parse_model(handle.read())


def _declared_canonical(model: ModelFile):
    """Canonical forms of the declared statements; trivials drop out."""
    out = []
    for s in model.statements.values():
        model.universe.require(s.x | s.z | s.y)
        c = canonicalize(s)
        if c is not TRIVIALLY_TRUE:
            out.append(c)
    return out


def _closure_init(model: ModelFile) -> set:
    """Declared statements plus everything the declared graphs satisfy."""
    init = set(_declared_canonical(model))
    if model.graphs:
        mug = Mug(model.universe, list(model.graphs.values()))
        init |= mug.enumerate_satisfied()
    return init


def _format_chain(chain: tuple[AxiomStep, ...]) -> list[str]:
    lines = []
    for i, step in enumerate(chain):
        label = step.rule
        if step.premises:
            label += "[" + ",".join(str(p + 1) for p in step.premises) + "]"
        lines.append(f"  [{i + 1}] {label}: {step.conclusion}")
    return lines


def _format_move(move) -> str:
    if isinstance(move, Delete):
        return f"delete graph={move.graph} node={move.node}"
    if isinstance(move, AddArcs):
        arcs = ",".join(f"{a}-{b}" for a, b in sorted(tuple(sorted(p)) for p in move.arcs))
        return f"add-arcs graph={move.graph} arcs={arcs}"
    if isinstance(move, Merge):
        return f"merge graph={move.graph} nodes={move.node1},{move.node2}"
    if isinstance(move, Split):
        return (
            f"split graph={move.graph} node={move.node} "
            f"parts={format_set(move.part1)}/{format_set(move.part2)}"
        )
    if isinstance(move, Combine):
        return f"combine graph={move.graph} stmt={move.statement}"
    raise TypeError(f"unknown move {move!r}")


def _print_script(script: MoveScript, out) -> None:
    print(f"initial-graphs: {len(script.initial.graphs)}", file=out)
    for i, g in enumerate(script.initial.graphs):
        print(format_ugraph(f"g{i}", g), file=out)
    print("moves:", file=out)
    for i, move in enumerate(script.moves):
        print(f"  [{i + 1}] {_format_move(move)}", file=out)
    print(f"script-verified: {str(verify_script(script)).lower()}", file=out)


def _cmd_closure(args, out) -> int:
    model = _load_model(args.file)
    init = _closure_init(model)
    result = closure(init, model.universe)
    ordered = sorted(result.statements, key=statement_key)
    if args.json:
        payload = {
            "universe": list(model.universe),
            "count": len(ordered),
            "statements": [],
        }
        for s in ordered:
            record = {
                "x": sorted(s.x),
                "z": sorted(s.z),
                "y": sorted(s.y),
                "statement": str(s),
            }
            if args.emit_chains:
                record["chain"] = [
                    {
                        "rule": step.rule,
                        "premises": [p + 1 for p in step.premises],
                        "conclusion": str(step.conclusion),
                    }
                    for step in result.chain(s)
                ]
            payload["statements"].append(record)
        print(json.dumps(payload, indent=2, sort_keys=True), file=out)
        return 0
    print("universe: " + " ".join(model.universe), file=out)
    print(f"statements: {len(ordered)}", file=out)
    for s in ordered:
        print(str(s), file=out)
        if args.emit_chains:
            chain = result.chain(s)
            givens = {st.conclusion for st in chain if st.rule == "given"}
            if not verify_chain(chain, givens):
                raise AssertionError(f"emitted chain for {s} failed verification")
            for line in _format_chain(chain):
                print(line, file=out)
    return 0


def _cmd_query(args, out) -> int:
    model = _load_model(args.file)
    raw = _parse_statement_arg(args.stmt)
    model.universe.require(raw.x | raw.z | raw.y)
    target = canonicalize(raw)
    if target is TRIVIALLY_TRUE:
        print("result: trivially-true", file=out)
        return 0
    print(f"statement: {target}", file=out)
    init = _closure_init(model)
    result = closure(init, model.universe)
    chain = result.query(target)

    if args.mode == "axioms":
        if chain is None:
            print("result: not-derivable", file=out)
            return 1
        givens = {st.conclusion for st in chain if st.rule == "given"}
        if not verify_chain(chain, givens):
            raise AssertionError("emitted chain failed verification")
        print("result: proven", file=out)
        print("chain:", file=out)
        for line in _format_chain(chain):
            print(line, file=out)
        print("chain-verified: true", file=out)
        return 0

    m0 = initial_mug(
        model.universe,
        statements=_declared_canonical(model),
        graphs=list(model.graphs.values()),
    )
    if args.mode == "replay":
        if chain is None:
            print("result: not-derivable", file=out)
            return 1
        script = replay_chain(m0, chain)
        if not verify_script(script):
            raise AssertionError("emitted script failed verification")
        print("result: proven", file=out)
        _print_script(script, out)
        return 0

    outcome = search(m0, target, args.max_moves, args.max_graphs)
    if isinstance(outcome, Exhausted):
        print("result: exhausted", file=out)
        print(f"states-explored: {outcome.states_explored}", file=out)
        print(f"depth-reached: {outcome.depth_reached}", file=out)
        return 1
    print("result: proven", file=out)
    _print_script(outcome, out)
    return 0


def _cmd_dsep(args, out) -> int:
    model = _load_model(args.file)
    if args.graph not in model.digraphs:
        raise ModelError(f"no digraph named {args.graph!r}")
    d = model.digraphs[args.graph]
    x = _parse_elements(args.x)
    z = _parse_elements(args.z)
    y = _parse_elements(args.y)
    print(f"query: {format_set(x)} | {format_set(z)} | {format_set(y)}", file=out)
    if d.d_separated(x, z, y):
        print("result: separated", file=out)
        return 0
    print("result: not-separated", file=out)
    return 1


def _cmd_moralize(args, out) -> int:
    model = _load_model(args.file)
    if args.graph not in model.digraphs:
        raise ModelError(f"no digraph named {args.graph!r}")
    moral = model.digraphs[args.graph].moralize()
    print(format_ugraph(f"moral_{args.graph}", moral), file=out)
    return 0


def _cmd_check_jointree(args, out) -> int:
    model = _load_model(args.file)
    if args.tree not in model.jointrees:
        raise ModelError(f"no jointree named {args.tree!r}")
    violations = model.jointrees[args.tree].validate()
    if not violations:
        print("valid", file=out)
        return 0
    for v in violations:
        print(f"violation: {v}", file=out)
    return 1


def _cmd_build_jointree(args, out) -> int:
    model = _load_model(args.file)
    if args.graph in model.graphs:
        base = model.graphs[args.graph]
        if any(len(es) != 1 for es in base.nodes.values()):
            raise ModelError(
                f"graph {args.graph!r} has multi-element nodes; "
                f"build-jointree needs one element per node"
            )
    elif args.graph in model.digraphs:
        base = model.digraphs[args.graph].moralize()
    else:
        raise ModelError(f"no graph or digraph named {args.graph!r}")
    order = [e for e in (p.strip() for p in args.order.split(",")) if e]
    chordal, tree = build_join_tree(base, order)
    print(format_ugraph(f"chordal_{args.graph}", chordal), file=out)
    print(format_jointree(f"jointree_{args.graph}", tree), file=out)
    for link in sorted(tuple(sorted(l)) for l in tree.links):
        a, b = link
        print(f"sepset {a} {b} = {format_set(tree.sepset(a, b))}", file=out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mugci",
        description="Decide conditional-independence statements graphically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closure", help="print the axiom closure of a model")
    p.add_argument("file")
    p.add_argument("--emit-chains", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("query", help="decide one statement")
    p.add_argument("file")
    p.add_argument("--stmt", required=True, help="'{x}|{z}|{y}'")
    p.add_argument("--mode", choices=("axioms", "replay", "search"),
                   default="axioms")
    p.add_argument("--max-moves", type=int, default=SEARCH_DEFAULT_MOVES)
    p.add_argument("--max-graphs", type=int, default=SEARCH_DEFAULT_GRAPHS)
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("dsep", help="directed-graph separation test")
    p.add_argument("file")
    p.add_argument("--graph", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=_cmd_dsep)

    p = sub.add_parser("moralize", help="print the moral graph of a digraph")
    p.add_argument("file")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_moralize)

    p = sub.add_parser("check-jointree", help="validate a declared join tree")
    p.add_argument("file")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=_cmd_check_jointree)

    p = sub.add_parser("build-jointree",
                       help="triangulate and build a join tree")
    p.add_argument("file")
    p.add_argument("--graph", required=True)
    p.add_argument("--order", required=True, help="comma-separated elements")
    p.set_defaults(func=_cmd_build_jointree)

    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args, out)
    except (ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
