"""Command-line interface: ``msdim dim | check | tree-search | gadget``.

Every command prints one JSON report on stdout.  Vertex labels in reports
and in ``--set`` are 1-based.  Exit codes: 0 success, 1 usage or parse
error, 2 budget or limit reached, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import re
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from .errors import (
    DepthLimitExceeded,
    EmptyLandmarkSet,
    InvalidParam,
    MsDimError,
    SearchBudgetExceeded,
)
from .graph import FullAryTree, Graph, family, parse_graph, serialize_graph
from .reduction import build_gadget_graph, parse_dimacs, verify_reduction
from .resolvability import Notion, is_resolving
from .solvers import DimensionResult, dim_exact, dim_ms_closed_form, dim_ms_exact, minimum_resolving_set
from .trees import algorithm1

log = logging.getLogger("msdim")

EXIT_OK, EXIT_USAGE, EXIT_LIMIT, EXIT_INTERNAL = 0, 1, 2, 3

_POWER = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")


class UsageError(MsDimError, ValueError):
    pass


class WitnessInvalid(MsDimError, RuntimeError):
    """An emitted witness failed re-validation; always a bug."""


def parse_budget(text: str) -> int:
    """Accept plain integers, ``10^7`` and ``1e7``."""
    m = _POWER.match(text)
    if m:
        value = int(m.group(1)) ** int(m.group(2))
    else:
        try:
            value = int(text.replace("_", ""))
        except ValueError:
            try:
                as_float = float(text)
            except ValueError:
                raise argparse.ArgumentTypeError(f"not a count: {text!r}") from None
            if not as_float.is_integer():
                raise argparse.ArgumentTypeError(f"not a whole number: {text!r}") from None
            value = int(as_float)
    if value < 1:
        raise argparse.ArgumentTypeError("budget must be positive")
    return value


def parse_set(text: str, n: int) -> tuple[int, ...]:
    """Comma-separated 1-based labels to sorted 0-based ids."""
    toks = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    if not toks:
        raise EmptyLandmarkSet("landmark set is empty")
    out = set()
    for tok in toks:
        if not tok.isdigit():
            raise UsageError(f"bad vertex label {tok!r}")
        v = int(tok)
        if not 1 <= v <= n:
            raise UsageError(f"vertex label {v} outside 1..{n}")
        out.add(v - 1)
    return tuple(sorted(out))


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _labels(S: Sequence[int]) -> list[int]:
    return [int(v) + 1 for v in S]


def _load_graph(args) -> tuple[Graph, dict]:
    if args.family:
        g = family(args.family)
        source = {"family": args.family}
    else:
        if args.graph == "-":
            text = sys.stdin.read()
            source = {"file": "-"}
        else:
            text = Path(args.graph).read_text()
            source = {"file": args.graph}
        g = parse_graph(text)
    source["n"] = g.n
    source["m"] = g.m
    source["sha256"] = _digest(serialize_graph(g))
    return g, source


def _validated(g: Graph, S: Sequence[int], notion: Notion) -> None:
    if not is_resolving(g.distances, S, notion):
        raise WitnessInvalid(f"witness {_labels(S)} is not {notion.value} resolving")


def _dimension_payload(res: DimensionResult) -> dict:
    return {
        "notion": res.notion.value,
        "value": res.value,
        "lower": res.lower,
        "upper": res.upper,
        "witness": _labels(res.witness),
        "witness_valid": True,
        "method": res.method,
        "bounds": {name: v for name, v in res.bounds},
        "candidates": res.candidates,
    }


class Outcome(Exception):
    """Carries a finished report plus exit code out of a command."""

    def __init__(self, status: str, result: dict, code: int, inputs: dict | None = None):
        self.status, self.result, self.code, self.inputs = status, result, code, inputs


def cmd_dim(args) -> tuple[dict, dict]:
    g, source = _load_graph(args)
    notion = Notion.parse(args.notion)
    if notion == Notion.MULTISET:
        raise UsageError("the multiset dimension is undefined for many graphs; use outer-multiset")
    if g.n < 2:
        raise InvalidParam("dimension needs at least two vertices")
    closed = None
    if notion == Notion.OUTER_MULTISET and args.family:
        closed = dim_ms_closed_form(args.family)
    res = closed if args.method != "search" else None
    if res is None and args.method == "closed-form":
        raise UsageError(f"no closed form for {args.family or 'file input'} under {notion.value}")
    if res is None:
        try:
            if notion == Notion.OUTER_MULTISET:
                hint = closed.witness if closed is not None else None
                res = dim_ms_exact(g, max_candidates=args.budget, threads=args.threads, upper_hint=hint)
            elif notion == Notion.RESOLVING:
                res = dim_exact(g, max_candidates=args.budget, threads=args.threads)
            else:
                res = minimum_resolving_set(g, notion, 1, max_candidates=args.budget, threads=args.threads)
        except SearchBudgetExceeded as exc:
            part = exc.partial
            _validated(g, part.witness, notion)
            raise Outcome("interval", _dimension_payload(part), EXIT_LIMIT, source) from None
    _validated(g, res.witness, notion)
    return source, _dimension_payload(res)


def cmd_check(args) -> tuple[dict, dict]:
    g, source = _load_graph(args)
    notion = Notion.parse(args.notion)
    S = parse_set(args.set, g.n)
    ok = is_resolving(g.distances, S, notion)
    return source, {"notion": notion.value, "set": _labels(S), "size": len(S), "resolving": ok}


def _catalog_payload(depth: int | None, catalog) -> dict:
    t = FullAryTree.build(catalog.delta, catalog.depth)
    for b in catalog.bases:
        _validated(t, b, Notion.OUTER_MULTISET)
    return {"n": depth, "catalog": catalog.to_json()}


def cmd_tree_search(args) -> tuple[dict, dict]:
    source = {"delta": args.delta}
    try:
        depth, catalog = algorithm1(
            args.delta, max_depth=args.max_depth, max_candidates=args.budget, threads=args.threads
        )
    except DepthLimitExceeded as exc:
        payload = _catalog_payload(None, exc.partial)
        payload["error"] = {"type": "DepthLimitExceeded", "message": str(exc)}
        raise Outcome("error", payload, EXIT_LIMIT, source) from None
    except SearchBudgetExceeded as exc:
        payload = _catalog_payload(None, exc.partial)
        payload["error"] = {"type": "SearchBudgetExceeded", "message": str(exc)}
        raise Outcome("interval", payload, EXIT_LIMIT, source) from None
    return source, _catalog_payload(depth, catalog)


def _load_cnf(args):
    text = sys.stdin.read() if args.cnf == "-" else Path(args.cnf).read_text()
    return parse_dimacs(text, strict=not args.relaxed), {"file": args.cnf, "sha256": _digest(text)}


def cmd_gadget_build(args) -> tuple[dict, dict]:
    f, source = _load_cnf(args)
    gg = build_gadget_graph(f)
    result: dict[str, Any] = {
        "order": gg.graph.n,
        "edges": gg.graph.m,
        "M": gg.M,
        "q": list(gg.q),
        "p": list(gg.p),
        "graph_sha256": _digest(serialize_graph(gg.graph)),
    }
    if args.output:
        out = Path(args.output)
        sidecar = Path(args.sidecar) if args.sidecar else out.with_name(out.name + ".roles.json")
        out.write_text(serialize_graph(gg.graph))
        sidecar.write_text(gg.sidecar_json())
        result["graph_file"] = str(out)
        result["sidecar_file"] = str(sidecar)
    return source, result


def cmd_gadget_verify(args) -> tuple[dict, dict]:
    f, source = _load_cnf(args)
    try:
        rep = verify_reduction(f, args.mode, max_candidates=args.budget, threads=args.threads)
    except SearchBudgetExceeded as exc:
        payload = {"mode": args.mode, "dim_ms": _dimension_payload(exc.partial)}
        raise Outcome("interval", payload, EXIT_LIMIT, source) from None
    if rep.witness is not None:
        gg = build_gadget_graph(f)
        _validated(gg.graph, rep.witness, Notion.OUTER_MULTISET)
    payload = rep.to_json()
    if not args.outcomes:
        payload.pop("outcomes")
    return source, payload


def _add_graph_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("graph", nargs="?", help="edge-list file ('-' for stdin)")
    src.add_argument("--family", help="named family, e.g. cycle:7, wheel:5, tree:2,4")


def _add_engine(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=parse_budget, default=None, help="candidate budget, e.g. 10^7 or 1e7")
    p.add_argument("--threads", type=int, default=1, help="worker threads (0 = one per CPU)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msdim", description="Outer multiset dimension toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="compute a dimension")
    _add_graph_input(p)
    p.add_argument("--notion", default="outer-multiset")
    p.add_argument("--method", choices=("auto", "search", "closed-form"), default="auto")
    _add_engine(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("check", help="test whether a set resolves a graph")
    _add_graph_input(p)
    p.add_argument("--set", required=True, help="comma-separated 1-based labels")
    p.add_argument("--notion", default="outer-multiset")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tree-search", help="run the depth search for full delta-ary trees")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=None)
    _add_engine(p)
    p.set_defaults(func=cmd_tree_search)

    gadget = sub.add_parser("gadget", help="3-CNF gadget graphs").add_subparsers(dest="action", required=True)
    p = gadget.add_parser("build", help="write the gadget graph and its roles sidecar")
    p.add_argument("cnf")
    p.add_argument("-o", "--output")
    p.add_argument("--sidecar", help="roles JSON path (default: OUTPUT.roles.json)")
    p.add_argument("--relaxed", action="store_true", help="allow clauses of 1 to 3 literals")
    p.set_defaults(func=cmd_gadget_build)
    p = gadget.add_parser("verify", help="sweep structured sets and cross-check the encoding")
    p.add_argument("cnf")
    p.add_argument("--mode", choices=("structured", "full"), default="structured")
    p.add_argument("--outcomes", action="store_true", help="include per-candidate clause outcomes")
    p.add_argument("--relaxed", action="store_true", help="allow clauses of 1 to 3 literals")
    _add_engine(p)
    p.set_defaults(func=cmd_gadget_verify)
    return parser


# options that never change a result and stay out of the command echo
_UNECHOED = {"func", "threads", "verbose", "timing"}


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _UNECHOED}


def _report(args, inputs: dict | None, status: str, result: dict, elapsed: float | None) -> dict:
    rep = {"command": _echo(args), "inputs": inputs or {}, "status": status, "result": result}
    if elapsed is not None:
        rep["timing_s"] = round(elapsed, 3)
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    start = time.perf_counter()
    inputs = None
    code = EXIT_OK
    try:
        inputs, result = args.func(args)
        status = "exact"
    except Outcome as out:
        status, result, code, inputs = out.status, out.result, out.code, out.inputs
    except (WitnessInvalid, AssertionError) as exc:
        status, code = "error", EXIT_INTERNAL
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    except (MsDimError, ValueError, OSError) as exc:
        status, code = "error", EXIT_USAGE
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    except Exception as exc:  # pragma: no cover - safety net
        status, code = "error", EXIT_INTERNAL
        result = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if status == "error":
        print(f"msdim: {result['error']['type']}: {result['error']['message']}", file=sys.stderr)
    elapsed = time.perf_counter() - start if args.timing else None
    json.dump(_report(args, inputs, status, result, elapsed), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
