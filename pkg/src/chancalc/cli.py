"""Command-line entry point: ``chancalc <command> ...``.

Exit status 0 on success, 1 on invalid input, 2 when a well-formed query
cannot be answered (identifiability failure, joint too large).
"""
from __future__ import annotations

import argparse
import json
import sys
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction

from .causal import (
    CounterfactualSpec,
    InterventionSpec,
    counterfactual_channel,
    do_channel,
    front_door_do,
    intervene,
)
from .channel import Channel, state
from .errors import InferenceError, ValidationError
from .inference import QuerySpec, infer_channel
from .kernel import SubDist, key_of, make_space, make_subdist, tuples
from .nestedq import coord_agent
from .netmodel import (
    BUILTINS,
    NetworkSpec,
    builtin_example,
    dump_network,
    joint_state,
    network_channel,
    parse_network,
)

_DEC = Context(prec=4, rounding=ROUND_HALF_EVEN)


def decimal4(x: Fraction) -> str:
    """Round to 4 significant digits, half-even."""
    if x == 0:
        return "0"
    d = _DEC.divide(Decimal(x.numerator), Decimal(x.denominator))
    return format(d.normalize(_DEC), "f")


def render_table(c: Channel) -> str:
    out_keys = [key_of(t) for t in tuples(c.outputs)]
    in_keys = [key_of(t) or "-" for t in tuples(c.inputs)]
    head = ["in \\ out"] + out_keys
    body = []
    for k, row in zip(in_keys, c.matrix()):
        body.append([k] + [decimal4(x) for x in row])
    widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in [head] + body]
    for t in c.impossible:
        lines.append(f"impossible evidence: {key_of(t)}")
    return "\n".join(lines)


def _emit(result, fmt: str) -> None:
    if isinstance(result, SubDist):
        result = state(result)
    if isinstance(result, Channel):
        print(render_table(result) if fmt == "table" else result.to_json())
    else:
        print(result if isinstance(result, str) else json.dumps(result, ensure_ascii=False))


def _names(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [s.strip() for s in raw.split(",") if s.strip()]


def _load_model(args):
    if getattr(args, "example", None):
        return builtin_example(args.example)
    if getattr(args, "model", None):
        try:
            with open(args.model, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ValidationError(f"cannot read {args.model}: {e.strerror}") from None
        return parse_network(text)
    raise ValidationError("give --model PATH or --example NAME")


def _read_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValidationError(f"{path}: invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return doc


def _need_network(model) -> NetworkSpec:
    if not isinstance(model, NetworkSpec):
        raise ValidationError("this command needs a network model, not a joint distribution")
    return model


# -- commands -----------------------------------------------------------------------

def cmd_validate(args):
    with open(args.path, encoding="utf-8") if args.path != "-" else sys.stdin as fh:
        net = parse_network(fh.read())
    return {"valid": True, "nodes": net.names}


def cmd_joint(args):
    model = _load_model(args)
    if isinstance(model, SubDist):
        return model
    return joint_state(model, _names(args.keep) or None)


def cmd_infer(args):
    net = _need_network(_load_model(args))
    return infer_channel(net, QuerySpec(_names(args.evidence), _names(args.target)))


def _parse_state(space, raw) -> SubDist:
    if isinstance(raw, str):
        if raw == "uniform":
            return make_subdist(space, {e: Fraction(1, len(space)) for e in space})
        raw = dict(p.split("=", 1) for p in raw.split(","))
    return make_subdist(space, raw)


def cmd_do(args):
    model = _load_model(args)
    if isinstance(model, SubDist):
        return front_door_do(model)
    net = model
    if args.intervention:
        doc = _read_json(args.intervention)
        if "node" not in doc:
            raise ValidationError("intervention spec needs a \"node\" field")
        node = doc["node"]
        policy = doc.get("policy", "open_input")
        repl = None
        if policy == "replace" and "replacement" in doc:
            repl = _parse_state(net[node].space, doc["replacement"])
        cut = intervene(net, InterventionSpec(node, policy, repl))
        target = _names(args.effect)
        if policy == "open_input":
            return network_channel(cut, [node], target)
        return infer_channel(cut, QuerySpec(_names(args.evidence), target))
    if not args.cause or not args.effect:
        raise ValidationError("do needs --cause and --effect (or --intervention)")
    return do_channel(net, args.cause, args.effect)


def _cf_spec(args) -> CounterfactualSpec:
    if args.spec:
        doc = _read_json(args.spec)
        forced = doc.get("forced", [])
        if isinstance(forced, dict):
            forced = list(forced.items())
        return CounterfactualSpec(forced, doc.get("observed", ()), doc.get("cf_target", ()),
                                  doc.get("shared"))
    forced = []
    for item in args.force or []:
        for part in _names(item):
            if "=" not in part:
                raise ValidationError(f"--force expects NODE=VALUE, got {part!r}")
            forced.append(tuple(part.split("=", 1)))
    shared = _names(args.shared) or None
    return CounterfactualSpec(forced, _names(args.observe), _names(args.target), shared)


def cmd_counterfactual(args):
    net = _need_network(_load_model(args))
    return counterfactual_channel(net, _cf_spec(args))


def cmd_coord(args):
    pairs = [p.split("=", 1) for p in _names(args.location)]
    if not pairs or any(len(p) != 2 for p in pairs):
        raise ValidationError("--location expects label=prob,label=prob,...")
    space = make_space("location", [p[0] for p in pairs])
    loc = make_subdist(space, pairs)
    return coord_agent(loc, args.agent, args.depth)


def cmd_examples(args):
    if not args.name:
        return {"examples": sorted(BUILTINS)}
    model = builtin_example(args.name)
    if isinstance(model, SubDist):
        return state(model).to_json()
    return dump_network(model)


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")

    model = argparse.ArgumentParser(add_help=False)
    src = model.add_mutually_exclusive_group()
    src.add_argument("--model", metavar="PATH", help="model file (JSON)")
    src.add_argument("--example", choices=sorted(BUILTINS), help="builtin example model")

    p = argparse.ArgumentParser(prog="chancalc", description="Exact inference with discrete channels.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a model file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("joint", parents=[common, model], help="joint distribution (marginal)")
    s.add_argument("--keep", help="comma-separated node names")
    s.set_defaults(func=cmd_joint)

    s = sub.add_parser("infer", parents=[common, model], help="conditional channel evidence -> target")
    s.add_argument("--evidence", default="")
    s.add_argument("--target", required=True)
    s.set_defaults(func=cmd_infer)

    s = sub.add_parser("do", parents=[common, model], help="interventional channel")
    s.add_argument("--cause")
    s.add_argument("--effect")
    s.add_argument("--evidence", default="", help="with --intervention using a replacement state")
    s.add_argument("--intervention", metavar="PATH", help="InterventionSpec JSON")
    s.set_defaults(func=cmd_do)

    s = sub.add_parser("counterfactual", parents=[common, model], help="counterfactual channel")
    s.add_argument("--force", action="append", help="NODE=VALUE (repeatable or comma-separated)")
    s.add_argument("--observe", default="")
    s.add_argument("--target", default="")
    s.add_argument("--shared", default="", help="shared exogenous nodes (default: all)")
    s.add_argument("--spec", metavar="PATH", help="CounterfactualSpec JSON")
    s.set_defaults(func=cmd_counterfactual)

    s = sub.add_parser("coord", parents=[common], help="coordination-game agent")
    s.add_argument("--location", required=True, help="label=prob,...")
    s.add_argument("--agent", choices=("alice", "bob"), default="bob")
    s.add_argument("--depth", type=int, default=1)
    s.set_defaults(func=cmd_coord)

    s = sub.add_parser("examples", parents=[common], help="list or dump builtin examples")
    s.add_argument("name", nargs="?", choices=sorted(BUILTINS))
    s.set_defaults(func=cmd_examples)
    return p


def _fail(args, exc, code: int) -> int:
    if getattr(args, "format", "json") == "json":
        doc = {"error": str(exc), "kind": type(exc).__name__}
        row = getattr(exc, "row", None)
        if row is not None:
            doc["row"] = list(row)
        print(json.dumps(doc, ensure_ascii=False), file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except ValidationError as e:
        return _fail(args, e, 1)
    except OSError as e:
        return _fail(args, ValidationError(str(e)), 1)
    except InferenceError as e:
        return _fail(args, e, 2)
    _emit(result, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
