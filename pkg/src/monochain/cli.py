"""Command-line interface: one subcommand per library operation.

The CLI is a thin wrapper; every result equals the corresponding library
call's result.  Output is human-readable text by default and a versioned
JSON report with --json; both carry the same result payload.  Exit codes:
0 success, 1 usage errors (bad arguments, unreadable files), 2 domain
errors (parse errors, caps, mixed patterns, ...).

The --threads flag is accepted for interface stability; the current
implementation is sequential, so output is byte-identical for any value.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Callable

from . import chaining, definability, generators, monomorphy, sentences
from .errors import MonochainError, ValidationError
from .formulas import evaluate, format_formula, free_variables, parse_formula
from .orders import LinearOrder
from .structures import (
    Structure,
    find_isomorphism,
    parse_signature_text,
    parse_structure,
    render_structure,
)

SCHEMA_VERSION = "1"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise _UsageError(f"{self.prog}: {message}")


def _read_file(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _load_structure(path: str, inputs: dict) -> Structure:
    text = _read_file(path)
    inputs[path] = _digest(text)
    return parse_structure(text)


def _parse_order(spec: str, size: int) -> LinearOrder:
    try:
        ascending = tuple(int(p) for p in spec.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad order spec {spec!r}") from exc
    order = LinearOrder(ascending)
    if order.size != size:
        raise ValidationError(
            f"order lists {order.size} elements, structure has {size}"
        )
    return order


def _parse_assignment(spec: str | None) -> dict[int, int]:
    if not spec:
        return {}
    out = {}
    for part in spec.split(","):
        var, _, val = part.partition("=")
        try:
            out[int(var)] = int(val)
        except ValueError as exc:
            raise ValidationError(f"bad assignment entry {part!r}") from exc
    return out


# ---------------------------------------------------------------------------
# subcommand implementations: each returns (result_payload, artifact_text|None)


def _cmd_gen(args, inputs) -> tuple[dict, str | None]:
    spec = generators.GeneratorSpec(
        kind=args.kind, size=args.size, seed=args.seed, density=args.density, arity=args.arity
    )
    structure = generators.generate(spec)
    text = render_structure(structure)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return {"structure": structure.to_report(), "written_to": args.output}, text


def _cmd_check_monomorphy(args, inputs) -> tuple[dict, str | None]:
    structure = _load_structure(args.structure, inputs)
    report = monomorphy.is_monomorphic(structure)
    return report.to_report(), None


def _cmd_find_chains(args, inputs) -> tuple[dict, str | None]:
    structure = _load_structure(args.structure, inputs)
    chain_set = chaining.enumerate_chaining_orders(structure, cap=args.cap)
    payload: dict = {"chain_set": chain_set.to_report()}
    if len(chain_set) > 0:
        payload["trichotomy"] = chaining.classify_chain_set(structure, chain_set).to_report()
    else:
        payload["trichotomy"] = None
    return payload, None


def _cmd_classify(args, inputs) -> tuple[dict, str | None]:
    structure = _load_structure(args.structure, inputs)
    chain_set = chaining.enumerate_chaining_orders(structure, cap=args.cap)
    report = chaining.classify_chain_set(structure, chain_set)
    return report.to_report(), None


def _cmd_synthesize_def(args, inputs) -> tuple[dict, str | None]:
    structure = _load_structure(args.structure, inputs)
    order = _parse_order(args.order, structure.size)
    definition = definability.synthesize_definition(structure, order)
    text = definability.render_definition(definition)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return {"definition": definition.to_report(), "written_to": args.output}, text


def _cmd_derive(args, inputs) -> tuple[dict, str | None]:
    defs_text = _read_file(args.definitions)
    inputs[args.definitions] = _digest(defs_text)
    signature, defs = definability.parse_definition(defs_text)
    order = LinearOrder(tuple(int(p) for p in args.order.split(",")))
    structure = definability.derive_structure(order, signature, defs)
    text = render_structure(structure)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return {"structure": structure.to_report(), "written_to": args.output}, text


def _cmd_gen_sentence(args, inputs) -> tuple[dict, str | None]:
    if args.kind == "psi-n":
        if args.signature is None or args.n is None:
            raise ValidationError("psi-n needs --signature and --n")
        signature = parse_signature_text(args.signature)
        formula = sentences.build_psi_n(signature, args.n, max_classes=args.max_classes)
    else:
        if args.structure is None:
            raise ValidationError(f"{args.kind} needs --structure")
        k_structure = _load_structure(args.structure, inputs)
        builder = {
            "alpha": sentences.build_alpha,
            "phi": sentences.build_phi,
            "psi": sentences.build_psi,
        }[args.kind]
        formula = builder(k_structure)
    text = format_formula(formula) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return {"formula": text.strip(), "written_to": args.output}, text


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _cmd_model_check(args, inputs) -> tuple[dict, str | None]:
    structure = _load_structure(args.structure, inputs)
    if (args.sentence is None) == (args.sentence_file is None):
        raise ValidationError("give exactly one of --sentence / --sentence-file")
    if args.sentence_file:
        source = _read_file(args.sentence_file)
        inputs[args.sentence_file] = _digest(source)
        source = _strip_comments(source)
    else:
        source = args.sentence
    formula = parse_formula(source, structure.signature)
    assignment = _parse_assignment(args.assign)
    verdict = evaluate(structure, formula, assignment)
    return {
        "formula": format_formula(formula),
        "free_variables": sorted(free_variables(formula)),
        "assignment": {str(k): v for k, v in assignment.items()},
        "verdict": verdict,
    }, None


def _cmd_reduce_sig(args, inputs) -> tuple[dict, str | None]:
    structure = _load_structure(args.structure, inputs)
    reduction = sentences.reduce_duplicate_relations(structure)
    payload = reduction.to_report()
    if args.formula:
        original = parse_formula(args.formula, structure.signature)
        payload["translated_formula"] = format_formula(reduction.translate(original))
    return payload, None


def _cmd_frasnay_sweep(args, inputs) -> tuple[dict, str | None]:
    report = monomorphy.frasnay_sweep(
        args.arity, args.max_size, seed=args.seed, samples=args.samples
    )
    return report.to_report(), None


def _cmd_transport(args, inputs) -> tuple[dict, str | None]:
    source = _load_structure(args.source, inputs)
    target = _load_structure(args.target, inputs)
    bijection = find_isomorphism(source, target)
    if bijection is None:
        raise ValidationError("the structures are not isomorphic; nothing to transport")
    order = _parse_order(args.order, target.size)
    pulled = chaining.transport_order(bijection, order)
    return {
        "isomorphism": [list(p) for p in bijection.pairs],
        "order_on_target": list(order.ascending),
        "order_on_source": list(pulled.ascending),
        "chains_target": chaining.chains(target, order)[0],
        "chains_source": chaining.chains(source, pulled)[0],
    }, None


_COMMANDS: dict[str, Callable] = {
    "gen": _cmd_gen,
    "check-monomorphy": _cmd_check_monomorphy,
    "find-chains": _cmd_find_chains,
    "classify": _cmd_classify,
    "synthesize-def": _cmd_synthesize_def,
    "derive": _cmd_derive,
    "gen-sentence": _cmd_gen_sentence,
    "model-check": _cmd_model_check,
    "reduce-sig": _cmd_reduce_sig,
    "frasnay-sweep": _cmd_frasnay_sweep,
    "transport": _cmd_transport,
}


def build_parser() -> _Parser:
    parser = _Parser(prog="monochain", description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    parser.add_argument("--threads", type=int, default=1, help="reserved; output is identical for any value")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an example or random structure")
    p.add_argument("--kind", required=True, choices=generators.KINDS)
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("-o", "--output")

    p = sub.add_parser("check-monomorphy", help="k-monomorphy verdicts for all k")
    p.add_argument("structure")

    p = sub.add_parser("find-chains", help="enumerate chaining orders and classify them")
    p.add_argument("structure")
    p.add_argument("--cap", type=int, default=chaining.ENUMERATION_CAP)

    p = sub.add_parser("classify", help="classify the chain set")
    p.add_argument("structure")
    p.add_argument("--cap", type=int, default=chaining.ENUMERATION_CAP)

    p = sub.add_parser("synthesize-def", help="quantifier-free order definitions")
    p.add_argument("structure")
    p.add_argument("--order", required=True, help="ascending elements, e.g. 0,2,1")
    p.add_argument("-o", "--output")

    p = sub.add_parser("derive", help="build a structure from an order plus definitions")
    p.add_argument("definitions", help="definition file")
    p.add_argument("--order", required=True)
    p.add_argument("-o", "--output")

    p = sub.add_parser("gen-sentence", help="build alpha/phi/psi/psi-n formulas")
    p.add_argument("--kind", required=True, choices=("alpha", "phi", "psi", "psi-n"))
    p.add_argument("--structure")
    p.add_argument("--signature")
    p.add_argument("--n", type=int)
    p.add_argument("--max-classes", type=int, default=512)
    p.add_argument("-o", "--output")

    p = sub.add_parser("model-check", help="evaluate a formula in a structure")
    p.add_argument("structure")
    p.add_argument("--sentence")
    p.add_argument("--sentence-file")
    p.add_argument("--assign", help="free-variable assignment, e.g. 0=2,1=0")

    p = sub.add_parser("reduce-sig", help="merge duplicate relations")
    p.add_argument("structure")
    p.add_argument("--formula", help="formula to translate to the reduced signature")

    p = sub.add_parser("frasnay-sweep", help="empirical monomorphy-threshold sweep")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=monomorphy.SWEEP_DEFAULT_SAMPLES)

    p = sub.add_parser("transport", help="pull a chaining order back along an isomorphism")
    p.add_argument("source", help="structure file to transport onto")
    p.add_argument("target", help="structure file carrying the order")
    p.add_argument("--order", required=True, help="ascending elements on the target")

    return parser


def _render_text(payload, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(value)}")
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(value)}")
    else:
        lines.append(f"{pad}{json.dumps(payload)}")
    return lines


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1

    inputs: dict[str, str] = {}
    started = time.monotonic()
    try:
        result, artifact = _COMMANDS[args.command](args, inputs)
    except MonochainError as exc:
        if args.json:
            print(json.dumps({
                "schema": SCHEMA_VERSION,
                "command": args.command,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            }, indent=2))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"monochain: {exc}", file=sys.stderr)
        return 1

    elapsed_ms = round((time.monotonic() - started) * 1000, 3)
    if args.json:
        report = {
            "schema": SCHEMA_VERSION,
            "command": args.command,
            "inputs": inputs,
            "elapsed_ms": elapsed_ms,
            "result": result,
        }
        print(json.dumps(report, indent=2))
    elif artifact is not None:
        sys.stdout.write(artifact)
    else:
        print(f"command: {args.command}")
        for path, digest in inputs.items():
            print(f"input: {path} sha256:{digest[:16]}")
        print("\n".join(_render_text(result)))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
