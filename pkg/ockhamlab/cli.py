"""
Command-line front end
Every subcommand prints canonical JSON (or DOT) on stdout and diagnostics on
stderr. Exit codes: 0 success, 1 other failure, 2 malformed input,
3 internal cross-check failure, 4 resource cap exceeded.
"""
import argparse
import logging
import sys
from typing import Any, List, Optional, Sequence

from .classifier import CatalogKind, catalog_space, classify_algebra, classify_space, is_quasiprimal, subvariety_tags
from .config import load_config, set_config
from .duality import dual_algebra, dual_space, round_trip
from .errors import ConsistencyError, MalformedInputError, OckhamLabError
from .formats import dumps, load, parse_document, read_json, to_document, to_object
from .kernel import reset_kernel
from .morphisms import divisor, verify_divisor
from .piggyback import normalize
from .relations import Host, Relation, ca_definable, census
from .render import render_dot
from .structures import (
    BoundedLattice, FinStructure, OckhamAlgebra, OckhamSpace, validate_ockham_algebra, validate_ockham_space,
)
from .witnesses import family_report, witness_family

logger = logging.getLogger(__name__)


def _emit(data: Any) -> None:
    print(dumps(data))


def _algebra(obj) -> OckhamAlgebra:
    if isinstance(obj, OckhamAlgebra):
        return obj
    if isinstance(obj, OckhamSpace):
        return dual_algebra(obj)
    raise MalformedInputError(f"Expected an algebra or a space, got {type(obj).__name__}")


def _host(obj) -> Host:
    """Algebras, bounded lattices and structures host relations as they are; spaces via K"""
    if isinstance(obj, (OckhamAlgebra, BoundedLattice, FinStructure)):
        return obj
    return _algebra(obj)


def _relation(obj) -> Relation:
    if not isinstance(obj, Relation):
        raise MalformedInputError(f"Expected a relation, got {type(obj).__name__}")
    return obj


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise MalformedInputError(f"Expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    obj = to_object(parse_document(read_json(args.file)), check=False)
    if isinstance(obj, OckhamSpace):
        report = validate_ockham_space(obj).to_dict()
    elif isinstance(obj, OckhamAlgebra):
        report = validate_ockham_algebra(obj).to_dict()
    else:
        # lattices, structures and relations are fully checked on construction
        report = {"kind": to_document(obj)["kind"], "ok": True, "violations": []}
    _emit(report)
    return 0 if report["ok"] else 2


def cmd_dual(args) -> int:
    obj = load(args.file)
    if not isinstance(obj, (OckhamSpace, OckhamAlgebra)):
        raise MalformedInputError("dual needs a space or an algebra")
    round_trip(obj)
    _emit(to_document(dual_algebra(obj) if isinstance(obj, OckhamSpace) else dual_space(obj)))
    return 0


def cmd_classify(args) -> int:
    obj = load(args.file)
    if isinstance(obj, OckhamSpace):
        verdict, space = classify_space(obj), obj
    elif isinstance(obj, OckhamAlgebra):
        verdict = classify_algebra(obj)
        space = verdict.space
    else:
        raise MalformedInputError("classify needs a space or an algebra")
    if not verdict.verify():
        raise ConsistencyError("Verdict evidence does not re-verify")
    data = verdict.to_dict()
    data["subvarieties"] = sorted(subvariety_tags(space))
    _emit(data)
    if args.explain:
        evidence = verdict.catalog.isomorphism if verdict.catalog else verdict.witness.surjection
        print(render_dot(evidence))
    return 0


def cmd_quasiprimal(args) -> int:
    _emit({"quasiprimal": is_quasiprimal(_algebra(load(args.file)))})
    return 0


def cmd_census(args) -> int:
    classes = census(_host(load(args.file)), args.max_arity, indecomposable_only=args.indecomposable)
    _emit({"classes": [c.to_dict() for c in classes], "count": len(classes)})
    return 0


def cmd_equiv(args) -> int:
    r, s = _relation(load(args.first)), _relation(load(args.second))
    forward = ca_definable(r, s)
    backward = ca_definable(s, r)
    _emit({
        "equivalent": forward is not None and backward is not None,
        "first_from_second": forward.text() if forward else None,
        "second_from_first": backward.text() if backward else None,
    })
    return 0


def cmd_divisor(args) -> int:
    X, Y = load(args.sub), load(args.of)
    witness = divisor(X, Y)
    if witness is not None and not verify_divisor(X, Y, witness):
        raise ConsistencyError("Divisor witness does not re-verify")
    data = {"divisor": witness is not None}
    if witness is not None:
        data.update(witness.to_dict())
    _emit(data)
    return 0


def cmd_catalog(args) -> int:
    _emit(to_document(catalog_space(args.kind, args.m)))
    return 0


def cmd_witness(args) -> int:
    family = witness_family(args.family, args.ego)
    _emit(family_report(family, args.n, args.check))
    return 0


def cmd_normalize(args) -> int:
    M = load(args.file)
    if not isinstance(M, FinStructure):
        raise MalformedInputError("normalize needs a structure")
    result = normalize(M, _int_list(args.gens), args.m)
    data = result.to_dict()
    data["structure"] = to_document(result.structure)
    _emit(data)
    return 0


def cmd_render(args) -> int:
    obj = load(args.file, check=False)
    print(render_dot(obj, _int_list(args.gens) if args.gens else ()))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ockhamlab", description="Finite Ockham algebras and their relations")
    ap.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    ap.add_argument("--caps", default=None, help="size caps, e.g. 64,4096,20,4096 or power=8192")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the axioms of a space or algebra")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dual", help="H of an algebra or K of a space")
    p.add_argument("file")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("classify", help="finitely or infinitely many relations")
    p.add_argument("file")
    p.add_argument("--explain", action="store_true", help="print the evidence as DOT after the verdict")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("quasiprimal", help="binary subuniverse test")
    p.add_argument("file")
    p.set_defaults(func=cmd_quasiprimal)

    p = sub.add_parser("census", help="equivalence classes of relations compatible with an algebra, lattice or structure")
    p.add_argument("file")
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--indecomposable", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("equiv", help="mutual CA definability of two relations")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("divisor", help="is SUB in HS(OF)")
    p.add_argument("--sub", required=True)
    p.add_argument("--of", required=True)
    p.set_defaults(func=cmd_divisor)

    p = sub.add_parser("catalog", help="print a catalog or obstacle space")
    p.add_argument("--kind", required=True, choices=[k.value for k in CatalogKind])
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("witness", help="psi, rho and phi for a crown or fence")
    p.add_argument("--family", required=True, choices=["crown", "fence"])
    p.add_argument("--ego", required=True, choices=["kleene", "a2", "a56"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", type=int, default=None, help="also run the hypothesis check from X_CHECK")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("normalize", help="normal form of a dual class member with generators")
    p.add_argument("file")
    p.add_argument("--gens", required=True, help="comma-separated generating set")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("render", help="DOT diagram")
    p.add_argument("file")
    p.add_argument("--format", default="dot", choices=["dot"])
    p.add_argument("--gens", default=None, help="points to draw with a double border")
    p.set_defaults(func=cmd_render)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and map errors to exit codes"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.log_level:
        level = getattr(logging, args.log_level.upper(), None)
        if not isinstance(level, int):
            print(f"error: unknown log level {args.log_level!r}", file=sys.stderr)
            return 2
        logging.getLogger().setLevel(level)
    try:
        if args.caps is not None:
            set_config(load_config(args.caps))
            reset_kernel()
        return args.func(args)
    except OckhamLabError as exc:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def main() -> int:
    return run(sys.argv[1:])
