"""Command-line front end.

Exit codes: 0 success (and, for verify/thread, a passing verdict);
1 verification failure; 2 malformed input; 3 violated mathematical
precondition.  All numbers are exact; rationals render as "p/q".
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .roots import ExcolError, ParseError, Weight
from .characters import attach_disk_cache
from .bwb import (
    BundleObject,
    ParabolicSpace,
    bundle_weight,
    canonical_bundle,
    cohomology,
    format_graded,
    graded_hom,
    pushforward,
    space_from_string,
)
from .homcalc import gram_matrix, kclass_of, mutate_pair_k, thread_check
from .collections import (
    CollectionSpec,
    build_beilinson,
    build_igr26,
    build_orthogonal_flag,
    build_quadric,
    build_symplectic_flag,
    dump_collection,
    load_collection,
    verify,
)
from .homcalc import KClass

_BUILDERS = {
    "igr26": (build_igr26, False),
    "beilinson": (build_beilinson, True),
    "quadric": (build_quadric, True),
    "symplectic": (build_symplectic_flag, True),
    "orthogonal": (build_orthogonal_flag, True),
}


def _frac_json(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _weight_json(w: Weight) -> list:
    return [_frac_json(c) for c in w.coords]


def _parse_weight_literal(space: ParabolicSpace, text: str) -> Weight:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = [p.strip() for p in body.split(",")]
    try:
        coords = tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse weight {text!r}: {exc}") from exc
    if len(coords) != space.rs.dim:
        raise ParseError(
            f"weight {text!r} has {len(coords)} coordinates; {space} needs {space.rs.dim}"
        )
    return Weight(coords)


def _looks_like_weight(text: str) -> bool:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    if "," not in body and not body.lstrip("-").replace("/", "").isdigit():
        return False
    return all(
        p.strip().lstrip("-").replace("/", "").isdigit()
        for p in body.split(",")
        if p.strip() != ""
    ) and body.strip() != ""


def _parse_bundle_arg(space: ParabolicSpace, text: str) -> Weight:
    if _looks_like_weight(text):
        return _parse_weight_literal(space, text)
    return bundle_weight(space, text)


def _get_collection(args) -> CollectionSpec:
    sources = [
        bool(getattr(args, "builder", None)),
        bool(getattr(args, "file", None)),
        bool(getattr(args, "stdin", False)),
    ]
    if sum(sources) != 1:
        raise ParseError("pass exactly one of --builder, --file, --stdin")
    if getattr(args, "builder", None):
        return _builder_by_name(args.builder)
    if getattr(args, "stdin", False):
        try:
            doc = json.load(sys.stdin)
        except ValueError as exc:
            raise ParseError(f"stdin is not valid JSON: {exc}") from exc
        return load_collection(doc)
    try:
        with open(args.file) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {args.file}: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"{args.file} is not valid JSON: {exc}") from exc
    return load_collection(doc)


def _builder_by_name(name: str) -> CollectionSpec:
    base, _, param = name.partition(":")
    base = base.strip().lower()
    if base not in _BUILDERS:
        raise ParseError(
            f"unknown builder {name!r}; choose from {sorted(_BUILDERS)} "
            "(parametrized ones as e.g. quadric:4)"
        )
    fn, wants_param = _BUILDERS[base]
    if wants_param:
        if not param:
            raise ParseError(f"builder {base!r} needs a parameter, e.g. {base}:3")
        try:
            n = int(param)
        except ValueError as exc:
            raise ParseError(f"bad builder parameter {param!r}") from exc
        return fn(n)
    if param:
        raise ParseError(f"builder {base!r} takes no parameter")
    return fn()


def _cmd_bwb(args) -> int:
    space = space_from_string(args.space)
    hw = _parse_bundle_arg(space, args.weight)
    ans = cohomology(space, hw)
    if args.json:
        if ans.is_zero:
            doc = {"zero": True}
        else:
            doc = {
                "zero": False,
                "degree": ans.degree,
                "weight": _weight_json(ans.dominant),
                "dim": ans.dim,
            }
        print(json.dumps(doc))
    elif ans.is_zero:
        print("0")
    else:
        print(f"degree {ans.degree}: highest weight {ans.dominant}, dim {ans.dim}")
    return 0


def _cmd_hom(args) -> int:
    space = space_from_string(args.space)
    src = BundleObject(space, _parse_bundle_arg(space, args.src))
    dst = BundleObject(space, _parse_bundle_arg(space, args.dst))
    dims = graded_hom(src, dst)
    if args.json:
        print(json.dumps({"dims": {str(k): v for k, v in sorted(dims.items())}}))
    else:
        print(format_graded(dims))
    return 0


def _cmd_push(args) -> int:
    total = space_from_string(args.space)
    base = space_from_string(args.base)
    bundle = BundleObject(total, _parse_bundle_arg(total, args.bundle))
    result = pushforward(bundle, base)
    if args.json:
        if result is None:
            print(json.dumps({"zero": True}))
        else:
            print(
                json.dumps(
                    {
                        "zero": False,
                        "weight": _weight_json(result.hw),
                        "shift": result.shift,
                    }
                )
            )
    elif result is None:
        print("0")
    else:
        print(str(result))
    return 0


def _cmd_canonical(args) -> int:
    space = space_from_string(args.space)
    k = canonical_bundle(space)
    if args.json:
        print(json.dumps({"weight": _weight_json(k.hw)}))
    else:
        print(str(k.hw))
    return 0


def _cmd_cells(args) -> int:
    space = space_from_string(args.space)
    count = space.cell_count
    if args.json:
        print(json.dumps({"cells": count}))
    else:
        print(count)
    return 0


def _cmd_gram(args) -> int:
    coll = _get_collection(args)
    gram = gram_matrix(list(coll.objects), method=args.method)
    if args.json:
        print(json.dumps({"labels": list(coll.labels), "gram": gram}))
    else:
        width = max(len(str(x)) for row in gram for x in row)
        for row in gram:
            print(" ".join(str(x).rjust(width) for x in row))
    return 0


def _kclass_json(k: KClass) -> dict:
    return {
        "terms": [{"weight": _weight_json(w), "coeff": c} for w, c in k.terms]
    }


def _cmd_mutate(args) -> int:
    coll = _get_collection(args)
    i = args.index
    if not 0 <= i < len(coll.objects) - 1:
        raise ParseError(
            f"--index must name an adjacent pair: 0 <= i <= {len(coll.objects) - 2}"
        )
    left = coll.objects[i]
    right = coll.objects[i + 1]
    kl = kclass_of(left) if isinstance(left, BundleObject) else left
    kr = kclass_of(right) if isinstance(right, BundleObject) else right
    new_left, new_right = mutate_pair_k(kl, kr, args.side)
    if args.json:
        print(
            json.dumps(
                {"pair": [_kclass_json(new_left), _kclass_json(new_right)]}
            )
        )
    else:
        print(f"position {i}:   {new_left}")
        print(f"position {i + 1}: {new_right}")
    return 0


def _cmd_thread(args) -> int:
    coll = _get_collection(args)
    gram = gram_matrix(list(coll.objects))
    ok, trace = thread_check(gram, coll.space.dim)
    if args.json:
        print(json.dumps({"thread": ok, "trace": trace}))
    else:
        for line in trace:
            print(line)
        print(f"thread={'true' if ok else 'false'}")
    return 0 if ok else 1


def _cmd_build(args) -> int:
    coll = _builder_by_name(args.name)
    if args.json:
        print(json.dumps(dump_collection(coll)))
        return 0
    print(f"{coll.provenance} on {coll.space}: {len(coll)} objects")
    for k, (obj, label) in enumerate(zip(coll.objects, coll.labels)):
        if isinstance(obj, BundleObject):
            desc = str(obj.hw) + (f"[{obj.shift}]" if obj.shift else "")
        else:
            desc = str(obj)
        print(f"{k:4d}  {label:16s} {desc}")
    return 0


def _cmd_verify(args) -> int:
    coll = _get_collection(args)
    report = verify(coll, mode=args.mode, jobs=args.jobs)
    if args.json:
        print(json.dumps(report.to_json_dict()))
    else:
        print(report.render_text())
    return 0 if report.passed else 1


def _add_collection_source(sub) -> None:
    sub.add_argument("--builder", help="builder name, e.g. igr26 or quadric:4")
    sub.add_argument("--file", help="collection JSON document")
    sub.add_argument(
        "--stdin", action="store_true", help="read the collection JSON from stdin"
    )


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="excol",
        description="Exact-arithmetic workbench for exceptional collections "
        "on classical homogeneous spaces.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    def with_json(sub):
        sub.add_argument("--json", action="store_true", help="emit JSON")
        return sub

    s = with_json(subs.add_parser("bwb", help="cohomology of one irreducible bundle"))
    s.add_argument("--space", required=True)
    s.add_argument("--weight", required=True, help="bundle name or weight tuple")
    s.set_defaults(fn=_cmd_bwb)

    s = with_json(subs.add_parser("hom", help="graded Hom between two bundles"))
    s.add_argument("--space", required=True)
    s.add_argument("--from", dest="src", required=True)
    s.add_argument("--to", dest="dst", required=True)
    s.set_defaults(fn=_cmd_hom)

    s = with_json(subs.add_parser("push", help="pushforward along a fibration"))
    s.add_argument("--space", required=True, help="total space")
    s.add_argument("--base", required=True, help="base space")
    s.add_argument("--bundle", required=True)
    s.set_defaults(fn=_cmd_push)

    s = with_json(subs.add_parser("canonical", help="canonical bundle weight"))
    s.add_argument("--space", required=True)
    s.set_defaults(fn=_cmd_canonical)

    s = with_json(subs.add_parser("cells", help="Schubert cell count"))
    s.add_argument("--space", required=True)
    s.set_defaults(fn=_cmd_cells)

    s = with_json(subs.add_parser("gram", help="Gram matrix of Euler pairings"))
    _add_collection_source(s)
    s.add_argument("--method", choices=["chi", "ext"], default="chi")
    s.set_defaults(fn=_cmd_gram)

    s = with_json(subs.add_parser("mutate", help="mutate an adjacent pair (K-level)"))
    _add_collection_source(s)
    s.add_argument("--index", type=int, required=True)
    s.add_argument("--side", choices=["left", "right"], required=True)
    s.set_defaults(fn=_cmd_mutate)

    s = with_json(subs.add_parser("thread", help="helix thread criterion"))
    _add_collection_source(s)
    s.set_defaults(fn=_cmd_thread)

    s = with_json(subs.add_parser("build", help="emit a built-in collection"))
    s.add_argument("name", help="builder name, e.g. igr26 or symplectic:2")
    s.set_defaults(fn=_cmd_build)

    s = with_json(subs.add_parser("verify", help="run the verification battery"))
    _add_collection_source(s)
    s.add_argument("--mode", choices=["exact", "chi_only"], default="exact")
    s.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="parallel workers for pair checks",
    )
    s.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    cache_dir = os.environ.get("EXCOL_CACHE_DIR")
    if cache_dir:
        attach_disk_cache(cache_dir)
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ExcolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
