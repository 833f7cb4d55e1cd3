"""Builders for the standard collections and the verification battery.

Each builder emits an ordered CollectionSpec; verify() runs every
desk-checkable necessary condition: exceptionality of each object,
vanishing of all backward graded Homs (or backward Euler pairings in
chi_only mode), length against the Schubert cell count, unimodularity of
the Gram matrix, and the helix thread criterion.  The report never claims
completeness, only that every necessary condition passed.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .roots import ExcolError, Weight, validate_weight
from .characters import tensor_decompose, weyl_dim
from .bwb import (
    BundleObject,
    ParabolicSpace,
    bundle_weight,
    format_graded,
    graded_hom,
    parabolic_space,
)
from .homcalc import KClass, _det_exact, euler_pairing, gram_matrix, kclass_of, thread_check

__all__ = [
    "CollectionSpec",
    "VerificationReport",
    "build_beilinson",
    "build_quadric",
    "build_symplectic_flag",
    "build_orthogonal_flag",
    "build_igr26",
    "compose_fibration",
    "verify",
    "dump_collection",
    "load_collection",
]


@dataclass(frozen=True)
class CollectionSpec:
    """Ordered candidate collection on one space."""

    space: ParabolicSpace
    objects: tuple
    mode: str
    labels: tuple[str, ...]
    provenance: str

    def __post_init__(self) -> None:
        if not self.objects:
            raise ExcolError("a collection must contain at least one object")
        if self.mode not in ("bundles", "kclasses"):
            raise ExcolError(f"unknown collection mode {self.mode!r}")
        if len(self.labels) != len(self.objects):
            raise ExcolError("labels and objects must have equal length")
        for obj in self.objects:
            if obj.space != self.space:
                raise ExcolError("all objects must live on the collection's space")

    def __len__(self) -> int:
        return len(self.objects)


def _bundle(space: ParabolicSpace, name: str) -> BundleObject:
    return BundleObject(space, bundle_weight(space, name))


def build_beilinson(n: int) -> CollectionSpec:
    """(O, O(1), ..., O(n)) on projective n-space."""
    if n < 1:
        raise ExcolError("projective space needs n >= 1")
    space = parabolic_space("A", n, [1])
    names = ["O" if t == 0 else f"O({t})" for t in range(n + 1)]
    objects = tuple(_bundle(space, nm) for nm in names)
    return CollectionSpec(space, objects, "bundles", tuple(names), f"beilinson:{n}")


def build_quadric(n: int) -> CollectionSpec:
    """Spinor bundles plus twists of O on the n-dimensional quadric."""
    if n < 2:
        raise ExcolError("quadrics need n >= 2")
    if n % 2:
        space = parabolic_space("B", (n + 1) // 2, [1])
        names = [f"Sigma(-{n})"]
    elif n == 2:
        space = parabolic_space("D", 2, [1, 2])
        names = [f"Sigma+(-{n})", f"Sigma-(-{n})"]
    else:
        space = parabolic_space("D", (n + 2) // 2, [1])
        names = [f"Sigma+(-{n})", f"Sigma-(-{n})"]
    names += [f"O({t})" for t in range(-n + 1, 0)] + ["O"]
    objects = tuple(_bundle(space, nm) for nm in names)
    return CollectionSpec(space, objects, "bundles", tuple(names), f"quadric:{n}")


def build_symplectic_flag(n: int) -> CollectionSpec:
    """All 2^n n! line bundles on the complete symplectic flag variety.

    The object indexed (j_{n-1}, ..., j_0), with j_k ranging over
    {-2n+2k+1, ..., 0}, has weight (j_0, ..., j_{n-1}); the order is
    lexicographic with the top index slowest and each range ascending.
    """
    if n < 1:
        raise ExcolError("symplectic flags need n >= 1")
    space = parabolic_space("C", n, range(1, n + 1))
    ranges = [list(range(-2 * n + 2 * k + 1, 1)) for k in range(n)]
    objects = []
    names = []
    for tup in itertools.product(*reversed(ranges)):
        js = tuple(reversed(tup))  # js[k] = j_k
        w = Weight(tuple(Fraction(j) for j in js))
        objects.append(BundleObject(space, w))
        names.append("O(" + ",".join(str(j) for j in tup) + ")")
    return CollectionSpec(
        space, tuple(objects), "bundles", tuple(names), f"symplectic:{n}"
    )


def _orthogonal_level_choices(n: int, m: int) -> list[tuple[str, dict[Weight, int]]]:
    """Per-level menu for the odd orthogonal flag tower, spinor first."""
    d = 2 * n - 2 * m - 1
    half = Fraction(1, 2)
    spinor: dict[Weight, int] = {}
    for signs in itertools.product((half, -half), repeat=n - m - 1):
        coords = [-half] * m + [half - d] + list(signs)
        w = Weight(tuple(coords))
        spinor[w] = spinor.get(w, 0) + 1
    out: list[tuple[str, dict[Weight, int]]] = [(f"Sig{m}", spinor)]
    for j in range(-(d - 1), 1):
        coords = [Fraction(0)] * n
        coords[m] = Fraction(j)
        label = "" if j == 0 else (f"O_Q({j})" if m == 0 else f"O_M{m}({j})")
        out.append((label, {Weight(tuple(coords)): 1}))
    return out


def build_orthogonal_flag(n: int) -> CollectionSpec:
    """2^n n! spinor-and-twist classes on the complete odd orthogonal flag variety.

    Emitted as K-classes: spinor pullbacks are filtered on the full flag, so
    objects are recorded by their line-weight multisets.  Each level of the
    quadric tower contributes one relative spinor class or one twist; the
    top level varies slowest, twists ascend to O, and the leftmost object is
    the product of all spinor classes.
    """
    if n < 2:
        raise ExcolError("orthogonal flags need n >= 2")
    space = parabolic_space("B", n, range(1, n + 1))
    menus = [_orthogonal_level_choices(n, m) for m in range(n)]
    objects = []
    names = []
    for picks in itertools.product(*reversed(menus)):
        terms: dict[Weight, int] = {Weight(tuple([Fraction(0)] * n)): 1}
        bits = []
        for label, mults in picks:
            nxt: dict[Weight, int] = {}
            for w0, c0 in terms.items():
                for w1, c1 in mults.items():
                    w = w0 + w1
                    nxt[w] = nxt.get(w, 0) + c0 * c1
            terms = nxt
            if label:
                bits.append(label)
        objects.append(KClass.from_dict(space, terms))
        names.append("*".join(bits) if bits else "O")
    return CollectionSpec(
        space, tuple(objects), "kclasses", tuple(names), f"orthogonal:{n}"
    )


def build_igr26() -> CollectionSpec:
    """The 12-bundle collection on the isotropic Grassmannian of 2-planes in 6-space."""
    space = parabolic_space("C", 3, [2])
    names = [
        "U(-4)", "O(-4)", "S^2U(-3)", "U(-3)", "O(-3)",
        "S^2U(-2)", "U(-2)", "O(-2)", "U(-1)", "O(-1)", "U", "O",
    ]
    objects = tuple(_bundle(space, nm) for nm in names)
    return CollectionSpec(space, objects, "bundles", tuple(names), "igr26")


def compose_fibration(
    base: CollectionSpec,
    total: ParabolicSpace,
    relative_twists: Sequence[Weight],
    twist_labels: Sequence[str] | None = None,
) -> CollectionSpec:
    """Product collection {pullback(base object) (x) twist} on the total space.

    The relative twist index runs slowest, so each twist contributes one
    outer block containing a pulled-back copy of the base collection.
    Pullbacks must stay irreducible (always true for line bundles) and each
    tensor product must be a single irreducible, or the tower is rejected.
    """
    if base.mode != "bundles":
        raise ExcolError("fibration composition needs a bundle-mode base")
    if total.rs != base.space.rs:
        raise ExcolError("base and total space must share the root system")
    if not base.space.crossed < total.crossed:
        raise ExcolError(f"{total} does not fiber over {base.space}")
    if not relative_twists:
        raise ExcolError("at least one relative twist is required")
    if twist_labels is None:
        twist_labels = [f"T{k}" for k in range(len(relative_twists))]

    rs = total.rs
    mask_total = total.levi_mask
    mask_base = base.space.levi_mask
    objects = []
    names = []
    for tw, tw_label in zip(relative_twists, twist_labels):
        validate_weight(rs, tw)
        twist_obj = BundleObject(total, tw)
        for obj, obj_label in zip(base.objects, base.labels):
            if weyl_dim(rs, mask_base, obj.hw) != weyl_dim(rs, mask_total, obj.hw):
                raise ExcolError(
                    f"pullback of {obj.hw} to {total} is filtered, not irreducible"
                )
            summands = tensor_decompose(rs, mask_total, obj.hw, tw)
            if len(summands) != 1 or summands[0][1] != 1:
                raise ExcolError(
                    f"tensor of {obj.hw} with twist {tw} is not irreducible on {total}"
                )
            objects.append(BundleObject(total, summands[0][0], obj.shift))
            names.append(f"{tw_label}*{obj_label}")
    return CollectionSpec(
        total,
        tuple(objects),
        "bundles",
        tuple(names),
        f"compose({base.provenance})",
    )


@dataclass(frozen=True)
class PairResult:
    row: int            # index of the Hom source (the later object)
    col: int            # index of the Hom target (the earlier object)
    ok: bool
    evidence: str       # rendered nonzero Hom / pairing on failure
    ordering_fixable: bool = False


@dataclass(frozen=True)
class VerificationReport:
    collection: CollectionSpec
    mode: str
    exceptional: tuple[PairResult, ...]
    semiorthogonal: tuple[PairResult, ...]
    length: int
    cells: int
    gram: tuple[tuple[int, ...], ...]
    det: int
    thread_ok: bool | None
    thread_trace: tuple[str, ...]
    wall_time: float

    @property
    def length_ok(self) -> bool:
        return self.length == self.cells

    @property
    def det_ok(self) -> bool:
        return abs(self.det) == 1

    @property
    def passed(self) -> bool:
        return (
            all(r.ok for r in self.exceptional)
            and all(r.ok for r in self.semiorthogonal)
            and self.length_ok
            and self.det_ok
            and self.thread_ok is not False
        )

    @property
    def verdict(self) -> str:
        return "complete-candidate" if self.passed else "failed"

    def summary_line(self) -> str:
        exc_ok = sum(1 for r in self.exceptional if r.ok)
        semi_ok = sum(1 for r in self.semiorthogonal if r.ok)
        if self.thread_ok is None:
            thread = "skipped"
        else:
            thread = "true" if self.thread_ok else "false"
        length = (
            f"length=cells={self.length}"
            if self.length_ok
            else f"length={self.length}!=cells={self.cells}"
        )
        return (
            f"{exc_ok}/{len(self.exceptional)} exceptional, "
            f"{semi_ok}/{len(self.semiorthogonal)} semiorthogonal, "
            f"{length}, det={self.det}, thread={thread}"
        )

    def render_text(self) -> str:
        lines = [
            f"collection {self.collection.provenance} on {self.collection.space} "
            f"({self.mode} mode)",
        ]
        labels = self.collection.labels
        for r in self.exceptional:
            if not r.ok:
                lines.append(f"FAIL object {labels[r.row]}: End = {r.evidence}")
        for r in self.semiorthogonal:
            if not r.ok:
                tag = " [ordering-fixable]" if r.ordering_fixable else ""
                lines.append(
                    f"FAIL pair ({labels[r.col]}, {labels[r.row]}): "
                    f"backward Hom({labels[r.row]}, {labels[r.col]}) = {r.evidence}{tag}"
                )
        if not self.length_ok:
            lines.append(f"FAIL length {self.length} != cell count {self.cells}")
        if not self.det_ok:
            lines.append(f"FAIL Gram determinant {self.det} is not a unit")
        if self.thread_ok is False:
            lines.append("FAIL thread: " + self.thread_trace[-1])
        lines.append(self.summary_line())
        lines.append(f"verdict: {self.verdict} (necessary conditions only)")
        lines.append(f"wall time: {self.wall_time:.2f}s")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "provenance": self.collection.provenance,
            "space": _space_json(self.collection.space),
            "mode": self.mode,
            "exceptional": [
                {"index": r.row, "ok": r.ok, "evidence": r.evidence}
                for r in self.exceptional
            ],
            "semiorthogonal": [
                {
                    "from": r.row,
                    "to": r.col,
                    "ok": r.ok,
                    "evidence": r.evidence,
                    "ordering_fixable": r.ordering_fixable,
                }
                for r in self.semiorthogonal
            ],
            "length": self.length,
            "cells": self.cells,
            "gram": [list(row) for row in self.gram],
            "det": self.det,
            "thread": self.thread_ok,
            "thread_trace": list(self.thread_trace),
            "summary": self.summary_line(),
            "verdict": self.verdict,
            "wall_time": self.wall_time,
        }


def _check_diag_exact(obj: BundleObject) -> tuple[bool, str]:
    dims = graded_hom(obj, obj)
    return dims == {0: 1}, format_graded(dims)


def _check_pair_exact(src: BundleObject, dst: BundleObject) -> tuple[bool, str, bool]:
    dims = graded_hom(src, dst)
    if not dims:
        return True, "0", False
    forward = graded_hom(dst, src)
    return False, format_graded(dims), not forward


def _check_diag_chi(x: KClass) -> tuple[bool, str]:
    val = euler_pairing(x, x)
    return val == 1, f"chi = {val}"


def _check_pair_chi(src: KClass, dst: KClass) -> tuple[bool, str, bool]:
    val = euler_pairing(src, dst)
    if val == 0:
        return True, "0", False
    forward = euler_pairing(dst, src)
    return False, f"chi = {val}", forward == 0


def verify(
    collection: CollectionSpec, mode: str = "exact", jobs: int = 1
) -> VerificationReport:
    """Run the full battery of necessary conditions on an ordered collection.

    exact mode computes graded Hom spaces for the diagonal and all backward
    pairs (bundle collections only); chi_only checks the same triangle at the
    level of Euler pairings.  Both modes compare length with the Schubert
    cell count and test Gram unimodularity; exact mode also runs the helix
    thread criterion.
    """
    start = time.perf_counter()
    if mode not in ("exact", "chi_only"):
        raise ExcolError(f"unknown verification mode {mode!r}")
    objs = collection.objects
    if mode == "exact" and collection.mode != "bundles":
        raise ExcolError(
            "exact verification needs irreducible bundle objects; "
            "use chi_only for K-class collections"
        )
    n = len(objs)

    if mode == "exact":
        diag_tasks = [(i, lambda i=i: _check_diag_exact(objs[i])) for i in range(n)]
        pair_tasks = [
            ((j, i), lambda i=i, j=j: _check_pair_exact(objs[j], objs[i]))
            for i in range(n)
            for j in range(i + 1, n)
        ]
    else:
        ks = [kclass_of(o) if isinstance(o, BundleObject) else o for o in objs]
        diag_tasks = [(i, lambda i=i: _check_diag_chi(ks[i])) for i in range(n)]
        pair_tasks = [
            ((j, i), lambda i=i, j=j: _check_pair_chi(ks[j], ks[i]))
            for i in range(n)
            for j in range(i + 1, n)
        ]

    jobs = max(1, int(jobs))
    if jobs == 1:
        diag_results = [fn() for _, fn in diag_tasks]
        pair_results = [fn() for _, fn in pair_tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            diag_futs = [pool.submit(fn) for _, fn in diag_tasks]
            pair_futs = [pool.submit(fn) for _, fn in pair_tasks]
            diag_results = [f.result() for f in diag_futs]
            pair_results = [f.result() for f in pair_futs]

    exceptional = tuple(
        PairResult(i, i, ok, ev)
        for (i, _), (ok, ev) in zip(diag_tasks, diag_results)
    )
    semiorthogonal = tuple(
        PairResult(j, i, ok, ev, fixable)
        for ((j, i), _), (ok, ev, fixable) in zip(pair_tasks, pair_results)
    )

    gram = gram_matrix(list(objs))
    det = _det_exact(gram)
    det_int = int(det) if det.denominator == 1 else 0

    thread_ok: bool | None = None
    thread_trace: tuple[str, ...] = ()
    if mode == "exact":
        ok, trace = thread_check(gram, collection.space.dim)
        thread_ok, thread_trace = ok, tuple(trace)

    return VerificationReport(
        collection=collection,
        mode=mode,
        exceptional=exceptional,
        semiorthogonal=semiorthogonal,
        length=n,
        cells=collection.space.cell_count,
        gram=tuple(tuple(row) for row in gram),
        det=det_int,
        thread_ok=thread_ok,
        thread_trace=thread_trace,
        wall_time=time.perf_counter() - start,
    )


def _frac_json(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _frac_parse(v) -> Fraction:
    if isinstance(v, bool):
        raise ExcolError("weights must be numbers, not booleans")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ExcolError(f"cannot parse weight coordinate {v!r}")


def _weight_json(w: Weight) -> list:
    return [_frac_json(c) for c in w.coords]


def _space_json(space: ParabolicSpace) -> dict:
    return {
        "family": space.rs.family,
        "rank": space.rs.rank,
        "crossed": sorted(space.crossed),
    }


def dump_collection(collection: CollectionSpec) -> dict:
    """Serialize to the JSON document format (exact rationals as 'p/q')."""
    objects = []
    for obj in collection.objects:
        if isinstance(obj, BundleObject):
            objects.append(
                {"shift": obj.shift, "weight": _weight_json(obj.hw), "mult": 1}
            )
        else:
            objects.append(
                {
                    "terms": [
                        {"weight": _weight_json(w), "coeff": c} for w, c in obj.terms
                    ]
                }
            )
    return {
        "space": _space_json(collection.space),
        "mode": collection.mode,
        "objects": objects,
        "labels": list(collection.labels),
        "order": "explicit",
        "provenance": collection.provenance,
    }


def load_collection(doc: dict) -> CollectionSpec:
    """Parse the JSON document format back into a CollectionSpec."""
    try:
        sp = doc["space"]
        space = parabolic_space(sp["family"], int(sp["rank"]), sp["crossed"])
        raw_objects = doc["objects"]
    except (KeyError, TypeError) as exc:
        raise ExcolError(f"malformed collection document: {exc}") from exc
    if not isinstance(raw_objects, list) or not raw_objects:
        raise ExcolError("collection document needs a nonempty object list")

    mode = doc.get("mode")
    objects: list = []
    for item in raw_objects:
        if "terms" in item:
            terms: dict[Weight, int] = {}
            for t in item["terms"]:
                w = Weight(tuple(_frac_parse(c) for c in t["weight"]))
                validate_weight(space.rs, w)
                terms[w] = terms.get(w, 0) + int(t["coeff"])
            objects.append(KClass.from_dict(space, terms))
        else:
            w = Weight(tuple(_frac_parse(c) for c in item["weight"]))
            mult = int(item.get("mult", 1))
            if mult != 1:
                raise ExcolError("bundle objects must have mult = 1")
            objects.append(BundleObject(space, w, int(item.get("shift", 0))))
    inferred = "kclasses" if any(isinstance(o, KClass) for o in objects) else "bundles"
    if mode is None:
        mode = inferred
    if mode == "bundles" and inferred == "kclasses":
        raise ExcolError("document declares bundle mode but contains K-class objects")

    labels = doc.get("labels")
    if labels is None:
        labels = [f"E{k}" for k in range(len(objects))]
    if len(labels) != len(objects):
        raise ExcolError("labels and objects must have equal length")
    if mode == "kclasses":
        objects = [
            o if isinstance(o, KClass) else kclass_of(o) for o in objects
        ]
    return CollectionSpec(
        space,
        tuple(objects),
        mode,
        tuple(str(x) for x in labels),
        str(doc.get("provenance", "file")),
    )
