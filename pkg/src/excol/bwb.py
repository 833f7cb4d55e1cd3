"""Cohomology of irreducible homogeneous bundles via the dot action.

A parabolic quotient is named by its root system and the set of crossed
nodes.  Bundles are irreducible Levi representations tagged with a highest
weight and an integer shift.  Cohomology of a bundle is computed with the
rho-shifted dot action over the full system; pushforward along a fibration
uses the dot action over the Levi of the base.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .roots import (
    DominanceError,
    ExcolError,
    ParseError,
    RootSystem,
    Subsystem,
    Weight,
    build_root_system,
    coroot_pairing,
    is_dominant,
    make_dominant_dot,
    parabolic_cell_count,
    subsystem,
    validate_weight,
    weight,
)
from .characters import dual_weight, tensor_decompose, weyl_dim

__all__ = [
    "ParabolicSpace",
    "parabolic_space",
    "space_from_string",
    "BundleObject",
    "CohomologyAnswer",
    "cohomology",
    "graded_hom",
    "graded_hom_detail",
    "pushforward",
    "canonical_bundle",
    "bundle_weight",
    "spinor_weight",
    "format_graded",
]


@dataclass(frozen=True)
class ParabolicSpace:
    """Quotient of a classical group by the parabolic with the given crossed nodes."""

    rs: RootSystem
    crossed: frozenset[int]

    def __post_init__(self) -> None:
        if not self.crossed:
            raise ExcolError("at least one node must be crossed")
        bad = [i for i in self.crossed if not 1 <= i <= self.rs.rank]
        if bad:
            raise ExcolError(f"crossed nodes {bad} outside 1..{self.rs.rank}")

    @property
    def levi_mask(self) -> frozenset[int]:
        return frozenset(range(1, self.rs.rank + 1)) - self.crossed

    @property
    def levi(self) -> Subsystem:
        return subsystem(self.rs, self.levi_mask)

    @property
    def nilradical_roots(self) -> tuple[Weight, ...]:
        levi_pos = set(self.levi.positive_roots)
        return tuple(a for a in self.rs.positive_roots if a not in levi_pos)

    @property
    def dim(self) -> int:
        return len(self.nilradical_roots)

    @property
    def cell_count(self) -> int:
        return parabolic_cell_count(self.rs, self.levi_mask)

    def __str__(self) -> str:
        nodes = ",".join(str(i) for i in sorted(self.crossed))
        return f"{self.rs}:P{nodes}"


def parabolic_space(family: str, rank: int, crossed: Iterable[int]) -> ParabolicSpace:
    return ParabolicSpace(build_root_system(family, rank), frozenset(crossed))


_SPACE_RE = re.compile(r"^([ABCD])(\d+):P([\d,]+)$")


def space_from_string(text: str) -> ParabolicSpace:
    """Parse names like C3:P2 or C3:P1,2."""
    m = _SPACE_RE.match(text.strip())
    if not m:
        raise ParseError(f"cannot parse space {text!r}; expected e.g. C3:P2 or C3:P1,2")
    family, rank, nodes = m.group(1), int(m.group(2)), m.group(3)
    crossed = [int(s) for s in nodes.split(",") if s]
    return parabolic_space(family, rank, crossed)


@dataclass(frozen=True)
class BundleObject:
    """Irreducible homogeneous bundle, possibly shifted in the derived category."""

    space: ParabolicSpace
    hw: Weight
    shift: int = 0

    def __post_init__(self) -> None:
        validate_weight(self.space.rs, self.hw)
        if not is_dominant(self.space.levi, self.hw):
            raise DominanceError(
                f"{self.hw} is not dominant for the Levi of {self.space}"
            )

    @property
    def rank(self) -> int:
        return weyl_dim(self.space.rs, self.space.levi_mask, self.hw)

    def dual(self) -> "BundleObject":
        dw = dual_weight(self.space.rs, self.space.levi_mask, self.hw)
        return BundleObject(self.space, dw, -self.shift)

    def tensor_line(self, line: Weight) -> "BundleObject":
        """Tensor by the line bundle with the given weight."""
        for a in self.space.levi.simple_roots:
            if coroot_pairing(line, a) != 0:
                raise ExcolError(f"{line} is not a line bundle weight on {self.space}")
        return BundleObject(self.space, self.hw + line, self.shift)

    def shifted(self, k: int) -> "BundleObject":
        return replace(self, shift=self.shift + k)

    def __str__(self) -> str:
        tail = f"[{self.shift}]" if self.shift else ""
        return f"E{self.hw}{tail}"


@dataclass(frozen=True)
class CohomologyAnswer:
    """Cohomology of one irreducible bundle: zero, or one irrep in one degree."""

    degree: int | None
    dominant: Weight | None
    dim: int

    @property
    def is_zero(self) -> bool:
        return self.degree is None

    def dims(self) -> dict[int, int]:
        return {} if self.degree is None else {self.degree: self.dim}

    def __str__(self) -> str:
        return format_graded(self.dims())


def cohomology(space: ParabolicSpace, hw: Weight) -> CohomologyAnswer:
    """Sheaf cohomology of the irreducible bundle with Levi-highest weight hw."""
    if not is_dominant(space.levi, hw):
        raise DominanceError(f"{hw} is not dominant for the Levi of {space}")
    rs = space.rs
    hit = make_dominant_dot(rs, None, hw)
    if hit is None:
        return CohomologyAnswer(None, None, 0)
    length, dom = hit
    assert 0 <= length <= space.dim, "cohomological degree must not exceed the dimension"
    return CohomologyAnswer(length, dom, weyl_dim(rs, None, dom))


def _hom_pieces(src: BundleObject, dst: BundleObject) -> list[tuple[Weight, int]]:
    if src.space != dst.space:
        raise ExcolError("both bundles must live on the same space")
    rs = src.space.rs
    mask = src.space.levi_mask
    dual_hw = dual_weight(rs, mask, src.hw)
    return tensor_decompose(rs, mask, dual_hw, dst.hw)


def graded_hom_detail(
    src: BundleObject, dst: BundleObject
) -> dict[int, list[tuple[Weight, int]]]:
    """Ext groups by degree, listing full-system dominant weights with multiplicity."""
    offset = src.shift - dst.shift
    out: dict[int, list[tuple[Weight, int]]] = {}
    for piece, mult in _hom_pieces(src, dst):
        ans = cohomology(src.space, piece)
        if ans.is_zero:
            continue
        k = ans.degree + offset
        out.setdefault(k, []).append((ans.dominant, mult))
    return {k: sorted(v, key=lambda p: p[0].coords) for k, v in sorted(out.items())}


def graded_hom(src: BundleObject, dst: BundleObject) -> dict[int, int]:
    """Dimensions of the graded Ext groups between two bundles."""
    rs = src.space.rs
    dims: dict[int, int] = {}
    for k, pieces in graded_hom_detail(src, dst).items():
        dims[k] = sum(mult * weyl_dim(rs, None, dom) for dom, mult in pieces)
    return dims


def pushforward(bundle: BundleObject, base: ParabolicSpace) -> BundleObject | None:
    """Derived pushforward along the fibration onto a less-crossed quotient.

    The answer for an irreducible bundle is a single irreducible summand on
    the base, or zero.  Cohomology in fiber degree ell lowers the shift by ell.
    """
    total = bundle.space
    if total.rs != base.rs:
        raise ExcolError("total space and base must share the root system")
    if not base.crossed <= total.crossed:
        raise ExcolError(f"{base} is not a quotient of {total}")
    hit = make_dominant_dot(base.rs, base.levi_mask, bundle.hw)
    if hit is None:
        return None
    length, dom = hit
    return BundleObject(base, dom, bundle.shift - length)


def canonical_bundle(space: ParabolicSpace) -> BundleObject:
    """Canonical line bundle: minus the sum of the nilradical roots."""
    total = weight(*([0] * space.rs.dim))
    for a in space.nilradical_roots:
        total = total + a
    return BundleObject(space, -total, 0)


def format_graded(dims: Mapping[int, int]) -> str:
    """Render graded dimensions like 'k in degree 7' or 'k^6 in degree 0'."""
    if not dims:
        return "0"
    parts = []
    for k in sorted(dims):
        d = dims[k]
        head = "k" if d == 1 else f"k^{d}"
        parts.append(f"{head} in degree {k}")
    return " + ".join(parts)


def _is_quadric(space: ParabolicSpace) -> bool:
    rs = space.rs
    if rs.family == "B" and space.crossed == frozenset({1}):
        return True
    if rs.family == "D" and rs.rank >= 3 and space.crossed == frozenset({1}):
        return True
    if rs.family == "D" and rs.rank == 2 and space.crossed == frozenset({1, 2}):
        return True
    return False


def _hyperplane_weight(space: ParabolicSpace) -> Weight:
    """Weight of O(1) on a space with one crossed node k: sum of the first k epsilons."""
    if _is_quadric(space):
        k = 1
    elif len(space.crossed) == 1:
        (k,) = space.crossed
    else:
        raise ExcolError(f"O(t) is ambiguous on {space}; name the projection")
    coords = [1] * k + [0] * (space.rs.dim - k)
    return weight(*coords)


@lru_cache(maxsize=None)
def _calibrated_spinor_constant(space: ParabolicSpace) -> Fraction:
    """Leading coordinate of the spinor weight, fixed by acyclicity.

    The free constant c is pinned by requiring every twist Sigma(t) for
    t = -1 .. -dim to be acyclic, over all sign choices; the search over
    half-integral candidates must leave exactly one survivor.
    """
    rs = space.rs
    n = rs.rank
    signs = [Fraction(1, 2)] if rs.family == "B" else [Fraction(1, 2), Fraction(-1, 2)]
    hyper = _hyperplane_weight(space)
    survivors = []
    for numer in range(-9, 10, 2):
        c = Fraction(numer, 2)
        ok = True
        for last in signs:
            coords = [c] + [Fraction(1, 2)] * (n - 2) + [last] if n >= 2 else [c]
            lam = Weight(tuple(coords))
            for t in range(-1, -space.dim - 1, -1):
                tw = lam + hyper.scale(t)
                if make_dominant_dot(rs, None, tw) is not None:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            survivors.append(c)
    assert len(survivors) == 1, f"spinor calibration on {space} found {survivors}"
    return survivors[0]


def spinor_weight(space: ParabolicSpace, sign: int = 0) -> Weight:
    """Highest weight of the (twist-normalized) spinor bundle on a quadric.

    sign selects the half-spinor on even quadrics (+1 or -1); pass 0 on odd
    quadrics where there is a single spinor bundle.
    """
    if not _is_quadric(space):
        raise ExcolError(f"{space} is not a quadric")
    rs = space.rs
    if rs.family == "B":
        if sign != 0:
            raise ExcolError("odd quadrics have a single spinor bundle; use sign=0")
    else:
        if sign not in (1, -1):
            raise ExcolError("even quadrics need sign=+1 or sign=-1")
    c = _calibrated_spinor_constant(space)
    half = Fraction(1, 2)
    tail = [half] * (rs.rank - 1)
    if rs.family == "D" and sign == -1:
        tail[-1] = -half
    return Weight(tuple([c] + tail))


_NAME_RES = [
    ("O", re.compile(r"^O(?:\((-?\d+)\))?$")),
    ("U", re.compile(r"^U(\*)?(?:\((-?\d+)\))?$")),
    ("SU", re.compile(r"^S\^?(\d+)U(?:\((-?\d+)\))?$")),
    ("SIGMA", re.compile(r"^Sigma([+-])?(?:\((-?\d+)\))?$")),
    ("PULL", re.compile(r"^([pq])\*O(?:\((-?\d+)\))?$")),
    ("SUB", re.compile(r"^O_([NU])(?:\((-?\d+)\))?$")),
    ("L", re.compile(r"^L\((-?\d+),(-?\d+)\)$")),
]


def bundle_weight(space: ParabolicSpace, name: str) -> Weight:
    """Resolve a tautological bundle name to its Levi-highest weight.

    Supported names: O, O(t), U, U*, U(t), U*(t), S^aU(b), Sigma(t),
    Sigma+(t), Sigma-(t), p*O(t), q*O(t), O_N(t), O_U(t), L(i,j).
    """
    name = name.strip().replace(" ", "")
    rs = space.rs
    dim = rs.dim
    kind = None
    m = None
    for k, rx in _NAME_RES:
        m = rx.match(name)
        if m:
            kind = k
            break
    if kind is None:
        raise ParseError(f"cannot parse bundle name {name!r}")

    def twist(g: str | None) -> Weight:
        t = int(g) if g else 0
        return _hyperplane_weight(space).scale(t)

    if kind == "O":
        t = m.group(1)
        if t is None or int(t) == 0:
            return Weight(tuple([Fraction(0)] * dim))
        return twist(t)

    if kind in ("U", "SU"):
        if len(space.crossed) != 1:
            raise ExcolError(f"U is only defined with a single crossed node, not {space}")
        (k,) = space.crossed
        if kind == "U":
            starred, t = m.group(1), m.group(2)
            base = [0] * dim
            if starred:
                base[0] = 1
            else:
                base[k - 1] = -1
            return Weight(tuple(Fraction(x) for x in base)) + twist(t)
        a, t = int(m.group(1)), m.group(2)
        base = [0] * dim
        base[k - 1] = -a
        return Weight(tuple(Fraction(x) for x in base)) + twist(t)

    if kind == "SIGMA":
        sgn, t = m.group(1), m.group(2)
        sign = 0 if sgn is None else (1 if sgn == "+" else -1)
        return spinor_weight(space, sign) + twist(t)

    if kind in ("PULL", "SUB", "L"):
        if not (rs.family == "C" and space.crossed == frozenset({1, 2})):
            raise ExcolError(
                f"{name} refers to a two-step symplectic flag, not {space}"
            )

    if kind == "PULL":
        proj, t = m.group(1), int(m.group(2) or 0)
        k = 1 if proj == "p" else 2
        coords = [t] * k + [0] * (dim - k)
        return Weight(tuple(Fraction(x) for x in coords))

    if kind == "SUB":
        which, t = m.group(1), int(m.group(2) or 0)
        coords = [0] * dim
        coords[1 if which == "N" else 0] = t
        return Weight(tuple(Fraction(x) for x in coords))

    i, j = int(m.group(1)), int(m.group(2))
    coords = [-i, -j] + [0] * (dim - 2)
    return Weight(tuple(Fraction(x) for x in coords))
