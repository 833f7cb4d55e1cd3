"""Euler pairings, Gram matrices, mutations, and the helix thread check.

K-theory classes are integer combinations of full-flag line weights; the
class of an irreducible bundle is its Levi character, signed by the parity
of the shift.  The Euler pairing is computed either from graded Hom spaces
or K-theoretically from line-bundle Euler characteristics; the two routes
are kept separate so they can cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .roots import ExcolError, RootSystem, Weight, make_dominant_dot
from .characters import irrep_character, weyl_dim
from .bwb import BundleObject, ParabolicSpace, graded_hom

__all__ = [
    "KClass",
    "kclass_of",
    "chi_line",
    "euler_pairing",
    "gram_matrix",
    "serre_operator",
    "mutate_pair_k",
    "thread_check",
]


@dataclass(frozen=True)
class KClass:
    """Formal integer combination of line-weight classes on a fixed space."""

    space: ParabolicSpace
    terms: tuple[tuple[Weight, int], ...]

    @staticmethod
    def from_dict(space: ParabolicSpace, terms: Mapping[Weight, int]) -> "KClass":
        clean = tuple(
            sorted(((w, c) for w, c in terms.items() if c), key=lambda p: p[0].coords)
        )
        return KClass(space, clean)

    def as_dict(self) -> dict[Weight, int]:
        return dict(self.terms)

    def scale(self, k: int) -> "KClass":
        return KClass.from_dict(self.space, {w: k * c for w, c in self.terms})

    def add(self, other: "KClass") -> "KClass":
        if self.space != other.space:
            raise ExcolError("cannot add classes on different spaces")
        out = self.as_dict()
        for w, c in other.terms:
            out[w] = out.get(w, 0) + c
        return KClass.from_dict(self.space, out)

    def sub(self, other: "KClass") -> "KClass":
        return self.add(other.scale(-1))

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.terms:
            sign = "+" if c >= 0 else "-"
            mag = abs(c)
            coeff = "" if mag == 1 else f"{mag}*"
            bits.append(f"{sign} {coeff}L{w}")
        text = " ".join(bits)
        return text[2:] if text.startswith("+ ") else text


def kclass_of(obj: BundleObject) -> KClass:
    """K-theory class of a bundle: its Levi character, signed by shift parity."""
    sign = -1 if obj.shift % 2 else 1
    char = irrep_character(obj.space.rs, obj.space.levi_mask, obj.hw)
    return KClass.from_dict(obj.space, {w: sign * m for w, m in char.mults.items()})


@lru_cache(maxsize=None)
def chi_line(rs: RootSystem, nu: Weight) -> int:
    """Euler characteristic of the full-flag line bundle with weight nu."""
    hit = make_dominant_dot(rs, None, nu)
    if hit is None:
        return 0
    length, dom = hit
    d = weyl_dim(rs, None, dom)
    return -d if length % 2 else d


def _as_kclass(obj: "BundleObject | KClass") -> KClass:
    return kclass_of(obj) if isinstance(obj, BundleObject) else obj


def _chi_k(x: KClass, y: KClass) -> int:
    if x.space != y.space:
        raise ExcolError("Euler pairing needs both classes on the same space")
    rs = x.space.rs
    total = 0
    for a, ca in x.terms:
        for b, cb in y.terms:
            total += ca * cb * chi_line(rs, b - a)
    return total


def euler_pairing(
    x: "BundleObject | KClass", y: "BundleObject | KClass", method: str = "chi"
) -> int:
    """Euler pairing chi(x, y).

    method="chi" expands both sides into line classes and sums line Euler
    characteristics; method="ext" computes the graded Hom spaces and takes
    the alternating sum (bundle inputs only).
    """
    if method == "chi":
        return _chi_k(_as_kclass(x), _as_kclass(y))
    if method == "ext":
        if not (isinstance(x, BundleObject) and isinstance(y, BundleObject)):
            raise ExcolError("method='ext' needs actual bundles, not K-classes")
        dims = graded_hom(x, y)
        return sum((-d if k % 2 else d) for k, d in dims.items())
    raise ExcolError(f"unknown Euler pairing method {method!r}")


def gram_matrix(
    objects: Sequence["BundleObject | KClass"], method: str = "chi"
) -> list[list[int]]:
    """Matrix of Euler pairings G[i][j] = chi(E_i, E_j)."""
    n = len(objects)
    return [
        [euler_pairing(objects[i], objects[j], method=method) for j in range(n)]
        for i in range(n)
    ]


def _det_exact(mat: Sequence[Sequence[int]]) -> Fraction:
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def _inverse_exact(mat: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == r)) for i in range(n)]
         for r, row in enumerate(mat)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ExcolError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def serre_operator(gram: Sequence[Sequence[int]]) -> list[list[int]]:
    """K-level Serre operator S = G^{-1} G^T acting on coordinate columns.

    Defined by chi(x, S y) = chi(y, x); requires the Gram matrix to be
    unimodular so that S is an integer matrix.
    """
    n = len(gram)
    if any(len(row) != n for row in gram):
        raise ExcolError("Gram matrix must be square")
    det = _det_exact(gram)
    if abs(det) != 1:
        raise ExcolError(f"Gram matrix has determinant {det}, expected +1 or -1")
    ginv = _inverse_exact(gram)
    gt = [[Fraction(gram[j][i]) for j in range(n)] for i in range(n)]
    s = _matmul(ginv, gt)
    out = []
    for row in s:
        assert all(x.denominator == 1 for x in row), "Serre operator must be integral"
        out.append([int(x) for x in row])
    return out


def mutate_pair_k(
    left: KClass, right: KClass, side: str
) -> tuple[KClass, KClass]:
    """Mutate an adjacent pair at the level of K-theory classes.

    side="left" replaces (E, F) by (L_E F, E) with [L_E F] = chi(E,F)[E] - [F];
    side="right" replaces it by (F, R_F E) with [R_F E] = chi(E,F)[F] - [E].
    """
    if left.terms == right.terms:
        raise ExcolError("refusing to mutate a pair with identical classes")
    chi = _chi_k(left, right)
    if side == "left":
        return left.scale(chi).sub(right), left
    if side == "right":
        return right, right.scale(chi).sub(left)
    raise ExcolError(f"unknown mutation side {side!r}")


def _vec_chi(gram: Sequence[Sequence[int]], x: Sequence[int], y: Sequence[int]) -> int:
    n = len(gram)
    total = 0
    for i in range(n):
        xi = x[i]
        if xi:
            row = gram[i]
            total += xi * sum(row[j] * y[j] for j in range(n) if y[j])
    return total


def thread_check(
    gram: Sequence[Sequence[int]], space_dim: int
) -> tuple[bool, list[str]]:
    """Helix thread test on a Gram matrix for a space of the given dimension.

    Preconditions: unit upper-triangular pairing, unimodularity, and at
    least space_dim + 1 objects (the K-group of the space cannot be smaller).
    Then each class is right-mutated through the rest of the window and must
    close onto its inverse-Serre image, with the window staying unit
    upper-triangular at every cyclic step.
    """
    trace: list[str] = []
    n = len(gram)
    if any(len(row) != n for row in gram):
        trace.append("FAIL: Gram matrix is not square")
        return False, trace

    for i in range(n):
        if gram[i][i] != 1:
            trace.append(f"FAIL: chi(E_{i}, E_{i}) = {gram[i][i]}, expected 1")
            return False, trace
    for i in range(n):
        for j in range(i):
            if gram[i][j] != 0:
                trace.append(
                    f"FAIL: backward pairing chi(E_{i}, E_{j}) = {gram[i][j]}, expected 0"
                )
                return False, trace
    trace.append(f"unit upper-triangular: ok ({n} objects)")

    det = _det_exact(gram)
    if abs(det) != 1:
        trace.append(f"FAIL: det G = {det}, expected +1 or -1")
        return False, trace
    trace.append("unimodular: ok (det G = %d)" % int(det))

    if n < space_dim + 1:
        trace.append(
            f"FAIL: only {n} objects on a {space_dim}-fold; "
            f"the K-group has rank at least {space_dim + 1}"
        )
        return False, trace
    trace.append(f"period bound: ok ({n} objects >= dim + 1 = {space_dim + 1})")

    s = serre_operator(gram)
    sinv = _inverse_exact(s)
    sign = -1 if (n - 1) % 2 else 1

    window: list[list[int]] = [[int(i == j) for j in range(n)] for i in range(n)]
    for pos in range(n):
        head = window[0]
        rest = window[1:]
        w = list(head)
        for e in rest:
            c = _vec_chi(gram, w, e)
            w = [c * ej - wj for ej, wj in zip(e, w)]
        expected_frac = [
            sign * sum(sinv[i][j] * Fraction(head[j]) for j in range(n))
            for i in range(n)
        ]
        if any(f.denominator != 1 for f in expected_frac):
            trace.append(f"FAIL: inverse Serre image of position {pos} is not integral")
            return False, trace
        expected = [int(f) for f in expected_frac]
        if w != expected:
            trace.append(
                f"FAIL: thread open at position {pos}: sweep gives {w}, "
                f"inverse Serre gives {expected}"
            )
            return False, trace
        # pairs among the carried-over classes were checked at earlier
        # positions, so only the new class needs triangularity checks
        for e in rest:
            if _vec_chi(gram, w, e) != 0:
                trace.append(f"FAIL: window lost triangularity after position {pos}")
                return False, trace
        if _vec_chi(gram, w, w) != 1:
            trace.append(f"FAIL: window lost unit diagonal after position {pos}")
            return False, trace
        window = rest + [w]
        trace.append(f"position {pos}: sweep closes onto the inverse Serre image")

    trace.append("thread: complete")
    return True, trace
