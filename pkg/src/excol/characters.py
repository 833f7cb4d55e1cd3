"""Exact representation-theoretic arithmetic over Levi subsystems.

Characters are finite multiplicity maps weight -> positive integer.  The
irreducible character is computed by Freudenthal's recursion over the
subsystem, dimensions by the Weyl product formula, tensor products by
character multiplication followed by greedy highest-weight extraction.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .roots import (
    DominanceError,
    RootSystem,
    Subsystem,
    Weight,
    coroot_pairing,
    is_dominant,
    plain_dominantize,
    subsystem,
    validate_weight,
    weyl_orbit,
)

__all__ = [
    "Character",
    "weyl_dim",
    "irrep_character",
    "tensor_decompose",
    "dual_weight",
    "set_character_cache",
    "clear_character_cache",
    "attach_disk_cache",
]


@dataclass(frozen=True)
class Character:
    """Multiplicity map of a (virtual) finite-dimensional Levi representation."""

    rs: RootSystem
    mask: frozenset[int]
    mults: Mapping[Weight, int]

    def total_dim(self) -> int:
        return sum(self.mults.values())


# In-memory memo of irreducible characters.  Concurrent reads are safe;
# writes are serialized by the lock.  Results never depend on the cache.
_cache_lock = threading.Lock()
_cache: dict[tuple, dict[Weight, int]] = {}
_cache_enabled = True
_disk_cache_dir: str | None = None


def set_character_cache(enabled: bool) -> None:
    global _cache_enabled
    _cache_enabled = enabled


def clear_character_cache() -> None:
    with _cache_lock:
        _cache.clear()


def attach_disk_cache(directory: str | None) -> None:
    """Persist irreducible characters under directory (content-addressed)."""
    global _disk_cache_dir
    _disk_cache_dir = directory


def _disk_key(rs: RootSystem, mask: frozenset[int], lam: Weight) -> str:
    import hashlib

    raw = f"{rs.family}|{rs.rank}|{sorted(mask)}|{[str(c) for c in lam.coords]}"
    return hashlib.sha256(raw.encode()).hexdigest()


def _disk_load(key: str, dim: int) -> dict[Weight, int] | None:
    import json
    import os

    if _disk_cache_dir is None:
        return None
    path = os.path.join(_disk_cache_dir, key + ".json")
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return None
    out: dict[Weight, int] = {}
    for item in data:
        coords = tuple(Fraction(str(c)) for c in item["w"])
        if len(coords) != dim:
            return None
        out[Weight(coords)] = int(item["m"])
    return out


def _disk_store(key: str, mults: dict[Weight, int]) -> None:
    import json
    import os

    if _disk_cache_dir is None:
        return
    os.makedirs(_disk_cache_dir, exist_ok=True)
    path = os.path.join(_disk_cache_dir, key + ".json")
    if os.path.exists(path):
        return
    items = [
        {"w": [str(c) for c in w.coords], "m": m}
        for w, m in sorted(mults.items(), key=lambda kv: kv[0].coords)
    ]
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(items, fh)
    os.replace(tmp, path)


def weyl_dim(rs: RootSystem, mask: Iterable[int] | None, lam: Weight) -> int:
    """Dimension of the irreducible with highest weight lam over the subsystem."""
    validate_weight(rs, lam)
    sub = subsystem(rs, mask)
    if not is_dominant(sub, lam):
        raise DominanceError(f"{lam} is not dominant for mask {sorted(sub.mask)}")
    num = Fraction(1)
    shifted = lam + sub.rho
    for a in sub.positive_roots:
        num *= shifted.dot(a) / sub.rho.dot(a)
    assert num.denominator == 1 and num > 0, "Weyl dimension must be a positive integer"
    return int(num)


def _freudenthal(sub: Subsystem, lam: Weight) -> dict[Weight, int]:
    if not sub.positive_roots:
        return {lam: 1}

    lam_norm = lam.dot(lam)
    rho = sub.rho
    top = lam + rho
    top_norm = top.dot(top)

    # BFS through lam minus nonnegative combinations of subsystem simple
    # roots, pruned by the orbit norm bound |nu| <= |lam|.  Layer index is
    # the height of lam - nu, so dominant weights come out height-ordered.
    layers: list[list[Weight]] = [[lam]]
    seen = {lam}
    while layers[-1]:
        nxt: list[Weight] = []
        for v in layers[-1]:
            for a in sub.simple_roots:
                u = v - a
                if u not in seen and u.dot(u) <= lam_norm:
                    seen.add(u)
                    nxt.append(u)
        layers.append(nxt)
    dominant_by_height = [
        w for layer in layers for w in sorted(layer, key=lambda x: x.coords)
        if is_dominant(sub, w)
    ]

    mult: dict[Weight, int] = {lam: 1}
    for mu in dominant_by_height:
        if mu == lam:
            continue
        acc = Fraction(0)
        for a in sub.positive_roots:
            k = 1
            while True:
                nu = mu + a.scale(k)
                if nu.dot(nu) > lam_norm:
                    break
                m = mult.get(plain_dominantize(sub, nu), 0)
                if m:
                    acc += m * nu.dot(a)
                k += 1
        shifted = mu + rho
        denom = top_norm - shifted.dot(shifted)
        assert denom > 0, "Freudenthal denominator must be positive below lam"
        val = 2 * acc / denom
        assert val.denominator == 1 and val > 0, "multiplicity must be a positive integer"
        mult[mu] = int(val)

    # expand over Weyl orbits; multiplicity is orbit-constant
    full: dict[Weight, int] = {}
    for mu, m in mult.items():
        for w in weyl_orbit(sub, mu):
            full[w] = m
    return full


def irrep_character(
    rs: RootSystem, mask: Iterable[int] | None, lam: Weight
) -> Character:
    """Weight multiplicities of the irreducible with highest weight lam."""
    validate_weight(rs, lam)
    sub = subsystem(rs, mask)
    if not is_dominant(sub, lam):
        raise DominanceError(f"{lam} is not dominant for mask {sorted(sub.mask)}")

    key = (rs.family, rs.rank, sub.mask, lam)
    if _cache_enabled:
        with _cache_lock:
            hit = _cache.get(key)
        if hit is not None:
            return Character(rs, sub.mask, dict(hit))
        dkey = _disk_key(rs, sub.mask, lam)
        disk = _disk_load(dkey, rs.dim)
        if disk is not None:
            with _cache_lock:
                _cache[key] = disk
            return Character(rs, sub.mask, dict(disk))

    mults = _freudenthal(sub, lam)
    dim_check = weyl_dim(rs, mask, lam)
    assert sum(mults.values()) == dim_check, (
        f"character of {lam} sums to {sum(mults.values())}, Weyl dim is {dim_check}"
    )
    if _cache_enabled:
        with _cache_lock:
            _cache[key] = mults
        _disk_store(_disk_key(rs, sub.mask, lam), mults)
    return Character(rs, sub.mask, dict(mults))


def _dominated(sub: Subsystem, lo: Weight, hi: Weight) -> bool:
    """True iff hi - lo is a nonnegative combination of subsystem simple roots."""
    coeffs = sub.coefficients(hi - lo)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def tensor_decompose(
    rs: RootSystem, mask: Iterable[int] | None, lam: Weight, mu: Weight
) -> list[tuple[Weight, int]]:
    """Decompose V_lam (x) V_mu into irreducibles over the subsystem.

    Greedy extraction: multiply characters, then repeatedly remove the
    character of a dominance-maximal dominant weight still present, breaking
    ties lexicographically.  Dimension conservation is asserted on the result.
    """
    sub = subsystem(rs, mask)
    ca = irrep_character(rs, mask, lam).mults
    cb = irrep_character(rs, mask, mu).mults

    product: dict[Weight, int] = {}
    for wa, ma in ca.items():
        for wb, mb in cb.items():
            w = wa + wb
            product[w] = product.get(w, 0) + ma * mb
    target_dim = sum(product.values())

    out: list[tuple[Weight, int]] = []
    remaining = {w: m for w, m in product.items() if m}
    while remaining:
        dominants = [w for w in remaining if is_dominant(sub, w)]
        assert dominants, "nonzero remainder without a dominant weight"
        maximal = [
            w
            for w in dominants
            if not any(v != w and _dominated(sub, w, v) for v in dominants)
        ]
        head = max(maximal, key=lambda w: w.coords)
        count = remaining[head]
        assert count > 0, "greedy extraction produced a negative multiplicity"
        for w, m in irrep_character(rs, mask, head).mults.items():
            left = remaining.get(w, 0) - count * m
            assert left >= 0, "greedy extraction drove a multiplicity negative"
            if left:
                remaining[w] = left
            else:
                remaining.pop(w, None)
        out.append((head, count))

    total = sum(cnt * weyl_dim(rs, mask, w) for w, cnt in out)
    assert total == target_dim, "tensor decomposition must conserve dimension"
    out.sort(key=lambda p: p[0].coords, reverse=True)
    return out


def dual_weight(rs: RootSystem, mask: Iterable[int] | None, lam: Weight) -> Weight:
    """Highest weight of the dual representation: -w0(lam) over the subsystem."""
    sub = subsystem(rs, mask)
    if not is_dominant(sub, lam):
        raise DominanceError(f"{lam} is not dominant for mask {sorted(sub.mask)}")
    return plain_dominantize(sub, -lam)
