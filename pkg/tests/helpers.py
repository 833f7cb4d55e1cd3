"""Shared randomized-input helpers for the test suite.

Weights are drawn by rejection sampling so that every property test runs
on honestly random Levi-dominant inputs instead of a handpicked list.
"""

from fractions import Fraction

from excol import Weight, is_dominant


def random_weight(rng, rs, span=4, half=False):
    """Random lattice weight with coordinates in [-span, span].

    half=True draws from the half-integral coset (types B/D only), where
    every coordinate must sit in Z + 1/2.
    """
    if half:
        coords = tuple(
            Fraction(2 * rng.randint(-span, span - 1) + 1, 2)
            for _ in range(rs.dim)
        )
    else:
        coords = tuple(Fraction(rng.randint(-span, span)) for _ in range(rs.dim))
    return Weight(coords)


def random_levi_dominant(rng, space, span=4, half=False):
    """Random highest weight for an irreducible bundle on the space."""
    use_half = half and space.rs.family in ("B", "D") and rng.random() < 0.5
    while True:
        w = random_weight(rng, space.rs, span, use_half)
        if is_dominant(space.levi, w):
            return w


def random_dominant(rng, rs, sub, span=4, half=False):
    """Random dominant weight for an arbitrary subsystem."""
    use_half = half and rs.family in ("B", "D") and rng.random() < 0.5
    while True:
        w = random_weight(rng, rs, span, use_half)
        if is_dominant(sub, w):
            return w
