"""Closed-form score bounds for both games, in exact rational arithmetic."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import NamedTuple


class _AsymptoticOnly:
    """Marker: only an asymptotic estimate is known for this range."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ASYMPTOTIC_ONLY"


ASYMPTOTIC_ONLY = _AsymptoticOnly()


class Bound(NamedTuple):
    value: Fraction
    vacuous: bool = False


class VacuousBound(ValueError):
    pass


def theorem1_value(n: int, k: int) -> int | _AsymptoticOnly:
    """Exact score of the directed walk game where known."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if k <= 2:
        return 0
    if k == 3:
        return n * n // 4
    return ASYMPTOTIC_ONLY


def _check_nk(n: int, k: int) -> None:
    if not n >= k >= 4:
        raise ValueError(f"need n >= k >= 4, got n={n}, k={k}")


def shortener_bound(n: int, k: int) -> Fraction:
    """Upper bound enforced by the path-pinning Shortener."""
    _check_nk(n, k)
    m = n - k + 4
    lo, hi = m // 3, -(-m // 3)
    return Fraction(n * n - k + 4 - 2 * lo * lo - hi * hi, 2)


def prolonger_bound(n: int, k: int) -> Bound:
    """Lower bound enforced by the structure-building Prolonger.

    Flagged vacuous when ``n - k - 14 < 0``: the quadratic term then has no
    meaning even though the expression still evaluates.
    """
    _check_nk(n, k)
    base = n - k - 14
    value = comb(k - 1, 2) + (n - k + 1) * (k - 2) + Fraction(base * base, 2) * Fraction(2, 3)
    return Bound(value, base < 0)


def lambda_bounds(a: int, b: int) -> tuple[Fraction, Fraction]:
    if a < 1 or b < 1:
        raise ValueError("bias turns must be >= 1")
    c_lo = b // (2 * a)
    return Fraction(c_lo, 1 + c_lo), Fraction(1, 1 + a // (2 * b))


def conjectured_lambda(a: int, b: int) -> Fraction:
    if a < 1 or b < 1:
        raise ValueError("bias turns must be >= 1")
    return Fraction(2 * a, b + 2 * a)


def orientation_bound(n: int, k: int, lam: Fraction | int) -> Fraction:
    """``C(n, 2) * (1 - 1/(lam k))``; a zero ``lam`` gives no bound."""
    lam = Fraction(lam)
    if k < 1:
        raise ValueError("k must be >= 1")
    if lam <= 0:
        raise VacuousBound("lambda = 0 gives no bound")
    return comb(n, 2) * (1 - 1 / (lam * k))


def turan_edges(n: int, parts: int) -> int:
    """Edge count of the balanced complete ``parts``-partite graph on ``n`` vertices."""
    if parts < 1:
        return 0
    q, r = divmod(n, parts)
    sizes = [q + 1] * r + [q] * (parts - r)
    return (n * n - sum(s * s for s in sizes)) // 2


def lambda_hat(score: int, n: int, k: int) -> float:
    """Invert the orientation bound shape: the lambda at which it equals ``score``."""
    gap = 1 - score / comb(n, 2)
    if gap <= 0:
        return float("inf")
    return 1 / (k * gap)
