"""Normalised scores of vertex-class occupancies and of Prolonger's structures."""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Sequence


class StructKind(enum.Enum):
    """Number of blocked extension ends of a structure path: A none, B one, C both."""

    A = 0
    B = 1
    C = 2


#: smallest lambda at which each formula is defined
MIN_LAMBDA = {StructKind.A: 0, StructKind.B: 1, StructKind.C: 2}

#: lambda at which a structure of each kind is good enough to close (score <= 1/3)
CLOSE_AT = {StructKind.A: 6, StructKind.B: 3, StructKind.C: 2}


def normalised_score(sizes: Sequence[int], r: int) -> Fraction:
    if r <= 0:
        raise ValueError("r must be positive")
    if sum(sizes) != r:
        raise ValueError(f"sizes sum to {sum(sizes)}, expected {r}")
    return sum((Fraction(d, r) ** 2 for d in sizes), Fraction(0))


def structure_score(kind: StructKind | str, lam: int) -> Fraction:
    """Best normalised score a structure of this kind and size can be held to."""
    kind = StructKind[kind] if isinstance(kind, str) else kind
    if lam < MIN_LAMBDA[kind]:
        raise ValueError(f"{kind.name}_{lam} is outside the formula's range")
    if kind is StructKind.A:
        return Fraction(lam + (lam + 1) ** 2, (2 * lam + 1) ** 2)
    if kind is StructKind.B:
        return Fraction(1, 4) + Fraction(1, 4 * lam)
    return Fraction(lam + (lam - 1) ** 2, (2 * lam - 1) ** 2)
