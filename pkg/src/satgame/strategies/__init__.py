"""Published strategies and baselines, addressable by stable names."""

from __future__ import annotations

from typing import Callable

from .base import GreedyStrategy, NoLegalMove, RandomStrategy, Strategy, greedy_move, random_move
from .directed import ProlongerK3, ProlongerStructure, ShortenerPath, StructureRecord
from .redblue import OrientProlongerRB, OrientShortenerRB, RedBlueLedger, lambda_minus, lambda_plus
from .scores import StructKind, normalised_score, structure_score

REGISTRY: dict[str, Callable[[], Strategy]] = {
    "shortener-path": ShortenerPath,
    "prolonger-structure": ProlongerStructure,
    "prolonger-k3": ProlongerK3,
    "orient-prolonger-rb": OrientProlongerRB,
    "orient-shortener-rb": OrientShortenerRB,
    "random": RandomStrategy,
    "greedy": GreedyStrategy,
}


def make_strategy(name: str) -> Strategy:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(REGISTRY)}") from None


__all__ = [
    "GreedyStrategy",
    "NoLegalMove",
    "OrientProlongerRB",
    "OrientShortenerRB",
    "ProlongerK3",
    "ProlongerStructure",
    "REGISTRY",
    "RandomStrategy",
    "RedBlueLedger",
    "ShortenerPath",
    "Strategy",
    "StructKind",
    "StructureRecord",
    "greedy_move",
    "lambda_minus",
    "lambda_plus",
    "make_strategy",
    "normalised_score",
    "random_move",
    "structure_score",
]
