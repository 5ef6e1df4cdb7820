"""Saturation games on directed graphs: engine, published strategies, exact solver."""

from .engine import (
    GameConfig,
    GameState,
    IllegalMove,
    Kind,
    Move,
    Player,
    Transcript,
    apply_move,
    current_player,
    is_terminal,
    legal_moves,
    new_game,
    playout,
)
from .graph import Digraph, UGraph, canonical_key
from .oracle import FamilySpec, Mode

__all__ = [
    "Digraph",
    "FamilySpec",
    "GameConfig",
    "GameState",
    "IllegalMove",
    "Kind",
    "Mode",
    "Move",
    "Player",
    "Transcript",
    "UGraph",
    "apply_move",
    "canonical_key",
    "current_player",
    "is_terminal",
    "legal_moves",
    "new_game",
    "playout",
]
