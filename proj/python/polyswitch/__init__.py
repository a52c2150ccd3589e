"""Certified strategy switching for generalized Büchi games with runtime information.

Vectors and costs are exchanged as fractions.Fraction. Games, certificates and
streams may be given as dicts, JSON text or file paths.
"""

from __future__ import annotations

import json
import math
import os
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from . import _core
from ._core import DomainError, ParseError, RationalOverflow

__all__ = [
    "DomainError",
    "ParseError",
    "RationalOverflow",
    "bounds",
    "certify",
    "cli",
    "oracle_cost",
    "simulate",
    "synthesize",
    "validate",
]


def _text(doc: Any) -> str:
    if isinstance(doc, dict):
        return json.dumps(doc)
    if isinstance(doc, os.PathLike) or (isinstance(doc, str) and not doc.lstrip().startswith("{")):
        with open(doc, encoding="utf-8") as f:
            return f.read()
    return doc


def _vec(p: Iterable[Any]) -> list[str]:
    return [str(Fraction(x)) for x in p]


def _frac(s: Optional[str]):
    if s is None:
        return None
    if s == "inf":
        return math.inf
    return Fraction(s)


def validate(game) -> dict:
    return _core.validate(_text(game))


def synthesize(game, p: Sequence) -> dict:
    r = _core.synthesize(_text(game), _vec(p))
    return {
        "value": _frac(r["value"]),
        "basis_costs": [_frac(c) for c in r["basis_costs"]],
        "memory_count": r["memory_count"],
        "strategy": json.loads(r["strategy"]),
    }


def oracle_cost(game, p: Sequence) -> Fraction:
    return Fraction(_core.oracle_cost(_text(game), _vec(p)))


def certify(game, candidates: Sequence[Sequence], epsilon=None, grid: int = 10, expand: int = 0) -> dict:
    eps = None if epsilon is None else str(Fraction(epsilon))
    return json.loads(_core.certify(_text(game), [_vec(c) for c in candidates], eps, grid, expand))


def bounds(cert, p: Sequence) -> dict:
    r = _core.bounds(_text(cert), _vec(p))
    return {
        "index": r["index"],
        "lower": _frac(r["lower"]),
        "upper": _frac(r["upper"]),
        "dominating": r["dominating"],
    }


def simulate(game, cert, stream, horizon: int, seed: int = 0,
             runs: Sequence[str] = ("switching", "uninformed", "oracle"), period: int = 50) -> dict:
    return json.loads(_core.simulate(_text(game), _text(cert), _text(stream), horizon, seed, list(runs), period))


def cli(*args: str) -> tuple[int, str, str]:
    return _core.cli(list(args))
