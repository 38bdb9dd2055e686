"""Python access to the levels library.

Sets are passed and returned in their textual form, e.g. ``"{{},co{}}"``.
"""

import json as _json

from ._levels import (
    CapExceeded,
    DomainError,
    ParseError,
    chf_canonical,
    chf_member,
    complement,
    count,
    dyadic_value,
    eval_formula,
    game_eq,
    game_leq,
    game_neg,
    game_sum,
    h,
    h_inv,
    hf_canonical,
    is_surreal,
    negative,
    run,
    surreal_mul,
    universe,
)
from ._levels import check as _check


def check(kind: str, height: int, suite: str) -> dict:
    """Checks an axiom suite on the universe of the given kind and height."""
    return _json.loads(_check(kind, height, suite))


__all__ = [
    "CapExceeded",
    "DomainError",
    "ParseError",
    "check",
    "chf_canonical",
    "chf_member",
    "complement",
    "count",
    "dyadic_value",
    "eval_formula",
    "game_eq",
    "game_leq",
    "game_neg",
    "game_sum",
    "h",
    "h_inv",
    "hf_canonical",
    "is_surreal",
    "negative",
    "run",
    "surreal_mul",
    "universe",
]
