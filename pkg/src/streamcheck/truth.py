"""Three-valued truth domain shared by every evaluator in the package."""

from __future__ import annotations

import enum
from typing import Iterable, Optional


class Verdict(enum.Enum):
    """Truth value in the lattice FALSE <= INCONCLUSIVE <= TRUE."""

    FALSE = 0
    INCONCLUSIVE = 1
    TRUE = 2

    @property
    def symbol(self) -> str:
        """Compact rendering used in traces and JSON reports."""
        return _SYMBOLS[self]

    @classmethod
    def from_symbol(cls, symbol: str) -> "Verdict":
        for verdict, s in _SYMBOLS.items():
            if s == symbol:
                return verdict
        raise ValueError(f"unknown verdict symbol {symbol!r}")

    @classmethod
    def from_bool(cls, flag: bool) -> "Verdict":
        return cls.TRUE if flag else cls.FALSE

    def is_decided(self) -> bool:
        return self is not Verdict.INCONCLUSIVE

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Verdict.{self.name}"


_SYMBOLS = {Verdict.FALSE: "F", Verdict.INCONCLUSIVE: "?", Verdict.TRUE: "T"}

FALSE = Verdict.FALSE
INCONCLUSIVE = Verdict.INCONCLUSIVE
TRUE = Verdict.TRUE


def neg(a: Verdict) -> Verdict:
    """Reflection through INCONCLUSIVE."""
    return Verdict(2 - a.value)


def conj(a: Verdict, b: Verdict) -> Verdict:
    """Lattice meet."""
    return a if a.value <= b.value else b


def disj(a: Verdict, b: Verdict) -> Verdict:
    """Lattice join."""
    return a if a.value >= b.value else b


def implies(a: Verdict, b: Verdict) -> Verdict:
    return disj(neg(a), b)


def conj_all(values: Iterable[Verdict]) -> Verdict:
    result = TRUE
    for v in values:
        result = conj(result, v)
    return result


def disj_any(values: Iterable[Verdict]) -> Verdict:
    result = FALSE
    for v in values:
        result = disj(result, v)
    return result


_UNARY = {"not": neg}
_BINARY = {"and": conj, "or": disj, "implies": implies}


def apply_connective(op: str, a: Verdict, b: Optional[Verdict] = None) -> Verdict:
    """Apply a named propositional connective; ``b`` is required iff ``op`` is binary."""
    if op in _UNARY:
        if b is not None:
            raise ValueError(f"connective {op!r} is unary")
        return _UNARY[op](a)
    if op in _BINARY:
        if b is None:
            raise ValueError(f"connective {op!r} is binary")
        return _BINARY[op](a, b)
    raise ValueError(f"unknown connective {op!r}")
