"""Executable temporal formulas over stream letters.

A formula is evaluated against a finite word of timed letters.  Temporal
operators carry an explicit timeout: the number of instants, including the
current one, the operator may inspect.  Formulas are brought into *next form*
(no timed operators, only ``Next``/``Consume``) either eagerly
(:func:`to_next_form`) or one lazy layer at a time (:func:`unfold`), and a
:class:`Monitor` evaluates a next-form formula stepwise, one letter per
instant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

from . import truth
from .truth import Verdict

Timestamp = int
Letter = Tuple[Any, Timestamp]


class FormulaError(Exception):
    """Base class for formula construction and evaluation errors."""


class SafeLengthUndefined(FormulaError):
    """Raised when a safe word length is requested for a dynamic consumer."""


class MonitorDecided(FormulaError):
    """Raised when a monitor that already reached a verdict is stepped again."""


class Formula:
    """Base class of the runtime formula algebra."""

    __slots__ = ()


@dataclass(frozen=True)
class Solved(Formula):
    value: Verdict


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    body: Formula


@dataclass(frozen=True)
class Consume(Formula):
    """Bind the current letter and its time, continue with the produced formula.

    ``consumer`` must be a pure function of ``(letter, time)``.  When
    ``static_depth`` is present it must equal the safe word length of every
    formula the consumer can return, plus one; constructors that cannot
    guarantee a uniform depth leave it ``None``, which makes
    :func:`safe_word_length` fail rather than guess.
    """

    consumer: Callable[[Any, Timestamp], Formula]
    static_depth: Optional[int] = None
    label: str = "consume"


@dataclass(frozen=True)
class Eventually(Formula):
    timeout: int
    body: Formula

    def __post_init__(self) -> None:
        _check_timeout(self.timeout)


@dataclass(frozen=True)
class Always(Formula):
    timeout: int
    body: Formula

    def __post_init__(self) -> None:
        _check_timeout(self.timeout)


@dataclass(frozen=True)
class Until(Formula):
    timeout: int
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        _check_timeout(self.timeout)


@dataclass(frozen=True)
class Release(Formula):
    timeout: int
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        _check_timeout(self.timeout)


def _check_timeout(t: int) -> None:
    if not isinstance(t, int) or t < 1:
        raise FormulaError(f"timeout must be a positive integer, got {t!r}")


TOP = Solved(truth.TRUE)
BOTTOM = Solved(truth.FALSE)
UNDECIDED = Solved(truth.INCONCLUSIVE)


# ---------------------------------------------------------------------------
# Atom helpers


def solved(value: Verdict) -> Solved:
    return Solved(value)


def now(predicate: Callable[[Any], Any], label: str = "now") -> Consume:
    """Atom that checks a predicate on the current letter.

    The predicate result is coerced: a :class:`Verdict` passes through, any
    other value is interpreted as a boolean.
    """

    def consumer(letter: Any, _time: Timestamp) -> Formula:
        return Solved(_as_verdict(predicate(letter)))

    return Consume(consumer, static_depth=1, label=label)


def now_time(predicate: Callable[[Any, Timestamp], Any], label: str = "now_time") -> Consume:
    def consumer(letter: Any, time: Timestamp) -> Formula:
        return Solved(_as_verdict(predicate(letter, time)))

    return Consume(consumer, static_depth=1, label=label)


def bind(
    build: Callable[[Any, Timestamp], Formula],
    static_depth: Optional[int] = None,
    label: str = "bind",
) -> Consume:
    """Atom that consumes the current letter to build the continuation formula."""
    return Consume(build, static_depth=static_depth, label=label)


def _as_verdict(value: Any) -> Verdict:
    if isinstance(value, Verdict):
        return value
    return Verdict.from_bool(bool(value))


# ---------------------------------------------------------------------------
# Constant-folding constructors.  All transformations build formulas through
# these, so the eager and the lazy route fold identically.


def mk_not(phi: Formula) -> Formula:
    if isinstance(phi, Solved):
        return Solved(truth.neg(phi.value))
    return Not(phi)


def mk_and(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Solved) and isinstance(right, Solved):
        return Solved(truth.conj(left.value, right.value))
    if isinstance(left, Solved):
        if left.value is truth.FALSE:
            return left
        if left.value is truth.TRUE:
            return right
    elif isinstance(right, Solved):
        if right.value is truth.FALSE:
            return right
        if right.value is truth.TRUE:
            return left
    return And(left, right)


def mk_or(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Solved) and isinstance(right, Solved):
        return Solved(truth.disj(left.value, right.value))
    if isinstance(left, Solved):
        if left.value is truth.TRUE:
            return left
        if left.value is truth.FALSE:
            return right
    elif isinstance(right, Solved):
        if right.value is truth.TRUE:
            return right
        if right.value is truth.FALSE:
            return left
    return Or(left, right)


def mk_implies(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Solved) and isinstance(right, Solved):
        return Solved(truth.implies(left.value, right.value))
    if isinstance(left, Solved):
        if left.value is truth.FALSE:
            return TOP
        if left.value is truth.TRUE:
            return right
    elif isinstance(right, Solved):
        if right.value is truth.TRUE:
            return right
        if right.value is truth.FALSE:
            return mk_not(left)
    return Implies(left, right)


def mk_next(body: Formula) -> Formula:
    # A solved formula keeps its value at every instant, so the shift is free.
    if isinstance(body, Solved):
        return body
    return Next(body)


def make_eventually(timeout: int, body: Formula) -> Formula:
    """Timeout-aware constructor: a zero window has already failed."""
    _check_degenerate(timeout)
    return BOTTOM if timeout == 0 else Eventually(timeout, body)


def make_always(timeout: int, body: Formula) -> Formula:
    _check_degenerate(timeout)
    return TOP if timeout == 0 else Always(timeout, body)


def make_until(timeout: int, left: Formula, right: Formula) -> Formula:
    _check_degenerate(timeout)
    return BOTTOM if timeout == 0 else Until(timeout, left, right)


def make_release(timeout: int, left: Formula, right: Formula) -> Formula:
    _check_degenerate(timeout)
    return TOP if timeout == 0 else Release(timeout, left, right)


def _check_degenerate(t: int) -> None:
    if not isinstance(t, int) or t < 0:
        raise FormulaError(f"timeout must be a natural number, got {t!r}")


# ---------------------------------------------------------------------------
# Next-form transformations


def is_next_form(phi: Formula) -> bool:
    if isinstance(phi, (Solved, Consume)):
        return True
    if isinstance(phi, (Not, Next)):
        return is_next_form(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return is_next_form(phi.left) and is_next_form(phi.right)
    return False


# Memo keyed by node identity; keeping the key object in the entry pins its
# id, so a hit is valid exactly when the stored key *is* the argument.
_UNFOLD_MEMO: Dict[int, Tuple["Formula", "Formula"]] = {}
_UNFOLD_MEMO_LIMIT = 8192


def unfold(phi: Formula) -> Formula:
    """Rewrite one lazy layer: the returned formula has a next-form head.

    Timed operators visible without crossing a ``Next`` or ``Consume``
    boundary are expanded one instant; the operator kept for later instants
    stays folded inside ``Next``.  Results are memoized per node.
    """
    hit = _UNFOLD_MEMO.get(id(phi))
    if hit is not None and hit[0] is phi:
        return hit[1]
    result = _unfold(phi)
    if len(_UNFOLD_MEMO) >= _UNFOLD_MEMO_LIMIT:
        _UNFOLD_MEMO.clear()
    _UNFOLD_MEMO[id(phi)] = (phi, result)
    return result


def _unfold(phi: Formula) -> Formula:
    if isinstance(phi, (Solved, Consume)):
        return phi
    if isinstance(phi, Not):
        return mk_not(unfold(phi.body))
    if isinstance(phi, And):
        return mk_and(unfold(phi.left), unfold(phi.right))
    if isinstance(phi, Or):
        return mk_or(unfold(phi.left), unfold(phi.right))
    if isinstance(phi, Implies):
        return mk_implies(unfold(phi.left), unfold(phi.right))
    if isinstance(phi, Next):
        return phi
    if isinstance(phi, Eventually):
        if phi.timeout == 1:
            return unfold(phi.body)
        return mk_or(unfold(phi.body), mk_next(Eventually(phi.timeout - 1, phi.body)))
    if isinstance(phi, Always):
        if phi.timeout == 1:
            return unfold(phi.body)
        return mk_and(unfold(phi.body), mk_next(Always(phi.timeout - 1, phi.body)))
    if isinstance(phi, Until):
        if phi.timeout == 1:
            return unfold(phi.right)
        return mk_or(
            unfold(phi.right),
            mk_and(unfold(phi.left), mk_next(Until(phi.timeout - 1, phi.left, phi.right))),
        )
    if isinstance(phi, Release):
        # Timeout 1: the window ends now, so surviving it means the right
        # operand holds now (releasing early is subsumed).
        if phi.timeout == 1:
            return unfold(phi.right)
        return mk_or(
            mk_and(unfold(phi.left), unfold(phi.right)),
            mk_and(unfold(phi.right), mk_next(Release(phi.timeout - 1, phi.left, phi.right))),
        )
    raise FormulaError(f"cannot unfold {phi!r}")


def unfold_fixpoint(phi: Formula) -> Formula:
    """Apply :func:`unfold` through every ``Next`` body until none remain folded."""
    phi = unfold(phi)
    if isinstance(phi, (Solved, Consume)):
        return phi
    if isinstance(phi, Not):
        return mk_not(unfold_fixpoint(phi.body))
    if isinstance(phi, And):
        return mk_and(unfold_fixpoint(phi.left), unfold_fixpoint(phi.right))
    if isinstance(phi, Or):
        return mk_or(unfold_fixpoint(phi.left), unfold_fixpoint(phi.right))
    if isinstance(phi, Implies):
        return mk_implies(unfold_fixpoint(phi.left), unfold_fixpoint(phi.right))
    if isinstance(phi, Next):
        return mk_next(unfold_fixpoint(phi.body))
    raise FormulaError(f"unexpected node after unfold: {phi!r}")


def to_next_form(phi: Formula) -> Formula:
    """Eagerly expand every timed operator into next form.

    Chains are built right-nested, matching the fixpoint of the lazy
    unfolding, so both routes can be compared structurally.
    """
    if isinstance(phi, (Solved, Consume)):
        return phi
    if isinstance(phi, Not):
        return mk_not(to_next_form(phi.body))
    if isinstance(phi, And):
        return mk_and(to_next_form(phi.left), to_next_form(phi.right))
    if isinstance(phi, Or):
        return mk_or(to_next_form(phi.left), to_next_form(phi.right))
    if isinstance(phi, Implies):
        return mk_implies(to_next_form(phi.left), to_next_form(phi.right))
    if isinstance(phi, Next):
        return mk_next(to_next_form(phi.body))
    if isinstance(phi, Eventually):
        body = to_next_form(phi.body)
        acc = body
        for _ in range(phi.timeout - 1):
            acc = mk_or(body, mk_next(acc))
        return acc
    if isinstance(phi, Always):
        body = to_next_form(phi.body)
        acc = body
        for _ in range(phi.timeout - 1):
            acc = mk_and(body, mk_next(acc))
        return acc
    if isinstance(phi, Until):
        left = to_next_form(phi.left)
        right = to_next_form(phi.right)
        acc = right
        for _ in range(phi.timeout - 1):
            acc = mk_or(right, mk_and(left, mk_next(acc)))
        return acc
    if isinstance(phi, Release):
        left = to_next_form(phi.left)
        right = to_next_form(phi.right)
        acc = right
        for _ in range(phi.timeout - 1):
            acc = mk_or(mk_and(left, right), mk_and(right, mk_next(acc)))
        return acc
    raise FormulaError(f"cannot transform {phi!r}")


# ---------------------------------------------------------------------------
# Letter simplification


def letter_simplify(phi: Formula, letter: Optional[Letter]) -> Formula:
    """Partially evaluate ``phi`` against the current letter.

    ``letter`` is a ``(value, time)`` pair, or ``None`` for the empty letter,
    which forces complete evaluation: every pending consume resolves to
    INCONCLUSIVE and the result is always ``Solved``.  Timed operators still
    folded inside the formula are unfolded on demand.
    """
    if isinstance(phi, Solved):
        return phi
    if isinstance(phi, Not):
        return mk_not(letter_simplify(phi.body, letter))
    if isinstance(phi, And):
        return mk_and(letter_simplify(phi.left, letter), letter_simplify(phi.right, letter))
    if isinstance(phi, Or):
        return mk_or(letter_simplify(phi.left, letter), letter_simplify(phi.right, letter))
    if isinstance(phi, Implies):
        return mk_implies(letter_simplify(phi.left, letter), letter_simplify(phi.right, letter))
    if isinstance(phi, Next):
        if letter is None:
            return letter_simplify(phi.body, None)
        return phi.body
    if isinstance(phi, Consume):
        if letter is None:
            return UNDECIDED
        value, time = letter
        return phi.consumer(value, time)
    if isinstance(phi, (Eventually, Always, Until, Release)):
        return letter_simplify(unfold(phi), letter)
    raise FormulaError(f"cannot simplify {phi!r}")


# ---------------------------------------------------------------------------
# Safe word length


def safe_word_length(phi: Formula) -> int:
    """Word length guaranteeing a decided verdict; defined only for static consumers."""
    if isinstance(phi, Solved):
        return 0
    if isinstance(phi, Not):
        return safe_word_length(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return max(safe_word_length(phi.left), safe_word_length(phi.right))
    if isinstance(phi, Next):
        return safe_word_length(phi.body) + 1
    if isinstance(phi, Consume):
        if phi.static_depth is None:
            raise SafeLengthUndefined(
                f"safe word length undefined: dynamic consumer {phi.label!r}"
            )
        return phi.static_depth
    if isinstance(phi, (Eventually, Always)):
        return safe_word_length(phi.body) + (phi.timeout - 1)
    if isinstance(phi, (Until, Release)):
        return max(safe_word_length(phi.left), safe_word_length(phi.right)) + (phi.timeout - 1)
    raise FormulaError(f"cannot size {phi!r}")


def size(phi: Formula) -> int:
    """Node count, reported in step traces."""
    if isinstance(phi, (Solved, Consume)):
        return 1
    if isinstance(phi, (Not, Next)):
        return 1 + size(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return 1 + size(phi.left) + size(phi.right)
    if isinstance(phi, (Eventually, Always)):
        return 1 + size(phi.body)
    if isinstance(phi, (Until, Release)):
        return 1 + size(phi.left) + size(phi.right)
    raise FormulaError(f"cannot size {phi!r}")


def render(phi: Formula) -> str:
    """Compact textual rendering, for traces and debugging."""
    if isinstance(phi, Solved):
        return phi.value.symbol
    if isinstance(phi, Not):
        return f"!{render(phi.body)}"
    if isinstance(phi, And):
        return f"({render(phi.left)} & {render(phi.right)})"
    if isinstance(phi, Or):
        return f"({render(phi.left)} | {render(phi.right)})"
    if isinstance(phi, Implies):
        return f"({render(phi.left)} -> {render(phi.right)})"
    if isinstance(phi, Next):
        return f"X{render(phi.body)}"
    if isinstance(phi, Consume):
        return f"<{phi.label}>"
    if isinstance(phi, Eventually):
        return f"F[{phi.timeout}]{render(phi.body)}"
    if isinstance(phi, Always):
        return f"G[{phi.timeout}]{render(phi.body)}"
    if isinstance(phi, Until):
        return f"({render(phi.left)} U[{phi.timeout}] {render(phi.right)})"
    if isinstance(phi, Release):
        return f"({render(phi.left)} R[{phi.timeout}] {render(phi.right)})"
    raise FormulaError(f"cannot render {phi!r}")


# ---------------------------------------------------------------------------
# Stepwise monitor


@dataclass(frozen=True)
class StepTrace:
    """One line of a monitor run: ``time_ms`` is ``None`` for the closing pass."""

    step: int
    time_ms: Optional[int]
    formula_size: int
    verdict: Optional[Verdict]

    def line(self) -> str:
        v = self.verdict.symbol if self.verdict is not None else "-"
        t = "finish" if self.time_ms is None else f"{self.time_ms}ms"
        return f"step {self.step} @ {t} size={self.formula_size} verdict={v}"


class Monitor:
    """Evaluates a formula one letter at a time.

    Once a verdict is reached the monitor is inert: stepping it again raises
    :class:`MonitorDecided` and the verdict never changes.
    """

    def __init__(self, formula: Formula):
        current = unfold(formula)
        self._current = current
        self.consumed = 0
        self.verdict: Optional[Verdict] = None
        self.trace: list[StepTrace] = []
        if isinstance(current, Solved):
            self.verdict = current.value

    def step(self, letter: Any, time_ms: Timestamp) -> Optional[Verdict]:
        if self.verdict is not None:
            raise MonitorDecided("monitor already reached a verdict")
        current = letter_simplify(self._current, (letter, time_ms))
        current = unfold(current)
        self._current = current
        self.consumed += 1
        if isinstance(current, Solved):
            self.verdict = current.value
        self.trace.append(StepTrace(self.consumed, time_ms, size(current), self.verdict))
        return self.verdict

    def finish(self) -> Verdict:
        if self.verdict is None:
            current = letter_simplify(self._current, None)
            while not isinstance(current, Solved):  # one pass suffices; loop is a guard
                current = letter_simplify(current, None)
            self._current = current
            self.verdict = current.value
            self.trace.append(StepTrace(self.consumed + 1, None, 1, self.verdict))
        return self.verdict
