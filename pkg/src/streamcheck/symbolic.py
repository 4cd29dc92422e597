"""First-order syntax: terms, formulas, interpretation structures.

Formulas here are purely syntactic.  They are evaluated either directly
(:func:`judge`, substitution-based, with unrestricted lookahead) or by
compiling to the runtime algebra (:func:`compile_formula`) and running the
stepwise monitor.  Letters of the words judged here are closed terms paired
with a timestamp.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, Sequence, Set, Tuple, Union

from . import runtime, semantics, truth
from .truth import Verdict


class SymbolicError(Exception):
    pass


class UninterpretedSymbol(SymbolicError):
    """A function or predicate symbol has no entry in the interpretation."""


class OpenFormula(SymbolicError):
    """A formula expected to be closed still has free variables."""


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lit(Term):
    """Natural-number literal; interprets to itself."""

    value: int


@dataclass(frozen=True)
class App(Term):
    """Function symbol application; constants are nullary applications."""

    symbol: str
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True)
class Const(Term):
    """Opaque already-evaluated value injected into a term position."""

    value: Any


TermLike = Union[Term, int, str]


def as_term(value: TermLike) -> Term:
    """Coerce plain ints to literals and strings to constant symbols."""
    if isinstance(value, Term):
        return value
    if isinstance(value, bool):
        raise SymbolicError("booleans are not terms")
    if isinstance(value, int):
        return Lit(value)
    if isinstance(value, str):
        return App(value)
    raise SymbolicError(f"cannot treat {value!r} as a term")


# ---------------------------------------------------------------------------
# Formulas


class SymFormula:
    __slots__ = ()


@dataclass(frozen=True)
class TrueFormula(SymFormula):
    pass


@dataclass(frozen=True)
class FalseFormula(SymFormula):
    pass


@dataclass(frozen=True)
class Pred(SymFormula):
    name: str
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Eq(SymFormula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(SymFormula):
    body: SymFormula


@dataclass(frozen=True)
class And(SymFormula):
    left: SymFormula
    right: SymFormula


@dataclass(frozen=True)
class Or(SymFormula):
    left: SymFormula
    right: SymFormula


@dataclass(frozen=True)
class Implies(SymFormula):
    left: SymFormula
    right: SymFormula


@dataclass(frozen=True)
class Next(SymFormula):
    body: SymFormula


@dataclass(frozen=True)
class Eventually(SymFormula):
    timeout: Term
    body: SymFormula


@dataclass(frozen=True)
class Always(SymFormula):
    timeout: Term
    body: SymFormula


@dataclass(frozen=True)
class Until(SymFormula):
    timeout: Term
    left: SymFormula
    right: SymFormula


@dataclass(frozen=True)
class Release(SymFormula):
    timeout: Term
    left: SymFormula
    right: SymFormula


@dataclass(frozen=True)
class Consume(SymFormula):
    """Bind the current letter to ``var`` and its time to ``time_var``."""

    var: str
    time_var: str
    body: SymFormula


def pred(name: str, *args: TermLike) -> Pred:
    return Pred(name, tuple(as_term(a) for a in args))


def eq(left: TermLike, right: TermLike) -> Eq:
    return Eq(as_term(left), as_term(right))


def eventually(timeout: TermLike, body: SymFormula) -> Eventually:
    return Eventually(as_term(timeout), body)


def always(timeout: TermLike, body: SymFormula) -> Always:
    return Always(as_term(timeout), body)


def until(timeout: TermLike, left: SymFormula, right: SymFormula) -> Until:
    return Until(as_term(timeout), left, right)


def release(timeout: TermLike, left: SymFormula, right: SymFormula) -> Release:
    return Release(as_term(timeout), left, right)


# ---------------------------------------------------------------------------
# Free variables and substitution


def term_free_vars(term: Term) -> Set[str]:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, App):
        out: Set[str] = set()
        for arg in term.args:
            out |= term_free_vars(arg)
        return out
    return set()


def free_vars(phi: SymFormula) -> Set[str]:
    """Free variables, including those appearing inside timeout terms."""
    if isinstance(phi, (TrueFormula, FalseFormula)):
        return set()
    if isinstance(phi, Pred):
        out: Set[str] = set()
        for arg in phi.args:
            out |= term_free_vars(arg)
        return out
    if isinstance(phi, Eq):
        return term_free_vars(phi.left) | term_free_vars(phi.right)
    if isinstance(phi, (Not, Next)):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Eventually, Always)):
        return term_free_vars(phi.timeout) | free_vars(phi.body)
    if isinstance(phi, (Until, Release)):
        return term_free_vars(phi.timeout) | free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, Consume):
        return free_vars(phi.body) - {phi.var, phi.time_var}
    raise SymbolicError(f"unknown formula {phi!r}")


def is_closed(phi: SymFormula) -> bool:
    return not free_vars(phi)


def substitute_term(term: Term, var: str, replacement: Term) -> Term:
    if isinstance(term, Var):
        return replacement if term.name == var else term
    if isinstance(term, App):
        return App(term.symbol, tuple(substitute_term(a, var, replacement) for a in term.args))
    return term


def substitute(phi: SymFormula, var: str, replacement: Term) -> SymFormula:
    """Replace free occurrences of ``var`` by the closed term ``replacement``.

    Occurrences shadowed by a consume rebinding the same name are untouched.
    Timeout terms participate in the substitution.
    """
    if isinstance(phi, (TrueFormula, FalseFormula)):
        return phi
    if isinstance(phi, Pred):
        return Pred(phi.name, tuple(substitute_term(a, var, replacement) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(
            substitute_term(phi.left, var, replacement),
            substitute_term(phi.right, var, replacement),
        )
    if isinstance(phi, Not):
        return Not(substitute(phi.body, var, replacement))
    if isinstance(phi, And):
        return And(substitute(phi.left, var, replacement), substitute(phi.right, var, replacement))
    if isinstance(phi, Or):
        return Or(substitute(phi.left, var, replacement), substitute(phi.right, var, replacement))
    if isinstance(phi, Implies):
        return Implies(
            substitute(phi.left, var, replacement), substitute(phi.right, var, replacement)
        )
    if isinstance(phi, Next):
        return Next(substitute(phi.body, var, replacement))
    if isinstance(phi, Eventually):
        return Eventually(
            substitute_term(phi.timeout, var, replacement), substitute(phi.body, var, replacement)
        )
    if isinstance(phi, Always):
        return Always(
            substitute_term(phi.timeout, var, replacement), substitute(phi.body, var, replacement)
        )
    if isinstance(phi, Until):
        return Until(
            substitute_term(phi.timeout, var, replacement),
            substitute(phi.left, var, replacement),
            substitute(phi.right, var, replacement),
        )
    if isinstance(phi, Release):
        return Release(
            substitute_term(phi.timeout, var, replacement),
            substitute(phi.left, var, replacement),
            substitute(phi.right, var, replacement),
        )
    if isinstance(phi, Consume):
        if var in (phi.var, phi.time_var):
            return phi
        return Consume(phi.var, phi.time_var, substitute(phi.body, var, replacement))
    raise SymbolicError(f"unknown formula {phi!r}")


# ---------------------------------------------------------------------------
# Interpretation structures


@dataclass(frozen=True)
class Interpretation:
    """Interpretation structure: a value universe plus symbol meanings.

    ``functions`` maps each function symbol to a total Python callable,
    ``predicates`` maps each predicate symbol to a boolean-valued callable.
    ``constants`` lists the nullary symbols used as the finite witness pool
    when generating words from formulas.
    """

    functions: Mapping[str, Callable[..., Any]] = field(default_factory=dict)
    predicates: Mapping[str, Callable[..., bool]] = field(default_factory=dict)
    constants: Tuple[str, ...] = ()

    @classmethod
    def free_constants(cls, *names: str, predicates: Optional[Mapping[str, Callable[..., bool]]] = None) -> "Interpretation":
        """Initial model over the given constants: each symbol denotes itself."""
        functions = {name: (lambda name=name: name) for name in names}
        return cls(functions=functions, predicates=dict(predicates or {}), constants=tuple(names))


def eval_term(term: Term, interp: Interpretation) -> Any:
    """Evaluate a closed term by structural folding."""
    if isinstance(term, Var):
        raise OpenFormula(f"cannot evaluate open term: free variable {term.name!r}")
    if isinstance(term, Lit):
        return term.value
    if isinstance(term, Const):
        return term.value
    if isinstance(term, App):
        fn = interp.functions.get(term.symbol)
        if fn is None:
            raise UninterpretedSymbol(f"function symbol {term.symbol!r} has no interpretation")
        return fn(*(eval_term(a, interp) for a in term.args))
    raise SymbolicError(f"unknown term {term!r}")


def _eval_timeout(term: Term, interp: Interpretation) -> int:
    value = eval_term(term, interp)
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise SymbolicError(f"timeout term evaluated to {value!r}, expected a natural number")
    return value


def _holds(phi: SymFormula, interp: Interpretation, relaxed: bool) -> bool:
    """Truth of a closed, timeless atom."""
    if isinstance(phi, Pred):
        rel = interp.predicates.get(phi.name)
        if rel is None:
            raise UninterpretedSymbol(f"predicate symbol {phi.name!r} has no interpretation")
        return bool(rel(*(eval_term(a, interp) for a in phi.args)))
    if isinstance(phi, Eq):
        left = eval_term(phi.left, interp)
        right = eval_term(phi.right, interp)
        if relaxed:
            # Letters of generated words are batches (frozensets); an equality
            # between a batch and a plain value is read as containment.
            left_batch = isinstance(left, frozenset)
            right_batch = isinstance(right, frozenset)
            if left_batch and not right_batch:
                return right in left
            if right_batch and not left_batch:
                return left in right
        return left == right
    raise SymbolicError(f"not an atom: {phi!r}")


# ---------------------------------------------------------------------------
# Direct judgment (substitution-based)

Word = Sequence[Tuple[Term, int]]


def judge(
    word: Word,
    position: int,
    phi: SymFormula,
    interp: Interpretation,
    relaxed: bool = False,
) -> Verdict:
    """Judge a closed symbolic formula directly, by substitution.

    With ``relaxed`` set, equality atoms against batch-valued letters are read
    as containment; used to validate generated words.
    """
    if isinstance(phi, TrueFormula):
        return truth.TRUE
    if isinstance(phi, FalseFormula):
        return truth.FALSE
    if isinstance(phi, (Pred, Eq)):
        return Verdict.from_bool(_holds(phi, interp, relaxed))
    if isinstance(phi, Not):
        return truth.neg(judge(word, position, phi.body, interp, relaxed))
    if isinstance(phi, And):
        return truth.conj(
            judge(word, position, phi.left, interp, relaxed),
            judge(word, position, phi.right, interp, relaxed),
        )
    if isinstance(phi, Or):
        return truth.disj(
            judge(word, position, phi.left, interp, relaxed),
            judge(word, position, phi.right, interp, relaxed),
        )
    if isinstance(phi, Implies):
        return truth.implies(
            judge(word, position, phi.left, interp, relaxed),
            judge(word, position, phi.right, interp, relaxed),
        )
    if isinstance(phi, Next):
        return judge(word, position + 1, phi.body, interp, relaxed)
    if isinstance(phi, Consume):
        if position > len(word):
            return truth.INCONCLUSIVE
        letter, time = word[position - 1]
        bound = substitute(substitute(phi.body, phi.var, letter), phi.time_var, Lit(time))
        return judge(word, position + 1, bound, interp, relaxed)
    if isinstance(phi, (Eventually, Always, Until, Release)):
        t = _eval_timeout(phi.timeout, interp)
        window = range(position, position + t)
        if isinstance(phi, Eventually):
            return semantics.eventually_fold(
                window, lambda k: judge(word, k, phi.body, interp, relaxed)
            )
        if isinstance(phi, Always):
            return semantics.always_fold(
                window, lambda k: judge(word, k, phi.body, interp, relaxed)
            )
        if isinstance(phi, Until):
            return semantics.until_fold(
                window,
                lambda k: judge(word, k, phi.left, interp, relaxed),
                lambda k: judge(word, k, phi.right, interp, relaxed),
            )
        return semantics.release_fold(
            window,
            lambda k: judge(word, k, phi.left, interp, relaxed),
            lambda k: judge(word, k, phi.right, interp, relaxed),
        )
    raise SymbolicError(f"unknown formula {phi!r}")


def models(word: Word, phi: SymFormula, interp: Interpretation, relaxed: bool = False) -> Verdict:
    return judge(word, 1, phi, interp, relaxed)


# ---------------------------------------------------------------------------
# Safe word length at the symbolic level (needed to declare static depths)


def symbolic_safe_word_length(phi: SymFormula, interp: Interpretation) -> int:
    """Safe word length; undefined when a timeout term contains variables."""
    if isinstance(phi, (TrueFormula, FalseFormula, Pred, Eq)):
        return 0
    if isinstance(phi, Not):
        return symbolic_safe_word_length(phi.body, interp)
    if isinstance(phi, (And, Or, Implies)):
        return max(
            symbolic_safe_word_length(phi.left, interp),
            symbolic_safe_word_length(phi.right, interp),
        )
    if isinstance(phi, (Next, Consume)):
        return symbolic_safe_word_length(phi.body, interp) + 1
    if isinstance(phi, (Eventually, Always, Until, Release)):
        if term_free_vars(phi.timeout):
            raise runtime.SafeLengthUndefined(
                f"safe word length undefined: variables in timeout {phi.timeout!r}"
            )
        t = _eval_timeout(phi.timeout, interp)
        if isinstance(phi, (Eventually, Always)):
            return symbolic_safe_word_length(phi.body, interp) + (t - 1)
        return (
            max(
                symbolic_safe_word_length(phi.left, interp),
                symbolic_safe_word_length(phi.right, interp),
            )
            + (t - 1)
        )
    raise SymbolicError(f"unknown formula {phi!r}")


def _static_depth(body: SymFormula, interp: Interpretation) -> Optional[int]:
    try:
        return symbolic_safe_word_length(body, interp) + 1
    except runtime.SafeLengthUndefined:
        return None


# ---------------------------------------------------------------------------
# Symbolic next form (used before word generation)


def next_form(phi: SymFormula, interp: Interpretation) -> SymFormula:
    """Expand timed operators away; timeouts must be variable-free."""
    if isinstance(phi, (TrueFormula, FalseFormula, Pred, Eq)):
        return phi
    if isinstance(phi, Not):
        return Not(next_form(phi.body, interp))
    if isinstance(phi, And):
        return And(next_form(phi.left, interp), next_form(phi.right, interp))
    if isinstance(phi, Or):
        return Or(next_form(phi.left, interp), next_form(phi.right, interp))
    if isinstance(phi, Implies):
        return Implies(next_form(phi.left, interp), next_form(phi.right, interp))
    if isinstance(phi, Next):
        return Next(next_form(phi.body, interp))
    if isinstance(phi, Consume):
        return Consume(phi.var, phi.time_var, next_form(phi.body, interp))
    if isinstance(phi, (Eventually, Always, Until, Release)):
        if term_free_vars(phi.timeout):
            raise OpenFormula(
                f"cannot expand ahead of time: variables in timeout {phi.timeout!r}"
            )
        t = _eval_timeout(phi.timeout, interp)
        if isinstance(phi, Eventually):
            if t == 0:
                return FalseFormula()
            body = next_form(phi.body, interp)
            acc = body
            for _ in range(t - 1):
                acc = Or(body, Next(acc))
            return acc
        if isinstance(phi, Always):
            if t == 0:
                return TrueFormula()
            body = next_form(phi.body, interp)
            acc = body
            for _ in range(t - 1):
                acc = And(body, Next(acc))
            return acc
        if isinstance(phi, Until):
            if t == 0:
                return FalseFormula()
            left = next_form(phi.left, interp)
            right = next_form(phi.right, interp)
            acc = right
            for _ in range(t - 1):
                acc = Or(right, And(left, Next(acc)))
            return acc
        if t == 0:
            return TrueFormula()
        left = next_form(phi.left, interp)
        right = next_form(phi.right, interp)
        acc = right
        for _ in range(t - 1):
            acc = Or(And(left, right), And(right, Next(acc)))
        return acc
    raise SymbolicError(f"unknown formula {phi!r}")


# ---------------------------------------------------------------------------
# Compilation to the runtime algebra


def compile_formula(phi: SymFormula, interp: Interpretation) -> runtime.Formula:
    """Compile a closed formula to an executable one over timed-term letters.

    Closed atoms evaluate immediately (timeless formulas keep their value at
    every instant).  A consume node becomes a runtime consumer that
    substitutes the incoming letter and time and compiles the body, so
    variable timeouts resolve exactly when their binder fires.
    """
    if isinstance(phi, TrueFormula):
        return runtime.TOP
    if isinstance(phi, FalseFormula):
        return runtime.BOTTOM
    if isinstance(phi, (Pred, Eq)):
        unbound = free_vars(phi)
        if unbound:
            raise OpenFormula(f"atom has free variables {sorted(unbound)}")
        return runtime.Solved(Verdict.from_bool(_holds(phi, interp, relaxed=False)))
    if isinstance(phi, Not):
        return runtime.mk_not(compile_formula(phi.body, interp))
    if isinstance(phi, And):
        return runtime.mk_and(
            compile_formula(phi.left, interp), compile_formula(phi.right, interp)
        )
    if isinstance(phi, Or):
        return runtime.mk_or(
            compile_formula(phi.left, interp), compile_formula(phi.right, interp)
        )
    if isinstance(phi, Implies):
        return runtime.mk_implies(
            compile_formula(phi.left, interp), compile_formula(phi.right, interp)
        )
    if isinstance(phi, Next):
        return runtime.mk_next(compile_formula(phi.body, interp))
    if isinstance(phi, Eventually):
        return runtime.make_eventually(
            _eval_timeout(phi.timeout, interp), compile_formula(phi.body, interp)
        )
    if isinstance(phi, Always):
        return runtime.make_always(
            _eval_timeout(phi.timeout, interp), compile_formula(phi.body, interp)
        )
    if isinstance(phi, Until):
        return runtime.make_until(
            _eval_timeout(phi.timeout, interp),
            compile_formula(phi.left, interp),
            compile_formula(phi.right, interp),
        )
    if isinstance(phi, Release):
        return runtime.make_release(
            _eval_timeout(phi.timeout, interp),
            compile_formula(phi.left, interp),
            compile_formula(phi.right, interp),
        )
    if isinstance(phi, Consume):
        body, var, time_var = phi.body, phi.var, phi.time_var

        def consumer(letter: Any, time: int) -> runtime.Formula:
            letter_term = letter if isinstance(letter, Term) else Const(letter)
            bound = substitute(substitute(body, var, letter_term), time_var, Lit(time))
            return compile_formula(bound, interp)

        return runtime.Consume(
            consumer, static_depth=_static_depth(body, interp), label=f"consume {var}"
        )
    raise SymbolicError(f"unknown formula {phi!r}")
