"""Plain-text S-expression syntax for symbolic formulas, words and scenarios.

Grammar (``;`` starts a line comment)::

    term     := INT | ?name | symbol | (symbol term*)
    formula  := true | false
              | (= term term) | (symbol term*)            ; predicate
              | (not f) | (and f f) | (or f f) | (implies f f)
              | (next f)
              | (eventually term f) | (always term f)
              | (until term f f) | (release term f f)
              | (consume ?x ?o f)
    word     := (word (term INT)*)
    scenario := (scenario (formula f) (word ...) (expect T|F|?))

Variables are written with a leading ``?``; bare symbols are nullary function
applications; integers are natural-number literals.
"""

from __future__ import annotations

import re
from typing import List, Tuple, Union

from . import symbolic
from .symbolic import App, Lit, SymFormula, Term, Var
from .truth import Verdict


class SexprError(Exception):
    pass


_TOKEN_RE = re.compile(r"[()]|[^\s()]+")
_INT_RE = re.compile(r"^-?\d+$")

_RESERVED = {
    "true",
    "false",
    "not",
    "and",
    "or",
    "implies",
    "next",
    "eventually",
    "always",
    "until",
    "release",
    "consume",
    "=",
    "word",
    "scenario",
    "formula",
    "expect",
}

Node = Union[str, int, List["Node"]]


def _tokenize(text: str) -> List[str]:
    tokens: List[str] = []
    for line in text.splitlines():
        line = line.split(";", 1)[0]
        tokens.extend(_TOKEN_RE.findall(line))
    return tokens


def parse_node(text: str) -> Node:
    tokens = _tokenize(text)
    node, rest = _parse(tokens, 0)
    if rest != len(tokens):
        raise SexprError("trailing input after expression")
    return node


def _parse(tokens: List[str], pos: int) -> Tuple[Node, int]:
    if pos >= len(tokens):
        raise SexprError("unexpected end of input")
    token = tokens[pos]
    if token == "(":
        items: List[Node] = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            item, pos = _parse(tokens, pos)
            items.append(item)
        if pos >= len(tokens):
            raise SexprError("unbalanced parenthesis")
        return items, pos + 1
    if token == ")":
        raise SexprError("unexpected ')'")
    if _INT_RE.match(token):
        return int(token), pos + 1
    return token, pos + 1


def _as_var(node: Node) -> str:
    if isinstance(node, str) and node.startswith("?") and len(node) > 1:
        return node[1:]
    raise SexprError(f"expected a ?variable, got {node!r}")


def term_from_node(node: Node) -> Term:
    if isinstance(node, int):
        return Lit(node)
    if isinstance(node, str):
        if node.startswith("?"):
            return Var(_as_var(node))
        return App(node)
    if isinstance(node, list) and node and isinstance(node[0], str):
        return App(node[0], tuple(term_from_node(a) for a in node[1:]))
    raise SexprError(f"cannot read term from {node!r}")


def formula_from_node(node: Node) -> SymFormula:
    if node == "true":
        return symbolic.TrueFormula()
    if node == "false":
        return symbolic.FalseFormula()
    if not isinstance(node, list) or not node or not isinstance(node[0], str):
        raise SexprError(f"cannot read formula from {node!r}")
    head, *rest = node
    if head == "=":
        _arity(node, 2)
        return symbolic.Eq(term_from_node(rest[0]), term_from_node(rest[1]))
    if head == "not":
        _arity(node, 1)
        return symbolic.Not(formula_from_node(rest[0]))
    if head in ("and", "or", "implies"):
        _arity(node, 2)
        cls = {"and": symbolic.And, "or": symbolic.Or, "implies": symbolic.Implies}[head]
        return cls(formula_from_node(rest[0]), formula_from_node(rest[1]))
    if head == "next":
        _arity(node, 1)
        return symbolic.Next(formula_from_node(rest[0]))
    if head in ("eventually", "always"):
        _arity(node, 2)
        cls = {"eventually": symbolic.Eventually, "always": symbolic.Always}[head]
        return cls(term_from_node(rest[0]), formula_from_node(rest[1]))
    if head in ("until", "release"):
        _arity(node, 3)
        cls = {"until": symbolic.Until, "release": symbolic.Release}[head]
        return cls(term_from_node(rest[0]), formula_from_node(rest[1]), formula_from_node(rest[2]))
    if head == "consume":
        _arity(node, 3)
        return symbolic.Consume(_as_var(rest[0]), _as_var(rest[1]), formula_from_node(rest[2]))
    if head in _RESERVED:
        raise SexprError(f"malformed {head!r} form")
    return symbolic.Pred(head, tuple(term_from_node(a) for a in rest))


def word_from_node(node: Node) -> List[Tuple[Term, int]]:
    if not isinstance(node, list) or not node or node[0] != "word":
        raise SexprError("expected a (word ...) form")
    letters = []
    for item in node[1:]:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], int):
            raise SexprError(f"letter must be (term time), got {item!r}")
        if item[1] < 0 or (letters and item[1] < letters[-1][1]):
            raise SexprError("timestamps must be non-negative and non-decreasing")
        letters.append((term_from_node(item[0]), item[1]))
    return letters


def scenario_from_node(node: Node) -> Tuple[SymFormula, List[Tuple[Term, int]], Verdict]:
    if not isinstance(node, list) or not node or node[0] != "scenario":
        raise SexprError("expected a (scenario ...) form")
    formula = word = expect = None
    for item in node[1:]:
        if not isinstance(item, list) or not item:
            raise SexprError(f"bad scenario entry {item!r}")
        if item[0] == "formula":
            _arity(item, 1)
            formula = formula_from_node(item[1])
        elif item[0] == "word":
            word = word_from_node(item)
        elif item[0] == "expect":
            _arity(item, 1)
            expect = Verdict.from_symbol(str(item[1]))
        else:
            raise SexprError(f"unknown scenario entry {item[0]!r}")
    if formula is None or word is None or expect is None:
        raise SexprError("scenario needs formula, word and expect entries")
    return formula, word, expect


def parse_formula(text: str) -> SymFormula:
    return formula_from_node(parse_node(text))


def parse_scenario(text: str) -> Tuple[SymFormula, List[Tuple[Term, int]], Verdict]:
    return scenario_from_node(parse_node(text))


def _arity(node: List[Node], n: int) -> None:
    if len(node) != n + 1:
        raise SexprError(f"{node[0]!r} expects {n} arguments, got {len(node) - 1}")


# ---------------------------------------------------------------------------
# Formatting (inverse of parsing)


def format_term(term: Term) -> str:
    if isinstance(term, Lit):
        return str(term.value)
    if isinstance(term, Var):
        return f"?{term.name}"
    if isinstance(term, App):
        if not term.args:
            return term.symbol
        return f"({term.symbol} {' '.join(format_term(a) for a in term.args)})"
    raise SexprError(f"cannot format term {term!r}")


def format_formula(phi: SymFormula) -> str:
    if isinstance(phi, symbolic.TrueFormula):
        return "true"
    if isinstance(phi, symbolic.FalseFormula):
        return "false"
    if isinstance(phi, symbolic.Pred):
        inner = " ".join(format_term(a) for a in phi.args)
        return f"({phi.name} {inner})" if inner else f"({phi.name})"
    if isinstance(phi, symbolic.Eq):
        return f"(= {format_term(phi.left)} {format_term(phi.right)})"
    if isinstance(phi, symbolic.Not):
        return f"(not {format_formula(phi.body)})"
    if isinstance(phi, symbolic.And):
        return f"(and {format_formula(phi.left)} {format_formula(phi.right)})"
    if isinstance(phi, symbolic.Or):
        return f"(or {format_formula(phi.left)} {format_formula(phi.right)})"
    if isinstance(phi, symbolic.Implies):
        return f"(implies {format_formula(phi.left)} {format_formula(phi.right)})"
    if isinstance(phi, symbolic.Next):
        return f"(next {format_formula(phi.body)})"
    if isinstance(phi, symbolic.Eventually):
        return f"(eventually {format_term(phi.timeout)} {format_formula(phi.body)})"
    if isinstance(phi, symbolic.Always):
        return f"(always {format_term(phi.timeout)} {format_formula(phi.body)})"
    if isinstance(phi, symbolic.Until):
        return (
            f"(until {format_term(phi.timeout)} "
            f"{format_formula(phi.left)} {format_formula(phi.right)})"
        )
    if isinstance(phi, symbolic.Release):
        return (
            f"(release {format_term(phi.timeout)} "
            f"{format_formula(phi.left)} {format_formula(phi.right)})"
        )
    if isinstance(phi, symbolic.Consume):
        return f"(consume ?{phi.var} ?{phi.time_var} {format_formula(phi.body)})"
    raise SexprError(f"cannot format formula {phi!r}")


def format_word(word: List[Tuple[Term, int]]) -> str:
    letters = " ".join(f"({format_term(term)} {time})" for term, time in word)
    return f"(word {letters})" if letters else "(word)"
