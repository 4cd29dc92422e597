"""Terms, substitution, interpretation, compilation, and their agreement."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamcheck import runtime as rt
from streamcheck import semantics, symbolic as sym, truth

from corpus import (
    INTERP,
    monitor_verdict,
    random_symbolic_formula,
    random_term_word,
)


def consume(var, time_var, body):
    return sym.Consume(var, time_var, body)


class TestFreeVars:
    def test_both_binders_discharge(self):
        phi = consume("x", "o", sym.eq(sym.Var("x"), "a"))
        assert sym.free_vars(phi) == set()

    def test_timeout_variables_are_collected(self):
        timeout = sym.App("plus", (sym.Var("o"), sym.Lit(6)))
        phi = consume("x", "o", sym.Always(timeout, sym.Eq(sym.Var("x"), sym.Var("y"))))
        assert sym.free_vars(phi) == {"y"}

    def test_plain_variable(self):
        assert sym.free_vars(sym.Eq(sym.Var("x"), sym.Var("x"))) == {"x"}


class TestSubstitute:
    def test_simple_replacement(self):
        phi = sym.eq(sym.Var("x"), "a")
        assert sym.substitute(phi, "x", sym.App("b")) == sym.eq("b", "a")

    def test_timeout_substitution(self):
        timeout = sym.App("plus", (sym.Var("o"), sym.Lit(6)))
        phi = sym.Always(timeout, sym.eq(sym.Var("x"), "b"))
        bound = sym.substitute(sym.substitute(phi, "x", sym.App("b")), "o", sym.Lit(0))
        assert bound == sym.Always(
            sym.App("plus", (sym.Lit(0), sym.Lit(6))), sym.eq("b", "b")
        )

    def test_shadowed_binder_untouched(self):
        phi = consume("x", "o", sym.eq(sym.Var("x"), "a"))
        assert sym.substitute(phi, "x", sym.App("b")) == phi

    def test_substitution_discharges_the_variable(self):
        rng = random.Random(2)
        for _ in range(500):
            phi = random_symbolic_formula(rng, depth=4)
            for var in sorted(sym.free_vars(phi) | {"x0"}):
                replaced = sym.substitute(phi, var, sym.App("a"))
                assert var not in sym.free_vars(replaced)


class TestEvalTerm:
    def test_function_application(self):
        term = sym.App("plus", (sym.Lit(1), sym.Lit(2)))
        assert sym.eval_term(term, INTERP) == 3

    def test_literal_self_interprets(self):
        assert sym.eval_term(sym.Lit(7), INTERP) == 7

    def test_nested_fold(self):
        inner = sym.App("plus", (sym.Lit(0), sym.Lit(1)))
        assert sym.eval_term(sym.App("plus", (inner, sym.Lit(2))), INTERP) == 3

    def test_uninterpreted_symbol_is_named(self):
        with pytest.raises(sym.UninterpretedSymbol, match="mystery"):
            sym.eval_term(sym.App("mystery"), sym.Interpretation())

    def test_open_term_rejected(self):
        with pytest.raises(sym.OpenFormula):
            sym.eval_term(sym.Var("x"), INTERP)


@st.composite
def closed_formulas(draw):
    seed = draw(st.integers(min_value=0, max_value=10**9))
    return random_symbolic_formula(random.Random(seed), depth=4)


@settings(max_examples=150, deadline=None)
@given(closed_formulas(), st.sampled_from("abc"))
def test_substitute_then_free_vars_property(phi, constant):
    for var in sorted(sym.free_vars(phi)):
        assert var not in sym.free_vars(sym.substitute(phi, var, sym.App(constant)))


class TestCompile:
    def test_tautology_on_any_word(self):
        compiled = sym.compile_formula(sym.TrueFormula(), INTERP)
        assert semantics.models([], compiled) is truth.TRUE
        assert semantics.models([(sym.App("a"), 0)], compiled) is truth.TRUE

    def test_open_formula_rejected(self):
        with pytest.raises(sym.OpenFormula):
            sym.compile_formula(sym.eq(sym.Var("x"), "a"), INTERP)

    def test_uninterpreted_predicate_rejected(self):
        with pytest.raises(sym.UninterpretedSymbol):
            sym.compile_formula(sym.pred("mystery", 1), sym.Interpretation())

    def test_static_depth_from_concrete_timeouts(self):
        phi = consume("x", "o", sym.always(3, sym.eq(sym.Var("x"), "a")))
        compiled = sym.compile_formula(phi, INTERP)
        assert isinstance(compiled, rt.Consume)
        assert compiled.static_depth == 3
        assert rt.safe_word_length(compiled) == 3

    def test_static_depth_bounds_consumer_results(self):
        """The declared depth covers the safe word length of whatever the
        consumer returns, plus one, for every letter (compile-time constant
        folding may shrink a particular result below the declared bound, which
        keeps the bound sufficient)."""
        rng = random.Random(23)
        checked = 0
        while checked < 100:
            phi = random_symbolic_formula(rng, depth=4, variable_timeouts=False)
            compiled = sym.compile_formula(phi, INTERP)
            if not isinstance(compiled, rt.Consume):
                continue
            assert compiled.static_depth is not None
            for letter in ("a", "b", "c"):
                result = compiled.consumer(sym.App(letter), rng.randint(0, 9))
                assert rt.safe_word_length(result) + 1 <= compiled.static_depth
            checked += 1

    def test_variable_timeout_has_no_static_depth(self):
        timeout = sym.App("plus", (sym.Var("o"), sym.Lit(6)))
        phi = consume("x", "o", sym.Always(timeout, sym.eq(sym.Var("x"), "b")))
        compiled = sym.compile_formula(phi, INTERP)
        assert compiled.static_depth is None

    def test_compiled_judgment_matches_direct_judgment(self):
        rng = random.Random(11)
        for _ in range(1000):
            phi = random_symbolic_formula(rng, depth=5, max_timeout=4)
            assert not sym.free_vars(phi)
            word = random_term_word(rng, max_len=8)
            expected = sym.judge(word, 1, phi, INTERP)
            compiled = sym.compile_formula(phi, INTERP)
            assert semantics.models(word, compiled) is expected
            assert monitor_verdict(compiled, word) is expected


def test_symbolic_safe_word_length_matches_examples():
    phi = sym.always(
        3,
        sym.Implies(
            consume("x", "o", sym.eq(sym.Var("x"), "a")),
            sym.Next(consume("y", "p", sym.eq(sym.Var("y"), "a"))),
        ),
    )
    assert sym.symbolic_safe_word_length(phi, INTERP) == 4


def test_timeless_formulas_are_position_independent():
    """No temporal connective: the verdict is the same at every position of
    every word, including the empty one."""
    rng = random.Random(17)
    atoms = [
        sym.eq("a", "a"),
        sym.eq("a", "b"),
        sym.pred("leq", 1, 2),
        sym.TrueFormula(),
        sym.FalseFormula(),
    ]

    def timeless(depth):
        if depth == 0 or rng.random() < 0.3:
            return rng.choice(atoms)
        kind = rng.randrange(4)
        if kind == 0:
            return sym.Not(timeless(depth - 1))
        if kind == 1:
            return sym.And(timeless(depth - 1), timeless(depth - 1))
        if kind == 2:
            return sym.Or(timeless(depth - 1), timeless(depth - 1))
        return sym.Implies(timeless(depth - 1), timeless(depth - 1))

    for _ in range(100):
        phi = timeless(3)
        base = sym.judge([], 1, phi, INTERP)
        assert base.is_decided()
        for _ in range(5):
            word = random_term_word(rng, max_len=4)
            position = rng.randint(1, 6)
            assert sym.judge(word, position, phi, INTERP) is base
