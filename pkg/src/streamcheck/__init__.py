"""Temporal property-based testing for micro-batch stream transformations.

The package combines a three-valued linear temporal logic with timeouts, a
stepwise formula monitor, formula-driven random word generation, temporal
generator combinators, and a deterministic micro-batch stream simulator, so
temporal properties of stream transformations can be tested without any
external stream engine.
"""

from . import examples, generators, harness, runtime, semantics, sexpr, symbolic, truth, wordgen
from .generators import Batch, StreamPrefix
from .harness import (
    HarnessConfig,
    IoLetter,
    PropertyReport,
    Transformation,
    for_all_stream,
    run_test_case,
)
from .runtime import (
    Always,
    And,
    Consume,
    Eventually,
    Formula,
    Implies,
    Monitor,
    Next,
    Not,
    Or,
    Release,
    Solved,
    Until,
    bind,
    now,
    now_time,
)
from .semantics import judge, models
from .truth import Verdict

__all__ = [
    "Always",
    "And",
    "Batch",
    "Consume",
    "Eventually",
    "Formula",
    "HarnessConfig",
    "Implies",
    "IoLetter",
    "Monitor",
    "Next",
    "Not",
    "Or",
    "PropertyReport",
    "Release",
    "Solved",
    "StreamPrefix",
    "Transformation",
    "Until",
    "Verdict",
    "bind",
    "examples",
    "for_all_stream",
    "generators",
    "harness",
    "judge",
    "models",
    "now",
    "now_time",
    "run_test_case",
    "runtime",
    "semantics",
    "sexpr",
    "symbolic",
    "truth",
    "wordgen",
]

__version__ = "0.1.0"
