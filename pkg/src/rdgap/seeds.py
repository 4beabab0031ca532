"""Reference registries for desk-scale runs.

The canonical tail alone halts with useful outputs only at astronomically
large indices, so reproducible runs seed the registry prefix: constant
machines that emit rational numerals (covering fodder) or candidate lists
(enumeration fodder).
"""

from __future__ import annotations

from fractions import Fraction

from .enumerator import candidate_word
from .machine import Scheme, constant_machine
from .numerals import encode_rational


def rational_registry(count: int = 56, den: int = 57) -> tuple[Scheme, ...]:
    """Constant machines emitting k/den for k = 1..count.

    Machine e halts on its own index numeral after e+2 steps, so a run of
    a few hundred stages already yields `count` covering intervals with
    total length below 1/8.
    """
    if count >= den:
        raise ValueError("count must stay below den so centers stay inside (0,1)")
    return tuple(constant_machine(encode_rational(Fraction(k, den)))
                 for k in range(1, count + 1))


def default_candidate_registry() -> tuple[Scheme, ...]:
    """Four constant machines emitting valid candidate lists.

    Varied deltas and shapes: the zero function, a tent, a constant, and
    an asymmetric zig-zag; all integrals strictly below 1/2.
    """
    half = Fraction(1, 2)
    words = [
        candidate_word(Fraction(1, 4), [(0, 0), (1, 0)]),
        candidate_word(Fraction(1, 8), [(0, 0), (half, Fraction(3, 4)), (1, 0)]),
        candidate_word(half, [(0, Fraction(1, 4)), (1, Fraction(1, 4))]),
        candidate_word(Fraction(1, 16),
                       [(0, Fraction(1, 4)), (Fraction(1, 4), 0),
                        (Fraction(3, 4), half), (1, 0)]),
    ]
    return tuple(constant_machine(w) for w in words)


def cheater_claim_scheme() -> Scheme:
    """The trivial claim delta = 1, g = 0: premises always hold, bound never."""
    return constant_machine(candidate_word(1, [(0, 0), (1, 0)]))
