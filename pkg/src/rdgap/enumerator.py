"""Repetition-free enumeration of machines whose self-application yields a candidate.

A machine is enrolled when, run on the numeral of its own index, it halts
with a star system  *delta*p_0*q_0*...*p_m*q_m*  where delta > 0, the p_k
are strictly increasing from 0 to 1, every q_k is nonnegative, and the
polygonal function g they define has integral strictly below 1/2.  The
enumeration order is dovetail discovery order, which makes mu injective
and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .machine import DEFAULT_MAX_FUEL, DEFAULT_MAX_WORD, Dovetailer, Numbering
from .numerals import decode_rational, encode_natural, parse_star_system, rat_to_str
from .polygon import PolygonalFunction, polygon_to_json


@dataclass(frozen=True)
class Candidate:
    delta: Fraction
    g: PolygonalFunction


@dataclass(frozen=True)
class Rejection:
    reason: str   # parse | delta | breakpoints | negativity | integral
    detail: str


def validate_candidate(word: str) -> Candidate | Rejection:
    """Decide whether a halt output is a valid (delta, g) candidate.

    Total and never loops; the first failing stage gives the reject
    reason.  Star framing and numeral decoding failures are 'parse';
    pairing arity and breakpoint-list failures are 'breakpoints'.
    The decoder is liberal: unreduced numerals and collinear interior
    breakpoints are accepted and canonicalized.
    """
    try:
        segments = parse_star_system(word)
    except ParseError as exc:
        return Rejection("parse", str(exc))
    try:
        delta = decode_rational(segments[0])
    except ParseError as exc:
        return Rejection("parse", f"delta numeral: {exc}")
    if delta <= 0:
        return Rejection("delta", f"delta = {delta} not positive")
    rest = segments[1:]
    if len(rest) < 4 or len(rest) % 2 != 0:
        return Rejection("breakpoints", f"{len(rest)} numerals cannot form >= 2 (p,q) pairs")
    pairs = []
    for i in range(0, len(rest), 2):
        try:
            p = decode_rational(rest[i])
            q = decode_rational(rest[i + 1])
        except ParseError as exc:
            return Rejection("parse", f"pair {i // 2}: {exc}")
        pairs.append((p, q))
    if pairs[0][0] != 0:
        return Rejection("breakpoints", f"p_0 = {pairs[0][0]}, expected 0")
    if pairs[-1][0] != 1:
        return Rejection("breakpoints", f"p_m = {pairs[-1][0]}, expected 1")
    for (p1, _), (p2, _) in zip(pairs, pairs[1:]):
        if p1 >= p2:
            return Rejection("breakpoints", f"breakpoints not strictly increasing at {p1}")
    for _, q in pairs:
        if q < 0:
            return Rejection("negativity", f"value {q} is negative")
    g = PolygonalFunction(pairs)
    integral = g.integral()
    if integral >= Fraction(1, 2):
        return Rejection("integral", f"integral(g) = {integral} not < 1/2")
    return Candidate(delta, g)


def candidate_word(delta, points) -> str:
    """Encode a (delta, g) candidate as a star-system word (test/seed helper)."""
    from .numerals import encode_rational, join_star_system
    segments = [encode_rational(Fraction(delta))]
    for p, q in points:
        segments.append(encode_rational(Fraction(p)))
        segments.append(encode_rational(Fraction(q)))
    return join_star_system(segments)


@dataclass(frozen=True)
class Entry:
    n: int
    mu: int
    delta: Fraction
    g: PolygonalFunction
    word: str
    steps: int

    def to_json(self) -> dict:
        return {"n": self.n, "mu": self.mu, "delta": rat_to_str(self.delta),
                "g": polygon_to_json(self.g)}


class EnumerationState:
    """Dovetail-driven enumeration; extendable, deterministic, mu-injective."""

    def __init__(self, numbering: Numbering,
                 max_fuel: int = DEFAULT_MAX_FUEL, max_word: int = DEFAULT_MAX_WORD):
        self.numbering = numbering
        self._dovetailer = Dovetailer(numbering, encode_natural,
                                      max_fuel=max_fuel, max_word=max_word)
        self.entries: list[Entry] = []
        self.rejections: dict[int, Rejection] = {}
        self._enrolled: set[int] = set()

    @property
    def stages(self) -> int:
        return self._dovetailer.stage

    def extend(self, stages: int) -> None:
        for ev in self._dovetailer.run_to(stages):
            verdict = validate_candidate(ev.output)
            if isinstance(verdict, Rejection):
                self.rejections[ev.index] = verdict
                continue
            if ev.index in self._enrolled:
                continue
            self._enrolled.add(ev.index)
            self.entries.append(Entry(len(self.entries), ev.index,
                                      verdict.delta, verdict.g, ev.output, ev.steps))

    def entry_for_index(self, index: int) -> Entry | None:
        for e in self.entries:
            if e.mu == index:
                return e
        return None

    def to_json(self) -> dict:
        return {
            "numbering_version": self.numbering.version,
            "stages": self.stages,
            "entries": [e.to_json() for e in self.entries],
        }


def enumerate_mu(numbering: Numbering, stages: int,
                 max_fuel: int = DEFAULT_MAX_FUEL,
                 max_word: int = DEFAULT_MAX_WORD) -> EnumerationState:
    """Run the enumeration for a fixed stage budget."""
    if stages < 1:
        raise ParseError(f"stages must be >= 1, got {stages}")
    state = EnumerationState(numbering, max_fuel=max_fuel, max_word=max_word)
    state.extend(stages)
    return state
