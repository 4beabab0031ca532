"""Normal algorithms over the six-letter alphabet, their numbering, and a dovetailer.

Semantics (the classical convention, stated explicitly because everything
downstream depends on it): at each step the first rule in scheme order
whose left side occurs in the current word is applied at the leftmost
occurrence; an empty left side occurs in every word at position 0; a
terminal rule halts after its replacement; if no rule applies the process
halts as is.  Each replacement consumes one unit of fuel.

The numbering is a registry prefix (indices 0..r-1) followed by a
canonical bijection between the remaining naturals and *all* schemes,
built from bijective base-6 numeration for words and pairing functions
for rules and rule lists.  The triangular dovetail schedule (stage t runs
machines 0..t, each with total step budget t, resuming persisted partial
computations) is normative: enumeration outputs and certificates depend
on it, and it is versioned through `Numbering.version`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Iterable

from .errors import ParseError
from .numerals import ALPHABET, check_word

DEFAULT_MAX_FUEL = 10**6
DEFAULT_MAX_WORD = 4096

NUMBERING_FORMAT = "rdgap-num-v1"


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: str
    terminal: bool = False

    def __post_init__(self):
        check_word(self.lhs)
        check_word(self.rhs)


@dataclass(frozen=True)
class Scheme:
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))


@dataclass(frozen=True)
class RunResult:
    halted: bool
    word: str
    steps: int


@dataclass(frozen=True)
class HaltEvent:
    index: int
    input: str
    output: str
    steps: int

    def to_json(self) -> dict:
        return {"index": self.index, "input": self.input,
                "output": self.output, "steps": self.steps}


def run_machine(scheme: Scheme, word: str, fuel: int) -> RunResult:
    """Reference interpreter: pure function of (scheme, word, fuel).

    The "no rule applies" halt consumes no fuel, so it is checked even
    when the budget is already spent.
    """
    check_word(word)
    rules = [(r.lhs, r.rhs, r.terminal) for r in scheme.rules]
    steps = 0
    while True:
        for lhs, rhs, terminal in rules:
            pos = word.find(lhs)
            if pos >= 0:
                break
        else:
            return RunResult(True, word, steps)
        if steps >= fuel:
            return RunResult(False, word, steps)
        word = word[:pos] + rhs + word[pos + len(lhs):]
        steps += 1
        if terminal:
            return RunResult(True, word, steps)


def constant_machine(w: str) -> Scheme:
    """Scheme that erases any input letter by letter, then emits w and halts."""
    check_word(w)
    rules = [Rule(c, "", False) for c in ALPHABET]
    rules.append(Rule("", w, True))
    return Scheme(tuple(rules))


# ---------------------------------------------------------------------------
# Scheme text format
# ---------------------------------------------------------------------------
# One rule per line: `LHS -> RHS` (nonterminal) or `LHS ->. RHS` (terminal);
# whitespace around tokens is trimmed, empty sides are written as nothing,
# lines starting with `#` are comments.  Registry files hold several schemes
# separated by lines containing only `---`.

def scheme_to_text(scheme: Scheme) -> str:
    lines = []
    for r in scheme.rules:
        arrow = "->." if r.terminal else "->"
        lines.append(f"{r.lhs} {arrow} {r.rhs}".strip())
    return "\n".join(lines) + "\n"


def parse_scheme_text(text: str) -> Scheme:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        idx = line.find("->")
        if idx < 0:
            raise ParseError(f"line {lineno}: no '->' in rule {raw!r}")
        lhs = line[:idx].strip()
        rest = line[idx + 2:]
        terminal = rest.startswith(".")
        if terminal:
            rest = rest[1:]
        rhs = rest.strip()
        try:
            rules.append(Rule(lhs, rhs, terminal))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    return Scheme(tuple(rules))


def registry_to_text(schemes: Iterable[Scheme]) -> str:
    return "\n---\n".join(scheme_to_text(s).rstrip("\n") for s in schemes) + "\n"


def parse_registry_text(text: str) -> list[Scheme]:
    sections: list[list[str]] = [[]]
    for raw in text.splitlines():
        if raw.strip() == "---":
            sections.append([])
        else:
            sections[-1].append(raw)
    return [parse_scheme_text("\n".join(sec)) for sec in sections]


# ---------------------------------------------------------------------------
# Canonical bijection naturals <-> schemes
# ---------------------------------------------------------------------------

def _pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def _unpair(n: int) -> tuple[int, int]:
    t = (isqrt(8 * n + 1) - 1) // 2
    while t * (t + 1) // 2 > n:
        t -= 1
    b = n - t * (t + 1) // 2
    return t - b, b


def word_to_code(w: str) -> int:
    """Bijective base-6 numeration; the empty word is 0."""
    check_word(w)
    n = 0
    for c in w:
        n = n * 6 + ALPHABET.index(c) + 1
    return n


def word_from_code(n: int) -> str:
    letters = []
    while n > 0:
        n, r = divmod(n - 1, 6)
        letters.append(ALPHABET[r])
    return "".join(reversed(letters))


def rule_to_code(r: Rule) -> int:
    return 2 * _pair(word_to_code(r.lhs), word_to_code(r.rhs)) + (1 if r.terminal else 0)


def rule_from_code(n: int) -> Rule:
    n, t = divmod(n, 2)
    a, b = _unpair(n)
    return Rule(word_from_code(a), word_from_code(b), bool(t))


def scheme_to_code(s: Scheme) -> int:
    code = 0
    for r in reversed(s.rules):
        code = _pair(rule_to_code(r), code) + 1
    return code


def scheme_from_code(n: int) -> Scheme:
    rules = []
    while n > 0:
        head, n = _unpair(n - 1)
        rules.append(rule_from_code(head))
    return Scheme(tuple(rules))


# ---------------------------------------------------------------------------
# Numbering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Numbering:
    """Registry prefix + canonical bijective tail over all schemes."""

    registry: tuple[Scheme, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "registry", tuple(self.registry))

    @property
    def registry_digest(self) -> str:
        blob = registry_to_text(self.registry) if self.registry else ""
        return hashlib.sha256(blob.encode()).hexdigest()

    @property
    def version(self) -> str:
        return f"{NUMBERING_FORMAT}:{self.registry_digest[:16]}"

    def index_to_scheme(self, i: int) -> Scheme:
        if i < 0:
            raise ParseError(f"negative index {i}")
        r = len(self.registry)
        if i < r:
            return self.registry[i]
        return scheme_from_code(i - r)

    def scheme_to_index(self, s: Scheme) -> int:
        for i, reg in enumerate(self.registry):
            if reg == s:
                return i
        return len(self.registry) + scheme_to_code(s)


# ---------------------------------------------------------------------------
# Dovetailer
# ---------------------------------------------------------------------------

class _Sim:
    """Persisted partial computation of one machine."""

    __slots__ = ("rules", "input", "word", "steps", "halted", "parked")

    def __init__(self, scheme: Scheme, word: str):
        self.rules = [(r.lhs, r.rhs, r.terminal) for r in scheme.rules]
        self.input = word
        self.word = word
        self.steps = 0
        self.halted = False
        self.parked = False


class Dovetailer:
    """Deterministic triangular scheduler over all machines of a numbering.

    At stage t = 1..stages, machines 0..t each continue their persisted
    computation until they have consumed t steps in total (capped by the
    fuel budget), halted, or been parked.  HaltEvents are emitted in
    (stage, index) order; each index emits at most one event.

    Parking is a desk-scale budget, not a semantic change: a machine is
    parked when a non-terminal rewrite leaves the word unchanged (a
    proven fixpoint: the configuration is just the word, so it will loop
    forever) or when its word outgrows `max_word`.
    """

    def __init__(self, numbering: Numbering, input_of: Callable[[int], str],
                 max_fuel: int = DEFAULT_MAX_FUEL, max_word: int = DEFAULT_MAX_WORD):
        self.numbering = numbering
        self.input_of = input_of
        self.max_fuel = max_fuel
        self.max_word = max_word
        self.stage = 0
        self.events: list[HaltEvent] = []
        self._sims: dict[int, _Sim] = {}
        self._live: list[int] = []

    def _advance(self, sim: _Sim, budget: int) -> None:
        word = sim.word
        steps = sim.steps
        rules = sim.rules
        max_word = self.max_word
        while True:
            for lhs, rhs, terminal in rules:
                pos = word.find(lhs)
                if pos >= 0:
                    break
            else:
                sim.halted = True  # no rule applies; costs no fuel
                break
            if steps >= budget:
                break
            new_word = word[:pos] + rhs + word[pos + len(lhs):]
            steps += 1
            if terminal:
                word = new_word
                sim.halted = True
                break
            if new_word == word or len(new_word) > max_word:
                word = new_word
                sim.parked = True
                break
            word = new_word
        sim.word = word
        sim.steps = steps

    def run_to(self, stages: int) -> list[HaltEvent]:
        """Advance the schedule; returns the events newly emitted."""
        new_events: list[HaltEvent] = []
        for t in range(self.stage + 1, stages + 1):
            first_new = 0 if t == 1 else t
            for i in range(first_new, t + 1):
                self._sims[i] = _Sim(self.numbering.index_to_scheme(i), self.input_of(i))
                self._live.append(i)
            budget = min(t, self.max_fuel)
            survivors: list[int] = []
            for i in self._live:
                s = self._sims[i]
                self._advance(s, budget)
                if s.halted:
                    new_events.append(HaltEvent(i, s.input, s.word, s.steps))
                    del self._sims[i]
                elif s.parked:
                    del self._sims[i]
                else:
                    survivors.append(i)
            self._live = survivors
            self.stage = t
        self.events.extend(new_events)
        return new_events


def dovetail(numbering: Numbering, stages: int, input_of: Callable[[int], str],
             max_fuel: int = DEFAULT_MAX_FUEL, max_word: int = DEFAULT_MAX_WORD) -> list[HaltEvent]:
    """One-shot dovetail run; deterministic in all arguments."""
    if stages < 1:
        raise ParseError(f"stages must be >= 1, got {stages}")
    dt = Dovetailer(numbering, input_of, max_fuel=max_fuel, max_word=max_word)
    dt.run_to(stages)
    return dt.events
