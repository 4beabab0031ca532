"""Finite prefix of a singular covering of [0,1] and its envelope sequence h_n.

Intervals come from two sources, each with its own geometric budget so
that every partial sum of lengths stays strictly below 1/6:

* machine-sourced: dovetail every machine of the numbering on the numeral
  of its own index; when machine e halts with a word that decodes to a
  rational r in [0,1], emit (r - 2^-(e+5), r + 2^-(e+5)).  Undecodable or
  out-of-range outputs contribute nothing.  Total length <= 1/8.
* injected ("coverage accelerators", recorded in every output): slot j
  contributes (c - 2^-(j+8), c + 2^-(j+8)).  Total length <= 1/64.

The envelope sequence starts at h_0 = 0 and grows by
h_{n+1} = sup(h_n, 2*phi_n) with phi_n the plateau trapezoid of the n-th
interval; every h_n satisfies 0 <= h_n <= 2, h_n <= h_{n+1}, and
integral(h_n) < 1/2, all checked exactly at construction time.

Interval emission order is normative (it fixes every h-index downstream):
machine intervals appear in dovetail event order, and each injection
carries an `after_stage` position so that extending the stage budget only
ever appends intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CoveringError, NeedsMoreStages, ParseError
from .machine import DEFAULT_MAX_FUEL, DEFAULT_MAX_WORD, Dovetailer, Numbering
from .numerals import ONE, TWO, ZERO, decode_rational, encode_natural, pow2, rat_to_str
from .polygon import POLY_ZERO, PolygonalFunction, lattice_sup, trapezoid_phi

MACHINE_RADIUS_SHIFT = 5    # machine e: radius 2^-(e+5), lengths sum to <= 1/8
INJECT_RADIUS_SHIFT = 8     # slot j: radius 2^-(j+8), lengths sum to <= 1/64
MACHINE_BUDGET = Fraction(1, 8)
INJECT_BUDGET = Fraction(1, 64)
COVER_CAP = Fraction(1, 6)


@dataclass(frozen=True)
class Injection:
    center: Fraction
    slot: int
    after_stage: int = 0

    def to_json(self) -> dict:
        return {"center": rat_to_str(self.center), "slot": self.slot,
                "after_stage": self.after_stage}


def injection_from_json(obj) -> Injection:
    try:
        from .numerals import rat_from_str
        return Injection(rat_from_str(obj["center"]), int(obj["slot"]),
                         int(obj.get("after_stage", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad injection: {obj!r}") from exc


@dataclass(frozen=True)
class Interval:
    a: Fraction
    b: Fraction
    source: str          # "machine" | "injected"
    source_id: int       # machine index or injection slot

    @property
    def length(self) -> Fraction:
        return self.b - self.a

    def source_tag(self) -> str:
        return f"{self.source}:{self.source_id}"


@dataclass(frozen=True)
class CoveringPrefix:
    """Immutable record of an emitted covering prefix."""

    numbering_version: str
    stages: int
    injections: tuple[Injection, ...]
    intervals: tuple[Interval, ...]

    @property
    def total_length(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), ZERO)

    def partial_sums(self) -> list[Fraction]:
        out, acc = [], ZERO
        for iv in self.intervals:
            acc += iv.length
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {
            "numbering_version": self.numbering_version,
            "stages": self.stages,
            "injections": [inj.to_json() for inj in self.injections],
            "intervals": [[rat_to_str(iv.a), rat_to_str(iv.b), iv.source_tag()]
                          for iv in self.intervals],
            "total_length": rat_to_str(self.total_length),
        }


def _coerce_injections(injections) -> list[Injection]:
    out = []
    for item in injections:
        if isinstance(item, Injection):
            out.append(item)
        else:
            center, slot = item
            out.append(Injection(Fraction(center), int(slot)))
    slots = [inj.slot for inj in out]
    if len(set(slots)) != len(slots):
        raise CoveringError(f"injection slots not pairwise distinct: {slots}")
    for inj in out:
        if inj.slot < 0:
            raise CoveringError(f"negative injection slot {inj.slot}")
    return out


class HSequence:
    """Covering prefix plus the cached envelope functions h_0 ... h_N.

    The object owns a persistent dovetailer, so the covering can be
    extended (more stages, more injections) without disturbing already
    emitted intervals; `prefix()` snapshots the current state, and
    rebuilding from the same (numbering, stages, injections) reproduces
    it byte for byte.
    """

    def __init__(self, numbering: Numbering, stages: int = 0, injections=(),
                 max_fuel: int = DEFAULT_MAX_FUEL, max_word: int = DEFAULT_MAX_WORD):
        self.numbering = numbering
        self._dovetailer = Dovetailer(numbering, encode_natural,
                                      max_fuel=max_fuel, max_word=max_word)
        self.intervals: list[Interval] = []
        self.injections: list[Injection] = []
        self._pending = sorted(_coerce_injections(injections),
                               key=lambda inj: inj.after_stage)
        self._machine_total = ZERO
        self._injected_total = ZERO
        self._machine_indices: set[int] = set()
        self._h: list[PolygonalFunction] = [POLY_ZERO]
        self._flush_pending(0)
        if stages:
            self.extend_stages(stages)

    # -- interval emission ------------------------------------------------

    @property
    def stages(self) -> int:
        return self._dovetailer.stage

    @property
    def total_length(self) -> Fraction:
        return self._machine_total + self._injected_total

    def _check_budgets(self) -> None:
        if self._machine_total > MACHINE_BUDGET:
            raise CoveringError(f"machine budget exceeded: {self._machine_total} > 1/8")
        if self._injected_total > INJECT_BUDGET:
            raise CoveringError(f"injection budget exceeded: {self._injected_total} > 1/64")
        if self.total_length >= COVER_CAP:
            raise CoveringError(f"covering cap violated: {self.total_length} >= 1/6")

    def _emit(self, interval: Interval) -> None:
        if interval.source == "machine":
            self._machine_total += interval.length
            self._machine_indices.add(interval.source_id)
            if any(inj.slot == interval.source_id for inj in self.injections):
                raise CoveringError(
                    f"machine index {interval.source_id} collides with an injection slot")
        else:
            self._injected_total += interval.length
        self._check_budgets()
        self.intervals.append(interval)

    def _flush_pending(self, stage: int) -> None:
        while self._pending and self._pending[0].after_stage <= stage:
            inj = self._pending.pop(0)
            if inj.slot in self._machine_indices:
                raise CoveringError(
                    f"injection slot {inj.slot} collides with machine index")
            radius = pow2(-(inj.slot + INJECT_RADIUS_SHIFT))
            self.injections.append(inj)
            self._emit(Interval(inj.center - radius, inj.center + radius,
                                "injected", inj.slot))

    def extend_stages(self, stages: int) -> None:
        """Advance the dovetail; append intervals for new decodable halts."""
        while self._dovetailer.stage < stages:
            t = self._dovetailer.stage + 1
            for ev in self._dovetailer.run_to(t):
                try:
                    r = decode_rational(ev.output)
                except ParseError:
                    continue
                if r < 0 or r > 1:
                    continue
                radius = pow2(-(ev.index + MACHINE_RADIUS_SHIFT))
                self._emit(Interval(r - radius, r + radius, "machine", ev.index))
            self._flush_pending(t)

    def add_injection(self, center, slot: int | None = None) -> Injection:
        """Append an accelerator interval at the current stage position."""
        center = Fraction(center)
        if slot is None:
            used = {inj.slot for inj in self.injections} | {inj.slot for inj in self._pending}
            slot = 0
            while slot in used or slot in self._machine_indices:
                slot += 1
        elif any(inj.slot == slot for inj in self.injections) or \
                any(inj.slot == slot for inj in self._pending):
            raise CoveringError(f"injection slot {slot} already used")
        inj = Injection(center, slot, after_stage=self.stages)
        self._pending.append(inj)
        self._pending.sort(key=lambda i: i.after_stage)  # stable: keeps insertion order per stage
        self._flush_pending(self.stages)
        return inj

    def prefix(self) -> CoveringPrefix:
        return CoveringPrefix(self.numbering.version, self.stages,
                              tuple(self.injections), tuple(self.intervals))

    # -- envelope sequence -------------------------------------------------

    def h(self, n: int) -> PolygonalFunction:
        """h_n, built on demand; every construction step is verified exactly."""
        if n > len(self.intervals):
            raise NeedsMoreStages(n, len(self.intervals))
        while len(self._h) <= n:
            k = len(self._h) - 1
            iv = self.intervals[k]
            phi = trapezoid_phi(iv.a, iv.b)
            nxt = lattice_sup(self._h[k], 2 * phi)
            self._assert_h_invariants(self._h[k], nxt, iv)
            self._h.append(nxt)
        return self._h[n]

    @staticmethod
    def _assert_h_invariants(prev: PolygonalFunction, nxt: PolygonalFunction,
                             iv: Interval) -> None:
        for x, q in nxt.points:
            if q < 0 or q > 2:
                raise CoveringError(f"envelope out of [0,2] at {x}: {q}")
        for x in sorted(set(prev.breakpoints()) | set(nxt.breakpoints())):
            if nxt(x) < prev(x):
                raise CoveringError(f"envelope not monotone at {x}")
        if nxt.integral() >= Fraction(1, 2):
            raise CoveringError(f"integral(h) = {nxt.integral()} >= 1/2")
        lo, hi = max(iv.a, ZERO), min(iv.b, ONE)
        if lo <= hi:
            plateau_xs = {lo, hi} | {x for x in nxt.breakpoints() if lo <= x <= hi}
            for x in plateau_xs:
                if nxt(x) != TWO:
                    raise CoveringError(f"plateau broken at {x}: {nxt(x)}")

    def built_h_count(self) -> int:
        return len(self._h)


def covering_prefix(numbering: Numbering, stages: int, injections=(),
                    max_fuel: int = DEFAULT_MAX_FUEL,
                    max_word: int = DEFAULT_MAX_WORD) -> CoveringPrefix:
    """One-shot covering construction (pure in its arguments)."""
    if stages < 1:
        raise CoveringError(f"stages must be >= 1, got {stages}")
    hs = HSequence(numbering, stages=stages, injections=injections,
                   max_fuel=max_fuel, max_word=max_word)
    return hs.prefix()


def coverage_search(hs: HSequence, x, stage_budget: int,
                    accelerate: bool = False, step: int = 16) -> int | None:
    """Least n with h_n(x) = 2, extending the covering as needed.

    h_n(x) = 2 exactly when some interval among the first n contains x in
    its closed plateau [a_k, b_k], so the scan is over intervals.  With
    `accelerate` an injection centered at x is added (recorded in the
    prefix) instead of waiting for the dovetail to cover x.  Returns None
    when the stage budget runs out first.
    """
    x = Fraction(x)

    def first_covering_interval() -> int | None:
        for k, iv in enumerate(hs.intervals):
            if iv.a <= x <= iv.b:
                return k
        return None

    k = first_covering_interval()
    if k is None and accelerate:
        hs.add_injection(x)
        k = first_covering_interval()
    while k is None:
        if hs.stages >= stage_budget:
            return None
        hs.extend_stages(min(stage_budget, hs.stages + step))
        k = first_covering_interval()
    n = k + 1
    got = hs.h(n)(x)
    if got != TWO:
        raise CoveringError(f"h_{n}({x}) = {got}, expected 2")
    return n
