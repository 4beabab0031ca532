"""Diagonal bump construction defeating every enumerated candidate.

For each enumerated candidate (delta_n, g_n) a row is built:

* zeta_n: a rational in (0,1) where s = g_n + h_{nu(n)} is strictly below
  1 (such a point exists because integral(s) < 1/2 + 1/2 = 1);
* nu(n+1): the least envelope index with h(zeta_n) > 1, found by growing
  the covering (coverage_search);
* beta_n: half of the smallest of the two exact strict-level radii and
  the caps delta_n, zeta_n, 1 - zeta_n, so that on [zeta_n - beta_n,
  zeta_n + beta_n] both strict bounds s < 1 < h_{nu(n+1)} hold, and
  beta_n < min(delta_n, zeta_n, 1 - zeta_n) strictly;
* bump_n: the triangular bump of height 2^-mu(n), half-width beta_n,
  centered at zeta_n.

Both row inequalities are re-verified exactly at construction, at every
breakpoint of the restricted functions plus the interval endpoints, which
suffices for strict bounds on piecewise-linear functions.

Partial sums F_N of the bumps are Riemann-integrable with an exact
certificate chain: integral(omega(F_N, eps/16)) <= sum of the per-bump
oscillation integrals < sum of 2^-(mu(k)+1) * eps < eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covering import HSequence, coverage_search
from .enumerator import EnumerationState
from .errors import ConstructionError, VerificationError
from .numerals import ONE, ZERO, pow2, rat_to_str
from .polygon import (
    POLY_ZERO,
    PolygonalFunction,
    TaggedPartition,
    bump,
    oscillation,
    riemann_sum,
    strict_level_radius,
)


@dataclass(frozen=True)
class Row:
    n: int
    mu: int
    delta: Fraction
    g: PolygonalFunction
    zeta: Fraction
    beta: Fraction
    nu_n: int
    nu_next: int
    bump_fn: PolygonalFunction

    def to_json(self) -> dict:
        return {"n": self.n, "mu": self.mu, "zeta": rat_to_str(self.zeta),
                "beta": rat_to_str(self.beta), "nu_next": self.nu_next}


class DiagonalState:
    """Evolving construction: enumeration + covering + rows built so far."""

    def __init__(self, enumeration: EnumerationState, hseq: HSequence,
                 accelerate: bool = True):
        if enumeration.numbering.version != hseq.numbering.version:
            raise ConstructionError("enumeration and covering use different numberings")
        self.enumeration = enumeration
        self.hseq = hseq
        self.accelerate = accelerate
        self.nu: list[int] = [0]
        self.rows: list[Row] = []

    def rows_to_json(self) -> list[dict]:
        return [row.to_json() for row in self.rows]


def _leftmost_strict_sublevel_point(s: PolygonalFunction, level: Fraction) -> Fraction:
    """Deterministic zeta rule.

    Primary: the leftmost interior breakpoint of s strictly below level.
    Fallback: the midpoint of the leftmost maximal connected component of
    {x : s(x) < level}, found by an exact level-crossing scan.  Existence
    is guaranteed whenever min s < level.
    """
    for p, q in s.points[1:-1]:
        if q < level:
            return p
    # leftmost component of the strict sublevel set
    pts = s.points
    start = None
    for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
        if start is None:
            if y1 < level:
                start = x1
            elif y2 < level:
                # crossing downwards inside this segment
                start = x1 + (x2 - x1) * (y1 - level) / (y1 - y2)
            else:
                continue
        if start is not None:
            if y2 >= level:
                # crossing upwards ends the component inside this segment
                end = x1 + (x2 - x1) * (y1 - level) / (y1 - y2)
                return (start + end) / 2
    if start is None:
        raise ConstructionError(f"no point with value below {level}; min = {s.min_value()}")
    return (start + ONE) / 2


def _assert_strict_on(f: PolygonalFunction, lo: Fraction, hi: Fraction,
                      level: Fraction, mode: str, label: str) -> None:
    """Exact strict bound of f on [lo, hi], checked at breakpoints + endpoints."""
    xs = {lo, hi} | {x for x in f.breakpoints() if lo < x < hi}
    for x in sorted(xs):
        v = f(x)
        ok = v < level if mode == "below" else v > level
        if not ok:
            raise VerificationError(
                f"{label}: f({x}) = {v} not strictly "
                f"{'<' if mode == 'below' else '>'} {level}")


def extend_diagonal(state: DiagonalState, stage_budget: int) -> bool:
    """Build the next row; False when the coverage stage budget runs out."""
    n = len(state.rows)
    if n >= len(state.enumeration.entries):
        raise ConstructionError(
            f"enumeration has {len(state.enumeration.entries)} entries; row {n} needs entry {n}")
    entry = state.enumeration.entries[n]
    g, delta = entry.g, entry.delta

    h_n = state.hseq.h(state.nu[n])
    s = g + h_n
    if s.integral() >= 1:
        raise ConstructionError(f"integral(g_n + h_nu(n)) = {s.integral()} >= 1")
    zeta = _leftmost_strict_sublevel_point(s, ONE)
    if not (0 < zeta < 1) or s(zeta) >= 1:
        raise ConstructionError(f"zeta rule produced invalid point {zeta}")

    found = coverage_search(state.hseq, zeta, stage_budget, accelerate=state.accelerate)
    if found is None:
        return False
    nu_next = None
    for k in range(state.nu[n] + 1, found + 1):
        if state.hseq.h(k)(zeta) > 1:
            nu_next = k
            break
    if nu_next is None:
        raise ConstructionError(f"no envelope index up to {found} exceeds 1 at {zeta}")

    h_next = state.hseq.h(nu_next)
    rho1 = strict_level_radius(s, zeta, ONE, "below")
    rho2 = strict_level_radius(h_next, zeta, ONE, "above")
    beta = min(rho1, rho2, delta, zeta, 1 - zeta) / 2

    # exact re-verification of the two row inequalities
    if not (beta > 0 and beta < min(delta, zeta, 1 - zeta)):
        raise VerificationError(
            f"row {n}: beta = {beta} not strictly below min({delta}, {zeta}, {1 - zeta})")
    lo, hi = zeta - beta, zeta + beta
    _assert_strict_on(s, lo, hi, ONE, "below", f"row {n}: g_n + h_nu(n)")
    _assert_strict_on(h_next, lo, hi, ONE, "above", f"row {n}: h_nu(n+1)")

    bump_fn = bump(pow2(-entry.mu), beta, zeta)
    state.nu.append(nu_next)
    state.rows.append(Row(n, entry.mu, delta, g, zeta, beta,
                          state.nu[n], nu_next, bump_fn))
    return True


def partial_sum(state: DiagonalState, N: int) -> PolygonalFunction:
    """F_N = bump_0 + ... + bump_N, exact."""
    if not (0 <= N < len(state.rows)):
        raise ConstructionError(f"N = {N} out of range; {len(state.rows)} rows built")
    total = state.rows[0].bump_fn
    for row in state.rows[1:N + 1]:
        total = total + row.bump_fn
    return total


@dataclass(frozen=True)
class RiemannReport:
    """Exact certificate that F_N oscillates below eps at window eps/16."""

    N: int
    eps: Fraction
    osc_total: Fraction          # A = integral(omega(F_N, eps/16))
    osc_bump_sum: Fraction       # B = sum_k integral(omega(bump_k, eps/16))
    bound_sum: Fraction          # C = sum_k 2^-(mu(k)+1) * eps
    per_bump: tuple[tuple[Fraction, Fraction], ...]  # (omega integral, bound) per k
    partition_gap: Fraction      # |I(F_N, tau) - I(F_N, sigma)| for the two partitions
    cells: int

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "eps": rat_to_str(self.eps),
            "osc_total": rat_to_str(self.osc_total),
            "osc_bump_sum": rat_to_str(self.osc_bump_sum),
            "bound_sum": rat_to_str(self.bound_sum),
            "per_bump": [[rat_to_str(a), rat_to_str(b)] for a, b in self.per_bump],
            "partition_gap": rat_to_str(self.partition_gap),
            "cells": self.cells,
        }


def verify_riemann(state: DiagonalState, N: int, eps) -> RiemannReport:
    """Verify the exact oscillation chain A <= B < C < eps for F_N.

    Also runs the Cauchy-style cross check: two deterministic tagged
    partitions of mesh <= eps/16 (uniform cells, left tags and right
    tags) whose Riemann sums differ by at most 2*A.  Raises
    VerificationError with both sides on any failure.  A state with no
    rows (N = -1) passes trivially with every quantity zero.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ConstructionError(f"eps must be > 0, got {eps}")
    if not (-1 <= N < len(state.rows)):
        raise ConstructionError(f"N = {N} out of range; {len(state.rows)} rows built")
    eps16 = eps / 16
    F = partial_sum(state, N) if N >= 0 else POLY_ZERO

    A = oscillation(F, eps16).integral()
    per_bump = []
    B = ZERO
    C = ZERO
    for row in state.rows[:N + 1]:
        osc_k = oscillation(row.bump_fn, eps16).integral()
        bound_k = pow2(-(row.mu + 1)) * eps
        if osc_k > bound_k:
            raise VerificationError(
                f"per-bump bound fails at k={row.n}: {osc_k} > {bound_k}")
        per_bump.append((osc_k, bound_k))
        B += osc_k
        C += bound_k

    if A > B:
        raise VerificationError(f"subadditivity fails: A = {A} > B = {B}")
    if N >= 0:
        if not B < C:
            raise VerificationError(f"strict bump chain fails: B = {B} not < C = {C}")
        if not C < eps:
            raise VerificationError(f"bound sum too large: C = {C} not < eps = {eps}")

    # smallest cell count with 1/cells <= eps/16
    cells = -(-eps16.denominator // eps16.numerator)
    tau = TaggedPartition.uniform(cells, "left")
    sigma = TaggedPartition.uniform(cells, "right")
    gap = abs(riemann_sum(F, tau) - riemann_sum(F, sigma))
    if gap > 2 * A:
        raise VerificationError(f"partition cross-check fails: {gap} > 2*{A}")

    return RiemannReport(N, eps, A, B, C, tuple(per_bump), gap, cells)
