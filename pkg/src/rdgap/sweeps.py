"""Seeded randomized verification sweeps.

All generators draw from an explicit random.Random(seed), so every sweep
is reproducible; there is no ambient randomness anywhere.  Each sweep
returns a report with the exact witnesses of any violation (there should
never be one: every asserted inequality is a theorem of the construction,
checked in exact arithmetic).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .numerals import ZERO
from .polygon import (
    PolygonalFunction,
    TaggedPartition,
    bump,
    oscillation,
    oscillation_oracle_at,
    riemann_sum,
)


def rand_fraction(rng: Random, max_den: int, lo, hi) -> Fraction:
    """Uniform-ish exact rational in [lo, hi] with denominator <= max_den."""
    lo, hi = Fraction(lo), Fraction(hi)
    den = rng.randint(1, max_den)
    lo_num = -(-lo.numerator * den // lo.denominator)   # ceil(lo*den)
    hi_num = hi.numerator * den // hi.denominator        # floor(hi*den)
    if lo_num > hi_num:
        return lo
    return Fraction(rng.randint(lo_num, hi_num), den)


def rand_polygon(rng: Random, max_points: int = 12, max_den: int = 32,
                 vlo=-4, vhi=4) -> PolygonalFunction:
    """Random polygonal function with bounded breakpoint count and denominators."""
    m = rng.randint(2, max_points)
    xs = {ZERO, Fraction(1)}
    while len(xs) < m:
        xs.add(rand_fraction(rng, max_den, 0, 1))
    return PolygonalFunction(
        [(x, rand_fraction(rng, max_den, vlo, vhi)) for x in sorted(xs)])


def rand_partition(rng: Random, mesh_bound: Fraction, max_den: int = 64,
                   extra_cuts: int = 3) -> TaggedPartition:
    """Random tagged partition with mesh <= mesh_bound, exactly.

    Starts from the uniform grid with ceil(1/mesh_bound) cells (adding
    cuts only shrinks the mesh) and sprinkles extra cuts and random tags.
    """
    n = -(-mesh_bound.denominator // mesh_bound.numerator)
    cuts = {Fraction(i, n) for i in range(n + 1)}
    for _ in range(rng.randint(0, extra_cuts)):
        cuts.add(rand_fraction(rng, max_den, 0, 1))
    cut_list = sorted(cuts)
    tags = []
    for a, b in zip(cut_list, cut_list[1:]):
        t = a + (b - a) * rand_fraction(rng, 8, 0, 1)
        tags.append(t)
    return TaggedPartition(cut_list, tags)


@dataclass
class SweepReport:
    name: str
    cases: int = 0
    checks: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f"; first violation: {self.violations[0]}" if self.violations else ""
        return (f"[{status}] {self.name}: {self.cases} cases, "
                f"{self.checks} exact checks{extra}")


EPS_GRID = (Fraction(1, 32), Fraction(1, 8), Fraction(1, 2), Fraction(2))


def sweep_omega_oracle(seed: int, count: int = 200,
                       eps_values=EPS_GRID) -> SweepReport:
    """Oscillation vs the independent pointwise oracle.

    Equality is checked at every breakpoint and cell midpoint of the
    computed oscillation; since both sides are piecewise linear with
    breakpoints inside the checked set, equality there implies equality
    everywhere.
    """
    rng = Random(seed)
    rep = SweepReport("oscillation agrees with the pointwise oracle")
    for _ in range(count):
        f = rand_polygon(rng)
        for eps in eps_values:
            om = oscillation(f, eps)
            xs = om.breakpoints()
            sample = xs + [(a + b) / 2 for a, b in zip(xs, xs[1:])]
            for x in sample:
                rep.checks += 1
                want = oscillation_oracle_at(f, eps, x)
                got = om(x)
                if got != want:
                    rep.violations.append(
                        f"f={f.points} eps={eps} x={x}: omega={got}, oracle={want}")
        rep.cases += 1
    return rep


def sweep_riemann_bound(seed: int, count: int = 200) -> SweepReport:
    """|I(f,tau) - integral(f)| <= integral(omega(f, eps)) for mesh <= eps."""
    rng = Random(seed)
    rep = SweepReport("Riemann sums within the oscillation integral")
    eps_choices = (Fraction(1, 2), Fraction(1, 4), Fraction(3, 16), Fraction(1, 8))
    for _ in range(count):
        f = rand_polygon(rng)
        eps = rng.choice(eps_choices)
        tau = rand_partition(rng, eps)
        assert tau.mesh <= eps
        gap = abs(riemann_sum(f, tau) - f.integral())
        allowed = oscillation(f, eps).integral()
        rep.cases += 1
        rep.checks += 1
        if gap > allowed:
            rep.violations.append(f"f={f.points} eps={eps}: |I-int| = {gap} > {allowed}")
    return rep


def sweep_bump_bound(seed: int, count: int = 200) -> SweepReport:
    """integral(omega(bump(alpha,beta,zeta), eps)) <= 8*alpha*eps, exactly."""
    rng = Random(seed)
    rep = SweepReport("bump oscillation integral below 8*alpha*eps")
    for _ in range(count):
        alpha = rand_fraction(rng, 16, Fraction(1, 16), 4)
        beta = rand_fraction(rng, 64, Fraction(1, 64), 1)
        zeta = rand_fraction(rng, 32, Fraction(1, 32), Fraction(31, 32))
        eps = rand_fraction(rng, 64, Fraction(1, 64), 2)
        if alpha <= 0 or beta <= 0 or eps <= 0 or not (0 < zeta < 1):
            continue
        f = bump(alpha, beta, zeta)
        got = oscillation(f, eps).integral()
        limit = 8 * alpha * eps
        rep.cases += 1
        rep.checks += 1
        if got > limit:
            rep.violations.append(
                f"alpha={alpha} beta={beta} zeta={zeta} eps={eps}: {got} > {limit}")
    return rep


def sweep_lattice(seed: int, count: int = 100, samples: int = 50) -> SweepReport:
    """sup/inf evaluate to pointwise max/min at random sample points."""
    from .polygon import lattice_inf, lattice_sup
    rng = Random(seed)
    rep = SweepReport("lattice sup/inf pointwise exact")
    for _ in range(count):
        f = rand_polygon(rng, max_points=8)
        g = rand_polygon(rng, max_points=8)
        fs = lattice_sup(f, g)
        fi = lattice_inf(f, g)
        for _ in range(samples):
            x = rand_fraction(rng, 64, 0, 1)
            rep.checks += 2
            if fs(x) != max(f(x), g(x)):
                rep.violations.append(f"sup at {x}")
            if fi(x) != min(f(x), g(x)):
                rep.violations.append(f"inf at {x}")
        rep.cases += 1
    return rep


def sweep_integral_linearity(seed: int, count: int = 100) -> SweepReport:
    """integral(a*f + b*g) = a*integral(f) + b*integral(g), exactly."""
    from .polygon import affine_combine
    rng = Random(seed)
    rep = SweepReport("integral linear under affine combinations")
    for _ in range(count):
        f = rand_polygon(rng, max_points=8)
        g = rand_polygon(rng, max_points=8)
        a = rand_fraction(rng, 8, -3, 3)
        b = rand_fraction(rng, 8, -3, 3)
        rep.cases += 1
        rep.checks += 1
        if affine_combine(f, g, a, b).integral() != a * f.integral() + b * g.integral():
            rep.violations.append(f"a={a} b={b}")
    return rep


def sweep_omega_properties(seed: int, count: int = 60) -> SweepReport:
    """omega >= 0; monotone in eps; scales with |c|; subadditive integrals."""
    rng = Random(seed)
    rep = SweepReport("oscillation transform properties")
    for _ in range(count):
        f = rand_polygon(rng, max_points=8)
        g = rand_polygon(rng, max_points=6)
        e1 = rand_fraction(rng, 16, Fraction(1, 16), Fraction(1, 2))
        e2 = e1 + rand_fraction(rng, 16, Fraction(1, 16), Fraction(1, 2))
        c = rand_fraction(rng, 8, -3, 3)
        om1 = oscillation(f, e1)
        om2 = oscillation(f, e2)
        rep.cases += 1
        for _, q in om1.points:
            rep.checks += 1
            if q < 0:
                rep.violations.append(f"omega negative: {q}")
        for x in sorted(set(om1.breakpoints()) | set(om2.breakpoints())):
            rep.checks += 1
            if om1(x) > om2(x):
                rep.violations.append(f"omega not monotone in eps at {x}")
        if c != 0:
            rep.checks += 1
            if oscillation(c * f, e1) != abs(c) * om1:
                rep.violations.append(f"omega scaling fails for c={c}")
        rep.checks += 1
        if oscillation(f + g, e1).integral() > om1.integral() + oscillation(g, e1).integral():
            rep.violations.append("omega subadditivity fails")
    return rep
