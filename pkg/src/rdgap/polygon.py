"""Exact algebra of polygonal functions on [0,1].

A polygonal function is continuous and piecewise linear with rational
breakpoints 0 = p_0 < ... < p_m = 1 and rational values q_k.  Everything
here is exact: evaluation, the trapezoid integral, pointwise sup/inf
(with crossing points inserted exactly), affine combinations, the sliding
window oscillation transform, level-set radii, and Riemann sums over
tagged partitions.  No floating point is used anywhere.

Functions are kept in canonical form (no interior breakpoint collinear
with its neighbors), so equality of functions is equality of point lists.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConstructionError, DomainError
from .numerals import ONE, ZERO

Point = tuple[Fraction, Fraction]


def _canonical(points: Sequence[Point]) -> tuple[Point, ...]:
    """Drop interior points collinear with their neighbors."""
    out: list[Point] = [points[0]]
    for pt in points[1:]:
        while len(out) >= 2:
            (x1, y1), (x2, y2) = out[-2], out[-1]
            x3, y3 = pt
            if (y2 - y1) * (x3 - x2) == (y3 - y2) * (x2 - x1):
                out.pop()
            else:
                break
        out.append(pt)
    return tuple(out)


class PolygonalFunction:
    """Piecewise-linear function on [0,1] with exact rational data.

    The constructor validates the breakpoint invariants and canonicalizes;
    two functions are equal iff their canonical point lists are equal.
    """

    __slots__ = ("points", "_xs")

    def __init__(self, points: Iterable[tuple]):
        pts = [(Fraction(p), Fraction(q)) for p, q in points]
        if len(pts) < 2:
            raise ConstructionError(f"need at least 2 points, got {len(pts)}")
        if pts[0][0] != 0:
            raise ConstructionError(f"first breakpoint must be 0, got {pts[0][0]}")
        if pts[-1][0] != 1:
            raise ConstructionError(f"last breakpoint must be 1, got {pts[-1][0]}")
        for (x1, _), (x2, _) in zip(pts, pts[1:]):
            if x1 >= x2:
                raise ConstructionError(f"breakpoints not strictly increasing at {x1}")
        self.points = _canonical(pts)
        self._xs = [p for p, _ in self.points]

    @classmethod
    def constant(cls, c) -> "PolygonalFunction":
        c = Fraction(c)
        return cls([(ZERO, c), (ONE, c)])

    def __call__(self, x) -> Fraction:
        """Exact value at x in [0,1]; at a breakpoint this is its q_k."""
        x = Fraction(x)
        if x < 0 or x > 1:
            raise DomainError(f"x = {x} outside [0,1]")
        # rightmost segment whose left endpoint is <= x
        k = bisect_right(self._xs, x)
        if k == len(self._xs):
            return self.points[-1][1]
        x2, q2 = self.points[k]
        x1, q1 = self.points[k - 1]
        if x == x1:
            return q1
        return (q2 * (x - x1) + q1 * (x2 - x)) / (x2 - x1)

    def integral(self) -> Fraction:
        """Exact trapezoid-sum integral over [0,1]."""
        total = ZERO
        for (x1, q1), (x2, q2) in zip(self.points, self.points[1:]):
            total += (q1 + q2) * (x2 - x1) / 2
        return total

    def breakpoints(self) -> list[Fraction]:
        return list(self._xs)

    def min_value(self) -> Fraction:
        return min(q for _, q in self.points)

    def max_value(self) -> Fraction:
        return max(q for _, q in self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolygonalFunction):
            return NotImplemented
        return self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __add__(self, other: "PolygonalFunction") -> "PolygonalFunction":
        return affine_combine(self, other, 1, 1)

    def __sub__(self, other: "PolygonalFunction") -> "PolygonalFunction":
        return affine_combine(self, other, 1, -1)

    def __mul__(self, c) -> "PolygonalFunction":
        c = Fraction(c)
        return PolygonalFunction([(p, c * q) for p, q in self.points])

    __rmul__ = __mul__

    def __repr__(self) -> str:
        pts = ", ".join(f"({p},{q})" for p, q in self.points)
        return f"PolygonalFunction([{pts}])"


POLY_ZERO = PolygonalFunction.constant(0)


def polygon_new(points: Iterable[tuple]) -> PolygonalFunction:
    """Validate + canonicalize a breakpoint list into a function."""
    return PolygonalFunction(points)


def _eval_points(pts: Sequence[Point], xs: Sequence[Fraction], x: Fraction) -> Fraction:
    """Evaluate the piecewise-linear interpolant of pts (domain = [xs[0], xs[-1]])."""
    k = bisect_right(xs, x)
    if k == len(xs):
        return pts[-1][1]
    if k == 0:
        raise DomainError(f"x = {x} left of domain start {xs[0]}")
    x2, q2 = pts[k]
    x1, q1 = pts[k - 1]
    if x == x1:
        return q1
    return (q2 * (x - x1) + q1 * (x2 - x)) / (x2 - x1)


def _lattice_points(a: Sequence[Point], b: Sequence[Point], take_max: bool) -> list[Point]:
    """Pointwise max/min of two piecewise-linear point lists on a shared domain.

    Breakpoints of the result are the union of both breakpoint sets plus
    the exact crossing point inside any segment where the difference
    changes sign.
    """
    axs = [p for p, _ in a]
    bxs = [p for p, _ in b]
    assert axs[0] == bxs[0] and axs[-1] == bxs[-1], "domains must agree"
    xs = sorted(set(axs) | set(bxs))
    pick = max if take_max else min
    va = [_eval_points(a, axs, x) for x in xs]
    vb = [_eval_points(b, bxs, x) for x in xs]
    out: list[Point] = []
    for i, x in enumerate(xs):
        out.append((x, pick(va[i], vb[i])))
        if i + 1 == len(xs):
            break
        d1 = va[i] - vb[i]
        d2 = va[i + 1] - vb[i + 1]
        if (d1 < 0 < d2) or (d2 < 0 < d1):
            t = d1 / (d1 - d2)  # in (0,1)
            xc = xs[i] + (xs[i + 1] - xs[i]) * t
            yc = va[i] + (va[i + 1] - va[i]) * t
            out.append((xc, yc))
    return out


def lattice_sup(f: PolygonalFunction, g: PolygonalFunction) -> PolygonalFunction:
    """Pointwise maximum, exact: eval(sup(f,g), x) = max(f(x), g(x)) for all x."""
    return PolygonalFunction(_lattice_points(f.points, g.points, take_max=True))


def lattice_inf(f: PolygonalFunction, g: PolygonalFunction) -> PolygonalFunction:
    """Pointwise minimum."""
    return PolygonalFunction(_lattice_points(f.points, g.points, take_max=False))


def affine_combine(f: PolygonalFunction, g: PolygonalFunction, a, b) -> PolygonalFunction:
    """a*f + b*g on the merged breakpoint set, canonical."""
    a = Fraction(a)
    b = Fraction(b)
    xs = sorted(set(f._xs) | set(g._xs))
    return PolygonalFunction([(x, a * f(x) + b * g(x)) for x in xs])


def bump(alpha, beta, zeta) -> PolygonalFunction:
    """Triangular bump of height alpha at zeta with half-width beta.

    The graph of alpha * max(0, 1 - |x-zeta|/beta) restricted to [0,1];
    feet outside the unit interval are clamped away.
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    zeta = Fraction(zeta)
    if alpha <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if beta <= 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    if not (0 < zeta < 1):
        raise DomainError(f"zeta must be inside (0,1), got {zeta}")

    def val(x: Fraction) -> Fraction:
        return alpha * max(ZERO, 1 - abs(x - zeta) / beta)

    xs = {ZERO, ONE, zeta}
    for foot in (zeta - beta, zeta + beta):
        if 0 < foot < 1:
            xs.add(foot)
    return PolygonalFunction([(x, val(x)) for x in sorted(xs)])


def trapezoid_phi(a, b) -> PolygonalFunction:
    """Plateau-1 trapezoid over (a,b), restricted to [0,1].

    The graph of min(1, max(0, 2 - |2x-b-a|/(b-a))): value 1 on [a,b],
    linear ramps hitting 0 at a-(b-a)/2 and b+(b-a)/2.  The interval may
    extend beyond [0,1]; the function is simply restricted.
    """
    a = Fraction(a)
    b = Fraction(b)
    if a >= b:
        raise ConstructionError(f"need a < b, got a={a}, b={b}")
    half = (b - a) / 2

    def val(x: Fraction) -> Fraction:
        return min(ONE, max(ZERO, 2 - abs(2 * x - b - a) / (b - a)))

    xs = {ZERO, ONE}
    for knot in (a - half, a, b, b + half):
        if 0 < knot < 1:
            xs.add(knot)
    return PolygonalFunction([(x, val(x)) for x in sorted(xs)])


# ---------------------------------------------------------------------------
# Oscillation transform
# ---------------------------------------------------------------------------

def _envelope(lines: list[tuple[Fraction, Fraction]], c1: Fraction, c2: Fraction,
              take_max: bool) -> list[Point]:
    """Upper/lower envelope of affine functions on [c1,c2].

    Each line is given by its values at c1 and c2.  Returns a canonical
    point list spanning [c1, c2].
    """
    env: list[Point] = [(c1, lines[0][0]), (c2, lines[0][1])]
    for v1, v2 in lines[1:]:
        env = _lattice_points(env, [(c1, v1), (c2, v2)], take_max)
        env = list(_canonical(env))
    return env


def oscillation(f: PolygonalFunction, eps) -> PolygonalFunction:
    """Sliding-window oscillation: x -> max - min of f over [x-eps, x+eps] n [0,1].

    Exact construction.  Candidate cell boundaries are {0,1}, the
    breakpoints p_k, and the clamped p_k +- eps; within each cell the
    window max (resp. min) is the upper (resp. lower) envelope of the two
    window-endpoint traces x -> f(max(x-eps,0)), x -> f(min(x+eps,1)) and
    the constants q_k of breakpoints inside the window.  Envelope
    crossings are inserted exactly; the result is canonical and
    continuous by construction.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be > 0, got {eps}")
    cuts = {ZERO, ONE}
    for p in f._xs:
        cuts.add(p)
        for shifted in (p - eps, p + eps):
            if 0 < shifted < 1:
                cuts.add(shifted)
    xs = sorted(cuts)

    out: list[Point] = []
    for c1, c2 in zip(xs, xs[1:]):
        lo1, lo2 = max(c1 - eps, ZERO), max(c2 - eps, ZERO)
        hi1, hi2 = min(c1 + eps, ONE), min(c2 + eps, ONE)
        lines = [(f(lo1), f(lo2)), (f(hi1), f(hi2))]
        mid = (c1 + c2) / 2
        wlo, whi = max(mid - eps, ZERO), min(mid + eps, ONE)
        for p, q in f.points:
            if wlo <= p <= whi:
                lines.append((q, q))
        upper = _envelope(lines, c1, c2, take_max=True)
        lower = _envelope(lines, c1, c2, take_max=False)
        uxs = [p for p, _ in upper]
        lxs = [p for p, _ in lower]
        for x in sorted(set(uxs) | set(lxs)):
            y = _eval_points(upper, uxs, x) - _eval_points(lower, lxs, x)
            if out and out[-1][0] == x:
                assert out[-1][1] == y, "cell junction mismatch"
            else:
                out.append((x, y))
    return PolygonalFunction(out)


def oscillation_oracle_at(f: PolygonalFunction, eps, x) -> Fraction:
    """Independent single-point oscillation oracle.

    A piecewise-linear function attains its extrema over a closed window
    at the window endpoints or at breakpoints inside it, so the finite
    candidate set {max(x-eps,0), min(x+eps,1)} united with the enclosed
    breakpoints is exact.
    """
    eps = Fraction(eps)
    x = Fraction(x)
    if eps <= 0:
        raise DomainError(f"eps must be > 0, got {eps}")
    if x < 0 or x > 1:
        raise DomainError(f"x = {x} outside [0,1]")
    cands = {max(x - eps, ZERO), min(x + eps, ONE)}
    for p in f._xs:
        if x - eps <= p <= x + eps:
            cands.add(p)
    values = [f(t) for t in cands]
    return max(values) - min(values)


# ---------------------------------------------------------------------------
# Level radii
# ---------------------------------------------------------------------------

def _first_violation_right(f: PolygonalFunction, x0: Fraction, c: Fraction) -> Fraction | None:
    """Least x > x0 with f(x) >= c, or None if f < c on [x0, 1]."""
    pts = list(f.points)
    k = bisect_right(f._xs, x0)
    prev = (x0, f(x0))
    for j in range(k, len(pts)):
        x2, y2 = pts[j]
        x1, y1 = prev
        if y2 >= c:
            # f crosses (or touches) level c inside (x1, x2]
            return x1 + (x2 - x1) * (c - y1) / (y2 - y1)
        prev = (x2, y2)
    return None


def _first_violation_left(f: PolygonalFunction, x0: Fraction, c: Fraction) -> Fraction | None:
    """Greatest x < x0 with f(x) >= c, or None if f < c on [0, x0]."""
    pts = list(f.points)
    k = bisect_right(f._xs, x0)
    prev = (x0, f(x0))
    for j in range(k - 1, -1, -1):
        x2, y2 = pts[j]
        if x2 == x0:
            continue
        x1, y1 = prev
        if y2 >= c:
            return x1 - (x1 - x2) * (c - y1) / (y2 - y1)
        prev = (x2, y2)
    return None


def strict_level_radius(f: PolygonalFunction, x0, c, direction: str) -> Fraction:
    """Supremum of radii rho with f < c (or > c) strictly on [x0-rho, x0+rho] n [0,1].

    direction is 'below' (requires f(x0) < c) or 'above' (f(x0) > c).
    When the inequality holds on all of [0,1] the whole-domain sentinel
    max(x0, 1-x0) is returned.  The supremum may not be attained; callers
    take a fraction of it.
    """
    x0 = Fraction(x0)
    c = Fraction(c)
    if x0 < 0 or x0 > 1:
        raise DomainError(f"x0 = {x0} outside [0,1]")
    if direction == "below":
        g, level = f, c
    elif direction == "above":
        g, level = -1 * f, -c
    else:
        raise DomainError(f"direction must be 'below' or 'above', got {direction!r}")
    if g(x0) >= level:
        raise DomainError(
            f"precondition failed: f(x0) = {f(x0)} not strictly "
            f"{'below' if direction == 'below' else 'above'} {c}")
    right = _first_violation_right(g, x0, level)
    left = _first_violation_left(g, x0, level)
    if right is None and left is None:
        return max(x0, 1 - x0)
    dists = []
    if right is not None:
        dists.append(right - x0)
    if left is not None:
        dists.append(x0 - left)
    return min(dists)


# ---------------------------------------------------------------------------
# Tagged partitions and Riemann sums
# ---------------------------------------------------------------------------

class TaggedPartition:
    """Cuts 0 = x_0 < ... < x_n = 1 with a tag t_i inside each cell."""

    __slots__ = ("cuts", "tags")

    def __init__(self, cuts: Iterable, tags: Iterable):
        self.cuts = tuple(Fraction(x) for x in cuts)
        self.tags = tuple(Fraction(t) for t in tags)
        if len(self.cuts) < 2:
            raise ConstructionError("need at least one cell")
        if self.cuts[0] != 0 or self.cuts[-1] != 1:
            raise ConstructionError("cuts must start at 0 and end at 1")
        for x1, x2 in zip(self.cuts, self.cuts[1:]):
            if x1 >= x2:
                raise ConstructionError(f"cuts not strictly increasing at {x1}")
        if len(self.tags) != len(self.cuts) - 1:
            raise ConstructionError("need exactly one tag per cell")
        for i, t in enumerate(self.tags):
            if not (self.cuts[i] <= t <= self.cuts[i + 1]):
                raise ConstructionError(f"tag {t} outside cell {i}")

    @property
    def mesh(self) -> Fraction:
        return max(x2 - x1 for x1, x2 in zip(self.cuts, self.cuts[1:]))

    @classmethod
    def uniform(cls, n: int, tag: str = "left") -> "TaggedPartition":
        """n equal cells with 'left', 'right', or 'mid' tags."""
        cuts = [Fraction(i, n) for i in range(n + 1)]
        if tag == "left":
            tags = cuts[:-1]
        elif tag == "right":
            tags = cuts[1:]
        elif tag == "mid":
            tags = [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
        else:
            raise ConstructionError(f"unknown tag rule {tag!r}")
        return cls(cuts, tags)

    def __repr__(self) -> str:
        return f"TaggedPartition({len(self.cuts) - 1} cells, mesh={self.mesh})"


def riemann_sum(f: PolygonalFunction, tau: TaggedPartition) -> Fraction:
    """Exact tagged Riemann sum: sum of f(t_i) * (x_i - x_{i-1})."""
    total = ZERO
    for i, t in enumerate(tau.tags):
        total += f(t) * (tau.cuts[i + 1] - tau.cuts[i])
    return total


# ---------------------------------------------------------------------------
# JSON / CSV interchange
# ---------------------------------------------------------------------------

def polygon_to_json(f: PolygonalFunction) -> dict:
    from .numerals import rat_to_str
    return {"points": [[rat_to_str(p), rat_to_str(q)] for p, q in f.points]}


def polygon_from_json(obj: dict) -> PolygonalFunction:
    from .errors import ParseError
    from .numerals import rat_from_str
    try:
        pts = [(rat_from_str(p), rat_from_str(q)) for p, q in obj["points"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad polygon JSON: {obj!r}") from exc
    return PolygonalFunction(pts)


def format_decimal(r: Fraction, digits: int) -> str:
    """Round-half-up decimal rendering; the only lossy boundary in the CLI."""
    if digits < 0:
        raise DomainError("digits must be >= 0")
    sign = "-" if r < 0 else ""
    scaled = abs(r) * 10**digits
    q, rem = divmod(scaled.numerator, scaled.denominator)
    if 2 * rem >= scaled.denominator:
        q += 1
    if digits == 0:
        return f"{sign}{q}"
    text = str(q).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def polygon_to_csv(f: PolygonalFunction, digits: int, refine: int = 0) -> str:
    """CSV rows 'x,f(x)' at breakpoints plus an optional uniform refinement."""
    xs = set(f._xs)
    if refine > 0:
        xs.update(Fraction(i, refine) for i in range(refine + 1))
    lines = ["x,f(x)"]
    for x in sorted(xs):
        lines.append(f"{format_decimal(x, digits)},{format_decimal(f(x), digits)}")
    return "\n".join(lines) + "\n"
