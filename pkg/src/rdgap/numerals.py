"""Exact rational arithmetic and word encodings over the six-letter alphabet.

The only number type anywhere in the core is the exact rational; it is the
stdlib ``fractions.Fraction``, which is always stored canonically reduced
with a positive denominator, so comparisons and arithmetic are exact.

Words are plain strings over the alphabet ``|-/*ab``.  The numeral
conventions (deliberately simple, chosen so that no numeral is ever the
empty word):

* a natural number n is ``n + 1`` strokes, e.g. ``0 -> "|"``, ``3 -> "||||"``;
* a rational p/q (canonical form) is ``["-"] numeral(|p|) "/" numeral(q)``,
  e.g. ``1/2 -> "||/|||"``; the decoder is liberal and accepts unreduced
  fractions, the encoder always emits canonical form;
* a list of words is a star system ``*w0*w1*...*wk*`` with nonempty,
  star-free segments.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError

Rational = Fraction

ALPHABET = "|-/*ab"
_LETTERS = frozenset(ALPHABET)

ZERO = Fraction(0)
ONE = Fraction(1)
TWO = Fraction(2)
HALF = Fraction(1, 2)


def rat(num, den=1) -> Fraction:
    """Build an exact rational; accepts ints, Fractions, and 'p/q' strings."""
    if den == 1:
        return Fraction(num)
    return Fraction(num, den)


def rat_to_str(r: Fraction) -> str:
    """Canonical 'p/q' form used in every JSON output (e.g. '-3/4', '0/1')."""
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def rat_from_str(s: str) -> Fraction:
    """Parse 'p/q' (or a bare integer 'p'); canonicalizes on the way in."""
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {s!r}") from exc


def check_word(w: str) -> str:
    """Validate that w uses only the six letters; returns w unchanged."""
    if not _LETTERS.issuperset(w):
        bad = sorted(set(w) - _LETTERS)
        raise ParseError(f"letters outside alphabet {ALPHABET!r}: {bad}")
    return w


def is_word(w: str) -> bool:
    return _LETTERS.issuperset(w)


def encode_natural(n: int) -> str:
    """n >= 0 as n+1 strokes; injective, and never the empty word."""
    if n < 0:
        raise ParseError(f"not a natural number: {n}")
    return "|" * (n + 1)


def decode_natural(w: str) -> int:
    if not w or w.strip("|"):
        raise ParseError(f"not a natural numeral: {w!r}")
    return len(w) - 1


def encode_rational(r: Fraction) -> str:
    """Canonical numeral of an exact rational."""
    r = Fraction(r)
    sign = "-" if r < 0 else ""
    return sign + encode_natural(abs(r.numerator)) + "/" + encode_natural(r.denominator)


def decode_rational(w: str) -> Fraction:
    """Liberal rational decoder: accepts unreduced fractions, canonicalizes.

    Grammar: ['-'] strokes '/' strokes, with the denominator numeral
    encoding a natural >= 1 (i.e. at least two strokes).
    """
    check_word(w)
    body = w
    sign = 1
    if body.startswith("-"):
        sign = -1
        body = body[1:]
    if body.count("/") != 1:
        raise ParseError(f"not a rational numeral (need exactly one '/'): {w!r}")
    num_part, den_part = body.split("/")
    num = decode_natural(num_part)
    den = decode_natural(den_part)
    if den == 0:
        raise ParseError(f"denominator numeral encodes zero: {w!r}")
    return Fraction(sign * num, den)


def parse_star_system(w: str) -> list[str]:
    """Split a star-delimited word into its maximal star-free segments.

    The word must begin and end with '*' and contain at least two stars;
    empty segments are rejected (every numeral is nonempty by convention).
    Segments are returned raw; decoding them is the caller's business.
    """
    check_word(w)
    if len(w) < 2 or not w.startswith("*") or not w.endswith("*"):
        raise ParseError(f"not star-delimited: {w!r}")
    segments = w[1:-1].split("*")
    for seg in segments:
        if not seg:
            raise ParseError(f"empty segment between stars: {w!r}")
    return segments


def join_star_system(segments: list[str]) -> str:
    """Inverse of parse_star_system for nonempty star-free segments."""
    for seg in segments:
        check_word(seg)
        if not seg:
            raise ParseError("empty segment")
        if "*" in seg:
            raise ParseError(f"segment contains '*': {seg!r}")
    if not segments:
        raise ParseError("star system needs at least one segment")
    return "*" + "*".join(segments) + "*"


def pow2(k: int) -> Fraction:
    """Exact 2**k for any integer k (negative k gives 1/2**-k)."""
    if k >= 0:
        return Fraction(2**k)
    return Fraction(1, 2**-k)
