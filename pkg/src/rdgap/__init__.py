"""Exact-rational construction separating Riemann and Darboux integrability.

The package builds, at finite desk scale, a piecewise-linear-by-parts
counterexample pipeline: a singular covering of [0,1] with total length
below 1/6 driven by dovetailed normal algorithms, the nondecreasing
envelope sequence it induces, an enumeration of candidate modulus
programs, a diagonal bump construction that is Riemann-integrable by
exact oscillation certificates, and a refuter that defeats any claimed
Darboux modulus program with a machine-checkable certificate.
"""

from .numerals import Rational, rat, rat_from_str, rat_to_str
from .polygon import (
    PolygonalFunction,
    TaggedPartition,
    affine_combine,
    bump,
    lattice_inf,
    lattice_sup,
    oscillation,
    oscillation_oracle_at,
    polygon_new,
    riemann_sum,
    strict_level_radius,
    trapezoid_phi,
)

__all__ = [
    "Rational",
    "rat",
    "rat_from_str",
    "rat_to_str",
    "PolygonalFunction",
    "TaggedPartition",
    "affine_combine",
    "bump",
    "lattice_inf",
    "lattice_sup",
    "oscillation",
    "oscillation_oracle_at",
    "polygon_new",
    "riemann_sum",
    "strict_level_radius",
    "trapezoid_phi",
]

__version__ = "0.1.0"
