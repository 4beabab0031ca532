"""Refute a claimed Darboux modulus program with an exact witness certificate.

A modulus claim is a scheme that allegedly turns every natural e into a
candidate list whose (delta, g) satisfy: whenever sup(g(x), g(y)) < 1 and
|x - y| < delta, the constructed function varies by less than 2^-(e+1).

The refuter registers the scheme (small index e), enumerates until the
scheme's self-application is enrolled as entry m, builds diagonal rows
through m, and evaluates the partial sum at zeta_m and zeta_m + beta_m:
both points satisfy the claim's premises exactly, yet the values differ
by exactly 2^-mu(m) >= 2^-(mu(m)+1).  Every comparison is exact and is
recorded in the certificate with both sides.

A claim machine that never halts on its own index exhausts the budget
(reported as an operational refutation); one that halts with an invalid
list is reported as a distinct "invalid output" refutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covering import HSequence
from .diagonal import DiagonalState, extend_diagonal, partial_sum
from .enumerator import EnumerationState
from .errors import ParseError, RdgapError, VerificationError
from .machine import DEFAULT_MAX_FUEL, DEFAULT_MAX_WORD, Numbering, Scheme
from .numerals import pow2, rat_from_str, rat_to_str
from .polygon import PolygonalFunction, polygon_from_json, polygon_to_json


@dataclass(frozen=True)
class ModulusClaim:
    scheme: Scheme


@dataclass(frozen=True)
class Check:
    """One named exact comparison; both sides are recorded."""

    name: str
    op: str                  # "lt" | "eq" | "ge"
    lhs: Fraction
    rhs: Fraction

    def holds(self) -> bool:
        if self.op == "lt":
            return self.lhs < self.rhs
        if self.op == "eq":
            return self.lhs == self.rhs
        if self.op == "ge":
            return self.lhs >= self.rhs
        raise ParseError(f"unknown comparison op {self.op!r}")

    def to_json(self) -> dict:
        return {"name": self.name, "op": self.op,
                "lhs": rat_to_str(self.lhs), "rhs": rat_to_str(self.rhs)}


def check_from_json(obj: dict) -> Check:
    try:
        return Check(obj["name"], obj["op"],
                     rat_from_str(obj["lhs"]), rat_from_str(obj["rhs"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad check: {obj!r}") from exc


@dataclass(frozen=True)
class Certificate:
    numbering_version: str
    registry_digest: str
    m: int
    mu_m: int
    delta_m: Fraction
    g_m: PolygonalFunction
    zeta: Fraction
    beta: Fraction
    value_at_zeta: Fraction
    value_at_zeta_plus_beta: Fraction
    required_bound: Fraction
    checks: tuple[Check, ...]

    def to_json(self) -> dict:
        return {
            "numbering_version": self.numbering_version,
            "registry_digest": self.registry_digest,
            "m": self.m,
            "mu_m": self.mu_m,
            "delta_m": rat_to_str(self.delta_m),
            "g_m": polygon_to_json(self.g_m),
            "zeta": rat_to_str(self.zeta),
            "beta": rat_to_str(self.beta),
            "value_at_zeta": rat_to_str(self.value_at_zeta),
            "value_at_zeta_plus_beta": rat_to_str(self.value_at_zeta_plus_beta),
            "required_bound": rat_to_str(self.required_bound),
            "checks": [c.to_json() for c in self.checks],
        }


def certificate_from_json(obj: dict) -> Certificate:
    try:
        return Certificate(
            numbering_version=obj["numbering_version"],
            registry_digest=obj["registry_digest"],
            m=int(obj["m"]),
            mu_m=int(obj["mu_m"]),
            delta_m=rat_from_str(obj["delta_m"]),
            g_m=polygon_from_json(obj["g_m"]),
            zeta=rat_from_str(obj["zeta"]),
            beta=rat_from_str(obj["beta"]),
            value_at_zeta=rat_from_str(obj["value_at_zeta"]),
            value_at_zeta_plus_beta=rat_from_str(obj["value_at_zeta_plus_beta"]),
            required_bound=rat_from_str(obj["required_bound"]),
            checks=tuple(check_from_json(c) for c in obj["checks"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad certificate JSON: {exc}") from exc


@dataclass(frozen=True)
class Budgets:
    enumeration_stages: int = 2048
    coverage_stages: int = 2048
    chunk: int = 64
    accelerate: bool = True
    max_fuel: int = DEFAULT_MAX_FUEL
    max_word: int = DEFAULT_MAX_WORD


@dataclass
class RefutationOutcome:
    kind: str                       # "certificate" | "invalid_output" | "budget_exhausted"
    certificate: Certificate | None = None
    state: DiagonalState | None = None
    phase: str = ""
    detail: str = ""

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.phase:
            out["phase"] = self.phase
        if self.detail:
            out["detail"] = self.detail
        return out


def _build_checks(cert_fields: dict) -> tuple[Check, ...]:
    g: PolygonalFunction = cert_fields["g_m"]
    zeta = cert_fields["zeta"]
    beta = cert_fields["beta"]
    gap = abs(cert_fields["value_at_zeta"] - cert_fields["value_at_zeta_plus_beta"])
    return (
        Check("g_m_below_1_at_zeta", "lt", g(zeta), Fraction(1)),
        Check("g_m_below_1_at_zeta_plus_beta", "lt", g(zeta + beta), Fraction(1)),
        Check("beta_below_delta_m", "lt", beta, cert_fields["delta_m"]),
        Check("gap_equals_two_to_minus_mu", "eq", gap, pow2(-cert_fields["mu_m"])),
        Check("gap_at_least_required_bound", "ge", gap, cert_fields["required_bound"]),
    )


def refute(claim: ModulusClaim, base_numbering: Numbering = Numbering(),
           budgets: Budgets = Budgets()) -> RefutationOutcome:
    """Run the full diagonal pipeline against one claim scheme."""
    registry = base_numbering.registry
    if claim.scheme not in registry:
        registry = registry + (claim.scheme,)
    numbering = Numbering(registry)
    e = numbering.scheme_to_index(claim.scheme)

    enum = EnumerationState(numbering, max_fuel=budgets.max_fuel,
                            max_word=budgets.max_word)
    hseq = HSequence(numbering, max_fuel=budgets.max_fuel, max_word=budgets.max_word)
    state = DiagonalState(enum, hseq, accelerate=budgets.accelerate)

    # phase 1: enumerate until the claim's self-application is enrolled
    while enum.entry_for_index(e) is None:
        if e in enum.rejections:
            rej = enum.rejections[e]
            return RefutationOutcome(
                "invalid_output", state=state, phase="enumeration",
                detail=f"claim machine halted but does not produce a valid list "
                       f"({rej.reason}: {rej.detail})")
        if enum.stages >= budgets.enumeration_stages:
            return RefutationOutcome(
                "budget_exhausted", state=state, phase="enumeration",
                detail=f"claim machine not enrolled within {enum.stages} stages; "
                       f"operationally it produces no valid list at this budget")
        enum.extend(min(budgets.enumeration_stages, enum.stages + budgets.chunk))
    entry = enum.entry_for_index(e)
    m = entry.n

    # phase 2: diagonal rows through m
    while len(state.rows) <= m:
        if not extend_diagonal(state, budgets.coverage_stages):
            return RefutationOutcome(
                "budget_exhausted", state=state, phase="coverage",
                detail=f"coverage stage budget {budgets.coverage_stages} exhausted "
                       f"at row {len(state.rows)}")

    # phase 3: exact witness evaluation
    row = state.rows[m]
    F = partial_sum(state, m)
    fields = {
        "numbering_version": numbering.version,
        "registry_digest": numbering.registry_digest,
        "m": m,
        "mu_m": row.mu,
        "delta_m": row.delta,
        "g_m": row.g,
        "zeta": row.zeta,
        "beta": row.beta,
        "value_at_zeta": F(row.zeta),
        "value_at_zeta_plus_beta": F(row.zeta + row.beta),
        "required_bound": pow2(-(row.mu + 1)),
    }
    cert = Certificate(checks=_build_checks(fields), **fields)
    for check in cert.checks:
        if not check.holds():
            raise VerificationError(
                f"certificate check {check.name} fails: {check.lhs} {check.op} {check.rhs}")
    return RefutationOutcome("certificate", certificate=cert, state=state)


def certificate_problems(cert: Certificate, state: DiagonalState) -> list[str]:
    """Recompute every field from the state and re-verify every check."""
    problems: list[str] = []
    numbering = state.enumeration.numbering
    if cert.numbering_version != numbering.version:
        problems.append(f"numbering_version mismatch: {cert.numbering_version!r} "
                        f"vs {numbering.version!r}")
    if cert.registry_digest != numbering.registry_digest:
        problems.append("registry_digest mismatch")
    if cert.m >= len(state.rows):
        problems.append(f"row index {cert.m} out of range ({len(state.rows)} rows)")
        return problems
    row = state.rows[cert.m]
    F = partial_sum(state, cert.m)
    expected = {
        "mu_m": row.mu,
        "delta_m": row.delta,
        "g_m": row.g,
        "zeta": row.zeta,
        "beta": row.beta,
        "value_at_zeta": F(row.zeta),
        "value_at_zeta_plus_beta": F(row.zeta + row.beta),
        "required_bound": pow2(-(row.mu + 1)),
    }
    for name, want in expected.items():
        got = getattr(cert, name)
        if got != want:
            problems.append(f"{name} mismatch: certificate has {got}, state gives {want}")
    try:
        recomputed = _build_checks({
            "g_m": cert.g_m, "zeta": cert.zeta, "beta": cert.beta,
            "delta_m": cert.delta_m, "mu_m": cert.mu_m,
            "value_at_zeta": cert.value_at_zeta,
            "value_at_zeta_plus_beta": cert.value_at_zeta_plus_beta,
            "required_bound": cert.required_bound,
        })
    except RdgapError as exc:
        problems.append(f"checks cannot be recomputed from certificate fields: {exc}")
        return problems
    if tuple(c.name for c in cert.checks) != tuple(c.name for c in recomputed):
        problems.append("check list does not match the required comparisons")
    for have, want in zip(cert.checks, recomputed):
        if (have.lhs, have.rhs, have.op) != (want.lhs, want.rhs, want.op):
            problems.append(f"check {want.name} sides mismatch")
        if not want.holds():
            problems.append(f"check {want.name} fails: {want.lhs} !{want.op} {want.rhs}")
    return problems


def check_certificate(cert: Certificate, state: DiagonalState) -> bool:
    """True iff every recomputed field and every exact check passes."""
    return not certificate_problems(cert, state)
