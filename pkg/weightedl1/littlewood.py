"""
Copyright 2024 Wu Tingfeng <wutingfeng@outlook.com>

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

from __future__ import annotations

import dataclasses
import math
import typing

import numpy as np
from mpmath import iv

from weightedl1.errors import DomainError, NoBoundError, ResourceCapError, UsageError
from weightedl1.groups.balls import BallTable, word_length
from weightedl1.groups.descriptor import GroupDescriptor, SphereMajorant
from weightedl1.groups.element import multiply
from weightedl1.logger import logger
from weightedl1.weights import (
    LOG_TOLERANCE,
    MAX_LOG_FLOAT,
    WeightSpec,
    lemma_beta_floor,
    log_m_constant,
)

DEFAULT_KG = 1.40491
DEFAULT_MATRIX_CAP = 16_777_216


@dataclasses.dataclass(frozen=True)
class OmegaRestriction:
    """Ω(x, y) = ω(xy) / (ω(x) ω(y)) on ball(R) × ball(R), rows and columns in BFS order."""

    weight: WeightSpec
    radius: int
    elements: tuple
    lengths: np.ndarray
    matrix: np.ndarray


def omega_matrix(
    w: WeightSpec, table: BallTable, R: int, cap: int = DEFAULT_MATRIX_CAP
) -> OmegaRestriction:
    """Dense Ω restricted to ball(R), evaluated in log-space then exponentiated.

    Args:
        w (WeightSpec): Weight.
        table (BallTable): Ball table; product lengths come from closed forms or a ball of radius 2R.
        R (int): Restriction radius.
        cap (int, optional): Maximum number of matrix entries. Defaults to DEFAULT_MATRIX_CAP.

    Raises:
        ResourceCapError: |ball(R)|^2 exceeds cap.

    Returns:
        OmegaRestriction: Matrix and index map.
    """
    if R > table.radius:
        raise UsageError(f"Omega radius {R} exceeds ball radius {table.radius}.")
    desc = table.group
    ball = table.ball(R)
    if len(ball) ** 2 > cap:
        raise ResourceCapError(
            f"Omega matrix on ball({R}) of {desc.name} needs {len(ball) ** 2} entries, above the cap of {cap}.",
            len(ball) ** 2,
        )
    lengths = np.array([word_length(x, desc, table) for x in ball])
    if desc.kind == "zd":
        coordinates = np.array([x.normal_form for x in ball])
        product_lengths = np.abs(
            coordinates[:, None, :] + coordinates[None, :, :]
        ).max(axis=2)
    else:
        product_lengths = np.array(
            [[word_length(multiply(x, y), desc, table) for y in ball] for x in ball]
        )
    log_w = np.asarray(w.log_weight(lengths), dtype=float)
    log_omega = (
        np.asarray(w.log_weight(product_lengths), dtype=float)
        - log_w[:, None]
        - log_w[None, :]
    )
    return OmegaRestriction(w, R, tuple(ball), lengths, np.exp(log_omega))


@dataclasses.dataclass(frozen=True)
class SeriesBound:
    """Enclosure [P, P + T] of Σ_x (1 + τ(x))^-s = Σ_n |sphere(n)| (1 + n)^-s.

    P is the partial sum up to the cutoff N in outward-rounded interval arithmetic; T bounds the tail.
    """

    s: float
    cutoff: int
    partial_lower: float
    partial_upper: float
    tail: float
    rigorous: bool
    diverges: bool = False
    tail_source: str = ""

    @property
    def lower(self) -> float:
        return self.partial_lower

    @property
    def upper(self) -> float:
        return math.inf if self.diverges else self.partial_upper + self.tail

    @property
    def enclosure(self) -> tuple[float, float]:
        return (self.lower, self.upper)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "cutoff": self.cutoff,
            "partial_sum": [self.partial_lower, self.partial_upper],
            "tail": self.tail,
            "enclosure": [self.lower, self.upper],
            "rigorous": self.rigorous,
            "diverges": self.diverges,
            "tail_source": self.tail_source,
        }


def _sphere_sizes(
    group: GroupDescriptor, cutoff: int, table: BallTable | None
) -> list[int]:
    if cutoff == 0:
        return [1]
    if table is not None and table.radius >= cutoff:
        return table.sphere_sizes[: cutoff + 1]
    if group.sphere_size(0) is not None:
        return [group.sphere_size(n) for n in range(cutoff + 1)]
    raise UsageError(
        f"Length zeta of {group.name} up to {cutoff} needs a ball table of radius at least {cutoff}."
    )


def _power_tail(coefficient: float, degree: float, s: float, cutoff: int):
    # Σ_{n>N} A (1+n)^(k-s) <= A ∫_{N+1}^∞ x^(k-s) dx = A (N+1)^(k+1-s) / (s-k-1)
    exponent = iv.mpf(degree) + 1 - iv.mpf(s)
    return iv.mpf(coefficient) * iv.exp(exponent * iv.log(cutoff + 1)) / (-exponent)


def length_zeta(
    group: GroupDescriptor,
    s: float,
    cutoff: int,
    table: BallTable | None = None,
    majorant: SphereMajorant | None = None,
    allow_divergent: bool = False,
) -> SeriesBound:
    """Enclose Σ_{x∈G} (1 + τ(x))^-s.

    Z^d carries its own sphere majorant d 2^d (1+n)^(d-1), so its tail is rigorous. Other groups need an
    explicit majorant; otherwise the tail is extrapolated from the declared growth order and the
    result is flagged non-rigorous.

    Args:
        group (GroupDescriptor): Group.
        s (float): Exponent.
        cutoff (int): Partial sum radius N.
        table (BallTable | None, optional): Sphere sizes for groups without closed forms. Defaults to None.
        majorant (SphereMajorant | None, optional): Sphere-size majorant. Defaults to the group's own.
        allow_divergent (bool, optional): Return a flagged partial sum instead of raising when s does
            not exceed the growth order. Defaults to False.

    Raises:
        DomainError: Series diverges and allow_divergent is False.

    Returns:
        SeriesBound: Enclosure.
    """
    if cutoff < 0:
        raise UsageError("Zeta cutoff must be nonnegative.")
    sizes = _sphere_sizes(group, cutoff, table)
    s_iv = iv.mpf(s)
    partial = iv.mpf(0)
    for n, size in enumerate(sizes):
        partial += iv.mpf(size) * iv.exp(-s_iv * iv.log(n + 1))

    order = group.growth_order
    if order is None or s <= order:
        if not allow_divergent:
            raise DomainError(
                f"Length zeta of {group.name} diverges at s = {s}: growth order is {'exponential' if order is None else order}."
            )
        logger.warning("Length zeta of %s diverges at s = %g", group.name, s)
        return SeriesBound(
            s, cutoff, float(partial.a), float(partial.b), math.inf, False, True, "divergent"
        )

    majorant = majorant or group.sphere_majorant
    if majorant is not None and s > majorant.degree + 1:
        tail = _power_tail(majorant.coefficient, majorant.degree, s, cutoff)
        rigorous = True
        source = f"majorant {majorant.coefficient:g} (1+n)^{majorant.degree:g}"
    else:
        # Coefficient of (1+n)^(order-1) fitted to the upper half of the known spheres.
        radii = range(max(1, cutoff // 2), cutoff + 1) if cutoff else range(0, 1)
        coefficient = max(sizes[n] / (1 + n) ** (order - 1) for n in radii)
        tail = _power_tail(coefficient, order - 1, s, cutoff)
        rigorous = False
        source = f"extrapolated {coefficient:g} (1+n)^{order - 1}"
        logger.warning(
            "Length zeta tail of %s is extrapolated from growth order %d, not rigorous",
            group.name,
            order,
        )
    bound = SeriesBound(
        s, cutoff, float(partial.a), float(partial.b), float(tail.b), rigorous, False, source
    )
    logger.info("Length zeta of %s at s = %g: %s", group.name, s, bound.enclosure)
    return bound


def littlewood_constant(beta: float) -> float:
    """A_β with (a + b)^β <= A_β (a^β + b^β) for a, b >= 0."""
    return max(1.0, 2.0 ** (beta - 1))


def t2_bound_poly(beta: float, zeta: SeriesBound) -> float:
    """Upper bound A_β sqrt(Σ (1 + τ(x))^-2β) on the T² norm of Ω_β."""
    if abs(zeta.s - 2 * beta) > LOG_TOLERANCE * max(1.0, zeta.s):
        raise UsageError(f"T² bound needs zeta at s = 2 beta = {2 * beta}, got s = {zeta.s}.")
    if zeta.diverges:
        raise DomainError(f"Length zeta diverges at s = {zeta.s}; no T² bound.")
    return littlewood_constant(beta) * math.sqrt(zeta.upper)


@dataclasses.dataclass(frozen=True)
class BoundResult:
    """Upper bound on ‖m‖_ε for ℓ¹(G, ω)."""

    weight: WeightSpec
    kg: float
    beta: float
    M: float
    log_bound: float
    rigorous: bool
    zeta: SeriesBound
    beta_adjusted: bool = False

    @property
    def bound(self) -> float:
        return math.exp(self.log_bound) if self.log_bound < MAX_LOG_FLOAT else math.inf

    def to_dict(self) -> dict:
        return {
            "weight": self.weight.to_dict(),
            "kg": self.kg,
            "beta": self.beta,
            "M": self.M,
            "bound": self.bound,
            "log_bound": self.log_bound,
            "rigorous": self.rigorous,
            "beta_adjusted": self.beta_adjusted,
            "zeta": self.zeta.to_dict(),
        }


VerdictKind = typing.Literal[
    "InjectiveAlgebra",
    "NotOperatorAlgebra",
    "NotInjectiveAlgebra",
    "OutsideTheoremHypotheses",
]


@dataclasses.dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    reason: str | None = None
    bound: BoundResult | None = None
    notes: tuple[str, ...] = ()

    @classmethod
    def injective(cls, bound: BoundResult, notes: tuple[str, ...] = ()) -> Verdict:
        return cls("InjectiveAlgebra", bound=bound, notes=notes)

    @classmethod
    def not_operator_algebra(cls, reason: str, notes: tuple[str, ...] = ()) -> Verdict:
        return cls("NotOperatorAlgebra", reason=reason, notes=notes)

    @classmethod
    def outside(cls, notes: tuple[str, ...] = ()) -> Verdict:
        return cls("OutsideTheoremHypotheses", notes=notes)

    def to_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "reason": self.reason,
            "bound": None if self.bound is None else self.bound.to_dict(),
            "notes": list(self.notes),
        }


def _hypothesis_threshold(group: GroupDescriptor) -> float | None:
    """β must exceed this: d/2 when λ = 1, else (d+1)/2."""
    if group.growth_order is None:
        return None
    return group.growth_order / 2 if group.lambda_is_one else (group.growth_order + 1) / 2


def _sharpness_notes(group: GroupDescriptor, beta: float) -> tuple[str, ...]:
    if group.kind == "zd" and beta <= group.dimension / 2:
        return (
            f"ℓ¹(Z^{group.dimension}, ω_β) is known not to be injective for β <= d/2; the length zeta diverges.",
        )
    if group.kind == "heisenberg" and beta <= 0.5:
        return (
            "ℓ¹(H3, ω_β) is known not to be injective for β <= 1/2: its restriction to the centre Z fails.",
        )
    return ()


def m_eps_upper_poly(
    beta: float, kg: float, zeta: SeriesBound, group: GroupDescriptor
) -> BoundResult:
    """‖m‖_ε <= K_G A_β (Σ (1 + τ(x))^-2β)^(1/2) for ℓ¹(G, ω_β).

    Raises:
        NoBoundError: β does not exceed d/2 (λ = 1) or (d+1)/2 (λ < 1); carries an
            OutsideTheoremHypotheses verdict.
    """
    threshold = _hypothesis_threshold(group)
    if threshold is None or beta <= threshold:
        verdict = Verdict.outside(_sharpness_notes(group, beta))
        raise NoBoundError(
            f"No bound for ω_{beta:g} on {group.name}: requires polynomial growth and beta > {threshold}.",
            verdict,
        )
    t2 = t2_bound_poly(beta, zeta)
    return BoundResult(
        weight=WeightSpec.polynomial(beta),
        kg=kg,
        beta=beta,
        M=1.0,
        log_bound=math.log(kg * t2),
        rigorous=zeta.rigorous,
        zeta=zeta,
    )


def beta_selection(alpha: float, C: float, d: int, lambda_is_one: bool) -> float:
    """β = max {1, 6/(C α (1-α)), (d + 1 - δ(λ))/2} with δ(λ) = 1 iff λ = 1."""
    return max(lemma_beta_floor(alpha, C), (d + (0 if lambda_is_one else 1)) / 2)


def m_eps_upper_exp(
    alpha: float,
    C: float,
    kg: float,
    group: GroupDescriptor,
    cutoff: int = 0,
    table: BallTable | None = None,
    majorant: SphereMajorant | None = None,
) -> BoundResult:
    """‖m‖_ε <= K_G M 2^(β-1) (Σ (1 + τ(x))^-2β)^(1/2) for ℓ¹(G, σ_{α,C}), 0 < α < 1.

    β comes from beta_selection and M from the composite weight σ_{α,C}/ω_β. The bound is carried in
    log-space. If the selected β sits on the divergence boundary 2β = d, it is raised to (d+1)/2.

    Raises:
        NoBoundError: α is 0 or 1 (NotOperatorAlgebra), or G lacks polynomial growth.
    """
    weight = WeightSpec.exponential(alpha, C)
    if alpha in (0.0, 1.0):
        reason = "alpha_zero" if alpha == 0 else "alpha_one"
        raise NoBoundError(
            f"ℓ¹({group.name}, {weight}) is not Arens regular, hence not an operator algebra.",
            Verdict.not_operator_algebra(reason),
        )
    if group.growth_order is None:
        raise NoBoundError(
            f"{group.name} does not have polynomial growth.", Verdict.outside()
        )
    d = group.growth_order
    beta = beta_selection(alpha, C, d, group.lambda_is_one)
    beta_adjusted = 2 * beta <= d
    if beta_adjusted:
        beta = (d + 1) / 2
    zeta = length_zeta(group, 2 * beta, cutoff, table, majorant)
    log_m = log_m_constant(alpha, C, beta)
    log_bound = (
        math.log(kg)
        + log_m
        + (beta - 1) * math.log(2)
        + 0.5 * math.log(zeta.upper)
    )
    return BoundResult(
        weight=weight,
        kg=kg,
        beta=beta,
        M=math.exp(log_m) if log_m < MAX_LOG_FLOAT else math.inf,
        log_bound=log_bound,
        rigorous=zeta.rigorous,
        zeta=zeta,
        beta_adjusted=beta_adjusted,
    )


def exp_bound_trend(
    alphas: typing.Iterable[float],
    C: float,
    kg: float,
    group: GroupDescriptor,
    cutoff: int = 0,
    table: BallTable | None = None,
) -> list[BoundResult]:
    """m_eps_upper_exp over a grid of α; the bound blows up as α approaches 0 or 1."""
    return [m_eps_upper_exp(alpha, C, kg, group, cutoff, table) for alpha in alphas]


@dataclasses.dataclass(frozen=True)
class DecompositionReport:
    beta: float
    radius: int
    littlewood_constant: float
    entrywise_pass: bool
    reconstruction_error: float
    column_sup_f1: float
    row_sup_f2: float
    restricted_bound: float

    @property
    def passed(self) -> bool:
        return (
            self.entrywise_pass
            and self.reconstruction_error <= LOG_TOLERANCE
            and max(self.column_sup_f1, self.row_sup_f2)
            <= self.restricted_bound * (1 + LOG_TOLERANCE)
        )

    def to_dict(self) -> dict:
        return {**dataclasses.asdict(self), "pass": self.passed}


def verify_decomposition(omega: OmegaRestriction, beta: float) -> DecompositionReport:
    """Split Ω_β = f1 + f2 with f1 = Ω w1/(w1+w2), f2 = Ω w2/(w1+w2),
    w1(x, y) = A_β (1+τ(x))^-β, w2(x, y) = A_β (1+τ(y))^-β, and check

    - |f1| <= w1 and |f2| <= w2 entrywise,
    - sup_y (Σ_x |f1(x, y)|²)^(1/2) and sup_x (Σ_y |f2(x, y)|²)^(1/2) are at most
      A_β (Σ_{x∈ball(R)} (1+τ(x))^-2β)^(1/2).

    Raises:
        UsageError: Ω does not come from the polynomial weight ω_β.
    """
    if omega.weight.kind != "polynomial" or omega.weight.beta != beta:
        raise UsageError(f"Decomposition needs Ω of the polynomial weight ω_{beta:g}.")
    a_beta = littlewood_constant(beta)
    radial = a_beta * np.power(1.0 + omega.lengths, -beta)
    w1 = radial[:, None] * np.ones_like(omega.matrix)
    w2 = radial[None, :] * np.ones_like(omega.matrix)
    f1 = omega.matrix * w1 / (w1 + w2)
    f2 = omega.matrix * w2 / (w1 + w2)
    slack = 1 + LOG_TOLERANCE
    entrywise = bool(np.all(np.abs(f1) <= w1 * slack) and np.all(np.abs(f2) <= w2 * slack))
    reconstruction = float(np.max(np.abs(f1 + f2 - omega.matrix) / omega.matrix))
    report = DecompositionReport(
        beta=beta,
        radius=omega.radius,
        littlewood_constant=a_beta,
        entrywise_pass=entrywise,
        reconstruction_error=reconstruction,
        column_sup_f1=float(np.sqrt((f1**2).sum(axis=0)).max()),
        row_sup_f2=float(np.sqrt((f2**2).sum(axis=1)).max()),
        restricted_bound=math.sqrt(math.fsum(radial**2)),
    )
    logger.info("Littlewood decomposition on ball(%d), beta=%g: %s", omega.radius, beta, report)
    return report


def operator_alg_verdict(
    group: GroupDescriptor,
    w: WeightSpec,
    kg: float = DEFAULT_KG,
    cutoff: int = 0,
    table: BallTable | None = None,
    majorant: SphereMajorant | None = None,
) -> Verdict:
    """Whether ℓ¹(G, ω) is (isomorphic to) an operator algebra, as far as the available theorems decide."""
    if w.kind == "constant" or (w.kind == "polynomial" and w.beta == 0):
        return Verdict.not_operator_algebra(
            "unweighted", ("ℓ¹(G) of an infinite group is not Arens regular.",)
        )
    if w.kind == "exponential":
        try:
            return Verdict.injective(
                m_eps_upper_exp(w.alpha, w.C, kg, group, cutoff, table, majorant)
            )
        except NoBoundError as e:
            return e.verdict
    if w.kind == "composite":
        return Verdict.outside(
            ("Composite weights enter only through the constant M of σ_{α,C}.",)
        )
    if group.kind == "free2":
        return Verdict(
            "NotInjectiveAlgebra",
            reason="free_group",
            notes=("The lower bounds K_G^-1 2^(-d/2) 2^(-β) S_n^(1/2) diverge for even d > 2β.",),
        )
    threshold = _hypothesis_threshold(group)
    if w.beta <= threshold:
        return Verdict.outside(_sharpness_notes(group, w.beta))
    zeta = length_zeta(group, 2 * w.beta, cutoff, table, majorant)
    return Verdict.injective(m_eps_upper_poly(w.beta, kg, zeta, group))
