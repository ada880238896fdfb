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

import numpy as np

from weightedl1.errors import UsageError
from weightedl1.groups.balls import BallTable
from weightedl1.groups.descriptor import GroupDescriptor
from weightedl1.littlewood import BoundResult
from weightedl1.logger import logger
from weightedl1.weights import WeightedElement, WeightSpec, convolve, weighted_norm

DEFAULT_GRID_PER_DIM = 512
DEFAULT_INFLATION = 1.05
MAX_SUP_NORM_VARIABLES = 4
MAX_GRID_POINTS = 4_194_304


@dataclasses.dataclass(frozen=True)
class VNConstants:
    """(δ, L) for the multi-variable von Neumann inequality, δ = 1/((1 + ‖m‖_ε) e), L = 1."""

    delta: float
    L: float
    m_eps: float
    source: BoundResult | None = None

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "L": self.L,
            "m_eps": self.m_eps,
            "kg": None if self.source is None else self.source.kg,
            "rigorous": None if self.source is None else self.source.rigorous,
        }


def delta_from_bound(m_eps: float, source: BoundResult | None = None) -> VNConstants:
    if not m_eps >= 0:
        raise UsageError("‖m‖_ε bound must be nonnegative.")
    return VNConstants(1 / ((1 + m_eps) * math.e), 1.0, m_eps, source)


@dataclasses.dataclass(frozen=True)
class PolySpec:
    """Polynomial in n variables without constant term, as (exponent vector, coefficient) terms."""

    n_vars: int
    terms: tuple[tuple[tuple[int, ...], complex], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise UsageError("Polynomial needs at least one variable.")
        for exponents, _ in self.terms:
            if len(exponents) != self.n_vars:
                raise UsageError(
                    f"Exponent vector {exponents} does not have {self.n_vars} entries."
                )
            if any(type(e) is not int or e < 0 for e in exponents):
                raise UsageError("Exponents must be nonnegative integers.")
            if not any(exponents):
                raise UsageError("Polynomial must not have a constant term.")
        if not any(coefficient != 0 for _, coefficient in self.terms):
            raise UsageError("Polynomial must not be zero.")

    @property
    def degree(self) -> int:
        return max(sum(exponents) for exponents, _ in self.terms)

    def __add__(self, other: PolySpec) -> PolySpec:
        if other.n_vars != self.n_vars:
            raise UsageError("Polynomials have different numbers of variables.")
        return PolySpec(self.n_vars, self.terms + other.terms)

    @classmethod
    def random(
        cls, rng: np.random.Generator, n_vars: int, max_degree: int, max_terms: int = 3
    ) -> PolySpec:
        terms = []
        for _ in range(int(rng.integers(1, max_terms + 1))):
            degree = int(rng.integers(1, max_degree + 1))
            exponents = [0] * n_vars
            for variable in rng.integers(0, n_vars, size=degree):
                exponents[variable] += 1
            coefficient = complex(rng.normal(), rng.normal())
            terms.append((tuple(exponents), coefficient))
        return cls(n_vars, tuple(terms))


def poly_eval_algebra(p: PolySpec, elems: list[WeightedElement]) -> WeightedElement:
    """p(a_1, ..., a_n) in ℓ¹(G, ω), monomials by convolution powers in ascending variable order.

    Raises:
        UsageError: G is not commutative, elements live in different algebras, or wrong arity.
    """
    if len(elems) != p.n_vars:
        raise UsageError(f"Polynomial in {p.n_vars} variables got {len(elems)} elements.")
    first = elems[0]
    if not first.group.is_commutative:
        raise UsageError(
            f"Polynomial evaluation needs a commutative group, {first.group.name} is not."
        )
    for a in elems[1:]:
        first._require_same_context(a)

    powers: dict[tuple[int, int], WeightedElement] = dict()

    def power(i: int, e: int) -> WeightedElement:
        if (i, e) not in powers:
            powers[(i, e)] = elems[i] if e == 1 else convolve(power(i, e - 1), elems[i])
        return powers[(i, e)]

    result = WeightedElement.zero(first.group, first.weight)
    for exponents, coefficient in p.terms:
        monomial = None
        for i, e in enumerate(exponents):
            if e:
                monomial = power(i, e) if monomial is None else convolve(monomial, power(i, e))
        result = result + monomial.scale(coefficient)
    return result


@dataclasses.dataclass(frozen=True)
class SupNormEstimate:
    estimate: float
    inflation: float
    grid_per_dim: int
    coarse: bool

    @property
    def inflated(self) -> float:
        return self.estimate * self.inflation


def poly_sup_norm(
    p: PolySpec,
    grid_per_dim: int = DEFAULT_GRID_PER_DIM,
    inflation: float = DEFAULT_INFLATION,
) -> SupNormEstimate:
    """max |p| over an equispaced grid of the torus T^n, which carries the sup over the polydisc.

    The grid shrinks per dimension to stay below MAX_GRID_POINTS.

    Raises:
        UsageError: More than MAX_SUP_NORM_VARIABLES variables.
    """
    if p.n_vars > MAX_SUP_NORM_VARIABLES:
        raise UsageError(
            f"Sup norm grid supports at most {MAX_SUP_NORM_VARIABLES} variables, got {p.n_vars}."
        )
    points = min(grid_per_dim, int(MAX_GRID_POINTS ** (1 / p.n_vars)))
    circle = np.exp(2j * np.pi * np.arange(points) / points)
    axes = [
        circle.reshape([-1 if i == j else 1 for j in range(p.n_vars)])
        for i in range(p.n_vars)
    ]
    values = np.zeros((points,) * p.n_vars, dtype=complex)
    for exponents, coefficient in p.terms:
        monomial = np.asarray(coefficient, dtype=complex)
        for axis, e in zip(axes, exponents):
            if e:
                monomial = monomial * axis**e
        values = values + monomial
    coarse = points < 4 * p.degree
    if coarse:
        logger.warning(
            "Sup norm grid of %d points per variable is coarse for degree %d",
            points,
            p.degree,
        )
    return SupNormEstimate(float(np.abs(values).max()), inflation, points, coarse)


@dataclasses.dataclass(frozen=True)
class VNReport:
    trials: int
    passes: int
    worst_margin: float | None
    delta: float
    L: float
    kg: float | None
    seed: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def random_element(
    rng: np.random.Generator,
    group: GroupDescriptor,
    weight: WeightSpec,
    support_ball: list,
    norm: float,
    table: BallTable | None = None,
    max_support: int = 5,
) -> WeightedElement:
    """Complex Gaussian coefficients on a random subset of `support_ball`, rescaled to weighted norm `norm`."""
    size = int(rng.integers(1, min(len(support_ball), max_support) + 1))
    support = rng.choice(len(support_ball), size=size, replace=False)
    f = WeightedElement.from_dict(
        group,
        weight,
        {support_ball[i]: complex(rng.normal(), rng.normal()) for i in sorted(support)},
    )
    return f.scale(norm / weighted_norm(f, table))


def vn_stress_test(
    constants: VNConstants,
    group: GroupDescriptor,
    weight: WeightSpec,
    table: BallTable,
    trials: int,
    max_vars: int,
    max_degree: int,
    support_size: int,
    seed: int,
    grid_per_dim: int = DEFAULT_GRID_PER_DIM,
    inflation: float = DEFAULT_INFLATION,
) -> VNReport:
    """Check ‖p(a_1, ..., a_n)‖ <= L ‖p‖_∞ for random ‖a_i‖ = δ and random p.

    Trial t draws from numpy's generator seeded with (seed, t). A failure beyond the sup-norm
    inflation points at an implementation error.

    Args:
        constants (VNConstants): δ and L.
        group (GroupDescriptor): Commutative group.
        weight (WeightSpec): Weight.
        table (BallTable): Ball table supplying the support ball.
        trials (int): Number of trials.
        max_vars (int): At most MAX_SUP_NORM_VARIABLES.
        max_degree (int): Maximum monomial degree.
        support_size (int): Radius of the ball supports are drawn from.
        seed (int): Base seed.
        grid_per_dim (int, optional): Sup-norm grid, shrunk by poly_sup_norm for many variables. Defaults to DEFAULT_GRID_PER_DIM.
        inflation (float, optional): Sup-norm safety factor. Defaults to DEFAULT_INFLATION.

    Returns:
        VNReport: Pass count and the smallest relative margin 1 - lhs/rhs.
    """
    if not group.is_commutative:
        raise UsageError(f"Stress test needs a commutative group, {group.name} is not.")
    if not 1 <= max_vars <= MAX_SUP_NORM_VARIABLES or max_degree < 1:
        raise UsageError(
            f"Stress test needs 1 <= max_vars <= {MAX_SUP_NORM_VARIABLES} and max_degree >= 1."
        )
    support_ball = table.ball(support_size)
    passes = 0
    worst_margin = None
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        n_vars = int(rng.integers(1, max_vars + 1))
        p = PolySpec.random(rng, n_vars, max_degree)
        elems = [
            random_element(rng, group, weight, support_ball, constants.delta, table)
            for _ in range(n_vars)
        ]
        lhs = weighted_norm(poly_eval_algebra(p, elems), table)
        rhs = constants.L * poly_sup_norm(p, grid_per_dim, inflation).inflated
        margin = 1 - lhs / rhs
        if lhs <= rhs:
            passes += 1
        else:
            logger.warning("Von Neumann trial %d fails: %g > %g", trial, lhs, rhs)
        worst_margin = margin if worst_margin is None else min(worst_margin, margin)
    report = VNReport(
        trials=trials,
        passes=passes,
        worst_margin=worst_margin,
        delta=constants.delta,
        L=constants.L,
        kg=None if constants.source is None else constants.source.kg,
        seed=seed,
    )
    logger.info("Von Neumann stress test: %s", report)
    return report
