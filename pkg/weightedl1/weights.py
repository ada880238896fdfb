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
import itertools
import math
import typing
from collections import defaultdict

import immutabledict
import numpy as np
import scipy.optimize

from weightedl1.errors import DomainError, OutOfRangeError, ResourceCapError, UsageError
from weightedl1.groups.balls import BallTable, word_length
from weightedl1.groups.descriptor import GroupDescriptor
from weightedl1.groups.element import GroupElement, multiply
from weightedl1.logger import logger

WeightKind = typing.Literal["polynomial", "exponential", "composite", "constant"]

LOG_TOLERANCE = 1e-12
MAX_LOG_FLOAT = 709.0
M_SCAN_CAP = 50_000_000
M_SCAN_CHUNK = 1_000_000


@dataclasses.dataclass(frozen=True)
class WeightSpec:
    """Radial weight ω(x) = exp(log_weight(τ(x))).

    - polynomial: ω_β = (1 + τ)^β, β >= 0.
    - exponential: σ_{α,C} = exp(C τ^α), 0 <= α <= 1, C > 0. At α = 0 this is the constant e^C.
    - composite: exp(C τ^α) / (1 + τ)^β = exp(p(τ)), 0 < α < 1, C > 0, β >= 1.
    - constant: c > 0.
    """

    kind: WeightKind
    beta: float = 0.0
    alpha: float = 0.0
    C: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        for field in ("beta", "alpha", "C", "c"):
            value = getattr(self, field)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise UsageError(f"Weight parameter {field} must be a finite number.")
            object.__setattr__(self, field, float(value))
        if self.kind == "polynomial":
            if self.beta < 0:
                raise UsageError("Polynomial weight needs beta >= 0.")
        elif self.kind == "exponential":
            if not 0 <= self.alpha <= 1 or self.C <= 0:
                raise UsageError("Exponential weight needs 0 <= alpha <= 1 and C > 0.")
        elif self.kind == "composite":
            if not 0 < self.alpha < 1 or self.C <= 0 or self.beta < 1:
                raise UsageError(
                    "Composite weight needs 0 < alpha < 1, C > 0 and beta >= 1."
                )
        elif self.kind == "constant":
            if self.c <= 0:
                raise UsageError("Constant weight needs c > 0.")
        else:
            raise UsageError(f"Unknown weight kind: {self.kind}")

    @classmethod
    def polynomial(cls, beta: float) -> WeightSpec:
        return cls("polynomial", beta=beta)

    @classmethod
    def exponential(cls, alpha: float, C: float) -> WeightSpec:
        return cls("exponential", alpha=alpha, C=C)

    @classmethod
    def composite(cls, alpha: float, C: float, beta: float) -> WeightSpec:
        return cls("composite", alpha=alpha, C=C, beta=beta)

    @classmethod
    def constant(cls, c: float) -> WeightSpec:
        return cls("constant", c=c)

    def log_weight(self, tau):
        """log ω as a function of τ. Accepts scalars or arrays."""
        t = np.asarray(tau, dtype=float)
        if self.kind == "polynomial":
            value = self.beta * np.log1p(t)
        elif self.kind == "exponential":
            value = self.C * np.power(t, self.alpha)
        elif self.kind == "composite":
            value = p_func(self.alpha, self.C, self.beta, t)
        else:
            value = np.full_like(t, math.log(self.c))
        return float(value) if value.ndim == 0 else value

    def submultiplicative_constant(self) -> float:
        """M with ω(xy) <= M ω(x) ω(y)."""
        if self.kind == "composite":
            return m_constant(self.alpha, self.C, self.beta)
        if self.kind == "constant":
            return max(1.0, 1.0 / self.c)
        return 1.0

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def __str__(self) -> str:
        if self.kind == "polynomial":
            return f"omega_{self.beta:g}"
        if self.kind == "exponential":
            return f"sigma_{self.alpha:g},{self.C:g}"
        if self.kind == "composite":
            return f"sigma_{self.alpha:g},{self.C:g}/omega_{self.beta:g}"
        return f"constant_{self.c:g}"


def eval_weight(w: WeightSpec, tau: int) -> float:
    return math.exp(w.log_weight(tau))


@dataclasses.dataclass(frozen=True)
class WeightedElement:
    """Finitely supported f in ℓ¹(G, ω)."""

    group: GroupDescriptor
    weight: WeightSpec
    coefficients: immutabledict.immutabledict[GroupElement, complex]

    def __post_init__(self):
        coefficients = dict()
        for x, value in self.coefficients.items():
            self.group.validate(x)
            if value != 0:
                coefficients[x] = complex(value)
        object.__setattr__(
            self, "coefficients", immutabledict.immutabledict(coefficients)
        )

    @classmethod
    def from_dict(
        cls,
        group: GroupDescriptor,
        weight: WeightSpec,
        coefficients: typing.Mapping[GroupElement, complex],
    ) -> WeightedElement:
        return cls(group, weight, immutabledict.immutabledict(coefficients))

    @classmethod
    def delta(
        cls, x: GroupElement, group: GroupDescriptor, weight: WeightSpec
    ) -> WeightedElement:
        return cls.from_dict(group, weight, {x: 1})

    @classmethod
    def zero(cls, group: GroupDescriptor, weight: WeightSpec) -> WeightedElement:
        return cls.from_dict(group, weight, {})

    @property
    def support(self) -> list[GroupElement]:
        return sorted(self.coefficients)

    def same_context(self, other: WeightedElement) -> bool:
        return self.group == other.group and self.weight == other.weight

    def _require_same_context(self, other: WeightedElement) -> None:
        if not self.same_context(other):
            raise UsageError(
                f"Elements live in different algebras: ℓ¹({self.group.name}, {self.weight}) and ℓ¹({other.group.name}, {other.weight})."
            )

    def __add__(self, other: WeightedElement) -> WeightedElement:
        self._require_same_context(other)
        total: dict[GroupElement, complex] = defaultdict(complex, self.coefficients)
        for x, value in other.coefficients.items():
            total[x] += value
        return WeightedElement.from_dict(self.group, self.weight, total)

    def scale(self, factor: complex) -> WeightedElement:
        return WeightedElement.from_dict(
            self.group,
            self.weight,
            {x: factor * value for x, value in self.coefficients.items()},
        )

    def __mul__(self, other: WeightedElement) -> WeightedElement:
        return convolve(self, other)


def weighted_norm(f: WeightedElement, table: BallTable | None = None) -> float:
    """Σ |f(x)| ω(x) over the support of f.

    Args:
        f (WeightedElement): Element.
        table (BallTable | None, optional): Ball table for groups without closed-form lengths. Defaults to None.

    Returns:
        float: Weighted ℓ¹ norm.
    """
    return math.fsum(
        abs(value) * eval_weight(f.weight, word_length(x, f.group, table))
        for x, value in f.coefficients.items()
    )


def convolve(f: WeightedElement, g: WeightedElement) -> WeightedElement:
    """(f * g)(z) = Σ_{xy = z} f(x) g(y).

    Raises:
        UsageError: f and g belong to different algebras.
    """
    f._require_same_context(g)
    product: dict[GroupElement, complex] = defaultdict(complex)
    for (x, fx), (y, gy) in itertools.product(
        f.coefficients.items(), g.coefficients.items()
    ):
        product[multiply(x, y)] += fx * gy
    return WeightedElement.from_dict(f.group, f.weight, product)


def p_func(alpha: float, C: float, beta: float, x):
    """p(x) = C x^α - β log(1 + x)."""
    return C * np.power(x, alpha) - beta * np.log1p(x)


def q_func(alpha: float, C: float, beta: float, x):
    """q(x) = p(x) / x.

    Raises:
        DomainError: x <= 0.
    """
    if np.any(np.asarray(x) <= 0):
        raise DomainError("q(x) = p(x)/x is defined only for x > 0.")
    return p_func(alpha, C, beta, x) / x


def _check_exponent_family(alpha: float, C: float) -> None:
    if not 0 < alpha < 1 or C <= 0:
        raise UsageError("Requires 0 < alpha < 1 and C > 0.")


def lemma_beta_floor(alpha: float, C: float) -> float:
    """Smallest β for which p increases and q decreases beyond the threshold K."""
    _check_exponent_family(alpha, C)
    return max(1.0, 6.0 / (C * alpha * (1 - alpha)))


def _require_lemma_hypotheses(alpha: float, C: float, beta: float) -> None:
    floor = lemma_beta_floor(alpha, C)
    if beta < floor * (1 - LOG_TOLERANCE):
        raise UsageError(
            f"Lemma hypotheses not met: beta must be at least max(1, 6/(C alpha (1 - alpha))) = {floor:.6g}, got {beta:.6g}."
        )


def log_k_threshold(alpha: float, C: float, beta: float) -> float:
    """log K = (1/α) log(β² / (C α (1 - α))). Finite for every valid (α, C, β), unlike K itself."""
    _check_exponent_family(alpha, C)
    if beta <= 0:
        raise UsageError("k_threshold needs beta > 0.")
    return math.log(beta * beta / (C * alpha * (1 - alpha))) / alpha


def k_threshold(alpha: float, C: float, beta: float) -> float:
    """K = (β² / (C α (1 - α)))^(1/α); inf if it overflows a double."""
    log_k = log_k_threshold(alpha, C, beta)
    return math.exp(log_k) if log_k < MAX_LOG_FLOAT else math.inf


@dataclasses.dataclass(frozen=True)
class MonotonicityReport:
    start: float
    stop: float
    points: int
    p_violations: int
    q_violations: int
    first_violation: float | None

    @property
    def passed(self) -> bool:
        return not (self.p_violations or self.q_violations)

    def to_dict(self) -> dict:
        return {**dataclasses.asdict(self), "pass": self.passed}


def monotonicity_check(
    alpha: float,
    C: float,
    beta: float,
    stop: float,
    start: float | None = None,
    step: float = 0.01,
) -> MonotonicityReport:
    """Check that p is nondecreasing and q nonincreasing on the grid start, start + step, ..., stop.

    Args:
        alpha (float): Exponent α in (0, 1).
        C (float): Scale C > 0.
        beta (float): β, at least max(1, 6/(C α (1 - α))).
        stop (float): Grid end T.
        start (float | None, optional): Grid start. Defaults to K.
        step (float, optional): Grid step h. Defaults to 0.01.

    Raises:
        UsageError: β below the hypothesis, or empty grid.

    Returns:
        MonotonicityReport: Violation counts and location of the first violation.
    """
    _require_lemma_hypotheses(alpha, C, beta)
    if start is None:
        start = k_threshold(alpha, C, beta)
    if not stop > start or step <= 0:
        raise UsageError("Monotonicity grid needs stop > start and step > 0.")
    x = np.linspace(start, stop, int(math.floor((stop - start) / step)) + 1)
    x = x[x > 0]
    scale = C * np.power(x, alpha) + beta * np.log1p(x) + 1.0
    p = p_func(alpha, C, beta, x)
    q = p / x
    dp = np.diff(p)
    dq = np.diff(q)
    p_bad = dp < -LOG_TOLERANCE * scale[1:]
    q_bad = dq > LOG_TOLERANCE * scale[1:] / x[1:]
    bad = np.flatnonzero(p_bad | q_bad)
    report = MonotonicityReport(
        start=float(start),
        stop=float(stop),
        points=len(x),
        p_violations=int(p_bad.sum()),
        q_violations=int(q_bad.sum()),
        first_violation=float(x[bad[0] + 1]) if len(bad) else None,
    )
    logger.info("Monotonicity check alpha=%g C=%g beta=%g: %s", alpha, C, beta, report)
    return report


def _log_m_scan(alpha: float, C: float, beta: float, upper: int) -> float:
    p_max = p_min = 0.0
    for lo in range(0, upper + 1, M_SCAN_CHUNK):
        p = p_func(alpha, C, beta, np.arange(lo, min(upper, lo + M_SCAN_CHUNK - 1) + 1, dtype=float))
        p_max = max(p_max, float(p.max()))
        p_min = min(p_min, float(p.min()))
    return p_max - 2 * p_min


def p_func_log(alpha: float, C: float, beta: float, u: float) -> float:
    """p(e^u), finite wherever C e^(αu) is, including points x = e^u beyond float range."""
    return C * math.exp(alpha * u) - beta * float(np.logaddexp(0.0, u))


def _log_m_critical(alpha: float, C: float, beta: float, log_upper: float) -> float:
    # With x = e^u, sign p'(x) = sign g(u); g decreases then increases with turning point u0,
    # so p has at most a local maximum below u0 and a local minimum above it.
    def g(u: float) -> float:
        return C * alpha * (math.exp((alpha - 1) * u) + math.exp(alpha * u)) - beta

    upper = math.floor(math.exp(log_upper)) if log_upper < MAX_LOG_FLOAT else None
    values = [0.0]  # p(0)
    if upper is None:
        values.append(p_func_log(alpha, C, beta, log_upper))
    else:
        values.append(float(p_func(alpha, C, beta, float(upper))))
    u0 = math.log((1 - alpha) / alpha)
    roots = []
    if g(min(u0, log_upper)) < 0:
        lo = min(u0, log_upper) - 1
        while g(lo) <= 0:
            lo -= 1
        roots.append(scipy.optimize.brentq(g, lo, min(u0, log_upper)))
        if u0 < log_upper and g(log_upper) > 0:
            roots.append(scipy.optimize.brentq(g, u0, log_upper))
    for root in roots:
        if root >= MAX_LOG_FLOAT:
            values.append(p_func_log(alpha, C, beta, root))
            continue
        x = math.exp(root)
        for t in (math.floor(x), math.ceil(x)):
            if upper is None or t <= upper:
                values.append(float(p_func(alpha, C, beta, float(t))))
    return max(values) - 2 * min(values)


def log_m_constant(
    alpha: float,
    C: float,
    beta: float,
    method: typing.Literal["auto", "scan", "critical"] = "auto",
) -> float:
    """log M, M = max { exp(p(t) - p(s) - p(r)) : t, s, r in [0, 4K] ∩ Z }.

    The maximum separates into max p - 2 min p. The scan evaluates p on the whole integer grid;
    the critical-point method only at the integer neighbours of the extrema of p and the endpoints.
    The range [0, 4K] is handled through log K, so K may exceed float range for small α.

    Raises:
        UsageError: β below the Lemma hypotheses.
        ResourceCapError: scan requested over more than M_SCAN_CAP integers.
    """
    _require_lemma_hypotheses(alpha, C, beta)
    log_upper = math.log(4) + log_k_threshold(alpha, C, beta)
    if log_upper < 0:
        return 0.0
    scannable = log_upper <= math.log(M_SCAN_CAP)
    if method == "auto":
        method = "scan" if scannable else "critical"
    if method == "scan":
        if not scannable:
            raise ResourceCapError(
                f"Scanning p over [0, 4K] needs e^{log_upper:.6g} points, above the cap of {M_SCAN_CAP}.",
                M_SCAN_CAP + 1,
            )
        log_m = _log_m_scan(alpha, C, beta, math.floor(math.exp(log_upper)))
    else:
        log_m = _log_m_critical(alpha, C, beta, log_upper)
    logger.info("log M for alpha=%g C=%g beta=%g over [0, e^%g]: %g (%s)", alpha, C, beta, log_upper, log_m, method)
    return log_m


def m_constant(alpha: float, C: float, beta: float) -> float:
    """Submultiplicativity constant M of the composite weight; inf if it overflows a double."""
    log_m = log_m_constant(alpha, C, beta)
    return math.exp(log_m) if log_m < MAX_LOG_FLOAT else math.inf


@dataclasses.dataclass(frozen=True)
class SubmultReport:
    weight: WeightSpec
    radius: int
    pairs_checked: int
    skipped: int
    sampled: bool
    worst_log_ratio: float
    worst_pair: tuple[str, str] | None
    claimed_M: float

    @property
    def worst_ratio(self) -> float:
        return math.exp(self.worst_log_ratio)

    @property
    def passed(self) -> bool:
        return self.worst_log_ratio <= math.log(self.claimed_M) + LOG_TOLERANCE

    def to_dict(self) -> dict:
        return {
            "weight": self.weight.to_dict(),
            "radius": self.radius,
            "pairs_checked": self.pairs_checked,
            "skipped": self.skipped,
            "sampled": self.sampled,
            "worst_ratio": self.worst_ratio,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "claimed_M": self.claimed_M,
            "pass": self.passed,
        }


def check_submultiplicative(
    w: WeightSpec,
    table: BallTable,
    R: int,
    M: float | None = None,
    pair_cap: int = 1_000_000,
    seed: int = 0,
) -> SubmultReport:
    """Sweep ω(xy) / (ω(x) ω(y)) over pairs of ball(R), in log-space.

    Pairs are taken exhaustively in lexicographic order, or uniformly at random when there are more
    than `pair_cap` of them. Ties for the worst ratio go to the lexicographically first pair.

    Args:
        w (WeightSpec): Weight.
        table (BallTable): Ball table; radius 2R makes every product length available.
        R (int): Radius of the sweep.
        M (float | None, optional): Claimed constant. Defaults to the weight's own constant.
        pair_cap (int, optional): Exhaustive sweep limit. Defaults to 10^6.
        seed (int, optional): Sampling seed. Defaults to 0.

    Returns:
        SubmultReport: Worst ratio and pass flag.
    """
    if M is None:
        M = w.submultiplicative_constant()
    desc = table.group
    if R > table.radius:
        raise UsageError(f"Sweep radius {R} exceeds ball radius {table.radius}.")
    ball = sorted(table.ball(R))
    log_weights = {x: w.log_weight(word_length(x, desc, table)) for x in ball}

    sampled = len(ball) ** 2 > pair_cap
    if sampled:
        rng = np.random.default_rng(seed)
        indices = rng.integers(0, len(ball), size=(pair_cap, 2))
        pairs = sorted((ball[i], ball[j]) for i, j in indices)
    else:
        pairs = itertools.product(ball, ball)

    worst = -math.inf
    worst_pair = None
    checked = skipped = 0
    for x, y in pairs:
        try:
            tau_xy = word_length(multiply(x, y), desc, table)
        except OutOfRangeError:
            skipped += 1
            continue
        checked += 1
        log_ratio = w.log_weight(tau_xy) - log_weights[x] - log_weights[y]
        if log_ratio > worst:
            worst = log_ratio
            worst_pair = (str(x), str(y))
    report = SubmultReport(
        weight=w,
        radius=R,
        pairs_checked=checked,
        skipped=skipped,
        sampled=sampled,
        worst_log_ratio=worst,
        worst_pair=worst_pair,
        claimed_M=M,
    )
    logger.info(
        "Submultiplicativity of %s on %s ball(%d): worst ratio %.15g over %d pairs",
        w,
        desc.name,
        R,
        report.worst_ratio,
        checked,
    )
    return report
