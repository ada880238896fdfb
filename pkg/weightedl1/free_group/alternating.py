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

import csv
import dataclasses
import io
import itertools
import math

import numpy as np

from weightedl1.errors import DomainError, ResourceCapError, UsageError
from weightedl1.free_group.rudin_shapiro import hankel_from_rs
from weightedl1.free_group.spectral import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
    SpectralCertificate,
    certify,
)
from weightedl1.groups.balls import word_length
from weightedl1.groups.descriptor import FreeGroup
from weightedl1.groups.element import GroupElement, multiply
from weightedl1.logger import logger
from weightedl1.weights import WeightSpec

DEFAULT_INDEX_CAP = 4096
ORACLE_TOLERANCE = 1e-12


@dataclasses.dataclass(frozen=True)
class AlternatingIndex:
    """I^d_n = {g1^x1 g2^x2 g1^x3 ⋯ g2^xd : 1 <= x_i <= n}, in lexicographic order of (x_1, ..., x_d)."""

    d: int
    n: int
    exponents: np.ndarray
    words: tuple[GroupElement, ...]

    @property
    def lengths(self) -> np.ndarray:
        return self.exponents.sum(axis=1)

    def __len__(self) -> int:
        return len(self.words)


def _check_even(d: int) -> None:
    if type(d) is not int or d < 2 or d % 2:
        raise UsageError(f"Alternating words need an even d >= 2, got {d}.")


def alternating_index(d: int, n: int, cap: int = DEFAULT_INDEX_CAP) -> AlternatingIndex:
    _check_even(d)
    if n < 1:
        raise UsageError("Alternating words need n >= 1.")
    if n**d > cap:
        raise ResourceCapError(
            f"I^{d}_{n} has {n**d} words, above the cap of {cap}.", n**d
        )
    exponents = np.array(list(itertools.product(range(1, n + 1), repeat=d)))
    words = tuple(
        GroupElement("free2", tuple((1 + i % 2, int(x)) for i, x in enumerate(row)))
        for row in exponents
    )
    return AlternatingIndex(d, n, exponents, words)


@dataclasses.dataclass(frozen=True)
class AdditivityReport:
    pairs_checked: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {**dataclasses.asdict(self), "pass": self.passed}


def length_additivity_check(index: AlternatingIndex) -> AdditivityReport:
    """τ(g g') = τ(g) + τ(g') for all g, g' in I^d_n: g ends in a power of g2, g' starts with a power of g1."""
    group = FreeGroup()
    lengths = [word_length(g, group) for g in index.words]
    failures = 0
    for (g, tg), (h, th) in itertools.product(zip(index.words, lengths), repeat=2):
        if word_length(multiply(g, h), group) != tg + th:
            failures += 1
    return AdditivityReport(len(index) ** 2, failures)


def omega_In_matrix(d: int, n: int, beta: float, cap: int = DEFAULT_INDEX_CAP) -> np.ndarray:
    """Ω^n_β(g, g') = ((1 + X + Y) / ((1 + X)(1 + Y)))^β with X = τ(g), Y = τ(g') on I^d_n."""
    lengths = alternating_index(d, n, cap).lengths.astype(float)
    x = lengths[:, None]
    y = lengths[None, :]
    return np.power((1 + x + y) / ((1 + x) * (1 + y)), beta)


def omega_oracle_deviation(
    d: int, n: int, beta: float, samples: int = 1000, seed: int = 0
) -> float:
    """Largest relative gap between omega_In_matrix entries and ω_β(gg') / (ω_β(g) ω_β(g')) from word lengths."""
    index = alternating_index(d, n)
    matrix = omega_In_matrix(d, n, beta)
    weight = WeightSpec.polynomial(beta)
    group = FreeGroup()
    rng = np.random.default_rng(seed)
    deviation = 0.0
    for i, j in rng.integers(0, len(index), size=(samples, 2)):
        g, h = index.words[i], index.words[j]
        expected = math.exp(
            weight.log_weight(word_length(multiply(g, h), group))
            - weight.log_weight(word_length(g, group))
            - weight.log_weight(word_length(h, group))
        )
        deviation = max(deviation, abs(matrix[i, j] - expected) / expected)
    return deviation


def sum_histogram(d: int, n: int) -> np.ndarray:
    """counts[s] = #{(x_1, ..., x_d) in [1, n]^d : x_1 + ... + x_d = s}."""
    single = np.concatenate(([0], np.ones(n, dtype=np.int64)))
    counts = np.ones(1, dtype=np.int64)
    for _ in range(d):
        counts = np.convolve(counts, single)
    return counts


def s_sum(d: int, n: int, beta: float) -> float:
    """S_n = Σ_{1 <= x_i <= n} (1 + x_1 + ... + x_d)^-2β via the histogram of coordinate sums."""
    if d < 1 or n < 1:
        raise UsageError("s_sum needs d >= 1 and n >= 1.")
    counts = sum_histogram(d, n)
    sums = np.flatnonzero(counts)
    return math.fsum(counts[sums] * np.power(1.0 + sums, -2 * beta))


def s_sum_direct(d: int, n: int, beta: float) -> float:
    """S_n by enumerating all n^d tuples."""
    return math.fsum(
        (1 + sum(xs)) ** (-2 * beta)
        for xs in itertools.product(range(1, n + 1), repeat=d)
    )


def omega_lower_bound_check(
    d: int,
    n: int,
    beta: float,
    cap: int = DEFAULT_INDEX_CAP,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SpectralCertificate:
    """‖Ω^n_β‖_op >= 2^-β n^(d/2) S_n^(1/2), power iteration from the all-ones vector."""
    bound = 2**-beta * n ** (d / 2) * math.sqrt(s_sum(d, n, beta))
    return certify(
        f"omega_d{d}_n{n}_beta{beta:g}",
        omega_In_matrix(d, n, beta, cap),
        bound,
        ">=",
        tolerance,
        max_iter,
    )


def divergence_sequence(
    d: int, beta: float, kg: float, k_max: int
) -> list[tuple[int, float, float]]:
    """(n, S_n, L_n) for n = 2, 4, ..., 2^k_max with L_n = K_G^-1 2^(-d/2) 2^-β S_n^(1/2).

    Raises:
        UsageError: d is not even.
        DomainError: 2β >= d, where the sequence need not diverge.
    """
    _check_even(d)
    if 2 * beta >= d:
        raise DomainError(
            f"Divergence sequence needs 2 beta < d, got beta = {beta:g}, d = {d}."
        )
    rows = []
    for k in range(1, k_max + 1):
        n = 2**k
        s_n = s_sum(d, n, beta)
        rows.append((n, s_n, math.sqrt(s_n) / (kg * 2 ** (d / 2) * 2**beta)))
    logger.info("Divergence sequence d=%d beta=%g: L_(2^%d) = %g", d, beta, k_max, rows[-1][2] if rows else math.nan)
    return rows


def divergence_csv(rows: list[tuple[int, float, float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("n", "S_n", "L_n"))
    writer.writerows((n, repr(s_n), repr(l_n)) for n, s_n, l_n in rows)
    return buffer.getvalue()


@dataclasses.dataclass(frozen=True)
class TensorPowerReport:
    k: int
    n: int
    d: int
    schur_identity: bool | None
    factor_norm: float
    tensor_norm: float | None
    slack_bound: float
    stated_bound: float

    @property
    def within_slack_bound(self) -> bool:
        return self.factor_norm**self.d <= self.slack_bound * (1 + ORACLE_TOLERANCE)

    @property
    def within_stated_bound(self) -> bool:
        return self.factor_norm**self.d <= self.stated_bound * (1 + ORACLE_TOLERANCE)

    def to_dict(self) -> dict:
        return {
            **dataclasses.asdict(self),
            "within_slack_bound": self.within_slack_bound,
            "within_stated_bound": self.within_stated_bound,
        }


def tensor_power_check(k: int, d: int, materialize_cap: int = 4096) -> TensorPowerReport:
    """b = A_n^(⊗d) on I^d_n, n = 2^k.

    ‖b‖ = ‖A_n‖^d; the construction gives ‖A_n‖ <= 2 sqrt(n), so ‖b‖ <= (2 sqrt(n))^d, a factor 2^(d/2)
    above the stated (2n)^(d/2). When n^d is at most `materialize_cap`, b is built to confirm the Schur
    identity b ∘ b = 1 and the tensor norm.
    """
    _check_even(d)
    hankel = hankel_from_rs(k)
    factor_norm = float(np.linalg.norm(hankel.matrix, 2))
    n = hankel.size
    schur_identity = tensor_norm = None
    if n**d <= materialize_cap:
        b = hankel.matrix
        for _ in range(d - 1):
            b = np.kron(b, hankel.matrix)
        schur_identity = bool(np.all(b * b == 1))
        tensor_norm = float(np.linalg.norm(b, 2))
    return TensorPowerReport(
        k=k,
        n=n,
        d=d,
        schur_identity=schur_identity,
        factor_norm=factor_norm,
        tensor_norm=tensor_norm,
        slack_bound=(2 * math.sqrt(n)) ** d,
        stated_bound=(2 * n) ** (d / 2),
    )
