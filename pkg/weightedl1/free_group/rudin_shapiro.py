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
import scipy.linalg

from weightedl1.errors import ResourceCapError, UsageError
from weightedl1.free_group.spectral import SpectralCertificate, certify

MAX_LEVEL = 20
FLATNESS_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True)
class RudinShapiroPair:
    """Coefficients of P_k and Q_k in ascending powers of z, each of length 2^k with entries ±1."""

    k: int
    p: np.ndarray
    q: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.p) - 1


def rudin_shapiro(k: int, max_level: int = MAX_LEVEL) -> RudinShapiroPair:
    """P_0 = Q_0 = 1, P_(j+1) = P_j + z^(2^j) Q_j, Q_(j+1) = Q_j - z^(2^j) P_j.

    Raises:
        UsageError: k is negative.
        ResourceCapError: k above max_level.
    """
    if type(k) is not int or k < 0:
        raise UsageError("Rudin-Shapiro level must be a nonnegative integer.")
    if k > max_level:
        raise ResourceCapError(
            f"Rudin-Shapiro level {k} needs 2^{k} coefficients, above the level cap of {max_level}.",
            2**k,
        )
    p = np.ones(1, dtype=np.int8)
    q = np.ones(1, dtype=np.int8)
    for _ in range(k):
        p, q = np.concatenate((p, q)), np.concatenate((q, -p))
    return RudinShapiroPair(k, p, q)


@dataclasses.dataclass(frozen=True)
class FlatnessReport:
    k: int
    samples: int
    max_deviation: float
    max_modulus_p: float
    sup_bound: float
    coefficients_unimodular: bool

    @property
    def passed(self) -> bool:
        return (
            self.coefficients_unimodular
            and self.max_deviation < FLATNESS_TOLERANCE
            and self.max_modulus_p <= self.sup_bound + FLATNESS_TOLERANCE
        )

    def to_dict(self) -> dict:
        return {**dataclasses.asdict(self), "pass": self.passed}


def flatness_check(pair: RudinShapiroPair, samples: int) -> FlatnessReport:
    """Evaluate |P_k(z)|² + |Q_k(z)|² - 2^(k+1) at `samples` equispaced points of the unit circle."""
    if samples < 1:
        raise UsageError("Flatness check needs at least one sample.")
    z = np.exp(2j * np.pi * np.arange(samples) / samples)
    # np.polyval expects descending powers.
    p_values = np.polyval(pair.p[::-1].astype(float), z)
    q_values = np.polyval(pair.q[::-1].astype(float), z)
    deviation = np.abs(np.abs(p_values) ** 2 + np.abs(q_values) ** 2 - 2 ** (pair.k + 1))
    return FlatnessReport(
        k=pair.k,
        samples=samples,
        max_deviation=float(deviation.max()),
        max_modulus_p=float(np.abs(p_values).max()),
        sup_bound=math.sqrt(2 ** (pair.k + 1)),
        coefficients_unimodular=bool(
            np.all(np.abs(pair.p) == 1) and np.all(np.abs(pair.q) == 1)
        ),
    )


@dataclasses.dataclass(frozen=True)
class HankelMatrix:
    """n × n matrix (c_(i+j)), n = 2^k, with c the coefficients of P_(k+1)."""

    level: int
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm_bound(self) -> float:
        # ‖A_n‖ <= ‖P_(k+1)‖_∞ <= sqrt(2^(k+2)) = 2 sqrt(n)
        return 2 * math.sqrt(self.size)

    def is_hankel(self) -> bool:
        n = self.size
        return all(
            len(set(np.diagonal(self.matrix[:, ::-1], offset).tolist())) == 1
            for offset in range(-(n - 1), n)
        )


def hankel_from_rs(k: int) -> HankelMatrix:
    if k < 1:
        raise UsageError("Hankel matrix needs level k >= 1.")
    n = 2**k
    c = rudin_shapiro(k + 1).p.astype(float)
    return HankelMatrix(k, scipy.linalg.hankel(c[:n], c[n - 1 : 2 * n - 1]))


def hankel_certificate(k: int) -> SpectralCertificate:
    """‖A_n‖ <= 2 sqrt(n) for n = 2^k, power iteration from a fixed random start."""
    hankel = hankel_from_rs(k)
    start = np.random.default_rng(k).standard_normal(hankel.size)
    return certify(
        f"hankel_k{k}",
        hankel.matrix,
        hankel.norm_bound,
        "<=",
        start=start,
        note="A_n is filled from P_(k+1), so the bound is 2 sqrt(n) = sqrt(2) sqrt(2n).",
    )
