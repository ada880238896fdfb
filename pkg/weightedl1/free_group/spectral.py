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
import typing

import numpy as np
import scipy.linalg

from weightedl1.logger import logger

DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITER = 10_000
SVD_CROSS_CHECK_CAP = 4096
BOUND_SLACK = 1e-12

Relation = typing.Literal["<=", ">="]


@dataclasses.dataclass(frozen=True)
class PowerIterationResult:
    norm: float
    converged: bool
    iterations: int


def power_iteration(
    matrix: np.ndarray,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
    start: np.ndarray | None = None,
) -> PowerIterationResult:
    """Largest singular value by power iteration on A^T A.

    Every iterate v is a unit vector, so ‖A v‖ never exceeds ‖A‖: the returned value is a lower bound.
    Stops when the relative change of ‖A v‖ falls below `tolerance`.

    Args:
        matrix (np.ndarray): A.
        tolerance (float, optional): Relative change stopping rule. Defaults to DEFAULT_TOLERANCE.
        max_iter (int, optional): Iteration cap. Defaults to DEFAULT_MAX_ITER.
        start (np.ndarray | None, optional): Start vector. Defaults to all ones.

    Returns:
        PowerIterationResult: Estimate, convergence flag and iteration count.
    """
    v = np.ones(matrix.shape[1]) if start is None else np.asarray(start, dtype=float)
    v = v / np.linalg.norm(v)
    previous = 0.0
    for iteration in range(1, max_iter + 1):
        w = matrix @ v
        sigma = float(np.linalg.norm(w))
        u = matrix.T @ w
        u_norm = np.linalg.norm(u)
        if u_norm == 0:
            return PowerIterationResult(sigma, True, iteration)
        v = u / u_norm
        if abs(sigma - previous) <= tolerance * sigma:
            return PowerIterationResult(sigma, True, iteration)
        previous = sigma
    logger.warning("Power iteration did not converge in %d iterations", max_iter)
    return PowerIterationResult(previous, False, max_iter)


@dataclasses.dataclass(frozen=True)
class SpectralCertificate:
    """Computed spectral norm checked against a claimed bound.

    status is "pass", "fail" or "inconclusive" (power iteration did not converge and the
    lower estimate alone cannot settle the claim).
    """

    matrix_id: str
    shape: tuple[int, int]
    norm: float
    claimed_bound: float
    relation: Relation
    status: str
    iterations: int
    tolerance: float
    svd_norm: float | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def inconclusive(self) -> bool:
        return self.status == "inconclusive"

    def to_dict(self) -> dict:
        return {**dataclasses.asdict(self), "shape": list(self.shape), "pass": self.passed}


def certify(
    matrix_id: str,
    matrix: np.ndarray,
    claimed_bound: float,
    relation: Relation,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
    start: np.ndarray | None = None,
    note: str = "",
) -> SpectralCertificate:
    """Check ‖A‖ <= bound or ‖A‖ >= bound.

    ">=" claims are settled by the power-iteration lower bound. "<=" claims additionally need an upper
    bound, taken from the exact singular values when the matrix is small enough.
    """
    result = power_iteration(matrix, tolerance, max_iter, start)
    svd_norm = None
    if relation == ">=":
        if result.norm >= claimed_bound * (1 - BOUND_SLACK):
            status = "pass"
        else:
            status = "fail" if result.converged else "inconclusive"
    else:
        if max(matrix.shape) <= SVD_CROSS_CHECK_CAP:
            svd_norm = float(scipy.linalg.svdvals(matrix)[0])
        upper = svd_norm if svd_norm is not None else result.norm
        if not result.converged and svd_norm is None:
            status = "inconclusive"
        else:
            status = "pass" if upper <= claimed_bound * (1 + BOUND_SLACK) else "fail"
    certificate = SpectralCertificate(
        matrix_id=matrix_id,
        shape=tuple(int(s) for s in matrix.shape),
        norm=result.norm,
        claimed_bound=claimed_bound,
        relation=relation,
        status=status,
        iterations=result.iterations,
        tolerance=tolerance,
        svd_norm=svd_norm,
        note=note,
    )
    logger.info(
        "Certificate %s: norm %.10g %s %.10g -> %s",
        matrix_id,
        result.norm,
        relation,
        claimed_bound,
        status,
    )
    return certificate
