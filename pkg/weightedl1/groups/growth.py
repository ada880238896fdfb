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
import statsmodels.api as sm

from weightedl1.errors import UsageError
from weightedl1.logger import logger

if typing.TYPE_CHECKING:
    from weightedl1.groups.balls import BallTable


@dataclasses.dataclass(frozen=True)
class GrowthFit:
    exponent: float
    residual: float
    n_min: int
    n_max: int
    intercept: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def growth_order_fit(table: BallTable, n_min: int | None = None) -> GrowthFit:
    """Least-squares slope of log |F^n| against log n over n in [n_min, N].

    Args:
        table (BallTable): Ball table of radius N.
        n_min (int | None, optional): First radius used. Defaults to max(1, N // 2).

    Raises:
        UsageError: Table radius is smaller than n_min + 4.

    Returns:
        GrowthFit: Fitted exponent, clipped at 0.
    """
    if n_min is None:
        n_min = max(1, table.radius // 2)
    if n_min < 1:
        raise UsageError("n_min must be at least 1.")
    if table.radius < n_min + 4:
        raise UsageError(
            f"Growth fit needs ball radius at least {n_min + 4}, got {table.radius}."
        )
    radii = np.arange(n_min, table.radius + 1)
    log_sizes = np.log(np.asarray(table.cumulative, dtype=float)[radii])
    result = sm.OLS(log_sizes, sm.add_constant(np.log(radii))).fit()
    intercept, slope = (float(p) for p in result.params)
    residual = float(np.sqrt(result.ssr / len(radii)))
    logger.info(
        "Growth fit for %s over n in [%d, %d]: exponent %.4f, residual %.2e",
        table.group.name,
        n_min,
        table.radius,
        slope,
        residual,
    )
    return GrowthFit(
        exponent=max(0.0, slope),
        residual=residual,
        n_min=n_min,
        n_max=table.radius,
        intercept=intercept,
    )


def bass_guivarch(ranks: typing.Iterable[tuple[int, int]]) -> int:
    """Growth order of a nilpotent group, sum of k * rank(G_k / G_(k+1)).

    Args:
        ranks (Iterable[tuple[int, int]]): Pairs (k, rank) with distinct k.

    Raises:
        UsageError: Repeated k, nonpositive k or negative rank.

    Returns:
        int: Order of growth.
    """
    ranks = list(ranks)
    if len({k for k, _ in ranks}) != len(ranks):
        raise UsageError("Bass-Guivarch ranks must have distinct k.")
    if any(k < 1 or rank < 0 for k, rank in ranks):
        raise UsageError("Bass-Guivarch needs positive k and nonnegative ranks.")
    return sum(k * rank for k, rank in ranks)
