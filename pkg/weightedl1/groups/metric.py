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

import numpy as np
from dijkstar import Graph
from dijkstar.algorithm import (
    extract_shortest_path_from_predecessor_list,
    single_source_shortest_paths,
)

from weightedl1.errors import OutOfRangeError, UsageError
from weightedl1.groups.balls import BallTable, word_length
from weightedl1.groups.descriptor import GroupDescriptor
from weightedl1.groups.element import GroupElement, inverse, multiply
from weightedl1.logger import logger


@dataclasses.dataclass(frozen=True)
class TriangleReport:
    pairs_checked: int
    skipped: int
    violations: tuple[tuple[str, str], ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "skipped": self.skipped,
            "violations": [list(v) for v in self.violations],
            "pass": self.passed,
        }


def random_pairs(
    desc: GroupDescriptor, count: int, max_length: int, rng: np.random.Generator
) -> list[tuple[GroupElement, GroupElement]]:
    return [
        (desc.random_element(rng, max_length), desc.random_element(rng, max_length))
        for _ in range(count)
    ]


def triangle_check(
    table: BallTable,
    pairs: typing.Iterable[tuple[GroupElement, GroupElement]] | None = None,
    radius: int | None = None,
) -> TriangleReport:
    """Check |τ(x) - τ(y)| <= τ(xy) <= τ(x) + τ(y).

    Either every pair of ball(radius) is checked, or the given pairs are.
    Pairs whose lengths the table cannot supply are skipped and counted.

    Args:
        table (BallTable): Ball table supplying word lengths.
        pairs (Iterable[tuple[GroupElement, GroupElement]] | None, optional): Explicit pairs. Defaults to None.
        radius (int | None, optional): Exhaustive radius, used when `pairs` is None. Defaults to table radius.

    Returns:
        TriangleReport: Counts and violating pairs.
    """
    if pairs is None:
        ball = table.ball(radius)
        pairs = itertools.product(ball, ball)
    desc = table.group
    checked = skipped = 0
    violations: list[tuple[str, str]] = []
    for x, y in pairs:
        try:
            tx = word_length(x, desc, table)
            ty = word_length(y, desc, table)
            txy = word_length(multiply(x, y), desc, table)
        except OutOfRangeError:
            skipped += 1
            continue
        checked += 1
        if not abs(tx - ty) <= txy <= tx + ty:
            violations.append((str(x), str(y)))
    logger.info(
        "Triangle check on %s: %d pairs, %d skipped, %d violations",
        desc.name,
        checked,
        skipped,
        len(violations),
    )
    return TriangleReport(checked, skipped, tuple(violations))


@dataclasses.dataclass(frozen=True)
class AdditivityWitness:
    """x, y with τ(xy) = τ(x) + τ(y)."""

    x: GroupElement
    y: GroupElement
    product: GroupElement
    length_x: int
    length_y: int
    length_product: int

    def exponential_ratio(self, C: float, alpha: float = 1.0) -> float:
        """σ_{α,C}(xy) / (σ_{α,C}(x) σ_{α,C}(y)) at the witness."""
        return math.exp(
            C
            * (
                self.length_product**alpha
                - self.length_x**alpha
                - self.length_y**alpha
            )
        )

    def to_dict(self) -> dict:
        return {
            "x": str(self.x),
            "y": str(self.y),
            "xy": str(self.product),
            "length_x": self.length_x,
            "length_y": self.length_y,
            "length_xy": self.length_product,
        }


def additivity_witness(
    desc: GroupDescriptor, table: BallTable, m: int, n: int
) -> AdditivityWitness | None:
    """Factor an element a of the (m+n)-sphere as a = xy with τ(x) = n, τ(y) = m.

    x is the length-n prefix of the geodesic of a; y = x^-1 a is the remaining suffix.
    The lexicographically largest sphere element is used.

    Args:
        desc (GroupDescriptor): Group.
        table (BallTable): Ball table of radius at least m + n.
        m (int): Length of y.
        n (int): Length of x.

    Raises:
        UsageError: m or n below 2, or table radius too small.

    Returns:
        AdditivityWitness | None: Witness, or None if the (m+n)-sphere is empty.
    """
    if m < 2 or n < 2:
        raise UsageError("Additivity witness needs m, n >= 2.")
    if table.radius < m + n:
        raise UsageError(
            f"Additivity witness needs ball radius at least {m + n}, got {table.radius}."
        )
    sphere = table.spheres[m + n]
    if not sphere:
        return None
    a = max(sphere)
    x = table.path_from_identity(a)[n]
    y = multiply(inverse(x), a)
    return AdditivityWitness(
        x=x,
        y=y,
        product=a,
        length_x=word_length(x, desc, table),
        length_y=word_length(y, desc, table),
        length_product=word_length(a, desc, table),
    )


class CayleyGraph:
    """Directed Cayley graph restricted to a computed ball, edges x -> xg of unit cost."""

    def __init__(self, table: BallTable):
        self.table = table
        self._graph = Graph(undirected=False)
        for x in table.lengths:
            for g in table.group.non_identity_generators:
                y = multiply(x, g)
                if y in table:
                    self._graph.add_edge(x, y, 1)

    def distances(self) -> dict[GroupElement, int]:
        """Dijkstra distance from the identity to every element of the ball."""
        identity = self.table.group.identity
        predecessors = single_source_shortest_paths(self._graph, identity)
        distances = {identity: 0}
        for x in self.table.lengths:
            if x != identity:
                distances[x] = int(
                    extract_shortest_path_from_predecessor_list(predecessors, x).total_cost
                )
        return distances


@dataclasses.dataclass(frozen=True)
class WordLengthReport:
    elements_checked: int
    closed_form_mismatches: int
    oracle_mismatches: int
    parent_chain_mismatches: int

    @property
    def passed(self) -> bool:
        return not (
            self.closed_form_mismatches
            or self.oracle_mismatches
            or self.parent_chain_mismatches
        )

    def to_dict(self) -> dict:
        return {**dataclasses.asdict(self), "pass": self.passed}


def verify_word_lengths(table: BallTable) -> WordLengthReport:
    """Compare BFS lengths with the closed form (if any), Dijkstra distances and parent-chain lengths."""
    desc = table.group
    distances = CayleyGraph(table).distances()
    closed_form_mismatches = oracle_mismatches = chain_mismatches = 0
    for x, length in table.lengths.items():
        closed_form = desc.closed_form_length(x)
        if closed_form is not None and closed_form != length:
            closed_form_mismatches += 1
        if distances.get(x) != length:
            oracle_mismatches += 1
        if len(table.geodesic(x)) != length:
            chain_mismatches += 1
    return WordLengthReport(
        len(table.lengths), closed_form_mismatches, oracle_mismatches, chain_mismatches
    )
