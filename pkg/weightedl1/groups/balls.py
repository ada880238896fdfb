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

import immutabledict

from weightedl1.errors import OutOfRangeError, ResourceCapError
from weightedl1.groups.descriptor import GroupDescriptor
from weightedl1.groups.element import GroupElement, multiply
from weightedl1.logger import logger

DEFAULT_BALL_CAP = 20_000_000


@dataclasses.dataclass(frozen=True)
class BallTable:
    """Spheres of the Cayley graph up to radius N, with one BFS parent per non-identity element."""

    group: GroupDescriptor
    radius: int
    spheres: tuple[tuple[GroupElement, ...], ...]
    lengths: immutabledict.immutabledict[GroupElement, int]
    parents: immutabledict.immutabledict[GroupElement, tuple[GroupElement, GroupElement]]

    @property
    def sphere_sizes(self) -> list[int]:
        return [len(sphere) for sphere in self.spheres]

    @property
    def cumulative(self) -> list[int]:
        return list(itertools.accumulate(self.sphere_sizes))

    def ball(self, r: int | None = None) -> list[GroupElement]:
        """Elements of F^r in BFS order."""
        r = self.radius if r is None else min(r, self.radius)
        return [x for sphere in self.spheres[: r + 1] for x in sphere]

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.lengths

    def geodesic(self, x: GroupElement) -> list[GroupElement]:
        """Generators g_1, ..., g_τ(x) with x = g_1 ⋯ g_τ(x), read off the parent links."""
        if x not in self:
            raise OutOfRangeError(
                f"{x} is outside the ball of radius {self.radius}.", self.radius + 1
            )
        word: list[GroupElement] = []
        while x in self.parents:
            x, generator = self.parents[x]
            word.append(generator)
        return word[::-1]

    def path_from_identity(self, x: GroupElement) -> list[GroupElement]:
        """Prefixes e, g_1, g_1 g_2, ..., x of the geodesic word of x."""
        path = [self.group.identity]
        for generator in self.geodesic(x):
            path.append(multiply(path[-1], generator))
        return path

    def to_dict(self) -> dict:
        return {
            **self.group.to_dict(),
            "radius": self.radius,
            "sphere_sizes": self.sphere_sizes,
            "cumulative": self.cumulative,
        }

    def elements_csv(self) -> str:
        """CSV of (n, element), one normal form per row."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("n", "element"))
        for n, sphere in enumerate(self.spheres):
            for x in sphere:
                writer.writerow((n, str(x)))
        return buffer.getvalue()

    def growth_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("n", "sphere_size", "cumulative"))
        writer.writerows(
            zip(range(self.radius + 1), self.sphere_sizes, self.cumulative)
        )
        return buffer.getvalue()


def bfs_balls(desc: GroupDescriptor, N: int, cap: int = DEFAULT_BALL_CAP) -> BallTable:
    """Breadth-first search of the Cayley graph from the identity up to radius N.

    Neighbours are x * g for g in F, visited in generator order, so the output is deterministic.

    Args:
        desc (GroupDescriptor): Group and generating set.
        N (int): Radius.
        cap (int, optional): Maximum number of stored elements. Defaults to DEFAULT_BALL_CAP.

    Raises:
        ValueError: N is negative.
        ResourceCapError: Projected or actual ball size exceeds cap.

    Returns:
        BallTable: Sphere decomposition with parent links.
    """
    if type(N) is not int or N < 0:
        raise ValueError("Ball radius must be a nonnegative integer.")
    projected = desc.ball_size_bound(N)
    if projected > cap:
        raise ResourceCapError(
            f"Ball of radius {N} in {desc.name} may hold up to {projected} elements, above the cap of {cap}.",
            projected,
        )

    identity = desc.identity
    generators = desc.non_identity_generators
    lengths: dict[GroupElement, int] = {identity: 0}
    parents: dict[GroupElement, tuple[GroupElement, GroupElement]] = dict()
    spheres: list[tuple[GroupElement, ...]] = [(identity,)]
    for n in range(1, N + 1):
        sphere: list[GroupElement] = []
        for x in spheres[-1]:
            for g in generators:
                y = multiply(x, g)
                if y not in lengths:
                    lengths[y] = n
                    parents[y] = (x, g)
                    sphere.append(y)
        if len(lengths) > cap:
            raise ResourceCapError(
                f"Ball of radius {n} in {desc.name} holds {len(lengths)} elements, above the cap of {cap}.",
                len(lengths),
            )
        spheres.append(tuple(sphere))
        logger.info("%s sphere %d: %d elements", desc.name, n, len(sphere))

    return BallTable(
        group=desc,
        radius=N,
        spheres=tuple(spheres),
        lengths=immutabledict.immutabledict(lengths),
        parents=immutabledict.immutabledict(parents),
    )


def word_length(
    x: GroupElement, desc: GroupDescriptor, table: BallTable | None = None
) -> int:
    """Word length τ(x) = min {n : x in F^n}.

    Closed forms are used for Z^d and F2; other groups are looked up in `table`.

    Args:
        x (GroupElement): Element.
        desc (GroupDescriptor): Group of x.
        table (BallTable | None, optional): Ball table for groups without a closed form. Defaults to None.

    Raises:
        OutOfRangeError: x lies outside the table; the message names the radius needed.

    Returns:
        int: τ(x).
    """
    desc.validate(x)
    if x == desc.identity:
        return 0
    closed_form = desc.closed_form_length(x)
    if closed_form is not None:
        return closed_form
    if table is not None and x in table:
        return table.lengths[x]
    required = desc.length_lower_bound(x)
    if table is not None:
        required = max(required, table.radius + 1)
    raise OutOfRangeError(
        f"Word length of {x} in {desc.name} needs a ball of radius at least {required}.",
        required,
    )
