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

import abc
import dataclasses
import itertools
import re
import typing

import numpy as np

from weightedl1.errors import UsageError
from weightedl1.groups.element import GroupElement, Kind, multiply
from weightedl1.groups.growth import bass_guivarch


@dataclasses.dataclass(frozen=True)
class SphereMajorant:
    """Polynomial majorant of sphere sizes: |F^n \\ F^(n-1)| <= coefficient * (1 + n)^degree for all n."""

    coefficient: float
    degree: float

    def __post_init__(self):
        if self.coefficient <= 0 or self.degree < 0:
            raise UsageError("Sphere majorant needs a positive coefficient and nonnegative degree.")


@dataclasses.dataclass(frozen=True)
class GroupDescriptor(abc.ABC):
    """Finitely generated group together with its symmetric generating set F (identity included)."""

    kind: typing.ClassVar[Kind]

    match_expr: typing.ClassVar[re.Pattern[str]] = re.compile(
        r"^(?:(z)([1-9][0-9]*)|(h3)|(f2))$", re.ASCII | re.IGNORECASE
    )

    @classmethod
    def from_name(cls, name: str) -> GroupDescriptor:
        """Group descriptor from a short name such as `z2`, `h3` or `f2`.

        Args:
            name (str): Group name.

        Raises:
            UsageError: Unknown group name.

        Returns:
            GroupDescriptor: Descriptor.
        """
        match = cls.match_expr.match(name.strip())
        if match is None:
            raise UsageError(f"Unknown group name: {name}. Expected zD, h3 or f2.")
        if match.group(1):
            return IntegerLattice(int(match.group(2)))
        if match.group(3):
            return HeisenbergGroup()
        return FreeGroup()

    @classmethod
    def from_kind(cls, kind: str, dimension: int = 1) -> GroupDescriptor:
        if kind in ("z", "zd"):
            return IntegerLattice(dimension)
        if kind == "heisenberg":
            return HeisenbergGroup()
        if kind == "free2":
            return FreeGroup()
        raise UsageError(f"Unknown group kind: {kind}")

    @property
    @abc.abstractmethod
    def name(self) -> str:
        pass

    @property
    def dimension(self) -> int:
        return 0

    @property
    def identity(self) -> GroupElement:
        return GroupElement.identity(self.kind, max(self.dimension, 1))

    @property
    @abc.abstractmethod
    def generators(self) -> tuple[GroupElement, ...]:
        """F, identity first."""

    @property
    def non_identity_generators(self) -> tuple[GroupElement, ...]:
        return tuple(g for g in self.generators if g != self.identity)

    @property
    @abc.abstractmethod
    def is_commutative(self) -> bool:
        pass

    @property
    @abc.abstractmethod
    def growth_order(self) -> int | None:
        """Order of polynomial growth, or None for groups of exponential growth."""

    @property
    def lambda_is_one(self) -> bool:
        """Whether |F^n| = f(n) holds exactly for the growth polynomial f."""
        return False

    @property
    def sphere_majorant(self) -> SphereMajorant | None:
        return None

    def closed_form_length(self, x: GroupElement) -> int | None:
        return None

    def sphere_size(self, n: int) -> int | None:
        """Exact |F^n \\ F^(n-1)| when a closed form is known."""
        return None

    @abc.abstractmethod
    def ball_size_bound(self, n: int) -> int:
        """Upper bound on |F^n| used to project memory use before a BFS."""

    def length_lower_bound(self, x: GroupElement) -> int:
        closed_form = self.closed_form_length(x)
        return 0 if closed_form is None else closed_form

    def validate(self, x: GroupElement) -> None:
        if x.kind != self.kind or (self.kind == "zd" and x.dimension != self.dimension):
            raise UsageError(f"Element {x} does not belong to {self.name}.")

    def random_element(self, rng: np.random.Generator, max_length: int) -> GroupElement:
        """Product of a uniformly random number (at most `max_length`) of random generators."""
        generators = self.non_identity_generators
        x = self.identity
        for index in rng.integers(0, len(generators), size=int(rng.integers(0, max_length + 1))):
            x = multiply(x, generators[index])
        return x

    def to_dict(self) -> dict:
        return {
            "group": self.name,
            "generators": [str(g) for g in self.generators],
        }


@dataclasses.dataclass(frozen=True)
class IntegerLattice(GroupDescriptor):
    """Z^d with F = {-1, 0, 1}^d, so that τ(x) = max |x_i| and |F^n| = (2n+1)^d."""

    d: int = 1

    kind: typing.ClassVar[Kind] = "zd"

    def __post_init__(self):
        if type(self.d) is not int or self.d < 1:
            raise UsageError("Z^d dimension must be a positive integer.")

    @property
    def name(self) -> str:
        return f"Z{self.d}"

    @property
    def dimension(self) -> int:
        return self.d

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        vectors = sorted(itertools.product((-1, 0, 1), repeat=self.d), key=lambda v: (any(v), v))
        return tuple(GroupElement("zd", v) for v in vectors)

    @property
    def is_commutative(self) -> bool:
        return True

    @property
    def growth_order(self) -> int:
        return bass_guivarch([(1, self.d)])

    @property
    def lambda_is_one(self) -> bool:
        return True

    @property
    def sphere_majorant(self) -> SphereMajorant:
        # (2n+1)^d - (2n-1)^d <= d 2^d (1+n)^(d-1) by the mean value theorem.
        return SphereMajorant(self.d * 2**self.d, self.d - 1)

    def closed_form_length(self, x: GroupElement) -> int:
        self.validate(x)
        return max(abs(a) for a in x.normal_form)

    def sphere_size(self, n: int) -> int:
        return 1 if n == 0 else (2 * n + 1) ** self.d - (2 * n - 1) ** self.d

    def ball_size_bound(self, n: int) -> int:
        return (2 * n + 1) ** self.d


@dataclasses.dataclass(frozen=True)
class HeisenbergGroup(GroupDescriptor):
    """Discrete Heisenberg group H3(Z) with F = {e, (±1,0,0), (0,±1,0), (0,0,±1)}."""

    kind: typing.ClassVar[Kind] = "heisenberg"

    # Lower central series ranks of H3(Z): Z^2 abelianisation, Z centre.
    lower_central_ranks: typing.ClassVar[tuple[tuple[int, int], ...]] = ((1, 2), (2, 1))

    @property
    def name(self) -> str:
        return "H3"

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        return tuple(
            GroupElement("heisenberg", v)
            for v in (
                (0, 0, 0),
                (1, 0, 0),
                (-1, 0, 0),
                (0, 1, 0),
                (0, -1, 0),
                (0, 0, 1),
                (0, 0, -1),
            )
        )

    @property
    def is_commutative(self) -> bool:
        return False

    @property
    def growth_order(self) -> int:
        return bass_guivarch(self.lower_central_ranks)

    @classmethod
    def max_central_coordinate(cls, n: int) -> int:
        """Upper bound on |c| over words of length n."""
        return n * n // 4 + n

    def ball_size_bound(self, n: int) -> int:
        return (2 * n * n + 2 * n + 1) * (2 * self.max_central_coordinate(n) + 1)

    def length_lower_bound(self, x: GroupElement) -> int:
        self.validate(x)
        a, b, c = x.normal_form
        central = 0
        while self.max_central_coordinate(central) < abs(c):
            central += 1
        return max(abs(a) + abs(b), central)


@dataclasses.dataclass(frozen=True)
class FreeGroup(GroupDescriptor):
    """Free group F2 on g1, g2 with F = {e, g1^±1, g2^±1}; τ is the reduced word length."""

    kind: typing.ClassVar[Kind] = "free2"

    @property
    def name(self) -> str:
        return "F2"

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        return (
            GroupElement("free2", ()),
            GroupElement("free2", ((1, 1),)),
            GroupElement("free2", ((1, -1),)),
            GroupElement("free2", ((2, 1),)),
            GroupElement("free2", ((2, -1),)),
        )

    @property
    def is_commutative(self) -> bool:
        return False

    @property
    def growth_order(self) -> None:
        return None

    def closed_form_length(self, x: GroupElement) -> int:
        self.validate(x)
        return sum(abs(exponent) for _, exponent in x.normal_form)

    def sphere_size(self, n: int) -> int:
        return 1 if n == 0 else 4 * 3 ** (n - 1)

    def ball_size_bound(self, n: int) -> int:
        return 2 * 3**n - 1

