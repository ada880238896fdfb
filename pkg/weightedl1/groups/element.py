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

import immutabledict

from weightedl1.errors import UsageError

Kind = typing.Literal["zd", "heisenberg", "free2"]


@dataclasses.dataclass(frozen=True, order=True, slots=True)
class GroupElement:
    """Exact group element in normal form.

    - zd: integer vector.
    - heisenberg: integer triple (a, b, c) with product (a1+a2, b1+b2, a1*b2+c1+c2).
    - free2: reduced word, a tuple of (generator, exponent) with generator in {1, 2},
      nonzero exponents and no equal adjacent generators.
    """

    kind: Kind
    normal_form: tuple

    free_generator_names: typing.ClassVar[immutabledict.immutabledict[int, str]] = (
        immutabledict.immutabledict({1: "g1", 2: "g2"})
    )

    def __post_init__(self):
        if self.kind == "zd":
            if not self.normal_form or not all(
                type(x) is int for x in self.normal_form
            ):
                raise UsageError("Z^d element must be a non-empty integer vector.")
        elif self.kind == "heisenberg":
            if len(self.normal_form) != 3 or not all(
                type(x) is int for x in self.normal_form
            ):
                raise UsageError("Heisenberg element must be an integer triple.")
        elif self.kind == "free2":
            previous = None
            for letter in self.normal_form:
                if len(letter) != 2:
                    raise UsageError("Free group letter must be (generator, exponent).")
                generator, exponent = letter
                if generator not in self.free_generator_names:
                    raise UsageError(f"Free group generator must be 1 or 2. Got {generator}.")
                if type(exponent) is not int or exponent == 0:
                    raise UsageError("Free group exponents must be nonzero integers.")
                if generator == previous:
                    raise UsageError("Free group word is not reduced.")
                previous = generator
        else:
            raise UsageError(f"Unknown group kind: {self.kind}")

    @classmethod
    def zd(cls, *coordinates: int) -> GroupElement:
        return cls("zd", tuple(coordinates))

    @classmethod
    def heisenberg(cls, a: int, b: int, c: int) -> GroupElement:
        return cls("heisenberg", (a, b, c))

    @classmethod
    def free2(cls, *letters: tuple[int, int]) -> GroupElement:
        return cls("free2", tuple(letters))

    @classmethod
    def identity(cls, kind: Kind, dimension: int = 1) -> GroupElement:
        if kind == "zd":
            return cls("zd", (0,) * dimension)
        if kind == "heisenberg":
            return cls("heisenberg", (0, 0, 0))
        return cls(kind, ())

    @property
    def dimension(self) -> int:
        return len(self.normal_form) if self.kind == "zd" else 0

    def is_identity(self) -> bool:
        return self == GroupElement.identity(self.kind, max(self.dimension, 1))

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def __str__(self) -> str:
        if self.kind == "free2":
            if not self.normal_form:
                return "e"
            return " ".join(
                f"{self.free_generator_names[g]}^{e}" for g, e in self.normal_form
            )
        return f"({','.join(str(x) for x in self.normal_form)})"


def _reduce(letters: typing.Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    stack: list[tuple[int, int]] = []
    for generator, exponent in letters:
        if stack and stack[-1][0] == generator:
            exponent += stack.pop()[1]
        if exponent:
            stack.append((generator, exponent))
    return tuple(stack)


def multiply(x: GroupElement, y: GroupElement) -> GroupElement:
    """Exact product xy in normal form.

    Args:
        x (GroupElement): Left factor.
        y (GroupElement): Right factor.

    Raises:
        UsageError: Factors belong to different groups.

    Returns:
        GroupElement: Product.
    """
    if x.kind != y.kind or x.dimension != y.dimension:
        raise UsageError(
            f"Cannot multiply elements of different groups: {x.kind}{x.dimension or ''} and {y.kind}{y.dimension or ''}."
        )
    if x.kind == "zd":
        return GroupElement("zd", tuple(a + b for a, b in zip(x.normal_form, y.normal_form)))
    if x.kind == "heisenberg":
        a1, b1, c1 = x.normal_form
        a2, b2, c2 = y.normal_form
        return GroupElement("heisenberg", (a1 + a2, b1 + b2, a1 * b2 + c1 + c2))
    return GroupElement("free2", _reduce(x.normal_form + y.normal_form))


def inverse(x: GroupElement) -> GroupElement:
    if x.kind == "zd":
        return GroupElement("zd", tuple(-a for a in x.normal_form))
    if x.kind == "heisenberg":
        a, b, c = x.normal_form
        return GroupElement("heisenberg", (-a, -b, a * b - c))
    return GroupElement(
        "free2", tuple((generator, -exponent) for generator, exponent in reversed(x.normal_form))
    )
