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

import numpy as np
import pytest

from weightedl1.errors import UsageError
from weightedl1.groups.descriptor import FreeGroup, HeisenbergGroup, IntegerLattice
from weightedl1.groups.element import GroupElement, inverse, multiply


class TestGroupElement:
    @pytest.mark.parametrize(
        "x, y, expected",
        [
            (GroupElement.zd(1, -2), GroupElement.zd(3, 5), GroupElement.zd(4, 3)),
            (
                GroupElement.heisenberg(1, 0, 0),
                GroupElement.heisenberg(0, 1, 0),
                GroupElement.heisenberg(1, 1, 1),
            ),
            (
                GroupElement.heisenberg(0, 1, 0),
                GroupElement.heisenberg(1, 0, 0),
                GroupElement.heisenberg(1, 1, 0),
            ),
            (
                GroupElement.free2((1, 2), (2, 1)),
                GroupElement.free2((2, -1), (1, -1)),
                GroupElement.free2((1, 1)),
            ),
            (
                GroupElement.free2((1, 1), (2, 1)),
                GroupElement.free2((2, -1), (1, -1)),
                GroupElement.identity("free2"),
            ),
        ],
    )
    def test_multiply(self, x, y, expected):
        assert multiply(x, y) == expected
        assert x * y == expected

    @pytest.mark.parametrize(
        "x",
        [
            GroupElement.zd(3, -7, 0),
            GroupElement.heisenberg(2, -3, 5),
            GroupElement.free2((1, 3), (2, -2), (1, 1)),
        ],
    )
    def test_inverse(self, x):
        dimension = max(x.dimension, 1)
        assert multiply(x, inverse(x)) == GroupElement.identity(x.kind, dimension)
        assert multiply(inverse(x), x) == GroupElement.identity(x.kind, dimension)

    def test_heisenberg_inverse(self):
        assert inverse(GroupElement.heisenberg(2, 3, 1)) == GroupElement.heisenberg(
            -2, -3, 5
        )

    def test_heisenberg_associative(self):
        x = GroupElement.heisenberg(1, 2, 3)
        y = GroupElement.heisenberg(-4, 1, 0)
        z = GroupElement.heisenberg(2, -5, 7)
        assert (x * y) * z == x * (y * z)

    @pytest.mark.parametrize(
        "desc",
        [IntegerLattice(1), IntegerLattice(3), HeisenbergGroup(), FreeGroup()],
    )
    def test_associative_random_triples(self, desc):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            x, y, z = (desc.random_element(rng, 8) for _ in range(3))
            assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
            assert multiply(x, inverse(x)) == desc.identity

    @pytest.mark.parametrize(
        "kind, normal_form, message",
        [
            ("zd", (), "non-empty integer vector"),
            ("zd", (1.5,), "non-empty integer vector"),
            ("heisenberg", (1, 2), "integer triple"),
            ("free2", ((1, 1), (1, 2)), "not reduced"),
            ("free2", ((1, 0),), "nonzero"),
            ("free2", ((3, 1),), "must be 1 or 2"),
            ("sl2", (), "Unknown group kind"),
        ],
    )
    def test_invalid_elements(self, kind, normal_form, message):
        with pytest.raises(UsageError, match=message):
            GroupElement(kind, normal_form)

    def test_multiply_mismatch(self):
        with pytest.raises(UsageError, match="different groups"):
            multiply(GroupElement.zd(1), GroupElement.zd(1, 1))
        with pytest.raises(UsageError, match="different groups"):
            multiply(GroupElement.zd(1), GroupElement.identity("free2"))

    def test_str(self):
        assert str(GroupElement.zd(3, -2)) == "(3,-2)"
        assert str(GroupElement.heisenberg(1, 0, -1)) == "(1,0,-1)"
        assert str(GroupElement.free2((1, 1), (2, 2))) == "g1^1 g2^2"
        assert str(GroupElement.identity("free2")) == "e"

    def test_is_identity(self):
        assert GroupElement.identity("zd", 3).is_identity()
        assert GroupElement.identity("heisenberg").is_identity()
        assert not GroupElement.zd(0, 1).is_identity()
