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

import pytest

from weightedl1.errors import OutOfRangeError, ResourceCapError
from weightedl1.groups.balls import bfs_balls, word_length
from weightedl1.groups.descriptor import FreeGroup, HeisenbergGroup, IntegerLattice
from weightedl1.groups.element import GroupElement, multiply


class TestBalls:
    def setup_method(self):
        self.h3_table = bfs_balls(HeisenbergGroup(), 4)
        self.f2_table = bfs_balls(FreeGroup(), 3)

    def test_integer_lattice_growth(self):
        table = bfs_balls(IntegerLattice(2), 40)
        assert table.cumulative == [(2 * n + 1) ** 2 for n in range(41)]
        assert table.sphere_sizes[0] == 1

    def test_free_group_growth(self):
        assert self.f2_table.cumulative == [1, 5, 17, 53]
        assert self.f2_table.sphere_sizes == [1, 4, 12, 36]

    def test_heisenberg_first_sphere(self):
        assert self.h3_table.sphere_sizes[:2] == [1, 6]
        assert self.h3_table.cumulative[-1] == len(self.h3_table.lengths)

    def test_ball(self):
        ball = self.f2_table.ball(1)
        assert ball[0] == GroupElement.identity("free2")
        assert set(ball[1:]) == set(FreeGroup().non_identity_generators)
        assert len(self.f2_table.ball()) == 53
        assert GroupElement.free2((1, 3)) in self.f2_table
        assert GroupElement.free2((1, 4)) not in self.f2_table

    def test_geodesic(self):
        for x in self.h3_table.ball():
            word = self.h3_table.geodesic(x)
            assert len(word) == self.h3_table.lengths[x]
            product = HeisenbergGroup().identity
            for generator in word:
                product = multiply(product, generator)
            assert product == x
            path = self.h3_table.path_from_identity(x)
            assert path[0] == HeisenbergGroup().identity and path[-1] == x

    def test_geodesic_out_of_range(self):
        with pytest.raises(OutOfRangeError, match="outside the ball"):
            self.f2_table.geodesic(GroupElement.free2((2, 9)))

    def test_invalid_radius(self):
        with pytest.raises(ValueError, match="nonnegative integer"):
            bfs_balls(IntegerLattice(1), -1)

    def test_resource_cap(self):
        with pytest.raises(ResourceCapError, match="above the cap") as excinfo:
            bfs_balls(IntegerLattice(3), 10, cap=1000)
        assert excinfo.value.projected_size == 21**3

    def test_radius_zero(self):
        table = bfs_balls(FreeGroup(), 0)
        assert table.cumulative == [1]
        assert table.growth_csv() == "n,sphere_size,cumulative\n0,1,1\n"

    @pytest.mark.parametrize(
        "x, expected",
        [
            (GroupElement.heisenberg(0, 0, 0), 0),
            (GroupElement.heisenberg(1, 0, 0), 1),
            (GroupElement.heisenberg(0, 0, -1), 1),
            (GroupElement.heisenberg(1, 1, 0), 2),
            (GroupElement.heisenberg(1, 1, 1), 2),
            (GroupElement.heisenberg(0, 0, 2), 2),
            (GroupElement.heisenberg(2, 0, 0), 2),
        ],
    )
    def test_word_length_heisenberg(self, x, expected):
        assert word_length(x, HeisenbergGroup(), self.h3_table) == expected

    def test_word_length_out_of_range(self):
        with pytest.raises(OutOfRangeError, match="radius at least 9") as excinfo:
            word_length(GroupElement.heisenberg(9, 0, 0), HeisenbergGroup())
        assert excinfo.value.required_radius == 9
        with pytest.raises(OutOfRangeError) as excinfo:
            word_length(GroupElement.heisenberg(3, 2, 0), HeisenbergGroup(), self.h3_table)
        assert excinfo.value.required_radius == 5
        assert word_length(HeisenbergGroup().identity, HeisenbergGroup()) == 0

    def test_word_length_closed_forms(self):
        assert word_length(GroupElement.zd(4, -6, 2), IntegerLattice(3)) == 6
        assert word_length(GroupElement.free2((2, -2), (1, 5)), FreeGroup()) == 7

    def test_csv(self):
        table = bfs_balls(IntegerLattice(1), 2)
        assert table.growth_csv() == "n,sphere_size,cumulative\n0,1,1\n1,2,3\n2,2,5\n"
        assert table.elements_csv() == "n,element\n0,(0)\n1,(-1)\n1,(1)\n2,(-2)\n2,(2)\n"

    def test_to_dict(self):
        data = self.f2_table.to_dict()
        assert data["group"] == "F2"
        assert data["radius"] == 3
        assert data["generators"][0] == "e"
        assert data["cumulative"] == [1, 5, 17, 53]
