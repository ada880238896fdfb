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

from weightedl1.errors import UsageError
from weightedl1.groups.balls import bfs_balls
from weightedl1.groups.descriptor import HeisenbergGroup, IntegerLattice
from weightedl1.groups.growth import bass_guivarch, growth_order_fit


class TestGrowth:
    def test_integer_lattice_fit(self):
        fit = growth_order_fit(bfs_balls(IntegerLattice(2), 40))
        assert 1.9 <= fit.exponent <= 2.1
        assert (fit.n_min, fit.n_max) == (20, 40)

        fit = growth_order_fit(bfs_balls(IntegerLattice(1), 60))
        assert 0.9 <= fit.exponent <= 1.1

    def test_heisenberg_fit(self):
        fit = growth_order_fit(bfs_balls(HeisenbergGroup(), 15))
        assert 3.4 <= fit.exponent <= 4.4

    def test_explicit_n_min(self):
        fit = growth_order_fit(bfs_balls(IntegerLattice(1), 10), n_min=2)
        assert fit.n_min == 2
        assert fit.to_dict()["n_max"] == 10

    def test_radius_too_small(self):
        with pytest.raises(UsageError, match="radius at least 7"):
            growth_order_fit(bfs_balls(IntegerLattice(1), 5), n_min=3)
        with pytest.raises(UsageError, match="n_min must be at least 1"):
            growth_order_fit(bfs_balls(IntegerLattice(1), 5), n_min=0)

    @pytest.mark.parametrize(
        "ranks, expected",
        [
            ([(1, 3)], 3),
            ([(1, 2), (2, 1)], 4),
            ([(1, 2), (2, 1), (3, 2)], 10),
            ([], 0),
        ],
    )
    def test_bass_guivarch(self, ranks, expected):
        assert bass_guivarch(ranks) == expected

    def test_bass_guivarch_invalid(self):
        with pytest.raises(UsageError, match="distinct k"):
            bass_guivarch([(1, 2), (1, 1)])
        with pytest.raises(UsageError, match="positive k"):
            bass_guivarch([(0, 2)])
