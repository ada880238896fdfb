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

import math

import pytest

from weightedl1.errors import DomainError, ResourceCapError, UsageError
from weightedl1.free_group.alternating import (
    alternating_index,
    divergence_csv,
    divergence_sequence,
    length_additivity_check,
    omega_In_matrix,
    omega_lower_bound_check,
    omega_oracle_deviation,
    s_sum,
    s_sum_direct,
    sum_histogram,
    tensor_power_check,
)
from weightedl1.groups.element import GroupElement
from weightedl1.littlewood import DEFAULT_KG


class TestAlternatingIndex:
    def test_words(self):
        index = alternating_index(2, 2)
        assert len(index) == 4
        assert index.words[0] == GroupElement.free2((1, 1), (2, 1))
        assert index.words[-1] == GroupElement.free2((1, 2), (2, 2))
        assert index.lengths.tolist() == [2, 3, 3, 4]

    def test_invalid(self):
        with pytest.raises(UsageError, match="even d"):
            alternating_index(3, 2)
        with pytest.raises(UsageError, match="n >= 1"):
            alternating_index(2, 0)
        with pytest.raises(ResourceCapError, match="above the cap"):
            alternating_index(2, 100)

    @pytest.mark.parametrize("d, n", [(2, 4), (4, 2)])
    def test_length_additivity(self, d, n):
        report = length_additivity_check(alternating_index(d, n))
        assert report.passed
        assert report.pairs_checked == n ** (2 * d)

    def test_omega_oracle(self):
        assert omega_oracle_deviation(2, 4, 0.5, samples=300, seed=1) < 1e-12
        assert omega_oracle_deviation(4, 2, 1.5, samples=300, seed=2) < 1e-12

    def test_omega_matrix(self):
        matrix = omega_In_matrix(2, 1, 1.0)
        assert matrix.shape == (1, 1)
        assert matrix[0, 0] == pytest.approx(5 / 9)


class TestSums:
    def test_s_sum(self):
        assert s_sum(2, 2, 0.5) == pytest.approx(31 / 30, rel=1e-14)
        assert s_sum(2, 1, 1.0) == pytest.approx(1 / 9)
        assert sum_histogram(2, 2).tolist() == [0, 0, 1, 2, 1]

    @pytest.mark.parametrize("d, n, beta", [(2, 5, 0.5), (4, 3, 0.7), (6, 2, 1.3)])
    def test_s_sum_direct(self, d, n, beta):
        assert s_sum(d, n, beta) == pytest.approx(s_sum_direct(d, n, beta), rel=1e-12)

    def test_s_sum_invalid(self):
        with pytest.raises(UsageError, match="d >= 1 and n >= 1"):
            s_sum(0, 2, 0.5)


class TestDivergence:
    def test_divergence_sequence(self):
        rows = divergence_sequence(2, 0.5, DEFAULT_KG, 10)
        assert [n for n, _, _ in rows] == [2**k for k in range(1, 11)]
        lower_bounds = [l_n for _, _, l_n in rows]
        assert all(a < b for a, b in zip(lower_bounds, lower_bounds[1:]))
        assert lower_bounds[-1] / lower_bounds[0] > 10
        n, s_n, l_n = rows[0]
        assert l_n == pytest.approx(math.sqrt(s_n) / (DEFAULT_KG * 2 * math.sqrt(2)))

    def test_divergence_invalid(self):
        with pytest.raises(DomainError, match="2 beta < d"):
            divergence_sequence(2, 1.0, DEFAULT_KG, 4)
        with pytest.raises(UsageError, match="even d"):
            divergence_sequence(3, 0.5, DEFAULT_KG, 4)

    def test_divergence_csv(self):
        csv_text = divergence_csv(divergence_sequence(2, 0.5, DEFAULT_KG, 2))
        lines = csv_text.splitlines()
        assert lines[0] == "n,S_n,L_n"
        assert lines[1].startswith("2,")
        assert len(lines) == 3

    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_omega_lower_bound(self, n):
        certificate = omega_lower_bound_check(2, n, 0.5)
        assert certificate.passed
        assert certificate.relation == ">="

    def test_omega_lower_bound_single_word(self):
        certificate = omega_lower_bound_check(2, 1, 1.0)
        assert certificate.claimed_bound == pytest.approx(1 / 6)
        assert certificate.norm == pytest.approx(5 / 9)
        assert certificate.passed


class TestTensorPower:
    def test_materialized(self):
        report = tensor_power_check(2, 2)
        assert report.n == 4
        assert report.schur_identity
        assert report.tensor_norm == pytest.approx(report.factor_norm**2, rel=1e-10)
        assert report.within_slack_bound
        assert report.to_dict()["within_slack_bound"]

    def test_not_materialized(self):
        report = tensor_power_check(4, 4, materialize_cap=4096)
        assert report.schur_identity is None
        assert report.tensor_norm is None
        assert report.within_slack_bound
        assert report.slack_bound == pytest.approx((2 * math.sqrt(16)) ** 4)
