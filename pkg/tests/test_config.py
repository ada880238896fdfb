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

import pathlib

import pytest

from weightedl1.config import (
    ExperimentConfig,
    FreeGroupSection,
    GroupSection,
    RadiiSection,
    SweepSection,
)
from weightedl1.errors import UsageError
from weightedl1.groups.descriptor import HeisenbergGroup, IntegerLattice
from weightedl1.weights import WeightSpec


class TestConfig:
    @pytest.fixture(autouse=True)
    def inject_fixtures(self, request, mocker):
        self.mocker = mocker
        _ = request

    def setup_method(self):
        self.default = ExperimentConfig()
        self.h3 = ExperimentConfig(
            group=GroupSection("heisenberg"),
            weight=WeightSpec.polynomial(3),
            radii=RadiiSection(ball=6, zeta_cutoff=6, growth_n_min=2),
            sweep=SweepSection(beta=(2.5, 3.0), alpha=(0.5,), C=(1.0, 24.0)),
            free_group=FreeGroupSection(lower_bound_n=(2, 4)),
            seed=7,
        )
        self.z1_toml_str = (
            'kg = 1.5\nseed = 3\noutput_dir = "out"\n\n'
            '[group]\nkind = "z"\ndimension = 1\n\n'
            '[weight]\nkind = "exponential"\nalpha = 0.5\nC = 24\n\n'
            "[sweep]\nbeta = [1, 1.5]\n"
        )

    def test_defaults(self):
        assert self.default.descriptor == IntegerLattice(1)
        assert self.default.weight == WeightSpec.polynomial(1)
        assert self.h3.descriptor == HeisenbergGroup()

    def test_from_toml_string(self):
        config = ExperimentConfig.from_toml_string(self.z1_toml_str)
        assert config.kg == 1.5
        assert config.seed == 3
        assert config.output_dir == "out"
        assert config.weight == WeightSpec.exponential(0.5, 24)
        assert config.sweep.beta == (1.0, 1.5)
        assert config.radii == RadiiSection()

    @pytest.mark.parametrize("config_name", ["default", "h3"])
    def test_round_trip(self, config_name):
        config = getattr(self, config_name)
        assert ExperimentConfig.from_toml_string(config.to_toml_string()) == config

    def test_config_hash(self):
        assert self.default.config_hash() == ExperimentConfig().config_hash()
        assert self.default.config_hash() != self.h3.config_hash()
        assert len(self.default.config_hash()) == 64
        assert (
            self.default.with_overrides(seed=1).config_hash()
            != self.default.config_hash()
        )

    def test_with_overrides(self):
        config = self.default.with_overrides(kg=2.0, output_dir="elsewhere")
        assert config.kg == 2.0
        assert config.output_dir == "elsewhere"
        assert config.seed == self.default.seed
        assert self.default.with_overrides() == self.default
        assert self.default.with_overrides(rigorous=True).rigorous

    @pytest.mark.parametrize(
        "toml_str, message",
        [
            ("seeed = 1\n", "unknown key 'seeed'"),
            ("[group]\nrank = 2\n", "unknown key 'group.rank'"),
            ("group = 1\n", "'group' must be a table"),
            ("seed = 1.5\n", "'seed' must be an integer"),
            ("kg = true\n", "'kg' must be a number"),
            ("rigorous = 1\n", "'rigorous' must be a boolean"),
            ("output_dir = 1\n", "'output_dir' must be a string"),
            ("[sweep]\nbeta = 1\n", "'sweep.beta' must be an array"),
            ("[weight]\nbeta = 1\n", "'weight.kind' is required"),
            ("kg = -1\n", "'kg' must be positive"),
            ("[radii]\nball = -1\n", "radii must be nonnegative"),
            ("[group]\nkind = \"sl2\"\n", "Unknown group kind"),
            ("[weight]\nkind = \"polynomial\"\nbeta = -1\n", "beta >= 0"),
            ("seed = \n", "Invalid config file"),
        ],
    )
    def test_invalid(self, toml_str, message):
        with pytest.raises(UsageError, match=message):
            ExperimentConfig.from_toml_string(toml_str)

    def test_from_file(self):
        self.mocker.patch(
            "weightedl1.config.open",
            self.mocker.mock_open(read_data=self.z1_toml_str.encode()),
        )
        config = ExperimentConfig.from_file(pathlib.Path("z1.toml"))
        assert config.weight == WeightSpec.exponential(0.5, 24)

    def test_compare_toml(self):
        original = self.default.to_toml_string().splitlines()
        updated = self.default.with_overrides(seed=9).to_toml_string().splitlines()
        compared = ExperimentConfig.compare_toml(original, updated)
        assert "# seed = 42\n" in compared
        assert "seed = 9 # NEW\n" in compared
        assert ExperimentConfig.compare_toml(original, original) == "\n".join(original) + "\n"

    def test_update_config_file(self):
        config_file_path = pathlib.Path("config_test.toml")

        mocked_open = self.mocker.patch(
            "weightedl1.config.open", self.mocker.mock_open()
        )  # Overwrite existing file.
        self.h3.update_config_file(config_file_path)
        assert mocked_open.call_count == 2

        mocked_open = self.mocker.patch(
            "weightedl1.config.open",
            side_effect=[OSError, self.mocker.mock_open().return_value],
        )  # Create new file if it does not exist.
        self.h3.update_config_file(config_file_path)
        assert mocked_open.call_count == 2
