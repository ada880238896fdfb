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

import json

import pytest

from weightedl1.cli import load_config, main, parse_args
from weightedl1.config import CapsSection, ExperimentConfig, GroupSection
from weightedl1.ledger import ResultRecord
from weightedl1.littlewood import DEFAULT_KG
from weightedl1.weights import WeightSpec


class TestCli:
    @pytest.fixture(autouse=True)
    def inject_fixtures(self, request, mocker):
        self.mocker = mocker
        _ = request

    def mock_outputs(self):
        self.mocker.patch("pathlib.Path.mkdir")
        self.mocker.patch("weightedl1.config.open", self.mocker.mock_open())
        return self.mocker.patch("weightedl1.cli.Ledger")

    def test_parse_args(self):
        args = parse_args(["--kg", "1.5", "--seed", "3", "--json", "bound"])
        assert args.command == "bound"
        assert args.kg == 1.5
        assert args.seed == 3
        assert args.json
        assert not args.rigorous

        for command in ("growth", "bound", "weight-check", "vn", "free-group"):
            assert parse_args([command]).command == command

        with pytest.raises(SystemExit):
            parse_args([])
        with pytest.raises(SystemExit):
            parse_args(["route"])
        with pytest.raises(SystemExit):
            parse_args(["--config", "not_real_config_path.toml", "bound"])
        with pytest.raises(SystemExit):
            parse_args(["--kg", "0", "bound"])

    def test_load_config(self):
        config = load_config(parse_args(["--out", "elsewhere", "--rigorous", "vn"]))
        assert config.output_dir == "elsewhere"
        assert config.rigorous
        assert config.kg == DEFAULT_KG
        assert load_config(parse_args(["vn"])) == ExperimentConfig()

    def test_main_bound(self, capsys):
        mocked_ledger = self.mock_outputs()
        assert main(["bound"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "InjectiveAlgebra"
        mocked_ledger.return_value.append.assert_called_once()

    def test_main_json_record(self, capsys):
        self.mock_outputs()
        assert main(["--json", "--kg", "1.5", "bound"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["command"] == "bound"
        assert record["payload"]["kg"] == 1.5

    def test_main_usage_error(self, capsys):
        mocked_ledger = self.mock_outputs()
        self.mocker.patch(
            "weightedl1.cli.load_config",
            return_value=ExperimentConfig(weight=WeightSpec.polynomial(0.25)),
        )
        assert main(["vn"]) == 2
        assert "injective algebra" in capsys.readouterr().err
        mocked_ledger.assert_not_called()

    def test_main_resource_cap(self):
        self.mock_outputs()
        self.mocker.patch(
            "weightedl1.cli.load_config",
            return_value=ExperimentConfig(
                group=GroupSection("z", 3), caps=CapsSection(ball_elements=100)
            ),
        )
        assert main(["growth"]) == 3

    def test_main_inconclusive(self):
        self.mock_outputs()
        record = ResultRecord.now(
            ExperimentConfig().config_hash(),
            "free-group",
            {"hankel": [{"status": "inconclusive"}]},
        )
        self.mocker.patch("weightedl1.cli.commands", {"free-group": lambda config: record})
        assert main(["free-group"]) == 4

    def test_main_small_alpha_bound(self, capsys):
        self.mock_outputs()
        self.mocker.patch(
            "weightedl1.cli.load_config",
            return_value=ExperimentConfig(weight=WeightSpec.exponential(0.01, 24)),
        )
        assert main(["bound"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "InjectiveAlgebra"
        assert payload["bound"]["log_bound"] > 7704

    def test_main_overflow(self, capsys):
        mocked_ledger = self.mock_outputs()
        self.mocker.patch(
            "weightedl1.cli.commands",
            {"bound": self.mocker.Mock(side_effect=OverflowError("math range error"))},
        )
        assert main(["bound"]) == 2
        assert "math range error" in capsys.readouterr().err
        mocked_ledger.assert_not_called()

    def test_main_unexpected_error(self):
        self.mock_outputs()
        self.mocker.patch(
            "weightedl1.cli.commands",
            {"growth": self.mocker.Mock(side_effect=KeyError("boom"))},
        )
        with pytest.raises(KeyError):
            main(["growth"])
