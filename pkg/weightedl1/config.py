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
import difflib
import hashlib
import json
import pathlib
import tomllib
import typing

import tomlkit

from weightedl1.errors import UsageError
from weightedl1.groups.balls import DEFAULT_BALL_CAP
from weightedl1.groups.descriptor import GroupDescriptor
from weightedl1.littlewood import DEFAULT_KG, DEFAULT_MATRIX_CAP
from weightedl1.von_neumann import DEFAULT_GRID_PER_DIM, DEFAULT_INFLATION
from weightedl1.weights import WeightSpec


@dataclasses.dataclass(frozen=True)
class GroupSection:
    kind: str = "z"
    dimension: int = 1

    def descriptor(self) -> GroupDescriptor:
        return GroupDescriptor.from_kind(self.kind, self.dimension)


@dataclasses.dataclass(frozen=True)
class RadiiSection:
    ball: int = 10
    zeta_cutoff: int = 0
    growth_n_min: int | None = None
    omega: int = 5


@dataclasses.dataclass(frozen=True)
class SweepSection:
    beta: tuple[float, ...] = ()
    alpha: tuple[float, ...] = ()
    C: tuple[float, ...] = ()


@dataclasses.dataclass(frozen=True)
class CapsSection:
    ball_elements: int = DEFAULT_BALL_CAP
    pair_count: int = 1_000_000
    matrix_entries: int = DEFAULT_MATRIX_CAP


@dataclasses.dataclass(frozen=True)
class VNSection:
    trials: int = 500
    max_vars: int = 3
    max_degree: int = 3
    support_size: int = 3
    grid_per_dim: int = DEFAULT_GRID_PER_DIM
    inflation: float = DEFAULT_INFLATION


@dataclasses.dataclass(frozen=True)
class FreeGroupSection:
    d: int = 2
    beta: float = 0.5
    k_max: int = 10
    rs_k_max: int = 10
    rs_samples: int = 256
    hankel_k_max: int = 8
    lower_bound_n: tuple[int, ...] = (2, 4, 8, 16)
    tensor_k: int = 3


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Experiment parameters. Round-trips losslessly through TOML."""

    group: GroupSection = GroupSection()
    weight: WeightSpec = WeightSpec.polynomial(1.0)
    radii: RadiiSection = RadiiSection()
    sweep: SweepSection = SweepSection()
    caps: CapsSection = CapsSection()
    vn: VNSection = VNSection()
    free_group: FreeGroupSection = FreeGroupSection()
    kg: float = DEFAULT_KG
    seed: int = 42
    output_dir: str = "results"
    export_elements: bool = False
    rigorous: bool = False

    sections: typing.ClassVar[tuple[str, ...]] = (
        "group",
        "weight",
        "radii",
        "sweep",
        "caps",
        "vn",
        "free_group",
    )

    def __post_init__(self):
        self.group.descriptor()
        if self.kg <= 0:
            raise UsageError("Invalid config file: 'kg' must be positive.")
        if self.radii.ball < 0 or self.radii.zeta_cutoff < 0 or self.radii.omega < 0:
            raise UsageError("Invalid config file: radii must be nonnegative.")
        if self.vn.trials < 0:
            raise UsageError("Invalid config file: 'vn.trials' must be nonnegative.")

    @property
    def descriptor(self) -> GroupDescriptor:
        return self.group.descriptor()

    def with_overrides(
        self,
        kg: float | None = None,
        seed: int | None = None,
        output_dir: str | None = None,
        rigorous: bool | None = None,
    ) -> ExperimentConfig:
        overrides = {
            "kg": kg,
            "seed": seed,
            "output_dir": output_dir,
            "rigorous": rigorous,
        }
        return dataclasses.replace(
            self, **{k: v for k, v in overrides.items() if v is not None}
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def make_document(self) -> tomlkit.TOMLDocument:
        """Config as a TOMLDocument: scalar settings first, then one table per section."""
        document: tomlkit.TOMLDocument = tomlkit.TOMLDocument()
        values = self.to_dict()
        for key, value in values.items():
            if key not in self.sections:
                document[key] = value
        for section in self.sections:
            table = tomlkit.table()
            for key, value in values[section].items():
                if value is None:
                    continue  # TOML has no null.
                table[key] = list(value) if isinstance(value, tuple) else value
            document[section] = table
        return document

    def to_toml_string(self) -> str:
        return tomlkit.dumps(self.make_document())

    @classmethod
    def __parse_section(cls, section_cls: type, name: str, values: typing.Any):
        if not isinstance(values, dict):
            raise UsageError(f"Invalid config file: '{name}' must be a table.")
        fields = {f.name: f for f in dataclasses.fields(section_cls)}
        defaults = section_cls() if section_cls is not WeightSpec else None
        kwargs = dict()
        for key, value in values.items():
            if key not in fields:
                raise UsageError(f"Invalid config file: unknown key '{name}.{key}'.")
            default = (
                getattr(defaults, key)
                if defaults is not None
                else fields[key].default
            )
            kwargs[key] = cls.__coerce(f"{name}.{key}", value, default)
        return section_cls(**kwargs)

    @classmethod
    def __coerce(cls, key: str, value: typing.Any, default: typing.Any):
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise UsageError(f"Invalid config file: '{key}' must be a boolean.")
            return value
        if isinstance(default, tuple):
            if not isinstance(value, list):
                raise UsageError(f"Invalid config file: '{key}' must be an array.")
            element_default = default[0] if default else 0.0
            return tuple(cls.__coerce(key, v, element_default) for v in value)
        if isinstance(default, float):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise UsageError(f"Invalid config file: '{key}' must be a number.")
            return float(value)
        if isinstance(default, int) or default is None:
            if isinstance(value, bool) or not isinstance(value, int):
                raise UsageError(f"Invalid config file: '{key}' must be an integer.")
            return value
        if not isinstance(value, str):
            raise UsageError(f"Invalid config file: '{key}' must be a string.")
        return value

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        section_types = {
            f.name: f.default.__class__
            for f in dataclasses.fields(cls)
            if f.name in cls.sections
        }
        if isinstance(data.get("weight"), dict) and "kind" not in data["weight"]:
            raise UsageError("Invalid config file: 'weight.kind' is required.")
        defaults = cls()
        kwargs = dict()
        for key, value in data.items():
            if key in section_types:
                kwargs[key] = cls.__parse_section(section_types[key], key, value)
            elif key in {f.name for f in dataclasses.fields(cls)}:
                kwargs[key] = cls.__coerce(key, value, getattr(defaults, key))
            else:
                raise UsageError(f"Invalid config file: unknown key '{key}'.")
        return cls(**kwargs)

    @classmethod
    def from_toml_string(cls, text: str) -> ExperimentConfig:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise UsageError(f"Invalid config file: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def from_file(cls, path: pathlib.Path | str) -> ExperimentConfig:
        with open(path, "rb") as f:
            try:
                data = tomllib.load(f)
            except tomllib.TOMLDecodeError as e:
                raise UsageError(f"Invalid config file: {e}") from e
        return cls.from_dict(data)

    def update_config_file(self, path: pathlib.Path) -> None:
        """Write the config to `path`. If the file already has content, changed lines are
        commented in place: removed lines commented out, new lines marked NEW.
        """
        try:
            with open(path, "r") as f:
                original = f.read().splitlines()
        except OSError:
            original = None
        updated = self.to_toml_string()
        with open(path, "w") as f:
            if original is None or all(not line for line in original):
                f.write(updated)
            else:
                f.write(self.compare_toml(original, updated.splitlines()))

    @classmethod
    def compare_toml(cls, original: list[str], updated: list[str]) -> str:
        delta = difflib.Differ().compare(original, updated)
        lines: list[str] = []
        for line in delta:
            if line.startswith("  "):
                lines.append(line[2:])
            elif line.startswith("- ") and line.strip() != "-":
                lines.append(f"# {line[2:]}")
            elif line.startswith("+ "):
                lines.append(f"{line[2:]} # NEW" if line.strip() != "+" else "")
        return "\n".join(lines) + "\n"
