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
import datetime
import json
import pathlib

from weightedl1.logger import logger

ARTIFACT_VERSION = "0.0.1"
LEDGER_FILENAME = "ledger.jsonl"


@dataclasses.dataclass(frozen=True)
class ResultRecord:
    timestamp: str
    config_hash: str
    command: str
    payload: dict
    artifact_version: str = ARTIFACT_VERSION

    @classmethod
    def now(cls, config_hash: str, command: str, payload: dict) -> ResultRecord:
        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat(
            timespec="seconds"
        )
        return cls(timestamp, config_hash, command, payload)

    def payload_json(self) -> str:
        return json.dumps(self.payload, sort_keys=True)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)


class Ledger:
    """Append-only file of ResultRecords, one JSON object per line."""

    def __init__(self, output_dir: pathlib.Path | str):
        self.path = pathlib.Path(output_dir) / LEDGER_FILENAME

    def append(self, record: ResultRecord) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as f:
            f.write(record.to_json() + "\n")
        logger.info("Appended %s record to %s", record.command, self.path)

    def records(self) -> list[ResultRecord]:
        try:
            with open(self.path, "r") as f:
                lines = f.read().splitlines()
        except OSError:
            return []
        return [ResultRecord(**json.loads(line)) for line in lines if line]
