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

import typing

import immutabledict

if typing.TYPE_CHECKING:
    from weightedl1.littlewood import Verdict


class UsageError(ValueError):
    """Precondition of an operation is not met by its arguments."""


class OutOfRangeError(UsageError):
    """Element lies outside the computed ball."""

    def __init__(self, message: str, required_radius: int):
        super().__init__(message)
        self.required_radius = required_radius


class DomainError(ValueError):
    """Mathematical domain error, e.g. q(0) or a divergent series."""


class NoBoundError(DomainError):
    """No bound exists under the available theorems. Carries the verdict."""

    def __init__(self, message: str, verdict: Verdict):
        super().__init__(message)
        self.verdict = verdict


class RigorError(DomainError):
    """Rigorous output requested but an enclosure is not rigorous."""


class ResourceCapError(RuntimeError):
    """Configured size cap exceeded."""

    def __init__(self, message: str, projected_size: int | float):
        super().__init__(message)
        self.projected_size = projected_size


EXIT_SUCCESS = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_INCONCLUSIVE = 4

exit_codes: immutabledict.immutabledict[type[Exception], int] = (
    immutabledict.immutabledict(
        {
            UsageError: EXIT_USAGE,
            DomainError: EXIT_USAGE,
            OverflowError: EXIT_USAGE,
            ResourceCapError: EXIT_RESOURCE,
        }
    )
)


def exit_code_for(error: Exception) -> int:
    """Exit code for an exception raised by a command.

    Args:
        error (Exception): Raised exception.

    Raises:
        Exception: `error` itself, if it has no exit code.

    Returns:
        int: Process exit code.
    """
    for error_type, code in exit_codes.items():
        if isinstance(error, error_type):
            return code
    raise error
