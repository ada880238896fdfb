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

import itertools
import math
import pathlib
import typing

import immutabledict

from weightedl1.config import ExperimentConfig
from weightedl1.errors import RigorError, UsageError
from weightedl1.free_group.alternating import (
    alternating_index,
    divergence_csv,
    divergence_sequence,
    length_additivity_check,
    omega_lower_bound_check,
    omega_oracle_deviation,
    tensor_power_check,
)
from weightedl1.free_group.rudin_shapiro import (
    flatness_check,
    hankel_certificate,
    rudin_shapiro,
)
from weightedl1.groups.balls import BallTable, bfs_balls
from weightedl1.groups.descriptor import GroupDescriptor
from weightedl1.groups.growth import growth_order_fit
from weightedl1.groups.metric import additivity_witness, verify_word_lengths
from weightedl1.ledger import ResultRecord
from weightedl1.littlewood import (
    Verdict,
    beta_selection,
    omega_matrix,
    operator_alg_verdict,
    verify_decomposition,
)
from weightedl1.logger import logger
from weightedl1.von_neumann import delta_from_bound, vn_stress_test
from weightedl1.weights import (
    WeightSpec,
    check_submultiplicative,
    k_threshold,
    log_k_threshold,
    m_constant,
    monotonicity_check,
)

ORACLE_ELEMENT_CAP = 100_000
ADDITIVITY_INDEX_CAP = 256
LEMMA_GRID_LENGTH = 100.0
LEMMA_GRID_STEP = 0.01


def _write_artifact(config: ExperimentConfig, filename: str, text: str) -> str:
    path = pathlib.Path(config.output_dir) / filename
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(text)
    logger.info("Wrote %s", path)
    return str(path)


def _has_closed_form(desc: GroupDescriptor) -> bool:
    return desc.closed_form_length(desc.identity) is not None


def _record(
    config: ExperimentConfig, command: str, payload: dict, rigor_flags: list[bool]
) -> ResultRecord:
    if config.rigorous and not all(rigor_flags):
        raise RigorError(
            f"{command}: a length zeta enclosure is not rigorous; rerun without --rigorous or supply a majorant."
        )
    payload = {
        **payload,
        "group": config.descriptor.name,
        "kg": config.kg,
        "rigor_flags": rigor_flags,
    }
    return ResultRecord.now(config.config_hash(), command, payload)


def has_inconclusive(payload: typing.Any) -> bool:
    """Whether any spectral certificate in the payload is inconclusive."""
    if isinstance(payload, dict):
        return payload.get("status") == "inconclusive" or any(
            has_inconclusive(v) for v in payload.values()
        )
    if isinstance(payload, list):
        return any(has_inconclusive(v) for v in payload)
    return False


def cmd_growth(config: ExperimentConfig) -> ResultRecord:
    """Ball growth: sphere sizes, growth-order fit and word-length oracle."""
    desc = config.descriptor
    table = bfs_balls(desc, config.radii.ball, config.caps.ball_elements)
    artifacts = [
        _write_artifact(config, f"growth_{desc.name}.csv", table.growth_csv())
    ]
    if config.export_elements:
        artifacts.append(
            _write_artifact(config, f"elements_{desc.name}.csv", table.elements_csv())
        )
    n_min = config.radii.growth_n_min or max(1, table.radius // 2)
    fit = growth_order_fit(table, n_min) if table.radius >= n_min + 4 else None
    oracle = (
        verify_word_lengths(table).to_dict()
        if len(table.lengths) <= ORACLE_ELEMENT_CAP
        else None
    )
    payload = {
        "ball": table.to_dict(),
        "fit": None if fit is None else fit.to_dict(),
        "declared_growth_order": desc.growth_order,
        "word_lengths": oracle,
        "artifacts": artifacts,
    }
    return _record(config, "growth", payload, [])


def _zeta_table(config: ExperimentConfig, desc: GroupDescriptor) -> BallTable | None:
    cutoff = config.radii.zeta_cutoff
    if cutoff > 0 and desc.sphere_size(0) is None:
        return bfs_balls(desc, cutoff, config.caps.ball_elements)
    return None


def _verdict_entry(verdict: Verdict, rigor_flags: list[bool]) -> dict:
    entry = verdict.to_dict()
    if verdict.bound is not None:
        rigor_flags.append(verdict.bound.rigorous)
        entry["vn_constants"] = delta_from_bound(
            verdict.bound.bound, verdict.bound
        ).to_dict()
    return entry


def cmd_bound(config: ExperimentConfig) -> ResultRecord:
    """‖m‖_ε bound, verdict and von Neumann δ for the configured weight and sweeps.

    Polynomial weights also get the Littlewood decomposition checked on ball(radii.omega).
    """
    desc = config.descriptor
    table = _zeta_table(config, desc)
    cutoff = config.radii.zeta_cutoff
    rigor_flags: list[bool] = []

    def verdict_for(w: WeightSpec) -> dict:
        return _verdict_entry(
            operator_alg_verdict(desc, w, config.kg, cutoff, table), rigor_flags
        )

    payload = {"weight": config.weight.to_dict(), **verdict_for(config.weight)}
    payload["sweep"] = [
        {"beta": beta, **verdict_for(WeightSpec.polynomial(beta))}
        for beta in config.sweep.beta
    ] + [
        {"alpha": alpha, "C": C, **verdict_for(WeightSpec.exponential(alpha, C))}
        for alpha, C in itertools.product(config.sweep.alpha, config.sweep.C)
    ]
    w = config.weight
    R = config.radii.omega
    if w.kind == "polynomial" and w.beta > 0 and R > 0:
        omega_table = bfs_balls(
            desc, R if _has_closed_form(desc) else 2 * R, config.caps.ball_elements
        )
        payload["decomposition"] = verify_decomposition(
            omega_matrix(w, omega_table, R, config.caps.matrix_entries), w.beta
        ).to_dict()
    return _record(config, "bound", payload, rigor_flags)


def _monotonicity_near_k(alpha: float, C: float, beta: float, K: float) -> dict | None:
    # Beyond float precision a grid of step LEMMA_GRID_STEP collapses to a point.
    if K + LEMMA_GRID_LENGTH == K:
        return None
    return monotonicity_check(
        alpha, C, beta, K + LEMMA_GRID_LENGTH, step=LEMMA_GRID_STEP
    ).to_dict()


def cmd_weight_check(config: ExperimentConfig) -> ResultRecord:
    """Submultiplicativity sweep, composite constant M, and the monotonicity of p and q over the sweep grid."""
    desc = config.descriptor
    w = config.weight
    R = config.radii.ball
    table = bfs_balls(
        desc, R if _has_closed_form(desc) else 2 * R, config.caps.ball_elements
    )
    payload: dict = {
        "weight": w.to_dict(),
        "submultiplicativity": check_submultiplicative(
            w, table, R, pair_cap=config.caps.pair_count, seed=config.seed
        ).to_dict(),
    }
    if w.kind == "composite":
        K = k_threshold(w.alpha, w.C, w.beta)
        payload["lemma"] = {
            "K": K,
            "log_K": log_k_threshold(w.alpha, w.C, w.beta),
            "M": m_constant(w.alpha, w.C, w.beta),
            "monotonicity": _monotonicity_near_k(w.alpha, w.C, w.beta, K),
        }
    if w.kind == "exponential" and w.alpha == 1 and table.radius >= 4:
        witness = additivity_witness(desc, table, 2, 2)
        if witness is not None:
            payload["additivity_witness"] = {
                **witness.to_dict(),
                "ratio": witness.exponential_ratio(w.C),
            }
    if desc.growth_order is not None:
        sweep = []
        for alpha, C in itertools.product(config.sweep.alpha, config.sweep.C):
            if not 0 < alpha < 1:
                continue
            beta = beta_selection(alpha, C, desc.growth_order, desc.lambda_is_one)
            K = k_threshold(alpha, C, beta)
            sweep.append(
                {
                    "alpha": alpha,
                    "C": C,
                    "beta": beta,
                    "monotonicity": _monotonicity_near_k(alpha, C, beta, K),
                }
            )
        payload["lemma_sweep"] = sweep
    return _record(config, "weight-check", payload, [])


def cmd_vn(config: ExperimentConfig) -> ResultRecord:
    """Von Neumann constants from the ‖m‖_ε bound, then the randomized stress test."""
    desc = config.descriptor
    if not desc.is_commutative:
        raise UsageError(
            f"Von Neumann stress test needs a commutative group, {desc.name} is not."
        )
    rigor_flags: list[bool] = []
    verdict = operator_alg_verdict(
        desc, config.weight, config.kg, config.radii.zeta_cutoff
    )
    if verdict.bound is None:
        raise UsageError(
            f"Von Neumann constants need an injective algebra, got {verdict.kind} for {config.weight}."
        )
    rigor_flags.append(verdict.bound.rigorous)
    constants = delta_from_bound(verdict.bound.bound, verdict.bound)
    report = None
    if config.vn.trials:
        vn = config.vn
        report = vn_stress_test(
            constants,
            desc,
            config.weight,
            bfs_balls(desc, vn.support_size, config.caps.ball_elements),
            trials=vn.trials,
            max_vars=vn.max_vars,
            max_degree=vn.max_degree,
            support_size=vn.support_size,
            seed=config.seed,
            grid_per_dim=vn.grid_per_dim,
            inflation=vn.inflation,
        ).to_dict()
    payload = {
        "weight": config.weight.to_dict(),
        "constants": constants.to_dict(),
        "stress_test": report,
    }
    return _record(config, "vn", payload, rigor_flags)


def cmd_free_group(config: ExperimentConfig) -> ResultRecord:
    """Rudin-Shapiro flatness, Hankel and Ω lower-bound certificates, and the divergence sequence."""
    fg = config.free_group
    rows_cap = math.isqrt(config.caps.matrix_entries)
    additivity_n = max(
        n for n in range(1, 5) if n**fg.d <= ADDITIVITY_INDEX_CAP or n == 1
    )
    payload: dict = {
        "flatness": [
            flatness_check(rudin_shapiro(k), fg.rs_samples).to_dict()
            for k in range(fg.rs_k_max + 1)
        ],
        "hankel": [hankel_certificate(k).to_dict() for k in range(1, fg.hankel_k_max + 1)],
        "additivity": {
            "d": fg.d,
            "n": additivity_n,
            **length_additivity_check(alternating_index(fg.d, additivity_n)).to_dict(),
        },
        "omega_oracle_deviation": omega_oracle_deviation(
            fg.d, additivity_n, fg.beta, seed=config.seed
        ),
        "lower_bounds": [
            omega_lower_bound_check(fg.d, n, fg.beta, cap=rows_cap).to_dict()
            for n in fg.lower_bound_n
        ],
        "tensor_power": tensor_power_check(fg.tensor_k, fg.d).to_dict(),
    }
    if 2 * fg.beta < fg.d:
        rows = divergence_sequence(fg.d, fg.beta, config.kg, fg.k_max)
        payload["divergence"] = [
            {"n": n, "S_n": s_n, "L_n": l_n} for n, s_n, l_n in rows
        ]
        payload["artifacts"] = [
            _write_artifact(config, f"divergence_d{fg.d}.csv", divergence_csv(rows))
        ]
    else:
        payload["divergence"] = None
    return _record(config, "free-group", payload, [])


commands: immutabledict.immutabledict[
    str, typing.Callable[[ExperimentConfig], ResultRecord]
] = immutabledict.immutabledict(
    {
        "growth": cmd_growth,
        "bound": cmd_bound,
        "weight-check": cmd_weight_check,
        "vn": cmd_vn,
        "free-group": cmd_free_group,
    }
)
