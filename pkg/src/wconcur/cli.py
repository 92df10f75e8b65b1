"""Command-line surface: compute, bound, estimate, and verify with JSON in/out.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 invariant
violation, 4 uncertifiable request.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone
from functools import partial
from typing import Sequence

import numpy as np

from .bounds import (
    BoundReport,
    bound_eq5,
    bound_eq6,
    bound_theorem4,
    canonical_tripartite_partitions,
    condition_check_theorem4,
    tilde_c3_sq,
)
from .combinatorics import format_partition, parse_block, parse_partition
from .concurrence import (
    bipartite_concurrence_pure,
    concurrence_pure,
    partition_concurrence_pure,
)
from .roof import EstimatorConfig, roof_upper_bound
from .states import DensityMatrix, PureState, density_from_pure
from .tolerances import TAU_COND
from .verify import SCOPES, run_verify
from .wclass import (
    WCoefficients,
    verify_theorem3,
    w_balance_identity,
    w_concurrence_sq,
    w_pair_partition_concurrence_sq,
    w_tilde_sum_sq,
    w_to_state,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_UNCERTIFIABLE = 4

SEED_ENV_VAR = "WCONCUR_SEED"


class ParseError(Exception):
    """Input file or input text could not be parsed."""


class UncertifiableError(Exception):
    """The request cannot produce a certified value."""


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return data


def _state_kind(data: dict, path: str) -> str:
    kind = data.get("kind")
    if kind not in ("pure", "mixed", "wstate"):
        raise ParseError(f"{path}: unknown state kind {kind!r}")
    return kind


def _as_pure(data: dict, path: str) -> PureState:
    kind = _state_kind(data, path)
    try:
        if kind == "pure":
            return PureState.from_json_dict(data)
        if kind == "wstate":
            return w_to_state(WCoefficients.from_json_dict(data))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed {kind} state: {exc}") from exc
    raise ParseError(f"{path}: a pure or wstate input is required, got {kind!r}")


def _as_wcoefficients(data: dict, path: str) -> WCoefficients:
    if _state_kind(data, path) != "wstate":
        raise ParseError(f"{path}: a wstate input is required")
    try:
        return WCoefficients.from_json_dict(data)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed wstate: {exc}") from exc


def _as_density(data: dict, path: str) -> tuple[DensityMatrix, str]:
    kind = _state_kind(data, path)
    try:
        if kind == "mixed":
            return DensityMatrix.from_json_dict(data), kind
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed density matrix: {exc}") from exc
    return density_from_pure(_as_pure(data, path)), kind


def _parse_partition_text(text: str):
    try:
        return parse_partition(text)
    except ValueError as exc:
        raise ParseError(f"bad partition {text!r}: {exc}") from exc


def _resolve_seed(explicit: int | None, fallback: int = 0) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ParseError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from exc
    return fallback


def cmd_pure(args: argparse.Namespace) -> tuple[dict, list, int]:
    psi = _as_pure(_load_json(args.state_file), args.state_file)
    if args.partition:
        p = _parse_partition_text(args.partition)
        value = partition_concurrence_pure(psi, p)
        results = {
            "concurrence": value,
            "partition": format_partition(p),
            "n_blocks": p.n_blocks,
        }
    else:
        value = concurrence_pure(psi)
        results = {"concurrence": value, "partition": None}
    results["n_parties"] = psi.n_parties
    return results, [], EXIT_OK


def cmd_wstate(args: argparse.Namespace) -> tuple[dict, list, int]:
    a = _as_wcoefficients(_load_json(args.coeff_file), args.coeff_file)
    what = args.what
    residuals: list[dict] = []
    if what == "concurrence":
        sq = w_concurrence_sq(a)
        results = {"concurrence_sq": sq, "concurrence": math.sqrt(sq)}
    elif what == "pair":
        if args.i is None or args.j is None:
            raise ParseError("wstate pair requires two party indices: pair I J")
        sq = w_pair_partition_concurrence_sq(a, args.i, args.j)
        results = {"i": args.i, "j": args.j, "pair_partition_concurrence_sq": sq}
    elif what == "tilde":
        results = {"tilde_sum_sq": w_tilde_sum_sq(a)}
    elif what == "theorem3":
        report = verify_theorem3(a)
        results = {"lhs": report.lhs, "rhs": report.rhs, "residual": report.residual}
        residuals.append(
            {"name": "theorem3_residual", "value": report.residual, "tolerance": 1e-12}
        )
    else:  # balance
        report = w_balance_identity(a)
        results = {"lhs": report.lhs, "rhs": report.rhs, "holds": report.holds}
        residuals.append(
            {
                "name": "balance_residual",
                "value": abs(report.lhs - report.rhs),
                "tolerance": TAU_COND,
            }
        )
    results["n_parties"] = a.n_parties
    return results, residuals, EXIT_OK


def _representative_blocks(n: int) -> list[tuple[int, ...]]:
    """One block per bipartition: the nonempty subsets avoiding party N."""
    out = []
    for mask in range(1, 1 << (n - 1)):
        out.append(tuple(p for p in range(1, n) if mask & (1 << (p - 1))))
    return out


def _blocks_of_size(n: int, size: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    return [tuple(c) for c in combinations(range(1, n + 1), size)]


def _exact_eq5_values(psi: PureState) -> dict[tuple[int, ...], float]:
    return {
        block: bipartite_concurrence_pure(psi, block)
        for block in _representative_blocks(psi.n_parties)
    }


def _exact_eq6_values(psi: PureState) -> dict[int, float]:
    n = psi.n_parties
    return {
        m: max(bipartite_concurrence_pure(psi, b) for b in _blocks_of_size(n, m))
        for m in range(1, n)
    }


def _estimator_from_args(args: argparse.Namespace) -> EstimatorConfig:
    if getattr(args, "config", None):
        cfg = EstimatorConfig.from_json_dict(_load_json(args.config))
    else:
        cfg = EstimatorConfig()
    seed = getattr(args, "seed", None)
    if seed is not None or os.environ.get(SEED_ENV_VAR) is not None:
        cfg = EstimatorConfig(
            ensemble_size=cfg.ensemble_size,
            restarts=cfg.restarts,
            refine_steps=cfg.refine_steps,
            step_scale=cfg.step_scale,
            seed=_resolve_seed(seed, cfg.seed),
        )
    return cfg


def _estimated_sub_values(
    rho: DensityMatrix, which: str, cfg: EstimatorConfig
) -> dict:
    n = rho.n_parties
    if which == "eq5":
        return {
            block: roof_upper_bound(
                rho, partial(bipartite_concurrence_pure, block=block), cfg
            ).value
            for block in _representative_blocks(n)
        }
    if which == "eq6":
        return {
            m: max(
                roof_upper_bound(
                    rho, partial(bipartite_concurrence_pure, block=b), cfg
                ).value
                for b in _blocks_of_size(n, m)
            )
            for m in range(1, n)
        }
    return {
        p: roof_upper_bound(
            rho, partial(partition_concurrence_pure, partition=p), cfg
        ).value
        ** 2
        for p in canonical_tripartite_partitions()
    }


def _file_sub_values(path: str, which: str) -> dict:
    data = _load_json(path)
    if which not in data:
        raise UncertifiableError(
            f"cannot certify: {path} has no {which!r} sub-concurrence values"
        )
    section = data[which]
    try:
        if which == "eq5":
            return {parse_block(k): float(v) for k, v in section.items()}
        if which == "eq6":
            return {int(k): float(v) for k, v in section.items()}
        return {_parse_partition_text(k): float(v) for k, v in section.items()}
    except (AttributeError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed {which} sub-values: {exc}") from exc


def cmd_bounds(args: argparse.Namespace) -> tuple[dict, list, int]:
    data = _load_json(args.state_file)
    kind = _state_kind(data, args.state_file)
    which = args.which
    residuals: list[dict] = []

    if kind == "mixed":
        rho, _ = _as_density(data, args.state_file)
        if args.sub_values:
            sub_values = _file_sub_values(args.sub_values, which)
            source = "file"
            heuristic = False
        elif args.estimate:
            sub_values = _estimated_sub_values(rho, which, _estimator_from_args(args))
            source = "estimate"
            heuristic = True
        else:
            raise UncertifiableError(
                "cannot certify: mixed input needs --sub-values or --estimate"
            )
        n = rho.n_parties
        if which == "eq5":
            report = bound_eq5(n, sub_values, conditional=heuristic)
        elif which == "eq6":
            report = bound_eq6(n, sub_values, conditional=heuristic)
        else:
            tilde = tilde_c3_sq(sub_values)
            # The balance hypothesis is not checkable for mixed states.
            report = BoundReport(
                value=bound_theorem4(tilde),
                witness="tripartite-partition sum",
                conditional=True,
                inputs={format_partition(p): v for p, v in sub_values.items()},
            )
            results = {"bound": report.to_json_dict(), "tilde_c3_sq": tilde}
            results["sub_values_source"] = source
            return results, residuals, EXIT_OK
        return (
            {"bound": report.to_json_dict(), "sub_values_source": source},
            residuals,
            EXIT_OK,
        )

    psi = _as_pure(data, args.state_file)
    if which == "eq5":
        report = bound_eq5(psi.n_parties, _exact_eq5_values(psi))
        results = {"bound": report.to_json_dict(), "sub_values_source": "exact"}
    elif which == "eq6":
        report = bound_eq6(psi.n_parties, _exact_eq6_values(psi))
        results = {"bound": report.to_json_dict(), "sub_values_source": "exact"}
    else:
        values = {
            p: partition_concurrence_pure(psi, p) ** 2
            for p in canonical_tripartite_partitions()
        }
        tilde = tilde_c3_sq(values)
        condition = condition_check_theorem4(psi)
        report = BoundReport(
            value=bound_theorem4(tilde),
            witness="tripartite-partition sum",
            conditional=not condition.holds,
            inputs={format_partition(p): v for p, v in values.items()},
        )
        results = {
            "bound": report.to_json_dict(),
            "tilde_c3_sq": tilde,
            "condition": {
                "lhs": condition.lhs,
                "rhs": condition.rhs,
                "holds": condition.holds,
            },
            "sub_values_source": "exact",
        }
        residuals.append(
            {
                "name": "balance_residual",
                "value": abs(condition.lhs - condition.rhs),
                "tolerance": TAU_COND,
            }
        )
    return results, residuals, EXIT_OK


def _functional_from_spec(spec: str):
    if spec == "full":
        return concurrence_pure, "full"
    if spec.startswith("bipartite:"):
        block = parse_block(spec.split(":", 1)[1])
        return partial(bipartite_concurrence_pure, block=block), spec
    if spec.startswith("partition:"):
        p = _parse_partition_text(spec.split(":", 1)[1])
        return partial(partition_concurrence_pure, partition=p), spec
    raise ParseError(
        f"bad functional {spec!r}; use full, bipartite:BLOCK or partition:SPEC"
    )


def cmd_roof(args: argparse.Namespace) -> tuple[dict, list, int]:
    rho, source_kind = _as_density(_load_json(args.density_file), args.density_file)
    functional, label = _functional_from_spec(args.functional)
    cfg = _estimator_from_args(args)
    estimate = roof_upper_bound(rho, functional, cfg)
    if args.decomposition_out:
        with open(args.decomposition_out, "w", encoding="utf-8") as handle:
            json.dump(estimate.decomposition.to_json_dict(), handle, indent=2)
    results = {
        "value": estimate.value,
        "label": estimate.label,
        "functional": label,
        "members": len(estimate.decomposition),
        "input_kind": source_kind,
        "config": cfg.to_json_dict(),
    }
    return results, [], EXIT_OK


def cmd_verify(args: argparse.Namespace) -> tuple[dict, list, int]:
    seed = _resolve_seed(args.seed)
    reports = run_verify(args.scope, n_max=args.n_max, samples=args.samples, seed=seed)
    passed = all(r.passed for r in reports)
    residuals = [
        {
            "name": f"{report.scope}.{check.name}",
            "value": check.max_residual,
            "tolerance": check.tolerance,
        }
        for report in reports
        for check in report.checks
    ]
    results = {
        "passed": passed,
        "seed": seed,
        "scopes": [r.to_json_dict() for r in reports],
    }
    return results, residuals, EXIT_OK if passed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wconcur",
        description=(
            "Multipartite concurrence: exact pure-state values, W-class closed "
            "forms, lower bounds, and convex-roof upper estimates."
        ),
    )
    parser.add_argument("--human", action="store_true", help="tabular text output")
    parser.add_argument(
        "--no-timestamp", action="store_true", help="omit the timestamp field"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_pure = sub.add_parser("pure", help="concurrence of a pure state")
    p_pure.add_argument("state_file")
    p_pure.add_argument("--partition", help="evaluate for this partition, e.g. 12|3|4")
    p_pure.set_defaults(func=cmd_pure)

    p_w = sub.add_parser("wstate", help="closed forms for single-excitation states")
    p_w.add_argument("coeff_file")
    p_w.add_argument(
        "what", choices=["concurrence", "pair", "tilde", "theorem3", "balance"]
    )
    p_w.add_argument("i", nargs="?", type=int)
    p_w.add_argument("j", nargs="?", type=int)
    p_w.set_defaults(func=cmd_wstate)

    p_b = sub.add_parser("bounds", help="lower bounds on multipartite concurrence")
    p_b.add_argument("state_file")
    p_b.add_argument("which", choices=["eq5", "eq6", "thm4"])
    p_b.add_argument("--sub-values", help="JSON file with sub-concurrence values")
    p_b.add_argument(
        "--estimate",
        action="store_true",
        help="take sub-concurrences from the roof estimator (heuristic)",
    )
    p_b.add_argument("--config", help="estimator config JSON (with --estimate)")
    p_b.add_argument("--seed", type=int, help="estimator seed override")
    p_b.set_defaults(func=cmd_bounds)

    p_r = sub.add_parser("roof", help="convex-roof upper estimate for a mixed state")
    p_r.add_argument("density_file")
    p_r.add_argument("--config", help="estimator config JSON")
    p_r.add_argument(
        "--functional",
        default="full",
        help="full, bipartite:BLOCK, or partition:SPEC",
    )
    p_r.add_argument("--decomposition-out", help="write the witness decomposition here")
    p_r.add_argument("--seed", type=int, help="seed override")
    p_r.set_defaults(func=cmd_roof)

    p_v = sub.add_parser("verify", help="replay the identities against oracles")
    p_v.add_argument("scope", choices=list(SCOPES) + ["all"])
    p_v.add_argument("--n-max", type=int, dest="n_max")
    p_v.add_argument("--samples", type=int)
    p_v.add_argument("--seed", type=int)
    p_v.set_defaults(func=cmd_verify)

    return parser


def _echo_inputs(args: argparse.Namespace) -> dict:
    skip = {"func", "command", "human", "no_timestamp"}
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip and value is not None
    }


def _render_human(report: dict, stream) -> None:
    def walk(prefix: str, value) -> None:
        items = value.items() if isinstance(value, dict) else enumerate(value)
        for key, child in items:
            label = f"{prefix}{key}"
            if isinstance(child, (dict, list)):
                walk(f"{label}.", child)
            else:
                print(f"{label}: {child}", file=stream)

    walk("", report)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        results, residuals, code = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UncertifiableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIABLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT

    report = {
        "command": args.command,
        "inputs": _echo_inputs(args),
        "results": results,
        "residuals": residuals,
    }
    if not args.no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    if args.human:
        _render_human(report, sys.stdout)
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return code


def entry_point() -> None:
    sys.exit(main())
