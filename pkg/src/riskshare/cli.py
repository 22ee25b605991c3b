"""Command-line entry point for reproducible bonus runs.

Exit codes: 0 success, 1 validation failure, 2 input parse/IO error,
3 capacity exceeded. Diagnostics go to stderr; machine output to stdout or
to the configured output file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import documents
from .config import RunConfig, load_run_config
from .errors import CapacityError, DocumentError, RiskshareError, ValidationError
from .games import CoalitionGame, PlayerSet, leaf_coverage_game
from .mining import (
    cherry_pick_plan,
    derive_attribution,
    game_from_subset_results,
    parse_commit_log,
    resolve_identities,
)
from .payout import Provenance, allocate_payments, compute_budget, render_report, parse_report
from .risk import RiskModel, ValidationReport, risk_delta
from .shapley import (
    ShapleyResult,
    check_axioms,
    shapley_exact,
    shapley_monte_carlo,
    shapley_permutation_oracle,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def _err(message: str):
    print(message, file=sys.stderr)


def _load_records(config: RunConfig):
    text = config.source.path.read_text(encoding="utf-8")
    records = parse_commit_log(text)
    if config.source.aliases_path is not None:
        aliases = documents.load_aliases(config.source.aliases_path)
        records = list(resolve_identities(records, aliases).records)
    return records


def _roster(config: RunConfig, declared: Optional[tuple[str, ...]], fallback: set[str]) -> PlayerSet:
    if config.source.players is not None:
        return PlayerSet(config.source.players)
    if declared is not None:
        return PlayerSet(declared)
    if not fallback:
        raise ValidationError("no players named by the source and none configured")
    return PlayerSet(tuple(sorted(fallback)))


def build_game(config: RunConfig, model: Optional[RiskModel]) -> CoalitionGame:
    """Construct the coalition game the configured source describes."""
    kind = config.source.type
    if kind == "coalition_table":
        return documents.load_coalition_game(config.source.path)
    if model is None:
        raise ValidationError(f"source type {kind!r} needs a risk_model for its threat tree")
    if kind == "attribution":
        declared, attribution = documents.load_attribution(config.source.path)
        authors = {a for people in attribution.values() for a in people}
        players = _roster(config, declared, authors)
        return leaf_coverage_game(model.tree, attribution, players, config.normalized)
    if kind == "commit_log":
        records = _load_records(config)
        attribution = derive_attribution(records, model.tree, config.source.cycle)
        authors = {a for people in attribution.values() for a in people}
        players = _roster(config, None, authors)
        return leaf_coverage_game(model.tree, attribution, players, config.normalized)
    if kind == "subset_results":
        declared, results = documents.load_subset_results(config.source.path)
        named = {p for r in results for p in r.subset}
        players = _roster(config, declared, named)
        return game_from_subset_results(results, model.tree, players, config.normalized)
    raise DocumentError(f"unknown source type {kind!r}")


def solve(game: CoalitionGame, config: RunConfig, seed_override: Optional[int]) -> ShapleyResult:
    spec = config.solver
    if spec.method == "exact":
        return shapley_exact(game)
    if spec.method == "oracle":
        return shapley_permutation_oracle(game)
    if spec.method == "monte-carlo":
        seed = seed_override if seed_override is not None else spec.seed
        if seed is None:
            raise DocumentError("monte-carlo solver needs a seed (config solver.seed or --seed)")
        if spec.samples is None:
            raise DocumentError("monte-carlo solver needs solver.samples")
        return shapley_monte_carlo(game, spec.samples, seed, workers=spec.workers)
    raise DocumentError(f"unknown solver method {spec.method!r}")


def _maybe_model(config: RunConfig) -> Optional[RiskModel]:
    if config.risk_model_path is None:
        return None
    return documents.load_risk_model(config.risk_model_path)


def _print_validation(report: ValidationReport):
    for issue in report.issues:
        print(str(issue))
    print(f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)")


def cmd_validate(args) -> int:
    config = load_run_config(args.config)
    report = config.validate()
    model = None
    if config.risk_model_path is not None and config.risk_model_path.exists():
        model = documents.load_risk_model(config.risk_model_path)
        report = report.merged(model.validate())
    _print_validation(report)
    return EXIT_OK if report.ok else EXIT_VALIDATION


def cmd_game(args) -> int:
    config = load_run_config(args.config)
    game = build_game(config, _maybe_model(config))
    doc = documents.coalition_table_document(game)
    print(json.dumps(doc, indent=2, sort_keys=True))
    return EXIT_OK


def _axiom_summary(report) -> str:
    parts = [f"efficiency={'pass' if report.efficiency_ok else 'fail'}"]
    if report.symmetry_violations is None:
        parts.append("symmetry=skipped")
    else:
        parts.append(f"symmetry={'pass' if not report.symmetry_violations else 'fail'}")
    if report.null_player_violations is None:
        parts.append("null-player=skipped")
    else:
        parts.append(f"null-player={'pass' if not report.null_player_violations else 'fail'}")
    return " ".join(parts)


def cmd_shapley(args) -> int:
    config = load_run_config(args.config)
    game = build_game(config, _maybe_model(config))
    result = solve(game, config, args.seed)
    # efficiency is always audited; structural scans skip themselves over the cap
    axioms = check_axioms(game, result)
    if args.format == "json":
        share = result.share
        doc = {
            "players": list(result.players),
            "method": result.method,
            "phi": {p: str(result.phi[p]) for p in result.players},
            "share": None if share is None else {p: str(share[p]) for p in result.players},
            "grand_value": str(game.grand_value()),
            "samples": result.samples,
            "seed": result.seed,
            "standard_error": result.standard_error,
            "axioms": None if axioms is None else _axiom_summary(axioms),
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        share = result.share
        print("players:", " ".join(result.players))
        print("method:", result.method)
        print("phi:", " ".join(str(result.phi[p]) for p in result.players))
        if share is None:
            print("share: undefined (total contribution is zero)")
        else:
            print("share:", " ".join(str(share[p]) for p in result.players))
        print("v(N):", game.grand_value())
        if axioms is not None:
            print("axioms:", _axiom_summary(axioms))
    return EXIT_OK


def cmd_payout(args) -> int:
    config = load_run_config(args.config)
    if config.risk_model_path is None:
        raise DocumentError("config: payout needs a risk_model document")
    if config.budget is None:
        raise DocumentError("config: payout needs a budget section (fraction and anchor)")
    model = documents.load_risk_model(config.risk_model_path)
    validation = model.validate()
    if not validation.ok:
        _print_validation(validation)
        return EXIT_VALIDATION

    delta = risk_delta(model.assessments, model.scales, mode=config.mode, clamp=True)
    budget = compute_budget(
        delta,
        config.budget.fraction,
        config.budget.anchor,
        explicit_value=config.budget.explicit_value,
        currency=config.currency,
    )
    game = build_game(config, model)
    result = solve(game, config, args.seed)
    axioms = check_axioms(game, result)
    provenance = Provenance(
        game_source=game.label,
        delta=delta,
        solver=result.method,
        samples=result.samples,
        seed=result.seed,
    )
    report = allocate_payments(
        result,
        budget,
        config.rounding,
        anchor=config.budget.anchor,
        fraction=config.budget.fraction,
        provenance=provenance,
        axioms=axioms,
    )
    rendered = render_report(report, config.output_format)
    out_path = Path(args.out) if args.out else config.output_path
    if out_path is not None:
        out_path.write_text(rendered, encoding="utf-8")
        _err(f"report written to {out_path}")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def cmd_plan_cherry_pick(args) -> int:
    config = load_run_config(args.config)
    if config.source.type != "commit_log":
        raise ValidationError("plan-cherry-pick needs a commit_log source")
    records = _load_records(config)
    base = args.base or config.source.cycle.from_commit
    if base is None:
        raise ValidationError("no base commit: pass --base or set source.cycle.from_commit")
    subset = tuple(s for s in (p.strip() for p in args.subset.split(",")) if s)
    plan = cherry_pick_plan(records, base, set(subset), to_commit=config.source.cycle.to_commit)
    rendered = plan.to_json()
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
        _err(f"plan written to {args.out}")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def cmd_report(args) -> int:
    report = parse_report(Path(args.input).read_text(encoding="utf-8"))
    rendered = render_report(report, args.format)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
        _err(f"report written to {args.out}")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskshare",
        description="Fair, explainable security bonuses from risk deltas and repository evidence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate config, scales, threat tree, and assessments")
    p.add_argument("--config", required=True, help="path to the run config document")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("game", help="build the coalition game and print its value table")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("shapley", help="compute per-player values, shares, and the axiom audit")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the solver seed")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("payout", help="full pipeline: risk delta, budget, game, shares, payments")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the solver seed")
    p.add_argument("--out", default=None, help="write the report here instead of the configured path")
    p.set_defaults(func=cmd_payout)

    p = sub.add_parser("plan-cherry-pick", help="emit a rebuild plan for one coalition's commits")
    p.add_argument("--config", required=True)
    p.add_argument("--subset", required=True, help="comma-separated player ids")
    p.add_argument("--base", default=None, help="base commit (defaults to the config cycle start)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plan_cherry_pick)

    p = sub.add_parser("report", help="re-render a stored payout report in another format")
    p.add_argument("input", help="path to a JSON payout report")
    p.add_argument("--format", choices=("json", "csv", "markdown"), default="markdown")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        _err(f"input error: {exc}")
        return EXIT_INPUT
    except CapacityError as exc:
        _err(f"capacity error: {exc}")
        return EXIT_CAPACITY
    except ValidationError as exc:
        _err(f"validation error: {exc}")
        return EXIT_VALIDATION
    except RiskshareError as exc:
        _err(f"error: {exc}")
        return EXIT_VALIDATION
    except OSError as exc:
        _err(f"io error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
