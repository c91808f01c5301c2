"""
Command-line front end for the geometric ergodicity certifier.

Subcommands:
  analyze   chain file -> JSON report (verdicts, implication edges, rates)
  decay     chain file -> CSV table n,state,tv,vnorm_bound
  zoo       recipe     -> chain JSON file, or `zoo degradation` -> CSV table
  crossval  seeded zoo batch -> JSON summary of cross-validation results

Exit codes:
  0  output written, everything consistent
  2  output written, but an implication edge or a rate check was violated
  1  input, validation or I/O error; no output file is written
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from chain.core import require_irreducible, stationary, structure
from chain.io import load_chain
from config import (
    BRUTE_FORCE_MAX_STATES,
    CROSSVAL_DEFAULT_COUNT,
    CROSSVAL_MAX_STATES,
    DEFAULT_SEED,
    DEGRADATION_ALPHA,
    DEGRADATION_SIZES,
    REPORT_SCHEMA_VERSION,
)
from drift.drift import synthesize_drift
from drift.return_time import brute_force_gap
from drift.small_sets import default_small_set, normalize_set
from engine.cross_validate import analyze_chain, cross_validate, summary_rates
from engine.report_writer import decay_table, write_chain, write_json, write_table
from errors import ErgodicityError, KappaBeyondRadius
from measures.norms import WeightFunction
from schemas import AnalysisReport, RunConfig, StationarySummary
from zoo.batch import seeded_batch
from zoo.degradation import degradation_study
from zoo.registry import build_default_registry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONSISTENT = 2


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


# ── Argument parsing helpers ───────────────────────────────────────────────────

def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _conditions(text: str):
    if text.strip().lower() == "all":
        return "all"
    return [t.strip().lower() for t in text.split(",") if t.strip()]


def build_config(args: argparse.Namespace) -> RunConfig:
    """Config file values first, then any flag given on the command line."""
    values: Dict[str, Any] = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        try:
            values.update(json.loads(path.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise ErgodicityError(f"cannot read config file {path}: {exc}") from exc
    for field in ("n_max", "j_set", "p_set", "rate_tol", "conditions", "seed", "small_set", "kappa"):
        value = getattr(args, field, None)
        if value is not None:
            values[field] = value
    return RunConfig(**values)


def _run_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", dest="n_max", type=int, help="Largest power n examined (default: 256)")
    common.add_argument("--j-set", dest="j_set", type=_int_list, help="Exponents j for the V^(1/j) families (default: 1,2,3,5)")
    common.add_argument("--p-set", dest="p_set", type=_float_list, help="Exponents p for L^p starting measures (default: 1.5,2,4)")
    common.add_argument("--rate-tol", dest="rate_tol", type=float, help="Rate coherence tolerance (default: 1e-3)")
    common.add_argument("--conditions", type=_conditions, help="'all' or a list such as i,ix,xv")
    common.add_argument("--seed", type=int, help=f"Measure battery seed (default: {DEFAULT_SEED})")
    common.add_argument("--small-set", dest="small_set", type=_int_list, help="Small set S as state indices")
    common.add_argument("--kappa", type=float, help="Return-time MGF argument (default: sqrt(kappa*))")
    common.add_argument("--config", help="JSON file with run settings; flags override it")
    return common


def _log_flags() -> argparse.ArgumentParser:
    flags = argparse.ArgumentParser(add_help=False)
    group = flags.add_mutually_exclusive_group()
    group.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    group.add_argument("--quiet", "-q", action="store_true", help="Warnings and errors only")
    return flags


def build_parser() -> argparse.ArgumentParser:
    run_flags, log_flags = _run_flags(), _log_flags()
    parser = argparse.ArgumentParser(description="Geometric ergodicity certifier for finite Markov chains")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[run_flags, log_flags], help="Evaluate every condition on a chain")
    analyze.add_argument("chain", help="Chain file (.json or .csv)")
    analyze.add_argument("--out", required=True, help="Report path (JSON)")

    decay = sub.add_parser("decay", parents=[run_flags, log_flags], help="Tabulate TV and V-norm decay")
    decay.add_argument("chain", help="Chain file (.json or .csv)")
    decay.add_argument("--out", required=True, help="Table path (CSV)")

    zoo = sub.add_parser("zoo", help="Generate chains from the built-in recipes")
    recipes = zoo.add_subparsers(dest="recipe", required=True)

    def recipe(name: str, help_text: str) -> argparse.ArgumentParser:
        p = recipes.add_parser(name, parents=[log_flags], help=help_text)
        p.add_argument("--seed", type=int, default=0, help="Generator seed (default: 0)")
        p.add_argument("--out", required=True, help="Output path")
        return p

    p = recipe("two-state", "P = [[1-a, a], [b, 1-b]]")
    p.add_argument("--a", type=float, default=0.3)
    p.add_argument("--b", type=float, default=0.2)
    for name, text in (("cycle", "Rotation on N states"), ("uniform", "P = Pi on N states")):
        p = recipe(name, text)
        p.add_argument("--n", type=int, required=True)
    for name in ("random-dense", "random-reversible"):
        p = recipe(name, f"Seeded {name.replace('-', ' ')} chain")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--sparsity", type=float, default=0.0)
    p = recipe("metropolis-grid", "Metropolis chain on a square grid")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--weights", type=_float_list, default=None, help="Target weights, row-major")
    p = recipe("heavy-tail", "Truncated birth-death chain with polynomial tails")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=DEGRADATION_ALPHA)
    p = recipe("lazy", "Lazy version (1-eps)P + eps I of a chain file")
    p.add_argument("--input", required=True, help="Base chain file")
    p.add_argument("--epsilon", type=float, default=0.5)
    p = recipe("degradation", "Gap, kappa* and fitted rate of the heavy-tail family by size (CSV)")
    p.add_argument("--alpha", type=float, default=DEGRADATION_ALPHA)
    p.add_argument("--sizes", type=_int_list, default=DEGRADATION_SIZES)

    crossval = sub.add_parser("crossval", parents=[run_flags, log_flags], help="Cross-validate a seeded zoo batch")
    crossval.add_argument("--count", type=int, default=CROSSVAL_DEFAULT_COUNT)
    crossval.add_argument("--max-states", dest="max_states", type=int, default=CROSSVAL_MAX_STATES)
    crossval.add_argument("--out", required=True, help="Summary path (JSON)")
    return parser


# ── Subcommands ────────────────────────────────────────────────────────────────

def run_analyze(chain_path: str, config: RunConfig, out_path: str) -> int:
    chain, pi = load_chain(chain_path)
    logger.info("=" * 60)
    logger.info("Analyzing %s (N=%d, n_max=%d)", chain_path, chain.n, config.n_max)
    logger.info("=" * 60)
    ctx, consistency, statuses = analyze_chain(chain, config, pi)

    report = AnalysisReport(
        schema_version=REPORT_SCHEMA_VERSION,
        states=[str(s) for s in chain.states],
        structure=ctx.structure,
        stationary=StationarySummary(pi=ctx.pi.pi.tolist(), residual=ctx.pi.residual),
        config=config,
        verdicts=consistency.verdicts,
        consistency={
            "consistent": consistency.consistent,
            "edges": consistency.edges,
            "violated_edges": consistency.violated_edges,
            "rate_checks": consistency.rate_checks,
            "rate_violations": consistency.rate_violations,
            "witness_failures": consistency.witness_failures,
            "weight_sweeps": consistency.weight_sweeps,
            "evaluations": [{"evaluator": s.evaluator, "success": s.success, "error": s.error} for s in statuses],
        },
        rates=summary_rates(ctx, consistency),
    )
    write_json(out_path, report)
    holding = sum(v.holds for v in consistency.verdicts)
    logger.info("Report written: %s (%d/%d conditions hold)", out_path, holding, len(consistency.verdicts))
    return EXIT_OK if consistency.consistent else EXIT_INCONSISTENT


def run_decay(chain_path: str, config: RunConfig, out_csv: str) -> int:
    chain, pi = load_chain(chain_path)
    require_irreducible(chain)
    pi = pi if pi is not None else stationary(chain)
    S = normalize_set(chain, config.small_set) if config.small_set else default_small_set(pi)
    try:
        drift = synthesize_drift(chain, S, config.kappa)
    except KappaBeyondRadius:
        drift = synthesize_drift(chain, S, None)
    write_table(out_csv, decay_table(chain, pi, WeightFunction(drift.V), config.n_max))
    return EXIT_OK


def run_zoo(args: argparse.Namespace) -> int:
    registry = build_default_registry()
    name = args.recipe
    if name == "degradation":
        table = degradation_study("truncated_heavy_tail", args.sizes, alpha=args.alpha)
        write_table(args.out, table)
        return EXIT_OK

    if name == "two-state":
        chain = registry.get("two_state").generate(a=args.a, b=args.b)
    elif name in ("cycle", "uniform"):
        chain = registry.get(name).generate(N=args.n)
    elif name in ("random-dense", "random-reversible"):
        chain = registry.get(name.replace("-", "_")).generate(N=args.n, seed=args.seed, sparsity=args.sparsity)
    elif name == "metropolis-grid":
        chain = registry.get("metropolis_grid").generate(width=args.width, target_weights=args.weights, seed=args.seed)
    elif name == "heavy-tail":
        chain = registry.get("truncated_heavy_tail").generate(N=args.n, alpha=args.alpha)
    else:
        base, _ = load_chain(args.input)
        chain = registry.get("lazy").generate(chain=base, epsilon=args.epsilon)
    write_chain(args.out, chain)
    return EXIT_OK


def run_crossval(config: RunConfig, count: int, max_states: int, out_path: str) -> int:
    logger.info("=" * 60)
    logger.info("Cross-validating %d seeded chains (seed=%d, N <= %d)", count, config.seed, max_states)
    logger.info("=" * 60)
    results = []
    inconsistent = reversible = violated_total = rate_total = 0
    for k, (recipe, chain) in enumerate(seeded_batch(count, config.seed, max_states)):
        report = cross_validate(chain, config=config)
        is_reversible = structure(chain).reversible
        reversible += is_reversible
        violated_total += len(report.violated_edges)
        rate_total += len(report.rate_violations)
        if not report.consistent:
            inconsistent += 1
            logger.warning("Chain %d (%s) inconsistent: %s %s", k, recipe.kind,
                           report.violated_edges, report.rate_violations)
        entry = {
            "index": k,
            "kind": recipe.kind,
            "params": recipe.params,
            "states": chain.n,
            "reversible": is_reversible,
            "holding": sum(v.holds for v in report.verdicts),
            "violated_edges": report.violated_edges,
            "rate_violations": report.rate_violations,
            "witness_failures": report.witness_failures,
        }
        if chain.n <= BRUTE_FORCE_MAX_STATES:
            entry["mgf_brute_force_gap"] = brute_force_gap(chain, default_small_set(stationary(chain)))
        results.append(entry)
    write_json(out_path, {
        "schema": REPORT_SCHEMA_VERSION,
        "count": count,
        "seed": config.seed,
        "reversible": reversible,
        "inconsistent": inconsistent,
        "violated_edges": violated_total,
        "rate_violations": rate_total,
        "chains": results,
    })
    logger.info("Cross-validated %d chains: %d reversible, %d inconsistent", count, reversible, inconsistent)
    return EXIT_OK if inconsistent == 0 else EXIT_INCONSISTENT


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(getattr(args, "verbose", False), getattr(args, "quiet", False))

    try:
        if args.command == "zoo":
            return run_zoo(args)
        config = build_config(args)
        if args.command == "analyze":
            return run_analyze(args.chain, config, args.out)
        if args.command == "decay":
            return run_decay(args.chain, config, args.out)
        return run_crossval(config, args.count, args.max_states, args.out)
    except (ErgodicityError, ValidationError, OSError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
