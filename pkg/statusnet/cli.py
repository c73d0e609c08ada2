"""Command-line front end.

    statusnet solve -c cfg.json [-o solution.json] [--method best_response]
    statusnet generate --kind communities --n 20 --size 3 --seed 7 -o net.json
    statusnet experiment -c cfg.json -o out/ [--jobs 8]
    statusnet nbar -c cfg.json

Results go to files or standard output; diagnostics go to standard error.
Errors print ``E:<code>:<message>`` and exit 1 (input), 2 (theory premise
unmet) or 4 (solver). ``experiment`` exits 3 when any sign check fails.
"""

from typing import List, Optional, Sequence
import argparse
import asyncio
import logging
import sys
from pydantic import ValidationError
from statusnet import __version__
from statusnet.centrality import check_assumption_2, generalized_centrality
from statusnet.compstat import n_bar
from statusnet.config import get_settings
from statusnet.errors import EXIT_INPUT, EXIT_SIGN_VIOLATION, SchemaError, StatusNetError
from statusnet.experiments import build_context, solve_context
from statusnet.generators import random_block
from statusnet.inequality import build_communities
from statusnet.io import (
    atomic_write_text,
    dump_network,
    dumps_json,
    frame_to_csv,
    load_config,
    network_to_dict,
    solution_to_frame,
)
from statusnet.logging_setup import configure_logging
from statusnet.models import ModelParams, SolveMethod, Topology
from statusnet.network import build_H, spectral_radius
from statusnet.runner import ExperimentRunner

logger = logging.getLogger(__name__)

def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", required=True, help="experiment config (JSON)")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="PATH=VALUE",
        help="override a config entry, e.g. --set params.alpha=3 (repeatable)",
    )

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="statusnet", description="Identity-based status consumption on networks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute the equilibrium of a configured network")
    _add_config_args(solve)
    solve.add_argument("-o", "--output", help="solution file (default: config output.path, else stdout)")
    solve.add_argument(
        "--method", choices=[m.value for m in SolveMethod], default=SolveMethod.CLOSED_FORM.value
    )

    generate = sub.add_parser("generate", help="write a seeded network file")
    generate.add_argument("--kind", choices=["communities", "random_block"], default="communities")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("-o", "--output", help="network file (default: stdout)")
    generate.add_argument("--n", type=int, default=2, help="communities per identity")
    generate.add_argument("--size", type=int, default=3, help="agents per community")
    generate.add_argument("--topology", choices=[t.value for t in Topology], default=Topology.COMPLETE.value)
    generate.add_argument("--weight", type=float, default=0.2)
    generate.add_argument("--income", type=float, default=1.0, help="income of every community")
    generate.add_argument("--ja", type=int, default=10, help="random_block: agents of identity A")
    generate.add_argument("--jb", type=int, default=10, help="random_block: agents of identity B")
    generate.add_argument("--p-within", type=float, default=0.3)
    generate.add_argument("--p-cross", type=float, default=0.1)
    generate.add_argument("--income-low", type=float, default=0.5)
    generate.add_argument("--income-high", type=float, default=2.0)
    generate.add_argument("--alpha", type=float, default=2.0, help="for the assumption report")
    generate.add_argument("--beta", type=float, default=1.0)
    generate.add_argument("--gamma", type=float, default=1.0)

    experiment = sub.add_parser("experiment", help="run a comparative-statics experiment")
    _add_config_args(experiment)
    experiment.add_argument("-o", "--output", help="output directory (default: config output.path, else 'out')")
    experiment.add_argument("--jobs", type=int, help="concurrent jobs")

    nbar = sub.add_parser("nbar", help="print N-bar and the binding pair of a communities config")
    _add_config_args(nbar)
    return parser

def cmd_solve(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.overrides)
    context = build_context(config)
    solution = solve_context(context, SolveMethod(args.method))
    target = args.output or config.output.path
    fmt = "csv" if target and target.endswith(".csv") else config.output.format
    if fmt == "csv":
        text = frame_to_csv(solution_to_frame(solution, context.net))
    else:
        text = dumps_json(solution.to_json_dict())
    if target:
        atomic_write_text(target, text)
        logger.info(f"Solution written to {target}")
    else:
        sys.stdout.write(text)
    return 0

def cmd_generate(args: argparse.Namespace) -> int:
    settings = get_settings()
    if args.kind == "communities":
        net, _ = build_communities(
            args.n,
            args.size,
            topology=Topology(args.topology),
            incomes=args.income,
            weight=args.weight,
            seed=args.seed,
            spectral_target=settings.generator_spectral_target,
        )
    else:
        net = random_block(
            args.ja,
            args.jb,
            args.p_within,
            args.p_cross,
            weight=args.weight,
            income_range=(args.income_low, args.income_high),
            beta=args.beta,
            seed=args.seed,
        )

    try:
        params = ModelParams(alpha=args.alpha, beta=args.beta, gamma=args.gamma)
    except ValidationError as exc:
        raise SchemaError(f"invalid parameters: {exc.errors()[0]['msg']}") from exc
    a2 = check_assumption_2(generalized_centrality(net, params), params)
    report = {
        "J": net.J,
        "links": int((net.G > 0).sum()),
        "rho_H": spectral_radius(build_H(net, params)).lambda1,
        "assumption_2": a2.all_passed,
        "assumption_2_offenders": a2.offenders,
    }

    if args.output:
        dump_network(net, args.output)
        sys.stdout.write(dumps_json(report))
    else:
        sys.stdout.write(dumps_json(network_to_dict(net)))
        logger.info(f"Generated network: {report}")
    return 0

def cmd_experiment(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.overrides)
    out_dir = args.output or config.output.path or "out"
    runner = ExperimentRunner(args.jobs)

    async def run():
        reports = await runner.run(config)
        return await runner.write_outputs(reports, out_dir)

    summary = asyncio.run(run())
    sys.stdout.write(dumps_json({"violations": summary["violations"], "checks": summary["checks"]}))
    if summary["violations"]:
        logger.warning(f"{summary['violations']} of {summary['checks']} sign checks failed")
        return EXIT_SIGN_VIOLATION
    return 0

def cmd_nbar(args: argparse.Namespace) -> int:
    config = load_config(args.config, args.overrides)
    context = build_context(config)
    report = n_bar(context.net, context.require_structure(), context.require_base_params(), context.enforce_assumptions)
    sys.stdout.write(dumps_json({"N_bar": report.N_bar, "binding_pair": list(report.binding_pair)}))
    return 0

COMMANDS = {
    "solve": cmd_solve,
    "generate": cmd_generate,
    "experiment": cmd_experiment,
    "nbar": cmd_nbar,
}

def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        return COMMANDS[args.command](args)
    except StatusNetError as e:
        logger.error(f"{args.command} failed: {e}")
        print(e.render(), file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"E:SCHEMA:{e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"E:IO:{e}", file=sys.stderr)
        return EXIT_INPUT
