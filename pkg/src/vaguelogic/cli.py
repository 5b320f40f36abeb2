"""Command-line interface.  Every command prints one JSON document on stdout.

Exit codes: 0 success / valid / holds, 1 usage or input error,
2 falsified / countermodel found / check failed, 3 unknown (budget exhausted),
4 internal engine disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .axiomatics import check_proof, load_proof, soundness_fuzz
from .checker import Evaluator, degree, valid_in_model
from .decision import DEFAULT_BOUNDS, DEFAULT_BUDGET, SearchBounds, classify, satisfiable
from .errors import EngineDisagreement, VagueLogicError
from .formula import agents, is_nec_agent_independent, modal_depth, props, size
from .parser import parse, render
from .scenarios import sensor as sensor_mod
from .scenarios import sorites as sorites_mod
from .scenarios import williamson as williamson_mod
from .structures import load_structure, validate

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED, EXIT_UNKNOWN, EXIT_INTERNAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _formula(args):
    if args.file is not None:
        if args.formula is not None:
            raise UsageError("give the formula inline or with --file, not both")
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    elif args.formula is None:
        raise UsageError("missing formula (inline or --file)")
    else:
        text = args.formula
    return parse(text)


def _csv(text):
    return tuple(x.strip() for x in text.split(",") if x.strip()) if text else ()


# -- commands ------------------------------------------------------------------


def cmd_parse(args):
    phi = _formula(args)
    return EXIT_OK, {
        "formula": render(phi),
        "normalized": render(phi, explicit=True),
        "depth": modal_depth(phi),
        "agents": sorted(agents(phi)),
        "props": sorted(props(phi)),
        "size": size(phi),
        "necAgentIndependent": is_nec_agent_independent(phi),
    }


def cmd_validate(args):
    M = load_structure(args.model)
    problems = validate(M)
    return (EXIT_FALSIFIED if problems else EXIT_OK), {
        "valid": not problems,
        "violations": [v.to_json() for v in problems],
    }


def _checked_model(path):
    M = load_structure(path)
    problems = validate(M)
    if problems:
        raise VagueLogicError(f"{path}: structure is not a valid vagueness structure: {problems[0].message}")
    return M


def cmd_check(args):
    M = _checked_model(args.model)
    phi = _formula(args)
    holds = Evaluator(M).holds(args.world, args.agent, phi)
    return (EXIT_OK if holds else EXIT_FALSIFIED), {
        "formula": render(phi),
        "world": args.world,
        "agent": args.agent,
        "holds": holds,
    }


def cmd_validmodel(args):
    M = _checked_model(args.model)
    phi = _formula(args)
    result = valid_in_model(M, phi)
    if result is True:
        return EXIT_OK, {"formula": render(phi), "valid": True}
    return EXIT_FALSIFIED, {"formula": render(phi), "valid": False, "counterexample": result.to_json()}


def cmd_degree(args):
    M = _checked_model(args.model)
    phi = _formula(args)
    d = degree(M, args.world, phi)
    return EXIT_OK, {
        "formula": render(phi),
        "world": args.world,
        "degree": str(d),
        "value": str(d.value),
        "count": d.count,
        "agents": d.agents,
    }


def cmd_classify(args):
    phi = _formula(args)
    o, s, w = DEFAULT_BOUNDS
    try:
        bounds = SearchBounds.parse(args.bounds, args.agents) if args.bounds else SearchBounds(o, s, w, args.agents)
    except ValueError as exc:
        raise UsageError(f"bad --bounds {args.bounds!r}: {exc}") from exc
    run = satisfiable if args.satisfiable else classify
    verdict = run(phi, args.agents, bounds=bounds, budget=args.budget, objective=_csv(args.objective))
    out = verdict.to_json(timing=args.timing)
    if args.satisfiable:
        out["query"] = "satisfiability"
    return verdict.exit_code, out


def cmd_prove(args):
    result = check_proof(load_proof(args.proof))
    return (EXIT_OK if result else EXIT_FALSIFIED), result.to_json()


def cmd_fuzz(args):
    report = soundness_fuzz(trials=args.trials, seed=args.seed, agent_counts=tuple(args.agent_counts))
    return (EXIT_OK if report.ok else EXIT_FALSIFIED), report.to_json()


def cmd_sorites(args):
    policy = (sorites_mod.sticky_policy if args.policy == "sticky" else sorites_mod.threshold_policy)(args.threshold)
    sensor = sensor_mod.SensorModel(args.granularity, args.indeterminacy, not args.no_clamp, args.sensor)
    config = sorites_mod.SoritesConfig(args.max_grains, args.ask_cap, policy, sensor)
    report = sorites_mod.sorites_report(sorites_mod.build_sorites_structure(config))
    ok = report["extremesOk"] and report["inductiveStepFalsified"] and report["vacuousInstanceOk"]
    return (EXIT_OK if ok else EXIT_FALSIFIED), report


def cmd_sensor(args):
    model = sensor_mod.SensorModel(args.granularity, args.indeterminacy, not args.no_clamp, tolerance=args.tolerance)
    report = sensor_mod.sensor_report(model, table_upto=args.table, cap=args.cap)
    ok = report["singleGrainStable"] and report["readingEqualityTransitive"]
    return (EXIT_OK if ok else EXIT_FALSIFIED), report


def cmd_williamson(args):
    config = williamson_mod.WilliamsonConfig(
        Fraction(args.t_star), Fraction(args.alpha), Fraction(args.h), Fraction(args.lo), Fraction(args.hi),
        None if args.margin is None else Fraction(args.margin),
    )
    report = williamson_mod.williamson_report(williamson_mod.build_williamson_model(config))
    ok = report["equivalenceOk"] and report["drThreshold"]["holdsExactlyAbove"]
    return (EXIT_OK if ok else EXIT_FALSIFIED), report


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="print nothing; report through the exit code only")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings in the output")

    formula = argparse.ArgumentParser(add_help=False)
    formula.add_argument("formula", nargs="?", help="formula in the concrete syntax")
    formula.add_argument("--file", help="read the formula from a file instead")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", required=True, help="structure JSON file")

    p = _Parser(prog="vaguelogic", description="Report/definitely modal logic of vagueness.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", parents=[common, formula], help="parse and normalize a formula")
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("validate", parents=[common, model], help="check the structure invariants")
    sp.set_defaults(run=cmd_validate)

    sp = sub.add_parser("check", parents=[common, model, formula], help="truth at one point")
    sp.add_argument("--world", type=int, required=True)
    sp.add_argument("--agent", type=int, required=True)
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("validmodel", parents=[common, model, formula], help="truth at every point")
    sp.set_defaults(run=cmd_validmodel)

    sp = sub.add_parser("degree", parents=[common, model, formula], help="fraction of agents at a world")
    sp.add_argument("--world", type=int, required=True)
    sp.set_defaults(run=cmd_degree)

    sp = sub.add_parser("classify", parents=[common, formula], help="decide validity (or satisfiability)")
    sp.add_argument("--agents", type=int, required=True)
    sp.add_argument("--bounds", help="search bounds O,S,W (default %s)" % ",".join(map(str, DEFAULT_BOUNDS)))
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="tableau node budget")
    sp.add_argument("--objective", help="comma-separated objective propositions")
    sp.add_argument("--satisfiable", action="store_true", help="ask whether the formula is satisfiable")
    sp.set_defaults(run=cmd_classify)

    sp = sub.add_parser("prove", parents=[common], help="check a proof file")
    sp.add_argument("--proof", required=True)
    sp.set_defaults(run=cmd_prove)

    sp = sub.add_parser("fuzz", parents=[common], help="axiom soundness fuzzing")
    sp.add_argument("--trials", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--agent-counts", type=int, nargs="+", default=[1, 2, 3])
    sp.set_defaults(run=cmd_fuzz)

    sp = sub.add_parser("scenario", help="run a worked scenario")
    scen = sp.add_subparsers(dest="scenario", required=True, parser_class=_Parser)

    sensor_flags = argparse.ArgumentParser(add_help=False)
    sensor_flags.add_argument("--granularity", type=int, default=10)
    sensor_flags.add_argument("--indeterminacy", type=int, default=4)
    sensor_flags.add_argument("--no-clamp", action="store_true")

    sc = scen.add_parser("sorites", parents=[common, sensor_flags])
    sc.add_argument("--max-grains", type=int, default=60)
    sc.add_argument("--ask-cap", type=int, default=3)
    sc.add_argument("--policy", choices=("threshold", "sticky"), default="threshold")
    sc.add_argument("--threshold", type=int, default=3)
    sc.add_argument("--sensor", choices=(sensor_mod.MIDPOINT, sensor_mod.POSSIBILISTIC), default=sensor_mod.MIDPOINT)
    sc.set_defaults(run=cmd_sorites)

    sc = scen.add_parser("sensor", parents=[common, sensor_flags])
    sc.add_argument("--tolerance", type=int, default=1)
    sc.add_argument("--cap", type=int, default=200, help="grain range for the threshold brute force")
    sc.add_argument("--table", type=int, default=30, help="largest grain count in the readings table")
    sc.set_defaults(run=cmd_sensor)

    sc = scen.add_parser("williamson", parents=[common])
    sc.add_argument("--t-star", default="170")
    sc.add_argument("--alpha", default="2")
    sc.add_argument("--h", default="1/2")
    sc.add_argument("--lo", default="166")
    sc.add_argument("--hi", default="176")
    sc.add_argument("--margin", default=None, help="grid extension beyond [lo, hi] (default alpha)")
    sc.set_defaults(run=cmd_williamson)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    quiet = False
    try:
        args = build_parser().parse_args(argv)
        quiet = args.quiet
        start = time.perf_counter()
        code, payload = args.run(args)
        if args.timing and isinstance(payload, dict):
            payload.setdefault("elapsed_ms", round((time.perf_counter() - start) * 1000, 3))
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except EngineDisagreement as exc:
        print(json.dumps({"error": str(exc), "tableau": exc.tableau, "search": exc.search}, indent=2), file=stderr)
        return EXIT_INTERNAL
    except (VagueLogicError, ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    if not quiet:
        print(json.dumps(payload, indent=2), file=stdout)
    return code


def main():  # pragma: no cover
    sys.exit(run())
