"""
Command line front end. Every subcommand maps its flags onto the keyword arguments of the
library operation it wraps and returns 0 on success, 1 when a bound or a validation fails
and 2 on usage, document or capacity errors.
"""
import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, Optional, Sequence

import pandas as pd

from dpfacility.data.serialization import parse_instance, write_instance
from dpfacility.exceptions.exceptions import InstanceParseError, UnknownSelectorError
from dpfacility.instances.generators import DEFAULT_B, FAMILIES, FamilySpec, generate
from dpfacility.instances.observations import OBSERVATIONS, validate_observation
from dpfacility.mechanisms.selectors import MECHANISMS, ONE_DIMENSIONAL, get_mechanism
from dpfacility.model.cost import TOL, multiplicative_ratio, social_cost
from dpfacility.oracles.kmedian import opt_k_1d_bruteforce
from dpfacility.oracles.two_dim import EXACT_2D_CAP, solve
from dpfacility.validation.bounds import records_to_frame, run_record, to_csv_text, within_all, write_csv
from dpfacility.validation.strategyproofness import audit_mechanism
from dpfacility.version import __version__

logger = logging.getLogger("dpfacility")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def family_ref(spec: FamilySpec) -> str:
    """A readable reference to a generated instance, e.g. I1(m=1,B=960)."""
    fields = ["m={}".format(spec.m), "B={:g}".format(spec.B)]
    if spec.family.startswith("hardness_2d"):
        fields += ["beta={}".format(spec.beta), "which={}".format(spec.which)]
    if spec.family in ("skewed", "random"):
        fields += ["n={}".format(spec.n), "seed={}".format(spec.seed)]
    if spec.family == "random":
        fields += ["dim={}".format(spec.dim), "norm={}".format(spec.norm)]
    return "{}({})".format(spec.family, ",".join(fields))


def _spec_from_args(args: argparse.Namespace, **overrides: Any) -> FamilySpec:
    spec = FamilySpec(family=args.family, m=args.m, B=args.B, beta=args.beta, seed=args.seed, n=args.n,
                      dim=args.dim, norm=args.norm, which=args.which)
    return spec._replace(**overrides)


def _emit(frame: pd.DataFrame, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(to_csv_text(frame))
    else:
        write_csv(frame, output)
        logger.info("wrote %d rows to %s", len(frame), output)


def _print_json(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload))


def _solve(args: argparse.Namespace) -> int:
    instance = parse_instance(args.input)
    if args.k is not None:
        result = opt_k_1d_bruteforce(instance, args.k)
    else:
        result = solve(instance, tol=args.tol, cap=args.cap)
    _print_json({"method": result.method,
                 "facilities": result.placement.facilities.tolist(),
                 "opt": result.opt_value,
                 "guaranteed_exact": result.guaranteed_exact})
    return EXIT_OK


def _mech(args: argparse.Namespace) -> int:
    instance = parse_instance(args.input)
    params = {"k": args.k} if args.k is not None else {}
    facilities = get_mechanism(args.mech, **params)(instance)
    _print_json({"mechanism": args.mech,
                 "facilities": facilities.tolist(),
                 "sc": social_cost(facilities, instance)})
    return EXIT_OK


def _compare(args: argparse.Namespace) -> int:
    instance = parse_instance(args.input)
    records = [run_record(args.input, name, instance, k=args.k) for name in args.mech]
    frame = records_to_frame(records)
    _emit(frame, args.output)
    for record in records:
        if not record.within_bound:
            logger.error("%s exceeds its bound on %s: sc %r > %r", record.mechanism, args.input, record.sc,
                         record.bound_rhs)
    return EXIT_OK if within_all(frame) else EXIT_FAILED


def _generate(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    instance = generate(spec)
    write_instance(instance, args.output)
    logger.info("wrote %s (%d agents) to %s", family_ref(spec), instance.n, args.output)
    return EXIT_OK


def _audit(args: argparse.Namespace) -> int:
    dim = args.dim if args.dim is not None else (1 if args.mech in ONE_DIMENSIONAL else 2)
    spec = _spec_from_args(args, dim=dim, n=args.n if args.n is not None else 5)
    params = {"k": args.k} if args.k is not None else {}
    report = audit_mechanism(args.mech, [spec], pitch=args.pitch, trials=args.trials, n_jobs=args.n_jobs,
                             verbose=args.verbose, **params)
    if args.output is not None:
        write_csv(report.records, args.output)
        logger.info("wrote %d audit records to %s", len(report.records), args.output)
    logger.info("audit of %s: worst gain %r, worst gap %r (%s)", args.mech, report.worst_gain, report.worst_gap,
                report.log["audit_mechanism"]["running_time"])
    if report.worst_gain > TOL:
        logger.error("%s is manipulable: a misreport gains %r", args.mech, report.worst_gain)
        return EXIT_FAILED
    return EXIT_OK


def _validate(args: argparse.Namespace) -> int:
    report = validate_observation(_spec_from_args(args), args.obs)
    for description, expected, actual, passed in report.checks:
        logger.debug("%s: expected %r, got %r", description, expected, actual)
        if not passed:
            logger.error("%s failed: expected %r, got %r", description, expected, actual)
    _print_json({"obs_id": report.obs_id,
                 "instance_digest": report.instance_digest,
                 "checks": len(report.checks),
                 "all_pass": report.all_pass})
    return EXIT_OK if report.all_pass else EXIT_FAILED


def _table(args: argparse.Namespace) -> int:
    frames = []
    for value in args.values:
        spec = _spec_from_args(args, **{args.sweep: value})
        instance = generate(spec)
        records = records_to_frame([run_record(family_ref(spec), name, instance, k=args.k) for name in args.mech])
        frames.append(records)
    frame = pd.concat(frames, ignore_index=True)
    if args.offset is not None:
        frame["ratio"] = [multiplicative_ratio(sc, opt, n, args.offset)
                          for sc, opt, n in zip(frame["sc"], frame["opt"], frame["n"])]
    _emit(frame, args.output)
    return EXIT_OK if within_all(frame) else EXIT_FAILED


def _add_family_arguments(parser: argparse.ArgumentParser, family_default: Optional[str] = None) -> None:
    parser.add_argument("--family", choices=FAMILIES, default=family_default, required=family_default is None)
    parser.add_argument("--m", type=int, default=1, help="group size of the three-group families")
    parser.add_argument("--B", type=float, default=DEFAULT_B, help="global preferred-distance bound")
    parser.add_argument("--beta", type=float, default=None, help="zero-b group ratio of the 2D families")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--n", type=int, default=None, help="agents of the skewed and random families")
    parser.add_argument("--dim", type=int, choices=(1, 2), default=None if family_default else 1)
    parser.add_argument("--norm", choices=("L1", "L2"), default="L1")
    parser.add_argument("--which", choices=("I1", "I2"), default="I1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpfacility",
                                     description="Facility location mechanisms for doubly peaked preferences")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging and progress bars")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve_parser = subparsers.add_parser("solve", help="optimal placement of an instance file")
    solve_parser.add_argument("-i", "--input", required=True)
    solve_parser.add_argument("--k", type=int, default=None, help="number of facilities (1D brute force)")
    solve_parser.add_argument("--tol", type=float, default=1e-4, help="L2 oracle tolerance")
    solve_parser.add_argument("--cap", type=int, default=EXACT_2D_CAP, help="agent cap of the exact 2D oracle")
    solve_parser.set_defaults(handler=_solve)

    mech_parser = subparsers.add_parser("mech", help="run a mechanism on an instance file")
    mech_parser.add_argument("--mech", choices=sorted(MECHANISMS), required=True)
    mech_parser.add_argument("-i", "--input", required=True)
    mech_parser.add_argument("--k", type=int, default=None)
    mech_parser.set_defaults(handler=_mech)

    compare_parser = subparsers.add_parser("compare", help="mechanisms against the oracle and their bounds")
    compare_parser.add_argument("--mech", choices=sorted(MECHANISMS), nargs="+", required=True)
    compare_parser.add_argument("-i", "--input", required=True)
    compare_parser.add_argument("--k", type=int, default=None)
    compare_parser.add_argument("-o", "--output", default=None, help="CSV path, stdout when omitted")
    compare_parser.set_defaults(handler=_compare)

    generate_parser = subparsers.add_parser("generate", help="write an instance of a family to a file")
    _add_family_arguments(generate_parser)
    generate_parser.add_argument("-o", "--output", required=True)
    generate_parser.set_defaults(handler=_generate)

    audit_parser = subparsers.add_parser("audit", help="search profitable misreports")
    audit_parser.add_argument("--mech", choices=sorted(MECHANISMS), required=True)
    _add_family_arguments(audit_parser, family_default="random")
    audit_parser.add_argument("--k", type=int, default=None)
    audit_parser.add_argument("--trials", type=int, default=1)
    audit_parser.add_argument("--pitch", type=float, default=None, help="report grid pitch, B/16 when omitted")
    audit_parser.add_argument("--n-jobs", type=int, default=1)
    audit_parser.add_argument("-o", "--output", default=None)
    audit_parser.set_defaults(handler=_audit)

    validate_parser = subparsers.add_parser("validate", help="check the cost facts of a hardness family")
    _add_family_arguments(validate_parser)
    validate_parser.add_argument("--obs", choices=OBSERVATIONS, required=True)
    validate_parser.set_defaults(handler=_validate)

    table_parser = subparsers.add_parser("table", help="sweep m or n and emit the gaps as CSV")
    table_parser.add_argument("--mech", choices=sorted(MECHANISMS), nargs="+", required=True)
    _add_family_arguments(table_parser)
    table_parser.add_argument("--sweep", choices=("m", "n"), default="m")
    table_parser.add_argument("--values", type=int, nargs="+", required=True)
    table_parser.add_argument("--k", type=int, default=None)
    table_parser.add_argument("--offset", type=float, default=None,
                              help="offset c added to every agent cost for the multiplicative ratio column")
    table_parser.add_argument("-o", "--output", default=None)
    table_parser.set_defaults(handler=_table)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return int(error.code or 0)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except (InstanceParseError, UnknownSelectorError, OSError, ValueError) as error:
        logger.error("%s", error)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
