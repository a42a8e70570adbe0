"""
Command-line front end: `verify <suite>` and `catalog`
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __description__, __version__
from .core.braiding import BUILTIN_NAMES, builtin_braiding
from .core.errors import BraidedYangianError, ConfigError
from .models.config import SUITE_NAMES, RunConfig, default_report_dir, settings
from .models.report import Report
from .suites.suites import suite_manager
from .utils.log import setup_logging
from .utils.rendering import renderer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT_ERROR = 2


def _pair(text: str):
    try:
        k, l = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'k,l', got '{text}'")
    return k, l


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="braided-yangian", description=__description__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    verify.add_argument("--braiding", help="builtin name or path to a braiding file")
    verify.add_argument("--N", dest="N", type=int)
    verify.add_argument("--T", dest="T", type=int)
    verify.add_argument("--D", dest="D", type=int)
    verify.add_argument("--q-mode", dest="q_mode", choices=("symbolic", "sampled"))
    verify.add_argument("--seed", type=int)
    verify.add_argument("--points", type=int, help="number of sample points or pairs")
    verify.add_argument("--pairs", type=_pair, nargs="+", help="(k,l) pairs for the bethe suite, e.g. 1,2")
    verify.add_argument("--kmax", type=int)
    verify.add_argument("--k", dest="k", type=int)
    verify.add_argument("--p", dest="p", type=int)
    verify.add_argument("--flavor", choices=("classical", "braided", "weighted"))
    verify.add_argument("--m", dest="m", type=int, help="aux dimension of Gaudin sites")
    verify.add_argument("--sites", type=int)
    verify.add_argument("--site-points", dest="site_points", nargs="+")
    verify.add_argument("--system", help="JSON Gaudin system descriptor (gaudin and talalaev suites)")
    verify.add_argument("--variant", dest="symmetrizer_variant", choices=("top", "own"))
    verify.add_argument("--family", choices=("elementary", "power"))
    verify.add_argument("--workers", type=int)
    verify.add_argument("--no-certificates", dest="certificates", action="store_false", default=None)
    verify.add_argument("--report", help="report path (default: per-user data directory)")
    verify.add_argument("--strict", action="store_true", default=None,
                        help="treat inconclusive checks as failures")
    verify.add_argument("--config", help="JSON config file; flags override its values")
    verify.add_argument("-v", "--verbose", action="count", default=0)

    catalog = commands.add_parser("catalog", help="list builtin braidings and suites")
    catalog.add_argument("--N", dest="N", type=int, nargs="+", default=list(settings.catalog_dims),
                         help="dimensions to list (default: %(default)s)")
    catalog.add_argument("--json", action="store_true", help="machine-readable output")
    catalog.add_argument("-v", "--verbose", action="count", default=0)
    return parser


CONFIG_FLAGS = ("braiding", "N", "T", "D", "q_mode", "seed", "points", "pairs", "kmax", "k", "p", "flavor",
                "m", "sites", "site_points", "symmetrizer_variant", "family", "workers", "certificates",
                "report", "strict", "system")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Flags override config-file values, which override defaults"""
    overrides: Dict[str, Any] = {"suite": args.suite, "verbose": args.verbose}
    for name in CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if args.config:
        return RunConfig.from_file(args.config, overrides)
    return RunConfig.build(overrides)


def report_path(config: RunConfig) -> Path:
    if config.report:
        return Path(config.report)
    return default_report_dir() / f"{config.suite}-seed{config.seed}.json"


def write_certificates(report: Report, path: Path) -> int:
    """One JSON file per certified identity, next to the report; records get witness_ref"""
    directory = path.parent / f"{path.stem}_certificates"
    written = 0
    for index, record in enumerate(report.records):
        if not record.certificates:
            continue
        directory.mkdir(parents=True, exist_ok=True)
        target = directory / f"{index:04d}_{record.check_id}.json"
        payload = [certified.to_json() for certified in record.certificates]
        target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        record.witness_ref = str(target)
        written += 1
    return written


def write_report(report: Report, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")


def run(config: RunConfig) -> Report:
    """Run the configured suite and return its report"""
    return suite_manager.run(config)


def catalog_entries(dims: List[int]) -> List[Dict[str, Any]]:
    """Builtin braidings for every requested dimension, sorted by name, then N"""
    entries = []
    for N in sorted(set(dims)):
        for name in BUILTIN_NAMES:
            try:
                entries.append(builtin_braiding(name, N).describe())
            except BraidedYangianError as e:
                logger.warning("Catalog entry %s unavailable for N=%s: %s", name, N, e)
    return sorted(entries, key=lambda entry: (entry["name"], entry["N"]))


def catalog_suites() -> List[Dict[str, Any]]:
    return [{"name": name,
             "description": suite_manager.get_suite(name).description,
             "default_braiding": suite_manager.get_suite(name).default_braiding}
            for name in suite_manager.list_suites()]


def command_catalog(args: argparse.Namespace) -> int:
    braidings = catalog_entries(args.N)
    suites = catalog_suites()
    if args.json:
        print(json.dumps({"N": sorted(set(args.N)), "braidings": braidings, "suites": suites}, indent=2, sort_keys=True))
    else:
        print(renderer.render_catalog(braidings, suites), end="")
    return EXIT_OK


def command_verify(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    report = run(config)
    path = report_path(config)
    if config.certificates:
        write_certificates(report, path)
    write_report(report, path)
    print(renderer.render_report(report), end="")
    print(f"report: {path}")
    if report.exit_code(config.strict):
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        if args.command == "catalog":
            return command_catalog(args)
        return command_verify(args)
    except ConfigError as e:
        for problem in e.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (BraidedYangianError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
