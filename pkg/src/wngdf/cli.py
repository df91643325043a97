"""Command-line entry point: ``wngdf {sweep,match,run}``."""
import argparse
import sys

from .errors import ConfigError, WngDfError
from .experiment import load_config, run

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file")
    common.add_argument("--sensors", type=int)
    common.add_argument("--spacing-m", type=float)
    common.add_argument("--sound-speed", type=float)
    common.add_argument("--f-lo", type=float)
    common.add_argument("--f-hi", type=float)
    common.add_argument("--bins", type=int)
    common.add_argument("--families", help="comma-separated subset of RSD,TUN,KP,CKP")
    common.add_argument("--target-wng-db", type=float)
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="output directory for CSVs and manifest")

    parser = argparse.ArgumentParser(prog="wngdf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="broadband WNG/DF over each family's parameter range")
    sub.add_parser("match", parents=[common], help="per-frequency DF at a common broadband WNG")
    sub.add_parser("run", parents=[common], help="sweep and match")
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    overrides = {
        ("geometry", "sensors"): args.sensors,
        ("geometry", "spacing_m"): args.spacing_m,
        ("geometry", "sound_speed"): args.sound_speed,
        ("grid", "f_lo"): args.f_lo,
        ("grid", "f_hi"): args.f_hi,
        ("grid", "bins"): args.bins,
        ("experiment", "families"): args.families,
        ("experiment", "target_wng_db"): args.target_wng_db,
        ("experiment", "workers"): args.workers,
        ("output", "dir"): args.out,
    }
    try:
        config = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"wngdf: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    mode = "all" if args.command == "run" else args.command
    try:
        run(config, mode)
    except ConfigError as exc:
        print(f"wngdf: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WngDfError, OSError) as exc:
        print(f"wngdf: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
