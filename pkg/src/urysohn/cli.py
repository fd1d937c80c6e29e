"""Command line interface: ``urysohn study`` and ``urysohn verify``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from .study import ConfigError, StudyConfig, run_study
from .verify import run_verify

EXIT_OK, EXIT_SOLVER_FAILED, EXIT_BAD_CONFIG = 0, 1, 2

# flag dest -> StudyConfig field
_FLAG_FIELDS = {
    "problem": "problem", "c": "c", "method": "methods", "r": "r", "n": "ns",
    "quad": "quad", "rho": "rho", "m_rule": "m_rule", "p": "p", "layout": "layout",
    "breakpoint": "breakpoint", "tol": "tol_residual", "max_iter": "max_iter",
    "probe": "probe_count", "format": "fmt",
}


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser():
    parser = argparse.ArgumentParser(prog="urysohn", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    st = sub.add_parser("study", help="run a convergence study")
    st.add_argument("--config", help="JSON file with StudyConfig fields; flags override it")
    st.add_argument("--problem", choices=["reciprocal", "linear", "zero"])
    st.add_argument("--c", type=float, help="shift in the exact solution 1/(t + c)")
    st.add_argument("--method", type=_str_list, help="comma-separated method tags")
    st.add_argument("--r", type=int)
    st.add_argument("--n", type=_int_list, help="doubling chain, e.g. 2,4,8,16")
    st.add_argument("--quad", choices=["gauss", "simpson"])
    st.add_argument("--rho", type=int, help="Gauss points of the quadrature rule (default r)")
    st.add_argument("--m-rule", dest="m_rule", choices=["p", "square"])
    st.add_argument("--p", type=int)
    st.add_argument("--layout", choices=["direct", "reference"])
    st.add_argument("--breakpoint", choices=["cell", "average"])
    st.add_argument("--tol", type=float, help="Newton residual tolerance")
    st.add_argument("--max-iter", dest="max_iter", type=int)
    st.add_argument("--probe", type=int, help="uniform probe points for sup norms")
    st.add_argument("--format", choices=["csv", "markdown"])
    st.add_argument("--out", help="output file (default stdout)")

    sub.add_parser("verify", help="run the self-check suite")
    return parser


def config_from_args(args) -> StudyConfig:
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    for flag, name in _FLAG_FIELDS.items():
        val = getattr(args, flag, None)
        if val is not None:
            data[name] = val
    return StudyConfig.from_dict(data).validate()


def cmd_study(args) -> int:
    try:
        config = config_from_args(args)
    except (ConfigError, TypeError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    logging.getLogger(__name__).debug("config %s", asdict(config))
    table = run_study(config)
    text = table.to_csv() if config.fmt == "csv" else table.to_markdown()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_SOLVER_FAILED if table.failed else EXIT_OK


def cmd_verify(args) -> int:
    results = run_verify()
    for res in results:
        print(res.line())
    ok = all(res.passed for res in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_SOLVER_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "study":
        return cmd_study(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
