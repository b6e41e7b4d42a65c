"""Command-line entry point.

Every subcommand prints CSV (``sweep,metric,value,stderr``) to stdout or to
``--out``. Failures exit nonzero after writing one JSON line to stderr::

    {"error": "ConfigError", "field": "sweep", "message": "..."}
"""

import argparse
import json
import math
import sys

import numpy as np

from . import experiments
from .errors import ConfigError
from .randgen import RngStream

EXIT_CONFIG = 2
EXIT_RUNTIME = 1

# subcommand -> (kind without fixture, kind with fixture, sweep kind, param giving the default sweep)
_DEFAULTS = {
    "rate-slow": ("slow_average", "slow_fixture", "n", "n"),
    "rate-fast": ("fast_average", "fast_fixture", "M", "M"),
    "queue": ("queue", "queue", "Qmax", "Qmax"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, EXIT_CONFIG, field="argv")


def _fail(kind, message, code, field=None):
    record = {"error": kind, "message": message}
    if field is not None:
        record["field"] = field
    sys.stderr.write(json.dumps(record) + "\n")
    raise SystemExit(code)


def _common(p):
    p.add_argument("--config", help="flat key = value scenario file")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    p.add_argument("--trials", type=int, help="Monte Carlo draws per point")
    p.add_argument("--out", help="CSV destination (default: stdout)")


def build_parser():
    parser = _Parser(prog="fdrelay", description="Full-duplex MIMO relay rates and buffer-aided throughput.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("rate-slow", "slow-RSI source-relay rates"),
        ("rate-fast", "fast-RSI source-relay rates"),
        ("queue", "buffer-aided throughput and baselines"),
    ):
        _common(sub.add_parser(name, help=text))
    siso = sub.add_parser("rate-siso", help="single-antenna fast-RSI closed form")
    _common(siso)
    siso.add_argument("--h-sr", type=complex, help="fixed source-relay coefficient, e.g. 0.7+0.2j")
    siso.add_argument("--h-rd", type=complex, help="fixed relay-destination coefficient")
    fig = sub.add_parser("figure", help="reproduce one figure's data")
    fig.add_argument("id", type=int, choices=sorted(experiments.FIGURES))
    _common(fig)
    sub.add_parser("selftest", help="quick numerical self-checks")
    return parser


def _mapping(args):
    mapping = experiments.parse_config_text(open(args.config).read()) if args.config else {}
    if args.seed is not None:
        mapping["seed"] = args.seed
    if args.trials is not None:
        mapping["trials"] = args.trials
    return mapping


def _scenario(command, mapping):
    plain, fixed, sweep_kind, param = _DEFAULTS[command]
    mapping = dict(mapping)
    mapping.setdefault("kind", fixed if mapping.get("fixture") else plain)
    mapping.setdefault("sweep_kind", sweep_kind)
    if "sweep" not in mapping:
        mapping["sweep"] = mapping.get(mapping["sweep_kind"], getattr(experiments.SystemParams(), param))
    if command == "queue":
        mapping.setdefault("precoder_mode", "IRD_MAX")
    mapping.setdefault("name", command)
    return experiments.config_from_mapping(mapping)


def _emit(rows, out):
    text = experiments.write_csv(rows, out)
    if out is None:
        sys.stdout.write(text)


def _siso(args, mapping):
    from .rates import rate_siso_fast_sr, rate_siso_rd

    keys = {k: v for k, v in mapping.items() if k in experiments._PARAM_FIELDS}
    keys["M"] = 1
    cfg = experiments.config_from_mapping({**keys, "kind": "fast_average", "sweep_kind": "M", "sweep": "1"})
    params = cfg.params
    seed = int(mapping.get("seed", 1))
    trials = int(mapping.get("trials", cfg.trials))
    gen = RngStream(seed).generator()

    def draws(fixed):
        if fixed is not None:
            return np.array([fixed])
        z = gen.standard_normal((trials, 2))
        return np.sqrt(0.5) * (z[:, 0] + 1j * z[:, 1])  # Rayleigh, unit mean gain

    h_sr = draws(args.h_sr)
    h_rd = draws(args.h_rd)
    rows = []
    for metric, values in (
        ("siso_fast_sr", [rate_siso_fast_sr(h, params).value for h in h_sr]),
        ("siso_rd", [rate_siso_rd(h, params).value for h in h_rd]),
    ):
        values = np.asarray(values)
        se = None if values.size == 1 else float(np.std(values, ddof=1) / math.sqrt(values.size))
        rows.append(experiments.ResultRow("rate-siso", 1, metric, float(values.mean()), se))
    return rows


def _selftest():
    from .linalg import hermitian_eigen, logdet2_shifted_gram
    from .queue import QueueChain, stationary
    from .rates import exp_integral_E1

    rng = RngStream(7).generator()
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = a + a.conj().T
    x = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    p = np.diag([2.0, 0.5])
    chain = QueueChain(0.9, 0.24, 0.14, 0.7, 5)
    beta = stationary(chain).beta
    checks = {
        "eigen_reconstruction": np.abs(hermitian_eigen(a).reconstruct() - a).max() < 1e-10,
        "sylvester_reduction": abs(
            logdet2_shifted_gram(3.0, x, p) - np.linalg.slogdet(3.0 * np.eye(6) + x @ p @ x.conj().T)[1] / np.log(2)
        )
        < 1e-10,
        "e1_at_one": abs(exp_integral_E1(1.0) - 0.21938393439552029) < 1e-14,
        "local_balance": np.abs(beta[:-1] * chain.up() - beta[1:] * chain.down()).max() < 1e-12,
    }
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return 0 if all(checks.values()) else EXIT_RUNTIME


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return _selftest()
        mapping = _mapping(args)
        if args.command == "figure":
            config = experiments.figure_config(args.id, mapping)
            rows = experiments.run_scenario(config)
        elif args.command == "rate-siso":
            rows = _siso(args, mapping)
        else:
            rows = experiments.run_scenario(_scenario(args.command, mapping))
        _emit(rows, args.out)
    except ConfigError as exc:
        _fail("ConfigError", exc.message, EXIT_CONFIG, field=exc.field)
    except OSError as exc:
        _fail(type(exc).__name__, str(exc), EXIT_CONFIG)
    except (ValueError, ArithmeticError) as exc:
        _fail(type(exc).__name__, str(exc), EXIT_RUNTIME)
    return 0
