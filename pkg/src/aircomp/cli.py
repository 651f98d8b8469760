"""Command-line front end: ``aircomp design|sweep|reproduce``.

Configuration files are JSON objects. Recognised keys (defaults in
parentheses): n (8), m (2), r (16), K (30), p0 (10), snr_db (25),
rho_data (0.8), rho_noise (0.5), methods (all four designs), T (10), Z (100),
seed (0), sweep ({"variable": ..., "values": [...]}, also accepted as the
dotted keys ``sweep.variable`` / ``sweep.values``) and output_path.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O failure.
"""

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .exceptions import ContractError, DegeneratePrecoderError, NoUsableModeError
from .model import SystemConfig, build_covariances
from .montecarlo import SWEEP_VARIABLES, TrialPlan, run_sweep, sample_channel
from .precoder import DESIGN_TAGS, design, transmit_power

__all__ = ["RunConfig", "parse_config", "load_config", "cmd_design", "cmd_sweep", "cmd_reproduce", "main", "FIGURES"]

log = logging.getLogger(__name__)

CSV_HEADER = ("sweep_var", "sweep_value", "method", "normalized_mse", "trials", "std_error")
EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

# stream labels for the single channel drawn by ``design``
_DESIGN_CHANNEL, _DESIGN_RANDOM = 10, 11


@dataclass(frozen=True)
class RunConfig:
    n: int = 8
    m: int = 2
    r: int = 16
    K: int = 30
    p0: float = 10.0
    snr_db: float = 25.0
    rho_data: float = 0.8
    rho_noise: float = 0.5
    methods: tuple = DESIGN_TAGS
    T: int = 10
    Z: int = 100
    seed: int = 0
    sweep_variable: str = None
    sweep_values: tuple = ()
    output_path: str = None

    def system(self):
        return SystemConfig(self.n, self.m, self.r, self.K, self.p0, self.snr_db, self.rho_data, self.rho_noise)

    def plan(self):
        return TrialPlan(self.system(), self.methods, self.T, self.Z, self.seed)

    def to_dict(self):
        d = asdict(self)
        d["methods"] = list(self.methods)
        d["sweep"] = {"variable": d.pop("sweep_variable"), "values": list(d.pop("sweep_values"))}
        return d


_KEYS = {f.name for f in fields(RunConfig)} - {"sweep_variable", "sweep_values"}


def parse_config(data):
    """Validate a config mapping and fill in defaults.

    Raises :class:`ContractError` naming the first unknown key.
    """
    if not isinstance(data, dict):
        raise ContractError("config must be a JSON object")
    kwargs = {}
    for key, value in data.items():
        if key == "sweep":
            if not isinstance(value, dict):
                raise ContractError("config key 'sweep' must be an object")
            for sub, subval in value.items():
                if sub not in ("variable", "values"):
                    raise ContractError(f"unknown config key 'sweep.{sub}'")
                kwargs[f"sweep_{sub}"] = subval
        elif key in ("sweep.variable", "sweep.values"):
            kwargs["sweep_" + key.split(".")[1]] = value
        elif key in _KEYS:
            kwargs[key] = value
        else:
            raise ContractError(f"unknown config key '{key}'")
    if "methods" in kwargs:
        kwargs["methods"] = tuple(kwargs["methods"])
    if kwargs.get("sweep_values") is not None:
        kwargs["sweep_values"] = tuple(kwargs["sweep_values"])
    else:
        kwargs.pop("sweep_values", None)
    rc = RunConfig(**kwargs)
    if rc.sweep_variable is not None and rc.sweep_variable not in SWEEP_VARIABLES:
        raise ContractError(f"sweep.variable must be one of {SWEEP_VARIABLES}, got {rc.sweep_variable!r}")
    rc.plan()  # validates dimensions, methods, T, Z, seed
    return rc


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(json.load(fh))


def _fmt(value):
    if value is None or not np.isfinite(value):
        return ""
    return format(float(value), ".10g")


def write_csv(table, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in table:
        writer.writerow([row.sweep_var, _fmt(row.sweep_value), row.method, _fmt(row.normalized_mse),
                         row.trials, _fmt(row.std_error)])


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _report_failures(table):
    for row in table:
        if not row.ok:
            print(f"warning: {row.method} at {row.sweep_var}={row.sweep_value:g}: {row.message}", file=sys.stderr)


def cmd_design(rc, out=None):
    """Draw one channel from ``rc.seed`` and dump every configured design.

    The dump is JSON holding each precoder's ``m x n`` blocks as separate
    real/imag arrays plus its tag, predicted MSE and transmit power. Predicted
    MSEs are printed one per line as ``method<TAB>value``.
    """
    cfg = rc.system()
    cov = build_covariances(cfg)
    H = sample_channel(cfg.r, cfg.mK, np.random.default_rng([rc.seed, _DESIGN_CHANNEL]))
    precoders = []
    for method in rc.methods:
        pre = design(method, cfg, cov.data_cov, cov.noise_cov, H, rng=np.random.default_rng([rc.seed, _DESIGN_RANDOM]))
        power = transmit_power(pre, cov.data_cov)
        precoders.append({
            "design_tag": pre.design_tag,
            "predicted_mse": pre.predicted_mse,
            "transmit_power": power,
            "power_error": abs(power - cfg.p0) / cfg.p0,
            "blocks": [{"real": b.real.tolist(), "imag": b.imag.tolist()} for b in pre.blocks],
        })
        print(f"{method}\t{_fmt(pre.predicted_mse)}")
    dump = {"config": rc.to_dict(), "precoders": precoders}
    _emit(json.dumps(dump, indent=2, sort_keys=True) + "\n", out or rc.output_path or "precoders.json")
    return dump


def cmd_sweep(rc, out=None, workers=1):
    """Run the configured sweep and write the CSV table."""
    if rc.sweep_variable is None:
        raise ContractError("config has no sweep.variable")
    table = run_sweep(rc.plan(), rc.sweep_variable, rc.sweep_values, workers=workers)
    _report_failures(table)
    buf = io.StringIO()
    write_csv(table, buf)
    _emit(buf.getvalue(), out or rc.output_path)
    return table


def _lock_r_to_5m(cfg):
    return replace(cfg, r=5 * cfg.m)


# figure id -> (config overrides, swept variable, values, adjust)
FIGURES = {
    "fig2": ({"K": 30, "snr_db": 25.0}, "m", tuple(range(1, 9)), _lock_r_to_5m),
    "fig3": ({"m": 2, "K": 30, "snr_db": 25.0}, "r", (4, 8, 16, 24, 32, 48, 60, 72, 90, 120), None),
    "fig4": ({"m": 2, "r": 16, "snr_db": 25.0}, "K", (5, 10, 15, 20, 25, 30, 35, 40), None),
    "fig5": ({"m": 2, "r": 16, "K": 30}, "snr_db", (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0), None),
}


def cmd_reproduce(figure_id, seed=0, trials=None, out=None, workers=1, base=None):
    """Run one of the built-in figure sweeps with all four designs."""
    if figure_id not in FIGURES:
        raise ContractError(f"unknown figure id {figure_id!r}; expected one of {sorted(FIGURES)}")
    overrides, variable, values, adjust = FIGURES[figure_id]
    rc = replace(base or RunConfig(), seed=seed, methods=DESIGN_TAGS, **overrides)
    if trials is not None:
        rc = replace(rc, T=trials)
    table = run_sweep(rc.plan(), variable, values, workers=workers, adjust=adjust)
    _report_failures(table)
    buf = io.StringIO()
    write_csv(table, buf)
    _emit(buf.getvalue(), out or rc.output_path)
    return table


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run configuration")
    common.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    common.add_argument("--trials", type=int, metavar="T", help="number of channel draws")
    common.add_argument("--out", metavar="PATH", help="output file")
    common.add_argument("--workers", type=int, default=1, help="worker processes for channel draws")

    parser = argparse.ArgumentParser(prog="aircomp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("design", parents=[common], help="design precoders for one channel draw")
    sub.add_parser("sweep", parents=[common], help="run the sweep described in the config")
    rep = sub.add_parser("reproduce", parents=[common], help="run a built-in figure sweep")
    rep.add_argument("figure", choices=sorted(FIGURES))
    return parser


def _run(args):
    rc = load_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        rc = replace(rc, seed=args.seed)
    if args.trials is not None:
        rc = replace(rc, T=args.trials)
    rc.plan()
    if args.command == "design":
        cmd_design(rc, args.out)
    elif args.command == "sweep":
        cmd_sweep(rc, args.out, args.workers)
    else:
        cmd_reproduce(args.figure, rc.seed, args.trials, args.out, args.workers, base=rc)


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; that code means numerical failure here
        return EXIT_OK if not exc.code else EXIT_VALIDATION
    try:
        _run(args)
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NoUsableModeError, DegeneratePrecoderError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
