"""Seeded Monte Carlo evaluation of precoder designs.

For each of ``T`` channel draws every design is computed once; then ``Z``
source/noise pairs are pushed through ``y = H A x + n`` and the LMMSE
estimate of ``s = Q x`` is scored. The figure of merit is
``sum ||s_hat - s||^2 / (n K T Z)``.

Random streams are keyed by ``(point seed, t)`` for the channel and
``(point seed, t, z)`` for each source/noise draw, so results do not depend
on how trials are scheduled across workers.
"""

import logging
import struct
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import AirCompError, ContractError
from .model import SystemConfig, build_covariances, build_Q
from .numerics import cholesky_lower
from .precoder import DESIGN_TAGS, design
from .receiver import estimate, lmmse_matrix

__all__ = [
    "TrialPlan",
    "SweepRow",
    "SweepTable",
    "SWEEP_VARIABLES",
    "sample_complex_gaussian",
    "sample_channel",
    "point_seed",
    "run_point",
    "run_sweep",
    "squared_errors",
]

log = logging.getLogger(__name__)

SWEEP_VARIABLES = ("m", "r", "K", "snr_db")

# stream labels mixed into seed sequences
_CHANNEL, _SOURCE, _RANDOM_DESIGN = 0, 1, 2


@dataclass(frozen=True)
class TrialPlan:
    config: SystemConfig
    methods: tuple = DESIGN_TAGS
    T: int = 10
    Z: int = 100
    master_seed: int = 0

    def __post_init__(self):
        methods = tuple(self.methods)
        if not methods:
            raise ContractError("at least one method is required")
        unknown = [m for m in methods if m not in DESIGN_TAGS]
        if unknown:
            raise ContractError(f"unknown methods {unknown}; expected a subset of {DESIGN_TAGS}")
        if self.T < 1 or self.Z < 1:
            raise ContractError(f"T and Z must be >= 1, got T={self.T}, Z={self.Z}")
        if not 0 <= self.master_seed < 2**64:
            raise ContractError("master_seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "methods", methods)


@dataclass(frozen=True)
class SweepRow:
    sweep_var: str
    sweep_value: float
    method: str
    normalized_mse: float
    trials: int
    std_error: float
    message: str = ""

    @property
    def ok(self):
        return np.isfinite(self.normalized_mse)


@dataclass
class SweepTable:
    rows: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def extend(self, rows):
        self.rows.extend(rows)

    def curve(self, method):
        """``(values, mse, std_error)`` arrays for one method, in row order."""
        rows = [row for row in self.rows if row.method == method]
        return (
            np.array([row.sweep_value for row in rows]),
            np.array([row.normalized_mse for row in rows]),
            np.array([row.std_error for row in rows]),
        )


def sample_complex_gaussian(cov, rng, size=None):
    """Draw from ``CN(0, cov)``.

    Returns a vector, or a ``(dim, size)`` matrix of independent columns when
    ``size`` is given. Real and imaginary parts of the underlying white
    samples each have variance 1/2.
    """
    L = cholesky_lower(cov, name="covariance")
    shape = (L.shape[0],) if size is None else (L.shape[0], size)
    g = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return L @ g


def sample_channel(r, mK, rng):
    """``r x mK`` channel with i.i.d. ``CN(0, 1)`` entries."""
    if r < 1 or mK < 1:
        raise ContractError(f"channel dimensions must be >= 1, got {(r, mK)}")
    shape = (r, mK)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def point_seed(master_seed, variable, value):
    """Deterministic 64-bit seed for one sweep point."""
    tag = zlib.crc32(variable.encode())
    bits = struct.unpack("<Q", struct.pack("<d", float(value)))[0]
    ss = np.random.SeedSequence([master_seed, tag, bits])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _rng(seed, *keys):
    return np.random.default_rng(np.random.SeedSequence([seed, *keys]))


def squared_errors(receiver, H, A, Q, x, noise):
    """``||W (H A x + n) - Q x||^2`` per column of ``x``/``noise``."""
    y = H @ (np.asarray(getattr(A, "A", A)) @ x) + noise
    err = estimate(receiver, y) - Q @ x
    return np.sum(np.abs(err) ** 2, axis=0)


def _run_channel(config, methods, seed, t, Z):
    """Summed squared error per method for channel draw ``t``.

    Failed designs are reported as their error message instead of a number.
    """
    cov = build_covariances(config)
    Q = build_Q(config.n, config.K)
    H = sample_channel(config.r, config.mK, _rng(seed, _CHANNEL, t))
    receivers = {}
    out = {}
    for method in methods:
        try:
            pre = design(method, config, cov.data_cov, cov.noise_cov, H, rng=_rng(seed, _RANDOM_DESIGN, t))
            receivers[method] = (pre, lmmse_matrix(pre, H, cov.data_cov, cov.noise_cov, Q))
        except (AirCompError, np.linalg.LinAlgError, ArithmeticError) as exc:
            out[method] = f"{type(exc).__name__}: {exc}"
    L_data = cholesky_lower(cov.data_cov, name="data covariance")
    L_noise = cholesky_lower(cov.noise_cov, name="noise covariance")
    X = np.empty((config.nK, Z), dtype=complex)
    N = np.empty((config.r, Z), dtype=complex)
    for z in range(Z):
        rng = _rng(seed, _SOURCE, t, z)
        X[:, z] = L_data @ _white(rng, config.nK)
        N[:, z] = L_noise @ _white(rng, config.r)
    totals = {
        method: squared_errors(rec, H, pre, Q, X, N)
        for method, (pre, rec) in receivers.items()
    }
    for method, errs in totals.items():
        out[method] = float(np.sum(errs))
    return out


def _white(rng, dim):
    return (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2.0)


def _run_channel_args(args):
    return _run_channel(*args)


def run_point(plan, workers=1, sweep_var="", sweep_value=float("nan")):
    """Evaluate every method of ``plan`` at one configuration.

    Returns one :class:`SweepRow` per method. ``std_error`` is the standard
    error of the per-channel normalized MSE (zero when ``T == 1``).
    """
    cfg = plan.config
    jobs = [(cfg, plan.methods, plan.master_seed, t, plan.Z) for t in range(plan.T)]
    if workers > 1 and plan.T > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_channel_args, jobs))
    else:
        results = [_run_channel_args(job) for job in jobs]

    norm = cfg.nK * plan.Z
    rows = []
    for method in plan.methods:
        values = [res[method] for res in results]
        failures = [v for v in values if isinstance(v, str)]
        if failures:
            log.warning("%s failed on %d of %d channels: %s", method, len(failures), plan.T, failures[0])
            rows.append(SweepRow(sweep_var, sweep_value, method, float("nan"), 0, float("nan"), failures[0]))
            continue
        per_channel = np.array(values) / norm
        mse = float(np.sum(per_channel) / plan.T)
        se = float(np.std(per_channel, ddof=1) / np.sqrt(plan.T)) if plan.T > 1 else 0.0
        rows.append(SweepRow(sweep_var, sweep_value, method, mse, plan.T * plan.Z, se))
    return rows


def run_sweep(base, variable, values, workers=1, adjust=None, paired=True):
    """Run :func:`run_point` for each value of one configuration field.

    Parameters
    ----------
    base : TrialPlan
        Plan whose config supplies every other parameter.
    variable : {"m", "r", "K", "snr_db"}
    values : iterable
    workers : int
        Process count for channel draws; results do not depend on it.
    adjust : callable, optional
        ``adjust(config) -> config`` applied after setting the swept field,
        e.g. to lock ``r = 5 m``.
    paired : bool
        If True (default) every point reuses ``base.master_seed``, so points
        share their underlying random draws and differences along the sweep
        are not masked by channel-to-channel variation. If False each point
        gets its own seed from :func:`point_seed`.

    Invalid values produce rows with NaN MSE and the validation message.
    """
    if variable not in SWEEP_VARIABLES:
        raise ContractError(f"cannot sweep {variable!r}; expected one of {SWEEP_VARIABLES}")
    table = SweepTable()
    for value in values:
        try:
            cfg = replace(base.config, **{variable: value})
            if adjust is not None:
                cfg = adjust(cfg)
        except ContractError as exc:
            log.warning("skipping %s=%r: %s", variable, value, exc)
            table.extend(
                SweepRow(variable, float(value), m, float("nan"), 0, float("nan"), str(exc))
                for m in base.methods
            )
            continue
        seed = base.master_seed if paired else point_seed(base.master_seed, variable, value)
        plan = replace(base, config=cfg, master_seed=seed)
        table.extend(run_point(plan, workers, variable, float(value)))
    return table
