"""Scenario configuration, sweep orchestration and CSV output.

A scenario is a :class:`ScenarioConfig`: system parameters, one swept
parameter, and a ``kind`` that selects what gets computed at each sweep
point. :func:`run_scenario` returns :class:`ResultRow` records in sweep order
and :func:`write_csv` serializes them with the header
``sweep,metric,value,stderr``. Every sweep point draws from its own child
stream of the seed, so output is a pure function of ``(config, seed)``.

The flat ``key = value`` config format and the per-kind metric names are
documented in ``docs/config.md``.
"""

import configparser
import csv
import dataclasses
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .linalg import adjoint, gram, hermitian_eigen, log2det_identity_plus
from .params import SystemParams, db_to_linear
from .precoders import Allocation, Design, ird_max_precoder, isr_max_precoder, select_precoder_maxmin
from .queue import (
    buffered_fd_throughput,
    conventional_from_eigenvalues,
    link_probs_from_rates,
    link_rates_from_eigenvalues,
    sample_eigenvalues,
    stream_allocation,
    upper_bound_throughput,
)
from .randgen import (
    VARIANCE_CONVENTIONS,
    RngStream,
    draw_channels,
    draw_codeword,
    relay_element_variance,
    table1_fixture,
)
from .rates import (
    fast_penalty_samples,
    no_interference_rate,
    rate_fast_irdmax_expect,
    rate_fast_isrmax_expect,
    rate_hd_sr,
    rate_rd,
    rate_slow_general,
)

__all__ = [
    "KINDS",
    "SWEEP_KINDS",
    "PRECODER_MODES",
    "ScenarioConfig",
    "ResultRow",
    "parse_config_text",
    "load_config",
    "config_from_mapping",
    "figure_config",
    "run_scenario",
    "write_csv",
    "figure",
    "FIGURES",
]

KINDS = (
    "slow_fixture",
    "slow_average",
    "fast_fixture",
    "fast_average",
    "maxmin_fixture",
    "maxmin_average",
    "queue",
)
FIXTURE_KINDS = ("slow_fixture", "fast_fixture", "maxmin_fixture")
SWEEP_KINDS = ("n", "M", "Qmax", "R", "sigma2_RR_db")
PRECODER_MODES = ("ISR_MAX", "IRD_MAX", "MAXMIN_SELECT", "HD")
INNER_SAMPLES = 256  # per-channel symbol draws for the averaged max-min rates
ELEMENTS_PER_CHUNK = 4_000_000


@dataclass(frozen=True)
class ScenarioConfig:
    """One reproducible sweep.

    ``rates`` and ``sigma2_db_series`` are extra series for the ``queue``
    kind: every sweep point is evaluated at each listed rate and RSI level,
    and the metric names get ``[R=...]`` / ``[sigma2_RR_db=...]`` suffixes
    when a series has more than one entry.
    """

    kind: str
    sweep_kind: str
    sweep: tuple
    params: SystemParams = field(default_factory=SystemParams)
    seed: int = 1
    trials: int = 10_000
    precoder_mode: str = "MAXMIN_SELECT"
    allocation: str = "EQUAL"
    fixture: tuple = ()
    rates: tuple = ()
    sigma2_db_series: tuple = ()
    name: str = "custom"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}, got {self.kind!r}")
        if self.sweep_kind not in SWEEP_KINDS:
            raise ConfigError("sweep_kind", f"must be one of {', '.join(SWEEP_KINDS)}, got {self.sweep_kind!r}")
        if len(self.sweep) == 0:
            raise ConfigError("sweep", "grid must be nonempty")
        integral = self.sweep_kind in ("n", "M", "Qmax")
        for v in self.sweep:
            if not math.isfinite(v):
                raise ConfigError("sweep", f"values must be finite, got {v}")
            if self.sweep_kind != "sigma2_RR_db" and not v > 0:
                raise ConfigError("sweep", f"values must be positive, got {v}")
            if integral and v != int(v):
                raise ConfigError("sweep", f"{self.sweep_kind} values must be integers, got {v}")
        # integer sweeps print as integers in the CSV
        object.__setattr__(self, "sweep", tuple(int(v) if integral else float(v) for v in self.sweep))
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed}")
        if self.trials < 1:
            raise ConfigError("trials", f"must be >= 1, got {self.trials}")
        if self.precoder_mode not in PRECODER_MODES:
            raise ConfigError("precoder_mode", f"must be one of {', '.join(PRECODER_MODES)}")
        if self.allocation not in (a.value for a in Allocation):
            raise ConfigError("allocation", "must be EQUAL or WATERFILL")
        if self.kind in FIXTURE_KINDS:
            if not self.fixture:
                raise ConfigError("fixture", f"kind {self.kind} needs table1 slots")
            if self.sweep_kind == "M" or self.params.M != 2:
                raise ConfigError("M", "the table1 fixtures are 2x2")
        if any(s not in (1, 2, 3) for s in self.fixture):
            raise ConfigError("fixture", f"slots must be 1, 2 or 3, got {self.fixture}")
        if self.kind == "queue" and self.precoder_mode != "IRD_MAX":
            raise ConfigError("precoder_mode", "the queue model uses the IRD_MAX relay precoder")
        if any(not r > 0 for r in self.rates):
            raise ConfigError("rates", "values must be positive")
        # every sweep point must give valid parameters
        for v in self.sweep:
            try:
                _apply_sweep(self.params, self.sweep_kind, v)
            except ValueError as exc:
                raise ConfigError(self.sweep_kind, str(exc)) from None

    @property
    def variance_convention(self):
        return self.params.variance_convention


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    sweep: float
    metric: str
    value: float
    stderr: float = None  # set iff the value is a Monte Carlo estimate


# ---------------------------------------------------------------- config io

_PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(SystemParams))
_INT_PARAMS = ("M", "n", "Qmax")


def parse_config_text(text):
    """Parse flat ``key = value`` lines into a dict of strings.

    ``#`` and ``;`` start comments; section headers are not allowed.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[scenario]\n" + text)
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).replace("\n", " ")) from None
    if len(parser.sections()) != 1:
        raise ConfigError("config", "section headers are not supported")
    return dict(parser["scenario"])


def load_config(path):
    return config_from_mapping(parse_config_text(Path(path).read_text()))


def _parse_scalar(key, raw, kind):
    try:
        if kind is bool:
            lowered = str(raw).strip().lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return lowered in ("true", "1", "yes")
        if kind is int:
            if isinstance(raw, (int, np.integer)):
                return int(raw)
            text = str(raw).strip()
            try:
                return int(text)
            except ValueError:
                value = float(text)  # accepts "1e5" and "2000.0"
                if value != int(value):
                    raise
                return int(value)
        if kind is float:
            return float(raw)
        return str(raw).strip()
    except (TypeError, ValueError):
        raise ConfigError(key, f"cannot parse {raw!r} as {kind.__name__}") from None


def _parse_list(key, raw, kind=float):
    if isinstance(raw, (list, tuple)):
        items = list(raw)
    else:
        items = [s for s in str(raw).replace(";", ",").split(",") if s.strip()]
    return tuple(_parse_scalar(key, s, kind) for s in items)


def config_from_mapping(mapping, base=None):
    """Build a :class:`ScenarioConfig` from flat keys, optionally over ``base``.

    Keys are the :class:`SystemParams` field names plus the scenario fields.
    Values may be strings (as read from a file) or Python values.
    """
    params = dataclasses.asdict(base.params) if base else {}
    scenario = {f.name: getattr(base, f.name) for f in dataclasses.fields(ScenarioConfig) if f.name != "params"} if base else {}
    for key, raw in mapping.items():
        if key in _PARAM_FIELDS:
            if key == "variance_convention":
                value = _parse_scalar(key, raw, str)
                if value not in VARIANCE_CONVENTIONS:
                    raise ConfigError(key, f"must be one of {', '.join(VARIANCE_CONVENTIONS)}")
            elif key == "literal_scaling":
                value = _parse_scalar(key, raw, bool)
            else:
                value = _parse_scalar(key, raw, int if key in _INT_PARAMS else float)
            params[key] = value
        elif key == "sweep":
            scenario[key] = _parse_list(key, raw)
        elif key == "fixture":
            scenario[key] = _parse_list(key, raw, int)
        elif key in ("rates", "sigma2_db_series"):
            scenario[key] = _parse_list(key, raw)
        elif key in ("seed", "trials"):
            scenario[key] = _parse_scalar(key, raw, int)
        elif key in ("kind", "sweep_kind", "precoder_mode", "allocation", "name"):
            scenario[key] = _parse_scalar(key, raw, str)
        else:
            raise ConfigError(key, "unknown config key")
    for required in ("kind", "sweep_kind", "sweep"):
        if required not in scenario:
            raise ConfigError(required, "missing required key")
    try:
        system = SystemParams(**params)
    except ValueError as exc:
        message = str(exc)
        raise ConfigError(message.split()[0], message) from None
    return ScenarioConfig(params=system, **scenario)


# ------------------------------------------------------------------ running


def _apply_sweep(params, sweep_kind, value):
    if sweep_kind == "sigma2_RR_db":
        return params.with_(sigma2_RR=db_to_linear(value))
    if sweep_kind in _INT_PARAMS:
        return params.with_(**{sweep_kind: int(value)})
    return params.with_(**{sweep_kind: float(value)})


def _series(mode):
    return {
        "HD": (),
        "ISR_MAX": ("isr_max",),
        "IRD_MAX": ("ird_max",),
        "MAXMIN_SELECT": ("isr_max", "ird_max"),
    }[mode]


def _mean_se(samples):
    samples = np.asarray(samples, dtype=float)
    se = float(np.std(samples, ddof=1) / math.sqrt(samples.size)) if samples.size > 1 else float("nan")
    return float(np.mean(samples)), se


def _slow_fixture(cfg, params, rng):
    rows = []
    for slot in cfg.fixture:
        ch = table1_fixture(slot)
        tag = f"slot{slot}."
        rows.append((tag + "no_interference", rate_hd_sr(ch, params).value, None))
        cw = draw_codeword(params.n, params.M, params.P_R, rng.child(slot), params.variance_convention)
        designs = {
            "isr_max": lambda: isr_max_precoder(cw),
            "ird_max": lambda: ird_max_precoder(ch.H_RD, cfg.allocation, params),
        }
        for name in _series(cfg.precoder_mode):
            rows.append((tag + name, rate_slow_general(ch, cw, designs[name](), params).value, None))
    return rows


def _chunks(trials, per_trial):
    size = max(1, ELEMENTS_PER_CHUNK // max(1, per_trial))
    for start in range(0, trials, size):
        yield start, min(size, trials - start)


def _slow_average(cfg, params, rng):
    """Channel-and-codeword averages of the slow-RSI source-relay rate."""
    m, n = params.M, params.n
    var = relay_element_variance(params.P_R, m, params.variance_convention)
    samples = {"no_interference": []}
    samples.update({name: [] for name in _series(cfg.precoder_mode)})
    for k, (_, count) in enumerate(_chunks(cfg.trials, n * m)):
        sub = rng.child(k)
        H_SR, H_RD = draw_channels(m, count, 1.0, sub.child(0))
        eta = np.clip(hermitian_eigen(H_SR @ adjoint(H_SR)).eigenvalues, 0.0, None)
        base = no_interference_rate(eta, params)
        samples["no_interference"].append(base)
        gen = sub.child(1).generator()
        z = gen.standard_normal((count, n, m, 2))
        X = np.sqrt(var / 2.0) * (z[..., 0] + 1j * z[..., 1])
        G = gram(X)
        covariances = {}
        if "isr_max" in samples:
            q = hermitian_eigen(G).eigenvectors[..., :, 0]
            covariances["isr_max"] = m * q[..., :, None] * np.conj(q[..., None, :])
        if "ird_max" in samples:
            lam = np.clip(hermitian_eigen(gram(H_RD)).eigenvalues, 0.0, None)
            alloc = stream_allocation(lam, params, cfg.allocation)
            # psi psi^H = diag(|E|^2) because the eigenbasis factor is unitary
            covariances["ird_max"] = alloc[..., :, None] * np.eye(m)
        for name, K in covariances.items():
            KG = params.sigma2_RR * (K @ G)
            penalty = -m * log2det_identity_plus(KG / params.kappa_R)
            for v in range(m):
                shift = params.Ps_tilde * eta[:, v] + params.kappa_R
                penalty = penalty + log2det_identity_plus(KG / shift[:, None, None])
            samples[name].append(base + penalty / n)
    return [(name, *_mean_se(np.concatenate(vals))) for name, vals in samples.items()]


def _fast_fixture(cfg, params, rng):
    rows = []
    for slot in cfg.fixture:
        ch = table1_fixture(slot)
        tag = f"slot{slot}."
        rows.append((tag + "no_interference", rate_hd_sr(ch, params).value, None))
        sub = rng.child(slot)
        for name in _series(cfg.precoder_mode):
            if name == "isr_max":
                rep = rate_fast_isrmax_expect(ch, params, cfg.trials, sub.child(0))
            else:
                alloc = ird_max_precoder(ch.H_RD, cfg.allocation, params).allocation
                rep = rate_fast_irdmax_expect(ch, params, alloc, cfg.trials, sub.child(1))
            rows.append((tag + name, rep.value, rep.stderr))
    return rows


def _interference_loads(powers, alloc, params):
    """Per-symbol interference power under both designs from shared draws.

    ``powers`` holds ``|X_R,i(j)|^2`` samples (last axis = stream). Any unit
    ``q`` gives ``|X_R(j) q|^2`` with the law of a single stream, so the
    rank-1 design reuses stream 0 (common random numbers).
    """
    m = params.M
    isr = powers[..., 0] if params.literal_scaling else m * powers[..., 0]
    w = alloc / m if params.literal_scaling else alloc
    if powers.ndim == 3:
        w = w[:, None, :]
    ird = np.sum(powers * w, axis=-1)
    return isr, ird


def _fast_average(cfg, params, rng):
    m = params.M
    var = relay_element_variance(params.P_R, m, params.variance_convention)
    eta, lam = sample_eigenvalues(m, cfg.trials, rng.child(0))
    base = no_interference_rate(eta, params)
    powers = rng.child(1).generator().exponential(var, size=(cfg.trials, m))
    alloc = stream_allocation(lam, params, cfg.allocation)
    isr, ird = _interference_loads(powers, alloc, params)
    loads = {"isr_max": isr, "ird_max": ird}
    rows = [("no_interference", *_mean_se(base))]
    for name in _series(cfg.precoder_mode):
        rows.append((name, *_mean_se(base + fast_penalty_samples(eta, loads[name], params))))
    return rows


def _haar_vectors(gen, count, m):
    z = gen.standard_normal((count, m, 2))
    v = z[..., 0] + 1j * z[..., 1]
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _maxmin_rows(tag, sr, rd, sr_se):
    rows = []
    mins = {}
    for name in ("isr_max", "ird_max"):
        rows.append((f"{tag}{name}_sr", sr[name], sr_se[name]))
        rows.append((f"{tag}{name}_rd", rd[name], None))
        mins[name] = min(sr[name], rd[name])
        rows.append((f"{tag}{name}_min", mins[name], sr_se[name]))
    choice = select_precoder_maxmin((sr["isr_max"], rd["isr_max"]), (sr["ird_max"], rd["ird_max"]))
    pick = "isr_max" if choice is Design.ISR_MAX_RANK1 else "ird_max"
    rows.append((f"{tag}maxmin_select", mins[pick], sr_se[pick]))
    return rows


def _maxmin_fixture(cfg, params, rng):
    rows = []
    for slot in cfg.fixture:
        ch = table1_fixture(slot)
        sub = rng.child(slot)
        cw = draw_codeword(params.n, params.M, params.P_R, sub.child(2), params.variance_convention)
        isr_psi = isr_max_precoder(cw)
        ird_psi = ird_max_precoder(ch.H_RD, cfg.allocation, params)
        isr = rate_fast_isrmax_expect(ch, params, cfg.trials, sub.child(0))
        ird = rate_fast_irdmax_expect(ch, params, ird_psi.allocation, cfg.trials, sub.child(1))
        sr = {"isr_max": isr.value, "ird_max": ird.value}
        se = {"isr_max": isr.stderr, "ird_max": ird.stderr}
        # the literal closed forms use unit-trace precoders on the second hop too
        shrink = 1.0 / math.sqrt(params.M) if params.literal_scaling else 1.0
        rd = {
            "isr_max": rate_rd(ch.H_RD, shrink * isr_psi.psi, params).value,
            "ird_max": rate_rd(ch.H_RD, shrink * ird_psi.psi, params).value,
        }
        rows.extend(_maxmin_rows(f"slot{slot}.", sr, rd, se))
    return rows


def _maxmin_average(cfg, params, rng):
    """Channel averages of ``min(I_SR, I_RD)`` under both designs.

    For each channel the fast-RSI source-relay rate is itself an expectation
    over relay symbols; it is estimated with ``INNER_SAMPLES`` shared draws.
    The rank-1 design's direction ``q`` (the weakest direction of a Gaussian
    codeword) is uniformly distributed on the unit sphere and independent of
    the channels, so it is drawn directly.
    """
    m = params.M
    var = relay_element_variance(params.P_R, m, params.variance_convention)
    eta, lam = sample_eigenvalues(m, cfg.trials, rng.child(0))
    alloc = stream_allocation(lam, params, cfg.allocation)
    gen = rng.child(1).generator()
    base = no_interference_rate(eta, params)
    snr_rd = params.P_R / params.kappa_D
    out = {"isr_max": [], "ird_max": [], "maxmin_select": []}
    for start, count in _chunks(cfg.trials, INNER_SAMPLES * m * 4):
        sl = slice(start, start + count)
        powers = gen.exponential(var, size=(count, INNER_SAMPLES, m))
        isr_load, ird_load = _interference_loads(powers, alloc[sl], params)
        e = eta[sl][:, None, :]
        sr = {
            "isr_max": base[sl] + np.mean(fast_penalty_samples(e, isr_load, params), axis=-1),
            "ird_max": base[sl] + np.mean(fast_penalty_samples(e, ird_load, params), axis=-1),
        }
        # rank-1 relay-destination gain: sum_i lam_i |u_i|^2 with u uniform on the sphere
        u = _haar_vectors(gen, count, m)
        power = 1.0 if params.literal_scaling else float(m)
        rd = {
            "isr_max": np.log2(1.0 + snr_rd * power * np.sum(lam[sl] * np.abs(u) ** 2, axis=-1)),
            "ird_max": np.sum(np.log2(1.0 + snr_rd * lam[sl] * alloc[sl] * power / m), axis=-1),
        }
        mins = {k: np.minimum(sr[k], rd[k]) for k in sr}
        out["isr_max"].append(mins["isr_max"])
        out["ird_max"].append(mins["ird_max"])
        # ties go to the multi-stream design, so the selected value is just the max
        out["maxmin_select"].append(np.maximum(mins["isr_max"], mins["ird_max"]))
    rows = []
    names = {"isr_max": "isr_max_min", "ird_max": "ird_max_min", "maxmin_select": "maxmin_select"}
    for key, vals in out.items():
        if key != "maxmin_select" and key not in _series(cfg.precoder_mode):
            continue
        if key == "maxmin_select" and cfg.precoder_mode != "MAXMIN_SELECT":
            continue
        rows.append((names[key], *_mean_se(np.concatenate(vals))))
    return rows


def _queue(cfg, params, rng, cache):
    key = (params.M,)
    if key not in cache:
        # eigenvalue draws depend only on M, so every sweep point and series shares them
        cache[key] = sample_eigenvalues(params.M, cfg.trials, RngStream(cfg.seed).child(10_000 + params.M))
    eta, lam = cache[key]
    rates = cfg.rates or (params.R,)
    levels = cfg.sigma2_db_series or (None,)
    rows = []
    for R in rates:
        for level in levels:
            p = params.with_(R=R) if level is None else params.with_(R=R, sigma2_RR=db_to_linear(level))
            tag = ""
            if len(rates) > 1:
                tag += f"[R={R!r}]"
            if len(levels) > 1:
                tag += f"[sigma2_RR_db={level!r}]"
            i_sr, i_rd = link_rates_from_eigenvalues(eta, lam, p, cfg.allocation)
            probs = link_probs_from_rates(i_sr, i_rd, R)
            for label, rep in (
                ("buffered_fd", buffered_fd_throughput(probs, p.Qmax)),
                ("conventional_fd", conventional_from_eigenvalues(eta, lam, p, R, cfg.allocation)),
                ("upper_bound", upper_bound_throughput(probs)),
            ):
                rows.append((f"{label}{tag}", rep.mu_d, rep.stderr))
                rows.append((f"{label}_bits{tag}", rep.mu_bits, rep.stderr * R))
    return rows


_RUNNERS = {
    "slow_fixture": _slow_fixture,
    "slow_average": _slow_average,
    "fast_fixture": _fast_fixture,
    "fast_average": _fast_average,
    "maxmin_fixture": _maxmin_fixture,
    "maxmin_average": _maxmin_average,
}


def run_scenario(config):
    """Evaluate every sweep point; rows come back in sweep order."""
    if not isinstance(config, ScenarioConfig):
        raise ConfigError("config", "expected a ScenarioConfig")
    base = RngStream(config.seed)
    cache = {}
    rows = []
    for index, value in enumerate(config.sweep):
        params = _apply_sweep(config.params, config.sweep_kind, value)
        rng = base.child(index)
        if config.kind == "queue":
            point = _queue(config, params, rng, cache)
        else:
            point = _RUNNERS[config.kind](config, params, rng)
        for metric, v, se in point:
            rows.append(ResultRow(config.name, value, metric, float(v), None if se is None else float(se)))
    return rows


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return repr(int(x))
    return repr(float(x))


def write_csv(rows, out=None):
    """Serialize rows; returns the CSV text and writes it to ``out`` if given."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sweep", "metric", "value", "stderr"])
    for row in rows:
        writer.writerow([_fmt(row.sweep), row.metric, _fmt(row.value), _fmt(row.stderr)])
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text)
    return text


# ------------------------------------------------------------------ figures

_SIX = SystemParams()  # 10 dB SNRs, 0 dB RSI, unit noise
# fast-RSI figures use the unit-trace closed forms by default
_LITERAL = _SIX.with_(literal_scaling=True)

FIGURES = {
    2: dict(kind="slow_fixture", sweep_kind="n", sweep=(50,), fixture=(1, 2, 3), params=_SIX.with_(n=50), trials=1),
    3: dict(kind="slow_fixture", sweep_kind="n", sweep=(2000,), fixture=(1, 2, 3), params=_SIX.with_(n=2000), trials=1),
    4: dict(kind="slow_average", sweep_kind="M", sweep=tuple(range(1, 9)), params=_SIX.with_(n=50), trials=1000),
    5: dict(kind="fast_fixture", sweep_kind="sigma2_RR_db", sweep=(0.0,), fixture=(1, 2, 3), trials=100_000, params=_LITERAL),
    6: dict(kind="fast_average", sweep_kind="M", sweep=tuple(range(1, 9)), trials=10_000, params=_LITERAL),
    7: dict(kind="maxmin_fixture", sweep_kind="sigma2_RR_db", sweep=(0.0,), fixture=(1, 2, 3), trials=100_000, params=_LITERAL),
    8: dict(kind="maxmin_average", sweep_kind="M", sweep=tuple(range(1, 9)), trials=10_000, params=_LITERAL),
    9: dict(
        kind="queue",
        sweep_kind="Qmax",
        sweep=tuple(range(1, 11)),
        params=_SIX.with_(M=1),
        trials=100_000,
        precoder_mode="IRD_MAX",
    ),
    10: dict(
        kind="queue",
        sweep_kind="R",
        sweep=tuple(0.25 * k for k in range(1, 33)),
        params=_SIX.with_(M=1),
        sigma2_db_series=(0.0, -10.0),
        trials=100_000,
        precoder_mode="IRD_MAX",
    ),
    11: dict(
        kind="queue",
        sweep_kind="M",
        sweep=(1, 2, 3, 4),
        rates=(1.0, 6.0),
        trials=100_000,
        precoder_mode="IRD_MAX",
    ),
}


def figure_config(fig_id, overrides=None):
    """Default scenario for a figure, with flat-key ``overrides`` applied."""
    try:
        preset = dict(FIGURES[int(fig_id)])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("figure", f"unknown figure id {fig_id!r}; expected one of {sorted(FIGURES)}") from None
    preset.setdefault("name", f"fig{int(fig_id)}")
    base = ScenarioConfig(**preset)
    return config_from_mapping(overrides or {}, base=base)


def figure(fig_id, overrides=None, out=None):
    """Run a figure's scenario and write its CSV (``fig<id>.csv`` by default)."""
    config = figure_config(fig_id, overrides)
    rows = run_scenario(config)
    path = Path(out) if out is not None else Path(f"fig{int(fig_id)}.csv")
    write_csv(rows, path)
    return path, rows
