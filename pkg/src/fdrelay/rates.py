"""Achievable-rate formulas for the buffer-aided full-duplex relay.

All rates are in bits/sec/Hz. Source-relay rates split into the
interference-free term ``sum_v log2(1 + P_S/M * eta_v / kappa_R)`` plus a
non-positive self-interference penalty. The split is reported in
``RateReport.decomposition``.

The n x n log-determinants of the slow-RSI rate are reduced to M x M ones,
and the per-symbol fast-RSI rate is evaluated row by row, so nothing here
grows with the codeword length beyond O(n M^2).
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .linalg import adjoint, gram, log2det_identity_plus
from .params import SystemParams
from .precoders import Design, Precoder
from .randgen import CodewordMatrix, relay_element_variance

__all__ = [
    "Regime",
    "RateReport",
    "SystemParams",
    "no_interference_rate",
    "rate_hd_sr",
    "rate_slow_general",
    "rate_slow_fullrank",
    "rate_slow_rank1",
    "rate_asymptotic_slow",
    "rate_rd",
    "rate_rd_eigenmodes",
    "rate_fast_general",
    "fast_penalty_samples",
    "rate_fast_isrmax_expect",
    "rate_fast_irdmax_expect",
    "rate_fast_largeM_approx",
    "exp_integral_E1",
    "exp_scaled_e1",
    "siso_log_expectation",
    "rate_siso_fast_sr",
    "rate_siso_rd",
]

LN2 = math.log(2.0)
EULER_GAMMA = 0.5772156649015328606


class Regime(str, enum.Enum):
    HD = "HD"
    SLOW_FD = "SLOW_FD"
    FAST_FD = "FAST_FD"
    RD = "RD"
    SISO_FAST = "SISO_FAST"


@dataclass(frozen=True)
class RateReport:
    value: float
    regime: Regime
    decomposition: tuple = None  # (no-interference term, penalty term)
    stderr: float = None  # Monte Carlo estimates only


def _codeword(X_R):
    return X_R.X if isinstance(X_R, CodewordMatrix) else np.asarray(X_R, dtype=complex)


def _psi(p):
    return p.psi if isinstance(p, Precoder) else np.asarray(p, dtype=complex)


def _report(no_int, penalty, regime, stderr=None):
    no_int = float(no_int)
    penalty = float(penalty)
    return RateReport(no_int + penalty, regime, (no_int, penalty), stderr)


def no_interference_rate(eta, params):
    """``sum_v log2(1 + P_S/M eta_v / kappa_R)``; batch-friendly over leading axes."""
    eta = np.asarray(eta, dtype=float)
    return np.sum(np.log1p(params.Ps_tilde / params.kappa_R * eta), axis=-1) / LN2


def rate_hd_sr(channel, params):
    """Source-relay rate while the relay is silent (empty buffer)."""
    return RateReport(float(no_interference_rate(channel.eta, params)), Regime.HD)


def rate_asymptotic_slow(channel, params):
    """Slow-RSI source-relay rate as the codeword length grows without bound.

    Knowing its own codeword lets the relay strip the self interference
    entirely in the limit, so this is the interference-free rate.
    """
    return RateReport(float(no_interference_rate(channel.eta, params)), Regime.SLOW_FD)


def rate_slow_general(channel, X_R, psi, params):
    """Slow-RSI source-relay rate for an arbitrary relay precoder.

    Evaluates, per source eigenmode ``v``,

        (1/n) [log2 det(c_v I_n + s2 X K X^H) - log2 det(kappa I_n + s2 X K X^H)]

    with ``K = psi psi^H`` and ``c_v = P_S/M eta_v + kappa_R``. Each
    determinant is moved to the M x M side, ``c^n det(I_M + s2 K X^H X / c)``,
    and the ``c^n`` factors combine into the interference-free term.
    """
    X = _codeword(X_R)
    n = X.shape[0]
    interference = params.sigma2_RR * (_psi(psi) @ adjoint(_psi(psi))) @ gram(X)
    shifts = params.Ps_tilde * np.asarray(channel.eta) + params.kappa_R
    with_signal = sum(log2det_identity_plus(interference / c) for c in shifts)
    noise_only = len(shifts) * log2det_identity_plus(interference / params.kappa_R)
    penalty = (with_signal - noise_only) / n
    return _report(no_interference_rate(channel.eta, params), penalty, Regime.SLOW_FD)


def rate_slow_fullrank(channel, X_R, psi, params):
    """Slow-RSI source-relay rate under the IRD-max eigenmode precoder.

    Uses the diagonal power fractions directly: the precoder covariance is
    ``E E^H`` because the eigenbasis factor is unitary.
    """
    if not isinstance(psi, Precoder) or psi.design is not Design.IRD_MAX:
        raise ValueError("rate_slow_fullrank needs an IRD_MAX precoder")
    X = _codeword(X_R)
    n = X.shape[0]
    ee = np.diag(np.asarray(psi.allocation, dtype=float))
    g = ee @ gram(X)
    s2 = params.sigma2_RR
    penalty = 0.0
    for eta_v in np.asarray(channel.eta):
        penalty += log2det_identity_plus(s2 / (params.Ps_tilde * eta_v + params.kappa_R) * g)
        penalty -= log2det_identity_plus(s2 / params.kappa_R * g)
    return _report(no_interference_rate(channel.eta, params), penalty / n, Regime.SLOW_FD)


def rate_slow_rank1(channel, X_R, psi, params):
    """Closed form for the rank-1 precoder ``sqrt(M) q q^H``.

    With ``alpha = q^H X^H X q`` the interference covariance has the single
    nonzero eigenvalue ``M alpha`` (``alpha`` alone when
    ``params.literal_scaling`` is set).
    """
    if not isinstance(psi, Precoder) or psi.design is not Design.ISR_MAX_RANK1:
        raise ValueError("rate_slow_rank1 needs an ISR_MAX_RANK1 precoder")
    X = _codeword(X_R)
    n, m = X.shape
    q = psi.q
    alpha = float(np.real(np.conj(q) @ gram(X) @ q))
    load = alpha if params.literal_scaling else m * alpha
    s2 = params.sigma2_RR
    eta = np.asarray(channel.eta)
    penalty = np.sum(
        np.log1p(s2 * load / (params.Ps_tilde * eta + params.kappa_R)) - np.log1p(s2 * load / params.kappa_R)
    )
    return _report(no_interference_rate(eta, params), penalty / (n * LN2), Regime.SLOW_FD)


def rate_rd(H_RD, psi, params):
    """Relay-destination rate ``log2 det(I + P_R/kappa_D H^H H psi^T psi^*)``."""
    H = np.asarray(H_RD, dtype=complex)
    p = _psi(psi)
    a = params.P_R / params.kappa_D * (gram(H) @ (p.T @ np.conj(p)))
    return RateReport(float(log2det_identity_plus(a)), Regime.RD)


def rate_rd_eigenmodes(lam, allocation, params):
    """``sum_v log2(1 + P_R/kappa_D lam_v |E_v|^2)``; batch-friendly."""
    lam = np.asarray(lam, dtype=float)
    return np.sum(np.log1p(params.P_R / params.kappa_D * lam * allocation), axis=-1) / LN2


def fast_penalty_samples(eta, load, params):
    """Per-symbol self-interference penalty summed over source eigenmodes.

    ``load`` holds samples of the relay interference power
    ``X_R(j) Phi Phi^H X_R(j)^H``. Each entry of the result is

        sum_v log2(1 + g z / (1 + P_S/M eta_v / kappa)) - log2(1 + g z),  g = s2 / kappa

    which is never positive.
    """
    z = params.sigma2_RR / params.kappa_R * np.asarray(load, dtype=float)[..., None]
    snr = params.Ps_tilde / params.kappa_R * np.asarray(eta, dtype=float)
    return np.sum(np.log1p(z / (1.0 + snr)) - np.log1p(z), axis=-1) / LN2


def rate_fast_general(channel, X_R, phi, params):
    """Fast-RSI source-relay rate for a fixed per-symbol precoder ``phi``.

    The RSI is redrawn every symbol, so the block-diagonal determinant
    factorizes into one scalar term per symbol row ``X_R(j)``.
    """
    X = _codeword(X_R)
    load = np.sum(np.abs(X @ _psi(phi)) ** 2, axis=1)
    per_symbol = fast_penalty_samples(channel.eta, load, params)
    return _report(no_interference_rate(channel.eta, params), np.mean(per_symbol), Regime.FAST_FD)


def _mc_report(channel, params, load):
    samples = fast_penalty_samples(channel.eta, load, params)
    stderr = float(np.std(samples, ddof=1) / math.sqrt(samples.size)) if samples.size > 1 else float("nan")
    return _report(no_interference_rate(channel.eta, params), np.mean(samples), Regime.FAST_FD, stderr)


def rate_fast_isrmax_expect(channel, params, trials, rng):
    """Monte Carlo fast-RSI rate under the rank-1 ISR-max precoder.

    ``X_R(j) q`` is a scalar with the relay element variance, so the
    interference power is ``M |X_R(j) q|^2`` (exponential).
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    m = params.M
    var = relay_element_variance(params.P_R, m, params.variance_convention)
    load = rng.generator().exponential(var, size=int(trials))
    if not params.literal_scaling:
        load = m * load
    return _mc_report(channel, params, load)


def _stream_weights(allocation, params):
    m = params.M
    w = np.ones(m) if allocation is None else np.asarray(allocation, dtype=float)
    if w.shape != (m,):
        raise ValueError(f"allocation must have {m} entries")
    if abs(w.sum() - m) > 1e-9:
        raise ValueError(f"allocation must sum to M={m}, got {w.sum()}")
    return w / m if params.literal_scaling else w


def rate_fast_irdmax_expect(channel, params, allocation, trials, rng):
    """Monte Carlo fast-RSI rate under the IRD-max eigenmode precoder.

    The interference power is the weighted sum ``sum_i |X_R,i(j)|^2 |E_i|^2``
    of independent exponentials.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    w = _stream_weights(allocation, params)
    var = relay_element_variance(params.P_R, params.M, params.variance_convention)
    powers = rng.generator().exponential(var, size=(int(trials), params.M))
    return _mc_report(channel, params, powers @ w)


def rate_fast_largeM_approx(channel, params, allocation=None):
    """Fast-RSI rate with the interference power replaced by its mean."""
    w = _stream_weights(allocation, params)
    p_eff = relay_element_variance(params.P_R, params.M, params.variance_convention) * w.sum()
    penalty = fast_penalty_samples(channel.eta, p_eff, params)
    return _report(no_interference_rate(channel.eta, params), penalty, Regime.FAST_FD)


def exp_scaled_e1(x):
    """``exp(x) * E1(x)`` for ``x > 0``, without overflow for large ``x``.

    Power series below 1, continued fraction (modified Lentz) above.
    """
    x = float(x)
    if not x > 0:
        raise ValueError(f"E1 needs a positive argument, got {x}")
    if x <= 1.0:
        total = 0.0
        term = 1.0
        k = 1
        while True:
            term *= -x / k
            contrib = term / k
            total += contrib
            if abs(contrib) < 1e-17 * abs(total) or k > 200:
                break
            k += 1
        return math.exp(x) * (-EULER_GAMMA - math.log(x) - total)
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ArithmeticError(f"E1 continued fraction did not converge at x={x}")


def exp_integral_E1(x):
    """``E1(x) = int_x^inf exp(-u)/u du`` for ``x > 0``."""
    x = float(x)
    scaled = exp_scaled_e1(x)
    return math.exp(-x) * scaled if x < 700 else math.exp(-x + math.log(scaled))


def siso_log_expectation(gain, mean_power):
    """``E[log2(1 + gain * Y)]`` for exponential ``Y`` with the given mean."""
    if gain * mean_power == 0:
        return 0.0
    return exp_scaled_e1(1.0 / (gain * mean_power)) / LN2


def _require_siso(params):
    if params.M != 1:
        raise ValueError(f"SISO formulas need M == 1, got M={params.M}")


def rate_siso_fast_sr(h_SR, params):
    """Single-antenna fast-RSI source-relay rate in closed form.

    The two expectation terms ``E[log2(1 + gamma s2 |x|^2)]`` are evaluated
    with the exponential integral for ``gamma = 1/(kappa + P_S |h|^2)`` and
    ``gamma = 1/kappa``.
    """
    _require_siso(params)
    gain = abs(complex(h_SR)) ** 2
    kappa = params.kappa_R
    no_int = math.log1p(gain * params.Ps_tilde / kappa) / LN2
    s2 = params.sigma2_RR
    gamma1 = 1.0 / (kappa + params.Ps_tilde * gain)
    gamma2 = 1.0 / kappa
    penalty = siso_log_expectation(gamma1 * s2, params.P_R) - siso_log_expectation(gamma2 * s2, params.P_R)
    return RateReport(no_int + penalty, Regime.SISO_FAST, (no_int, penalty))


def rate_siso_rd(h_RD, params):
    _require_siso(params)
    gain = abs(complex(h_RD)) ** 2
    return RateReport(math.log1p(gain * params.P_R / params.kappa_D) / LN2, Regime.RD)
