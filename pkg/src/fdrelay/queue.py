"""Fixed-rate transmission with a finite relay buffer.

Each slot carries one packet of ``R`` bits/sec/Hz. With an empty buffer the
relay only listens (half duplex). Otherwise it listens and transmits at the
same time, and the buffer occupancy performs a birth-death walk on
``0..Qmax``:

* state 0 moves up with probability ``a0``
* states ``1..Qmax-1`` move up with ``a`` and down with ``b``
* the full state ``Qmax`` refuses new packets and moves down with ``b_Qmax``

Link success probabilities are estimated at the large-codeword slow-RSI
operating point, where the relay removes its own interference completely.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import UnstableQueueError
from .linalg import adjoint, gram, hermitian_eigen
from .precoders import Allocation, waterfill
from .randgen import draw_channels
from .rates import no_interference_rate, rate_rd_eigenmodes

__all__ = [
    "Scheme",
    "LinkProbs",
    "QueueChain",
    "StationaryDist",
    "ThroughputReport",
    "SimulationResult",
    "sample_eigenvalues",
    "sample_link_rates",
    "link_probs_from_rates",
    "estimate_link_probs",
    "build_chain",
    "stationary",
    "empty_probability",
    "stationary_beta0_infinite",
    "throughput",
    "buffered_fd_throughput",
    "simulate_queue",
    "conventional_sr_rate",
    "conventional_fd_throughput",
    "conventional_from_eigenvalues",
    "link_rates_from_eigenvalues",
    "stream_allocation",
    "upper_bound_throughput",
]

CHUNK = 50_000
SUM_TOL = 1e-12


class Scheme(str, enum.Enum):
    BUFFERED_FD = "BUFFERED_FD"
    CONVENTIONAL_FD = "CONVENTIONAL_FD"
    UPPER_BOUND = "UPPER_BOUND"


def _check_prob(name, p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


def _binomial_stderr(p, trials):
    return math.sqrt(p * (1.0 - p) / trials) if trials > 0 else float("nan")


@dataclass(frozen=True)
class LinkProbs:
    """Per-slot success probabilities of the two hops at rate ``R``."""

    p_sr_hd: float
    p_sr_fd: float
    p_rd: float
    trials: int
    R: float

    def __post_init__(self):
        for name in ("p_sr_hd", "p_sr_fd", "p_rd"):
            _check_prob(name, getattr(self, name))

    def stderr(self, name):
        """Binomial standard error of one of the estimated probabilities."""
        return _binomial_stderr(getattr(self, name), self.trials)


@dataclass(frozen=True)
class QueueChain:
    a0: float
    a: float
    b: float
    b_Qmax: float
    Qmax: int

    def __post_init__(self):
        for name in ("a0", "a", "b", "b_Qmax"):
            _check_prob(name, getattr(self, name))
        if self.Qmax < 1:
            raise ValueError(f"Qmax must be >= 1, got {self.Qmax}")

    def up(self):
        """Probability of moving from state v to v+1, for v = 0..Qmax-1."""
        return np.array([self.a0] + [self.a] * (self.Qmax - 1))

    def down(self):
        """Probability of moving from state v to v-1, for v = 1..Qmax."""
        return np.array([self.b] * (self.Qmax - 1) + [self.b_Qmax])


@dataclass(frozen=True)
class StationaryDist:
    beta: np.ndarray

    def __post_init__(self):
        if np.any(self.beta < 0):
            raise ValueError("stationary probabilities must be nonnegative")
        if abs(np.sum(self.beta) - 1.0) > SUM_TOL:
            raise ValueError(f"stationary probabilities sum to {np.sum(self.beta)}")

    @property
    def Qmax(self):
        return self.beta.size - 1

    @property
    def beta0(self):
        return float(self.beta[0])


@dataclass(frozen=True)
class ThroughputReport:
    mu_d: float  # packets/slot
    mu_bits: float  # bits/sec/Hz
    scheme: Scheme
    stderr: float = None  # of mu_d, when estimated

    def __post_init__(self):
        _check_prob("mu_d", self.mu_d)


@dataclass(frozen=True)
class SimulationResult:
    """Empirical queue behaviour; standard errors from batch means."""

    occupancy: np.ndarray
    occupancy_stderr: np.ndarray
    delivered_rate: float
    delivered_stderr: float
    slots: int


def sample_eigenvalues(M, trials, rng):
    """Channel eigenvalues for ``trials`` independent slots.

    Returns ``(eta, lam)`` of shape (trials, M): the eigenvalues of
    ``H_SR H_SR^H`` and ``H_RD^H H_RD`` (ascending). Draws are made in chunks
    on child streams so memory stays bounded and the result depends only on
    ``(rng, trials)``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    eta, lam = [], []
    for k, start in enumerate(range(0, int(trials), CHUNK)):
        count = min(CHUNK, int(trials) - start)
        H_SR, H_RD = draw_channels(M, count, 1.0, rng.child(k))
        eta.append(hermitian_eigen(H_SR @ adjoint(H_SR)).eigenvalues)
        lam.append(hermitian_eigen(gram(H_RD)).eigenvalues)
    return np.clip(np.concatenate(eta), 0.0, None), np.clip(np.concatenate(lam), 0.0, None)


def stream_allocation(lam, params, allocation=Allocation.EQUAL):
    """Per-stream ``|E_v|^2`` for stacked eigenvalues ``lam`` (last axis = stream)."""
    mode = Allocation(allocation)
    if mode is Allocation.EQUAL:
        return np.ones_like(lam)
    return waterfill(params.P_R / params.kappa_D * lam, float(params.M))


def sample_link_rates(params, trials, rng, allocation=Allocation.EQUAL):
    """Per-slot ``(I_SR, I_RD)`` samples at the interference-free operating point."""
    eta, lam = sample_eigenvalues(params.M, trials, rng)
    return link_rates_from_eigenvalues(eta, lam, params, allocation)


def link_rates_from_eigenvalues(eta, lam, params, allocation=Allocation.EQUAL):
    i_sr = no_interference_rate(eta, params)
    i_rd = rate_rd_eigenmodes(lam, stream_allocation(lam, params, allocation), params)
    return i_sr, i_rd


def link_probs_from_rates(i_sr, i_rd, R):
    p_sr = float(np.mean(i_sr >= R))
    return LinkProbs(p_sr_hd=p_sr, p_sr_fd=p_sr, p_rd=float(np.mean(i_rd >= R)), trials=len(i_sr), R=R)


def estimate_link_probs(params, R, trials, rng, allocation=Allocation.EQUAL):
    """Monte Carlo exceedance frequencies ``Pr{I >= R}`` for both hops.

    With the self interference removed, the full- and half-duplex
    source-relay rates coincide, so ``p_sr_hd == p_sr_fd``.
    """
    i_sr, i_rd = sample_link_rates(params, trials, rng, allocation)
    return link_probs_from_rates(i_sr, i_rd, R)


def build_chain(probs, Qmax):
    if Qmax < 1:
        raise ValueError(f"Qmax must be >= 1, got {Qmax}")
    return QueueChain(
        a0=probs.p_sr_hd,
        a=probs.p_sr_fd * (1.0 - probs.p_rd),
        b=probs.p_rd * (1.0 - probs.p_sr_fd),
        b_Qmax=probs.p_rd,
        Qmax=int(Qmax),
    )


def stationary(chain):
    """Stationary distribution of the buffer occupancy.

    Uses the product form ``beta_{v+1} / beta_v = up_v / down_{v+1}`` in log
    space over the recurrent class. When an up-probability vanishes the chain
    cannot climb past that state, and when a down-probability vanishes it
    cannot return below it, so all mass sits between the last such barrier
    and the first such ceiling (e.g. ``a0 = 0`` leaves everything in state 0).
    """
    up, down = chain.up(), chain.down()
    q = chain.Qmax
    zeros_up = np.flatnonzero(up == 0)
    hi = int(zeros_up[0]) if zeros_up.size else q
    # down[v - 1] is the probability of leaving state v downwards
    stuck = [v for v in range(1, hi + 1) if down[v - 1] == 0]
    lo = stuck[-1] if stuck else 0

    log_beta = np.zeros(hi - lo + 1)
    for v in range(lo, hi):
        log_beta[v - lo + 1] = log_beta[v - lo] + math.log(up[v]) - math.log(down[v])
    weights = np.exp(log_beta - log_beta.max())
    beta = np.zeros(q + 1)
    beta[lo : hi + 1] = weights / weights.sum()
    return StationaryDist(beta=beta)


def empty_probability(chain):
    """Closed-form probability of an empty buffer.

    ``beta_0 = 1 / (1 + (a0/b) sum_{k<Qmax-1} r^k + (a0/b_Qmax) r^(Qmax-1))``
    with ``r = a/b``. The geometric sum is ``Qmax - 1`` when ``r = 1`` and is
    summed term by term when ``r`` is within 1e-6 of 1. Chains with ``b = 0``
    or ``b_Qmax = 0`` fall back to :func:`stationary`.
    """
    a0, a, b, b_q, q = chain.a0, chain.a, chain.b, chain.b_Qmax, chain.Qmax
    if a0 == 0:
        return 1.0
    if b == 0 or b_q == 0:
        return stationary(chain).beta0
    r = a / b
    with np.errstate(over="ignore"):
        if r == 1.0:
            geometric = float(q - 1)
        elif abs(1.0 - r) < 1e-6:
            geometric = float(np.sum(np.float64(r) ** np.arange(q - 1)))
        else:
            geometric = float((1.0 - np.float64(r) ** (q - 1)) / (1.0 - r))
        tail = float(np.float64(r) ** (q - 1))
    return 1.0 / (1.0 + a0 / b * geometric + a0 / b_q * tail)


def stationary_beta0_infinite(chain):
    """Empty-buffer probability of the unbounded queue, ``(b - a) / (b - a + a0)``."""
    if chain.a >= chain.b:
        raise UnstableQueueError(f"unbounded queue is unstable: a={chain.a} >= b={chain.b}")
    return (chain.b - chain.a) / (chain.b - chain.a + chain.a0)


def throughput(dist, probs):
    """Delivered packets per slot, ``(1 - beta_0) p_rd``."""
    mu = min(1.0, max(0.0, (1.0 - dist.beta0) * probs.p_rd))
    return ThroughputReport(mu_d=mu, mu_bits=mu * probs.R, scheme=Scheme.BUFFERED_FD)


def _mu(p_sr, p_rd, Qmax):
    probs = LinkProbs(p_sr, p_sr, p_rd, 0, 0.0)
    return throughput(stationary(build_chain(probs, Qmax)), probs).mu_d


def buffered_fd_throughput(probs, Qmax):
    """Buffered throughput with a delta-method standard error.

    Both source-relay probabilities must come from the same indicator (as in
    :func:`estimate_link_probs`); the hops are independent binomial estimates.
    """
    report = throughput(stationary(build_chain(probs, Qmax)), probs)
    if probs.p_sr_hd != probs.p_sr_fd or probs.trials < 1:
        return report
    variance = 0.0
    for which, p in ((0, probs.p_sr_fd), (1, probs.p_rd)):
        h = 1e-6
        lo, hi = max(0.0, p - h), min(1.0, p + h)
        args_lo = [probs.p_sr_fd, probs.p_rd]
        args_hi = list(args_lo)
        args_lo[which], args_hi[which] = lo, hi
        slope = (_mu(*args_hi, Qmax) - _mu(*args_lo, Qmax)) / (hi - lo)
        variance += slope**2 * p * (1.0 - p) / probs.trials
    return ThroughputReport(report.mu_d, report.mu_bits, report.scheme, math.sqrt(variance))


def simulate_queue(probs, Qmax, slots, rng, batches=100):
    """Slot-by-slot simulation of the relay buffer.

    An empty relay only listens and stores a packet with probability
    ``p_sr_hd``. A non-empty relay listens and forwards at once: it delivers
    with probability ``p_rd`` and stores a new packet with probability
    ``p_sr_fd`` unless the buffer is full.
    """
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    if Qmax < 1:
        raise ValueError(f"Qmax must be >= 1, got {Qmax}")
    slots = int(slots)
    u = rng.generator().random((2, slots))
    hd = (u[0] < probs.p_sr_hd).tolist()
    sr = (u[0] < probs.p_sr_fd).tolist()
    rd = (u[1] < probs.p_rd).tolist()

    states = np.empty(slots, dtype=np.int64)
    delivered = np.zeros(slots, dtype=np.int8)
    state = 0
    for j in range(slots):
        states[j] = state
        if state == 0:
            state = 1 if hd[j] else 0
            continue
        if rd[j]:
            delivered[j] = 1
            state -= 1
        if sr[j] and states[j] < Qmax:
            state += 1

    batches = max(1, min(int(batches), slots))
    edges = np.linspace(0, slots, batches + 1).astype(int)
    occ = np.array([np.bincount(states[s:e], minlength=Qmax + 1) / (e - s) for s, e in zip(edges[:-1], edges[1:])])
    rate = np.array([delivered[s:e].mean() for s, e in zip(edges[:-1], edges[1:])])
    if batches > 1:
        occ_se = occ.std(axis=0, ddof=1) / math.sqrt(batches)
        rate_se = float(rate.std(ddof=1) / math.sqrt(batches))
    else:
        occ_se = np.full(Qmax + 1, np.nan)
        rate_se = float("nan")
    return SimulationResult(
        occupancy=np.bincount(states, minlength=Qmax + 1) / slots,
        occupancy_stderr=occ_se,
        delivered_rate=float(delivered.mean()),
        delivered_stderr=rate_se,
        slots=slots,
    )


def conventional_sr_rate(eta, params):
    """Source-relay rate with the self interference treated as extra white noise.

    The relay transmits at full power every slot, so each receive antenna
    sees additional noise of power ``sigma2_RR * P_R``.
    """
    noise = params.kappa_R + params.sigma2_RR * params.P_R
    return np.sum(np.log1p(params.Ps_tilde * np.asarray(eta) / noise), axis=-1) / math.log(2.0)


def conventional_fd_throughput(params, R, trials, rng, allocation=Allocation.EQUAL):
    """Bufferless full duplex: a packet gets through only if both hops succeed in the same slot."""
    eta, lam = sample_eigenvalues(params.M, trials, rng)
    return conventional_from_eigenvalues(eta, lam, params, R, allocation)


def conventional_from_eigenvalues(eta, lam, params, R, allocation=Allocation.EQUAL):
    """Conventional baseline on pre-drawn eigenvalue samples (see :func:`sample_eigenvalues`)."""
    i_sr = conventional_sr_rate(eta, params)
    i_rd = rate_rd_eigenmodes(lam, stream_allocation(lam, params, allocation), params)
    mu = float(np.mean((i_sr >= R) & (i_rd >= R)))
    return ThroughputReport(mu, mu * R, Scheme.CONVENTIONAL_FD, _binomial_stderr(mu, len(i_sr)))


def upper_bound_throughput(probs):
    """A relay that never runs dry delivers whenever its own hop succeeds."""
    mu = probs.p_rd
    return ThroughputReport(mu, mu * probs.R, Scheme.UPPER_BOUND, probs.stderr("p_rd"))
