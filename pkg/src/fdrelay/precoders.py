"""Relay precoder constructions.

Every non-zero precoder is scaled so that ``Trace(psi psi^H) = M``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError
from .linalg import adjoint, gram, hermitian_eigen
from .randgen import CodewordMatrix

__all__ = [
    "Design",
    "Allocation",
    "Precoder",
    "custom_precoder",
    "hd_precoder",
    "isr_max_precoder",
    "ird_max_precoder",
    "select_precoder_maxmin",
    "waterfill",
]

TRACE_TOL = 1e-9
RANK_TOL = 1e-9
DEGENERATE_RATIO = 1e-12
WATERFILL_TOL = 1e-12


class Design(str, enum.Enum):
    HD_ZERO = "HD_ZERO"
    ISR_MAX_RANK1 = "ISR_MAX_RANK1"
    IRD_MAX = "IRD_MAX"
    CUSTOM = "CUSTOM"


class Allocation(str, enum.Enum):
    EQUAL = "EQUAL"
    WATERFILL = "WATERFILL"


@dataclass(frozen=True)
class Precoder:
    """An M x M relay precoding matrix tagged with the design that produced it.

    ``allocation`` holds the per-stream power fractions ``|E_v|^2`` of an
    IRD-max precoder, ordered like the ascending eigenvalues of
    ``H_RD^H H_RD``. ``q`` is the unit vector of a rank-1 ISR-max precoder.
    """

    psi: np.ndarray
    design: Design
    allocation: np.ndarray = None
    q: np.ndarray = None

    def __post_init__(self):
        psi = self.psi
        if psi.ndim != 2 or psi.shape[0] != psi.shape[1]:
            raise ValueError(f"precoder must be square, got shape {psi.shape}")
        m = psi.shape[0]
        power = np.real(np.trace(psi @ adjoint(psi)))
        if self.design is Design.HD_ZERO:
            if power != 0:
                raise ValueError("HD precoder must be the zero matrix")
            return
        if abs(power - m) >= TRACE_TOL:
            raise ValueError(f"Trace(psi psi^H) = {power}, expected {m}")
        if self.design is Design.ISR_MAX_RANK1 and m > 1:
            second = np.linalg.svd(psi, compute_uv=False)[1]
            if second**2 >= RANK_TOL:
                raise ValueError("ISR-max precoder must be rank one")
        if self.design is Design.IRD_MAX and self.allocation is not None:
            if abs(np.sum(self.allocation) - m) >= TRACE_TOL:
                raise ValueError("IRD-max power fractions must sum to M")

    @property
    def M(self):
        return self.psi.shape[0]

    def covariance(self):
        """``psi psi^H``, the matrix that enters the source-relay rates."""
        return self.psi @ adjoint(self.psi)


def hd_precoder(M):
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    return Precoder(psi=np.zeros((M, M), dtype=complex), design=Design.HD_ZERO)


def custom_precoder(psi):
    """Wrap an arbitrary non-zero matrix, rescaled to trace M."""
    psi = np.asarray(psi, dtype=complex)
    m = psi.shape[0]
    power = np.real(np.trace(psi @ adjoint(psi)))
    if not power > 0:
        raise ValueError("custom precoder must be non-zero")
    return Precoder(psi=psi * math.sqrt(m / power), design=Design.CUSTOM)


def isr_max_precoder(X_R):
    """Rank-1 precoder ``sqrt(M) q q^H`` aimed at the weakest direction of ``X_R``.

    ``q`` is the unit eigenvector for the smallest eigenvalue of
    ``X_R^H X_R``; projecting the relay signal onto it minimizes the self
    interference energy seen over the codeword.
    """
    X = X_R.X if isinstance(X_R, CodewordMatrix) else np.asarray(X_R, dtype=complex)
    m = X.shape[1]
    eig = hermitian_eigen(gram(X))
    lam = eig.eigenvalues
    if not lam[-1] > 0 or lam[0] < DEGENERATE_RATIO * lam[-1]:
        raise DegenerateError(f"codeword Gram matrix is numerically rank deficient (eigenvalues {lam})")
    q = eig.eigenvectors[:, 0]
    psi = math.sqrt(m) * np.outer(q, np.conj(q))
    return Precoder(psi=psi, design=Design.ISR_MAX_RANK1, q=q)


def waterfill(gains, budget, tol=WATERFILL_TOL):
    """Power fractions ``max(0, mu - 1/g)`` summing to ``budget``.

    ``gains`` may carry leading batch axes; the water level is found by
    bisection on each row independently. Zero gains receive no power.
    """
    gains = np.asarray(gains, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        inv = np.where(gains > 0, 1.0 / np.where(gains > 0, gains, 1.0), np.inf)
    # gains so small that 1/g overflows can never receive power
    if np.any(~np.isfinite(inv).any(axis=-1)):
        raise DegenerateError("all eigenmode gains are zero")
    lo = np.zeros(gains.shape[:-1])
    # at this level the strongest mode alone already uses the whole budget
    hi = budget + np.min(inv, axis=-1)
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        total = np.sum(np.clip(mid[..., None] - inv, 0.0, None), axis=-1)
        over = total > budget
        hi = np.where(over, mid, hi)
        lo = np.where(over, lo, mid)
    alloc = np.clip(0.5 * (lo + hi)[..., None] - inv, 0.0, None)
    return alloc * (budget / np.sum(alloc, axis=-1, keepdims=True))


def ird_max_precoder(H_RD, allocation_mode=Allocation.EQUAL, params=None):
    """Eigenmode precoder that diagonalizes the relay-destination channel.

    With ``H_RD^H H_RD = V diag(lam) V^H`` the precoder is ``psi = E V^T``,
    i.e. ``psi^T = V E``, so ``Q_RD psi^T psi^* Q_RD^H = |E|^2`` is diagonal
    for ``Q_RD = V^H``.

    Parameters
    ----------
    H_RD : array_like, shape (M, M)
    allocation_mode : Allocation
        ``EQUAL`` gives every stream ``|E_v|^2 = 1``; ``WATERFILL`` solves
        ``|E_v|^2 = max(0, mu - kappa_D / (P_R lam_v))`` with the levels
        summing to M.
    params : SystemParams
        Needed for ``WATERFILL`` (the ``P_R / kappa_D`` ratio).
    """
    H = np.asarray(H_RD, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"H_RD must be square, got shape {H.shape}")
    m = H.shape[0]
    eig = hermitian_eigen(gram(H))
    lam = np.clip(eig.eigenvalues, 0.0, None)
    if not np.any(lam > 0):
        raise DegenerateError("relay-destination channel is identically zero")
    mode = Allocation(allocation_mode)
    if mode is Allocation.EQUAL:
        alloc = np.ones(m)
    else:
        if params is None:
            raise ValueError("water-filling needs SystemParams for P_R / kappa_D")
        alloc = waterfill(params.P_R / params.kappa_D * lam, float(m))
    V = eig.eigenvectors
    psi = np.sqrt(alloc)[:, None] * V.T
    return Precoder(psi=psi, design=Design.IRD_MAX, allocation=alloc)


def select_precoder_maxmin(isr_design_rates, ird_design_rates):
    """Pick the design whose weaker hop is stronger.

    Each argument is the ``(I_SR, I_RD)`` pair obtained under that design.
    Equal minima resolve to the multi-stream ``IRD_MAX`` design.
    """
    rates = np.asarray([isr_design_rates, ird_design_rates], dtype=float)
    if rates.shape != (2, 2):
        raise ValueError("expected two (I_SR, I_RD) pairs")
    if not np.all(np.isfinite(rates)):
        raise ValueError(f"rates must be finite, got {rates.tolist()}")
    if np.any(rates < 0):
        raise ValueError(f"rates must be nonnegative, got {rates.tolist()}")
    isr_min, ird_min = rates.min(axis=1)
    return Design.ISR_MAX_RANK1 if isr_min > ird_min else Design.IRD_MAX
