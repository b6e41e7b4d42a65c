"""Seeded channel, codeword and fixture generation.

Randomness comes from counter-based Philox streams keyed by ``(seed, stream)``.
An :class:`RngStream` is an immutable key, not a stateful generator: asking
the same stream for a sample twice returns the same sample. Independent draws
come from child streams (``rng.child(i)``).
"""

from dataclasses import dataclass

import numpy as np

from .linalg import adjoint, hermitian_eigen

__all__ = [
    "PER_STREAM",
    "PER_ELEMENT",
    "RngStream",
    "ChannelRealization",
    "CodewordMatrix",
    "complex_gaussian_matrix",
    "draw_channel",
    "draw_channels",
    "draw_codeword",
    "relay_element_variance",
    "table1_fixture",
]

# Relay codeword element-variance conventions.
PER_STREAM = "PER_STREAM_PR_OVER_M"
PER_ELEMENT = "PER_ELEMENT_PR"
VARIANCE_CONVENTIONS = (PER_STREAM, PER_ELEMENT)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if not 0 <= int(value) <= _MASK64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value}")

    def generator(self):
        """A fresh numpy Generator positioned at counter zero for this key."""
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, index):
        """Derive an independent substream; a pure function of (seed, stream, index)."""
        ss = np.random.SeedSequence([self.seed, self.stream, int(index)])
        return RngStream(self.seed, int(ss.generate_state(1, dtype=np.uint64)[0]))


@dataclass(frozen=True)
class ChannelRealization:
    """One coherence slot: source-relay and relay-destination channels.

    ``eta`` caches the eigenvalues of ``H_SR H_SR^H`` (ascending). ``H_RR`` is
    only populated for the fixed Table-I-style fixtures.
    """

    H_SR: np.ndarray
    H_RD: np.ndarray
    eta: np.ndarray
    H_RR: np.ndarray = None

    @property
    def M(self):
        return self.H_SR.shape[0]

    @classmethod
    def from_matrices(cls, H_SR, H_RD, H_RR=None):
        H_SR = np.asarray(H_SR, dtype=complex)
        H_RD = np.asarray(H_RD, dtype=complex)
        eta = np.clip(hermitian_eigen(H_SR @ adjoint(H_SR)).eigenvalues, 0.0, None)
        if H_RR is not None:
            H_RR = np.asarray(H_RR, dtype=complex)
        return cls(H_SR=H_SR, H_RD=H_RD, eta=eta, H_RR=H_RR)


@dataclass(frozen=True)
class CodewordMatrix:
    """Relay data matrix, n symbols (rows) by M streams (columns)."""

    X: np.ndarray
    per_stream_variance: float

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def M(self):
        return self.X.shape[1]


def _complex_normal(gen, shape, variance):
    z = gen.standard_normal(shape + (2,))
    return np.sqrt(variance / 2.0) * (z[..., 0] + 1j * z[..., 1])


def complex_gaussian_matrix(rows, cols, variance, rng):
    """i.i.d. CN(0, variance) entries; real and imaginary parts each variance/2."""
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return _complex_normal(rng.generator(), (int(rows), int(cols)), variance)


def draw_channel(M, channel_variance, rng):
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    gen = rng.generator()
    H_SR = _complex_normal(gen, (M, M), channel_variance)
    H_RD = _complex_normal(gen, (M, M), channel_variance)
    return ChannelRealization.from_matrices(H_SR, H_RD)


def draw_channels(M, count, channel_variance, rng):
    """Stack of ``count`` independent channel pairs, shape (count, M, M) each.

    Returns ``(H_SR, H_RD)``; eigenvalues are left to the caller so that only
    the needed Gram matrices get diagonalized.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    gen = rng.generator()
    H_SR = _complex_normal(gen, (count, M, M), channel_variance)
    H_RD = _complex_normal(gen, (count, M, M), channel_variance)
    return H_SR, H_RD


def relay_element_variance(P_R, M, convention=PER_STREAM):
    """Variance of one relay codeword element under the chosen convention."""
    if convention == PER_STREAM:
        return P_R / M
    if convention == PER_ELEMENT:
        return float(P_R)
    raise ValueError(f"unknown variance convention {convention!r}")


def draw_codeword(n, M, total_power, rng, convention=PER_STREAM):
    if not n > M:
        raise ValueError(f"codeword length must exceed M (n={n}, M={M})")
    variance = relay_element_variance(total_power, M, convention)
    return CodewordMatrix(X=complex_gaussian_matrix(n, M, variance, rng), per_stream_variance=variance)


# Row-major transcription of the three fixed slots (M = 2).
_TABLE1 = {
    1: {
        "H_SR": [[0.013 + 0.0025j, 0.8374 - 0.8441j], [0.1166 - 0.3759j, 0.7537 + 0.2233j]],
        "H_RR": [[1.6356 - 0.8668j, 0.1591 - 2.6461j], [0.7404 - 0.3748j, -0.7763 + 0.2951j]],
        "H_RD": [[-0.2688 - 1.1046j, 1.0703 + 0.2583j], [0.8433 + 1.1624j, -0.3841 + 0.1363j]],
    },
    2: {
        "H_SR": [[-0.3025 - 0.4487j, 0.6548 - 0.3400j], [-0.4097 + 0.6069j, 0.0039 + 1.0534j]],
        "H_RR": [[-0.445 + 0.9228j, -0.4446 + 0.5459j], [-0.42 + 0.2586j, 0.2519 + 0.8876j]],
        "H_RD": [[0.3088 - 1.7069j, 0.0019 + 0.2925j], [-1.2754 + 0.2317j, -0.1195 - 0.4767j]],
    },
    3: {
        "H_SR": [[0.184 - 1.0777j, 0.071 + 0.1647j], [-0.3857 + 0.2473j, -0.5182 + 0.4624j]],
        "H_RR": [[-0.5975 + 1.9031j, -0.347 - 0.4618j], [-0.5693 + 0.2627j, -0.7111 + 0.3j]],
        "H_RD": [[1.3800 + 1.5198j, 0.9294 + 1.6803j], [-0.3835 + 0.5156j, 0.0726 + 0.5129j]],
    },
}


def table1_fixture(slot):
    """The fixed 2x2 channel matrices for slot 1, 2 or 3 (with RSI matrix)."""
    if slot not in _TABLE1:
        raise ValueError(f"slot must be 1, 2 or 3, got {slot!r}")
    entry = _TABLE1[slot]
    return ChannelRealization.from_matrices(entry["H_SR"], entry["H_RD"], entry["H_RR"])
