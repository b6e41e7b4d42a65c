"""Rates, precoders and buffer-aided throughput for a full-duplex MIMO relay.

Modules
-------
linalg       Hermitian Jacobi eigensolver and log-determinant helpers.
randgen      Seeded channel/codeword draws and the fixed 2x2 channel fixtures.
precoders    Relay precoder constructions and max-min selection.
rates        Source-relay and relay-destination achievable rates.
queue        Relay buffer Markov chain, throughput and baselines.
experiments  Scenario configs, sweeps and CSV output.
"""

from .errors import ConfigError, DegenerateError, NumericalError, UnstableQueueError
from .params import SystemParams, db_to_linear
from .randgen import RngStream

__all__ = [
    "ConfigError",
    "DegenerateError",
    "NumericalError",
    "UnstableQueueError",
    "RngStream",
    "SystemParams",
    "db_to_linear",
]

__version__ = "0.1.0"
