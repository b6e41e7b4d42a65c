from dataclasses import dataclass, replace

from .randgen import PER_STREAM, VARIANCE_CONVENTIONS

__all__ = ["SystemParams", "db_to_linear"]


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Scalar model parameters in linear units.

    Defaults: 10 dB transmit SNRs, 0 dB RSI variance and unit noise.
    ``R`` (bits/sec/Hz) and ``Qmax`` (packets) only matter for the
    fixed-rate queue model. ``literal_scaling`` switches the rank-1 and
    equal-power expectation forms to the literal closed forms, which drop
    the factor that the trace-M precoder normalization implies.
    """

    M: int = 2
    n: int = 2000
    P_S: float = 10.0
    P_R: float = 10.0
    kappa_R: float = 1.0
    kappa_D: float = 1.0
    sigma2_RR: float = 1.0
    R: float = 1.0
    Qmax: int = 10
    variance_convention: str = PER_STREAM
    literal_scaling: bool = False

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        if not self.n > self.M:
            raise ValueError(f"n must exceed M (n={self.n}, M={self.M})")
        for name in ("P_S", "P_R", "kappa_R", "kappa_D"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        # zero RSI is allowed: it is the interference-free reference point
        if not self.sigma2_RR >= 0:
            raise ValueError(f"sigma2_RR must be nonnegative, got {self.sigma2_RR}")
        if self.R < 0:
            raise ValueError(f"R must be nonnegative, got {self.R}")
        if self.Qmax < 1:
            raise ValueError(f"Qmax must be >= 1, got {self.Qmax}")
        if self.variance_convention not in VARIANCE_CONVENTIONS:
            raise ValueError(f"unknown variance convention {self.variance_convention!r}")

    @property
    def Ps_tilde(self):
        """Per-stream source power P_S / M."""
        return self.P_S / self.M

    @property
    def Pr_tilde(self):
        return self.P_R / self.M

    def with_(self, **changes):
        return replace(self, **changes)

    @classmethod
    def from_db(cls, snr_s_db=10.0, snr_r_db=10.0, sigma2_rr_db=0.0, kappa=1.0, **kwargs):
        """Build from dB ratios P_S/kappa, P_R/kappa and the RSI variance."""
        return cls(
            P_S=kappa * db_to_linear(snr_s_db),
            P_R=kappa * db_to_linear(snr_r_db),
            kappa_R=kappa,
            kappa_D=kappa,
            sigma2_RR=db_to_linear(sigma2_rr_db),
            **kwargs,
        )
