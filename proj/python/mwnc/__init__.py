"""Moving-window network coding with anonymous feedback."""

from ._core import (
    FieldError,
    GaloisField,
    SingularSystemError,
    ccdf,
    delay_bound,
    eta_rate,
    fit_tail,
    phi_rate,
    rlnc,
    simulate,
)

__all__ = [
    "FieldError",
    "GaloisField",
    "SingularSystemError",
    "ccdf",
    "delay_bound",
    "eta_rate",
    "fit_tail",
    "phi_rate",
    "rlnc",
    "simulate",
]
