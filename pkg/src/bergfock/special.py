"""Log-domain special functions used for norm factors and diagonal spectra.

Gamma-function ratios such as ``Gamma(n + alpha + 2) / (n! Gamma(alpha + 2))``
overflow double precision long before the parameter ranges of interest, so
everything here works with logarithms and only exponentiates at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

# exp() overflows a double just above 709.78
OVERFLOW_LOG = 709.0


@dataclass(frozen=True)
class StableExponent:
    """A complex number stored as ``exp(log_magnitude) * exp(i * phase)``."""

    log_magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phase", _wrap_phase(self.phase))

    @classmethod
    def from_complex(cls, value: complex) -> "StableExponent":
        if value == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(value)), math.atan2(value.imag, value.real))

    @property
    def value(self) -> complex:
        if self.log_magnitude > OVERFLOW_LOG:
            raise OverflowError(
                f"log-magnitude {self.log_magnitude:.6g} exceeds {OVERFLOW_LOG}"
            )
        if self.log_magnitude == -math.inf:
            return 0j
        mag = math.exp(self.log_magnitude)
        return complex(mag * math.cos(self.phase), mag * math.sin(self.phase))

    def __mul__(self, other: "StableExponent") -> "StableExponent":
        return StableExponent(
            self.log_magnitude + other.log_magnitude, self.phase + other.phase
        )

    def __truediv__(self, other: "StableExponent") -> "StableExponent":
        return StableExponent(
            self.log_magnitude - other.log_magnitude, self.phase - other.phase
        )

    def __pow__(self, p: float) -> "StableExponent":
        return StableExponent(p * self.log_magnitude, p * self.phase)


def _wrap_phase(phase: float) -> float:
    """Map an angle into (-pi, pi]."""
    wrapped = math.remainder(phase, 2 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2 * math.pi
    return wrapped


def log_gamma(x):
    """Natural log of the gamma function for positive real arguments.

    Accepts scalars or arrays. Raises ``ValueError`` for any ``x <= 0``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("log_gamma requires x > 0")
    if arr.ndim == 0:
        return math.lgamma(float(arr))
    return sp.gammaln(arr)


def log_factorial(n):
    """ln(n!) for nonnegative integers (scalar or array)."""
    arr = np.asarray(n)
    if np.any(arr < 0):
        raise ValueError("log_factorial requires n >= 0")
    return log_gamma(arr + 1.0)


def log_binomial(n, k):
    """ln C(n, k) for integers 0 <= k <= n."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0)


def reg_inc_gamma_p(a, x):
    """Regularized lower incomplete gamma function P(a, x)."""
    a_arr = np.asarray(a, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(a_arr > 0)) or np.any(~(x_arr >= 0)):
        raise ValueError("reg_inc_gamma_p requires a > 0 and x >= 0")
    out = sp.gammainc(a_arr, x_arr)
    return float(out) if out.ndim == 0 else out


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta function I_x(a, b) on 0 <= x <= 1."""
    x_arr = np.asarray(x, dtype=float)
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(~((x_arr >= 0) & (x_arr <= 1))):
        raise ValueError("reg_inc_beta requires 0 <= x <= 1")
    if np.any(~(a_arr > 0)) or np.any(~(b_arr > 0)):
        raise ValueError("reg_inc_beta requires a > 0 and b > 0")
    out = sp.betainc(a_arr, b_arr, x_arr)
    out = np.where(x_arr == 0, 0.0, np.where(x_arr == 1, 1.0, out))
    return float(out) if out.ndim == 0 else out


def log_bergman_basis_sq(n, alpha: float):
    """ln of Gamma(n + alpha + 2) / (n! Gamma(alpha + 2)).

    This is the squared normalizer of the Bergman orthonormal basis vector
    ``e_n``, i.e. minus the log of the squared monomial norm.
    """
    n = np.asarray(n, dtype=float)
    return log_gamma(n + alpha + 2.0) - log_gamma(n + 1.0) - math.lgamma(alpha + 2.0)


def log_fock_basis_sq(n, beta: float):
    """ln of beta**n / n!, the squared normalizer of the Fock basis vector."""
    n = np.asarray(n, dtype=float)
    return n * math.log(beta) - log_gamma(n + 1.0)
