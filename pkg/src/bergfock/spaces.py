"""Monomial-basis arithmetic for weighted Bergman and Fock spaces.

Functions are stored by their Taylor coefficients ``a_n`` of ``z**n``.  The
Bergman space with weight ``alpha`` uses the probability measure
``(alpha+1)/pi (1-|z|^2)^alpha dA`` on the disc; the Fock space with weight
``beta`` uses ``(beta/pi) exp(-beta |z|^2) dA`` on the plane.  Both have the
monomials as an orthogonal basis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .special import OVERFLOW_LOG, log_bergman_basis_sq, log_fock_basis_sq

BERGMAN = "bergman"
FOCK = "fock"


class SpaceMismatchError(ValueError):
    """Raised when two objects live in different spaces."""


@dataclass(frozen=True)
class SpaceParams:
    """Identifies a Hilbert space: Bergman with alpha > -1 or Fock with beta > 0."""

    kind: str
    weight: float

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in (BERGMAN, FOCK):
            raise ValueError(f"unknown space kind {self.kind!r}")
        w = float(self.weight)
        if kind == BERGMAN and not w > -1:
            raise ValueError(f"Bergman weight must exceed -1, got {w}")
        if kind == FOCK and not w > 0:
            raise ValueError(f"Fock weight must be positive, got {w}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "weight", w)

    @classmethod
    def bergman(cls, alpha: float) -> "SpaceParams":
        return cls(BERGMAN, alpha)

    @classmethod
    def fock(cls, beta: float) -> "SpaceParams":
        return cls(FOCK, beta)

    @property
    def is_bergman(self) -> bool:
        return self.kind == BERGMAN

    def log_basis_sq(self, n):
        """ln(1 / ||z^n||^2), the log of the squared basis normalizer."""
        if self.is_bergman:
            return log_bergman_basis_sq(n, self.weight)
        return log_fock_basis_sq(n, self.weight)

    def log_norm_sq(self, n):
        """ln ||z^n||^2."""
        return -self.log_basis_sq(n)

    def to_json(self) -> dict:
        return {"kind": self.kind, "weight": self.weight}


def monomial_norm_sq(space: SpaceParams, n):
    """Squared norm of z**n: n! Gamma(alpha+2)/Gamma(n+alpha+2) or n!/beta**n."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("monomial index must be nonnegative")
    out = np.exp(space.log_norm_sq(n_arr))
    return float(out) if np.ndim(out) == 0 else out


def basis_scale(space: SpaceParams, n):
    """Normalizer c_n such that c_n z**n is a unit vector."""
    return np.exp(0.5 * np.asarray(space.log_basis_sq(n)))


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """A polynomial in the monomial basis of a space."""

    space: SpaceParams
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1D sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def monomial(cls, space: SpaceParams, n: int, normalized: bool = True):
        """z**n, or the unit basis vector e_n when ``normalized``."""
        c = np.zeros(n + 1, dtype=complex)
        c[n] = basis_scale(space, n) if normalized else 1.0
        return cls(space, c)

    @classmethod
    def from_orthonormal(cls, space: SpaceParams, x) -> "CoefficientVector":
        """Build from coordinates in the orthonormal basis e_n."""
        x = np.asarray(x, dtype=complex)
        return cls(space, x * basis_scale(space, np.arange(x.size)))

    def orthonormal(self) -> np.ndarray:
        """Coordinates in the orthonormal basis e_n."""
        return self.coeffs / basis_scale(self.space, np.arange(self.coeffs.size))

    def padded(self, degree: int) -> "CoefficientVector":
        if degree < self.degree:
            raise ValueError("cannot pad to a lower degree")
        c = np.zeros(degree + 1, dtype=complex)
        c[: self.coeffs.size] = self.coeffs
        return CoefficientVector(self.space, c)

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self).real)

    def normalized(self) -> "CoefficientVector":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return CoefficientVector(self.space, self.coeffs / nrm)

    def rotated(self, theta: float) -> "CoefficientVector":
        """The function z -> u(e^{i theta} z)."""
        n = np.arange(self.coeffs.size)
        return CoefficientVector(self.space, self.coeffs * np.exp(1j * theta * n))

    def dilated(self, r: float, space: SpaceParams | None = None) -> "CoefficientVector":
        """The function z -> u(r z), optionally reinterpreted in another space."""
        n = np.arange(self.coeffs.size)
        return CoefficientVector(space or self.space, self.coeffs * float(r) ** n)

    def __call__(self, z):
        return evaluate(self, z)

    def to_json(self) -> dict:
        return {
            "kind": self.space.kind,
            "weight": self.space.weight,
            "coeffs": [[c.real, c.imag] for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoefficientVector":
        space = SpaceParams(data["kind"], data["weight"])
        return cls(space, [complex(re, im) for re, im in data["coeffs"]])


def _check_same_space(u: CoefficientVector, v: CoefficientVector):
    if u.space != v.space:
        raise SpaceMismatchError(f"space mismatch: {u.space} vs {v.space}")


def inner_product(u: CoefficientVector, v: CoefficientVector) -> complex:
    """<u, v>, linear in u and conjugate-linear in v."""
    _check_same_space(u, v)
    m = min(u.coeffs.size, v.coeffs.size)
    w = monomial_norm_sq(u.space, np.arange(m))
    terms = u.coeffs[:m] * np.conj(v.coeffs[:m]) * w
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def v_alpha_transform(u: CoefficientVector, target_alpha: float) -> CoefficientVector:
    """Unitary from the unweighted Bergman space onto weight ``target_alpha``.

    Sends the orthonormal basis vector e_n of weight 0 to e_n of the target
    weight, so orthonormal coordinates are carried over unchanged.
    """
    if not (u.space.is_bergman and u.space.weight == 0):
        raise SpaceMismatchError("v_alpha_transform expects a vector in the unweighted Bergman space")
    target = SpaceParams.bergman(target_alpha)
    return CoefficientVector.from_orthonormal(target, u.orthonormal())


def evaluate(u: CoefficientVector, z):
    """Point evaluation by Horner's rule; vectorized in z."""
    z_arr = np.asarray(z, dtype=complex)
    out = np.polyval(u.coeffs[::-1], z_arr)
    return complex(out) if out.ndim == 0 else out


def log_kernel(space: SpaceParams, z, w):
    """Principal log of the reproducing kernel K(z, w)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zw = z * np.conj(w)
    if space.is_bergman:
        if np.any(np.abs(z) >= 1) or np.any(np.abs(w) >= 1):
            raise ValueError("Bergman kernel requires |z|, |w| < 1")
        return -(2.0 + space.weight) * np.log1p(-zw)
    return space.weight * zw


def kernel_eval(space: SpaceParams, z, w):
    """Reproducing kernel (1 - z conj(w))^{-(2+alpha)} or exp(beta z conj(w))."""
    lk = log_kernel(space, z, w)
    if np.any(lk.real > OVERFLOW_LOG):
        raise OverflowError("kernel value overflows double precision")
    out = np.exp(lk)
    return complex(out) if np.ndim(out) == 0 else out


def kernel_vector(space: SpaceParams, w: complex, degree: int) -> CoefficientVector:
    """Degree-``degree`` truncation of the kernel function K_w(z) = K(z, w).

    The coefficient of z**n is conj(w)**n / ||z**n||^2.  The discarded tail is
    geometric in |w|^2 for Bergman and factorial for Fock; see
    :func:`kernel_tail_bound`.
    """
    n = np.arange(degree + 1)
    w = complex(w)
    if w == 0:
        c = np.zeros(degree + 1, dtype=complex)
        c[0] = 1.0
        return CoefficientVector(space, c)
    logmag = n * math.log(abs(w)) + space.log_basis_sq(n)
    return CoefficientVector(space, np.exp(logmag - 1j * n * cmath.phase(w)))


def kernel_tail_bound(space: SpaceParams, w: complex, degree: int) -> float:
    """Squared-norm mass of K_w beyond ``degree``, relative to K(w, w)."""
    n = np.arange(degree + 1)
    s = abs(complex(w)) ** 2
    if s == 0:
        return 0.0
    head = np.exp(n * math.log(s) + space.log_basis_sq(n) - log_kernel(space, w, w).real)
    return max(0.0, 1.0 - float(np.sum(head)))
