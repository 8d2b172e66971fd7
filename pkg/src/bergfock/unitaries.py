"""Matrix elements of the Moebius unitaries (Bergman) and Weyl operators (Fock).

For a group element ``g = (t, w)`` the Bergman unitary acts by

    U_g f(z) = e^{i(1+alpha/2) t} f(e^{it} phi_w(z)) k_w(z),

with ``k_w`` the normalized reproducing kernel.  The Fock Weyl operator is ``W_z f(u) = f(u - z) exp(beta conj(z) u - beta|z|^2/2)``.

Along each diagonal ``k = j + m`` (m >= 0) the matrix elements are normalized
classical polynomials in the squared modulus of the parameter:

    <U_w e_j, e_{j+m}> = (1-s)^{1+alpha/2} conj(w)^m
                         sqrt(j! G(j+m+alpha+2) / ((j+m)! G(j+alpha+2))) P_j^{(m, alpha+1)}(1-2s)
    <W_z w_j, w_{j+m}> = exp(-x/2) (sqrt(beta) conj(z))^m sqrt(j!/(j+m)!) L_j^{(m)}(x)

with s = |w|^2 and x = beta |z|^2.  The binomial closed form of the same
quantities alternates in sign and loses all accuracy for large j, so the
diagonals are generated by the polynomials' forward three-term recurrences
(stable for the polynomial solution), started from the exact j = 0 column
in log-magnitude form and rescaled on the fly.  Entries with k < j follow
from U_w^* = U_{-w} and W_z^* = W_{-z}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import GroupElement
from .spaces import CoefficientVector, SpaceParams
from .special import log_gamma

CAPTURED_MASS_WARN = 1e-6



RESCALE = 1e150
LOG_RESCALE = math.log(RESCALE)


def _power_log(exponent, log_abs):
    """exponent * log|w| with the convention 0 * log 0 = 0."""
    with np.errstate(invalid="ignore"):
        out = exponent * log_abs
    return np.where(exponent == 0, 0.0, out)


def _run_diagonals(log_start, coeffs, n_len: int) -> np.ndarray:
    """Real sequences E_0..E_{n_len-1} per (point, diagonal).

    ``log_start`` (P, M) is log E_0 (E_0 > 0); ``coeffs(n)`` returns arrays
    (A_n, B_n) broadcastable to (P, M) with E_{n+1} = A_n E_n - B_n E_{n-1}.
    The recurrence runs on scaled values with a per-entry log scale.
    """
    out = np.empty((n_len,) + log_start.shape)
    scale = log_start.copy()
    prev = np.zeros_like(log_start)
    cur = np.ones_like(log_start)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out[0] = np.exp(scale)
        for n in range(n_len - 1):
            a, b = coeffs(n)
            prev, cur = cur, a * cur - b * prev
            big = np.abs(cur) > RESCALE
            if np.any(big):
                f = np.where(big, 1.0 / RESCALE, 1.0)
                prev, cur = prev * f, cur * f
                scale = scale + np.where(big, LOG_RESCALE, 0.0)
            small = (np.abs(cur) < 1.0 / RESCALE) & (np.abs(prev) < 1.0 / RESCALE) & ((cur != 0) | (prev != 0))
            if np.any(small):
                f = np.where(small, RESCALE, 1.0)
                prev, cur = prev * f, cur * f
                scale = scale - np.where(small, LOG_RESCALE, 0.0)
            out[n + 1] = np.sign(cur) * np.exp(np.log(np.abs(cur)) + scale)
    return np.nan_to_num(out, nan=0.0, posinf=np.inf, neginf=-np.inf)


def _assemble(values_pos, values_neg, phase_unit, n_target: int, n_source: int, shape) -> np.ndarray:
    """Place diagonal sequences into ``shape + (n_target, n_source)``.

    ``values_pos[n, p, m]`` is the real part of entry (k, j) = (n + m, n) and
    ``values_neg[n, p, m]`` that of (n, n + m) for m >= 1; ``phase_unit`` (P,)
    is conj(w)/|w| so that the m-th diagonal carries phase_unit**m below and
    (-conj(phase_unit))**m above the main diagonal.
    """
    P = phase_unit.size
    block = np.zeros((P, n_target, n_source), dtype=complex)
    for m in range(values_pos.shape[2]):
        n = np.arange(min(n_source, n_target - m))
        block[:, n + m, n] = values_pos[: n.size, :, m].T * (phase_unit**m)[:, None]
    for m in range(1, values_neg.shape[2] + 1):
        n = np.arange(min(n_target, n_source - m))
        block[:, n, n + m] = values_neg[: n.size, :, m - 1].T * ((-np.conj(phase_unit)) ** m)[:, None]
    return block.reshape(shape + (n_target, n_source))


def _unit_phase(w: np.ndarray) -> np.ndarray:
    r = np.abs(w)
    return np.where(r > 0, np.conj(w) / np.where(r > 0, r, 1.0), 1.0)


def bergman_block(alpha: float, w, n_target: int, n_source: int, reduced: bool = False):
    """Matrix of U_w (no rotation) on the orthonormal basis.

    Returns an array of shape ``w.shape + (n_target, n_source)`` whose
    ``[..., k, j]`` entry is ``<U_w e_j, e_k>``.  With ``reduced=True`` the
    common factor ``(1 - |w|^2)^{1 + alpha/2}`` is omitted, leaving a
    polynomial in ``w`` and ``conj(w)``.
    """
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) >= 1):
        raise ValueError("Bergman unitary requires |w| < 1")
    shape = w.shape
    wf = w.ravel()
    s = (np.abs(wf) ** 2)[:, None]
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(wf))[:, None]
    x = 1.0 - 2.0 * s
    b = alpha + 1.0

    def sequences(n_len, n_diag, first):
        a = np.arange(first, first + n_diag, dtype=float)[None, :]
        log0 = (_power_log(a, log_abs)
                + 0.5 * (log_gamma(a + alpha + 2.0) - log_gamma(a + 1.0) - math.lgamma(alpha + 2.0)))
        if not reduced:
            log0 = log0 + (1.0 + 0.5 * alpha) * np.log1p(-s)
        log0 = np.broadcast_to(log0, (wf.size, n_diag)).copy()
        ab = a + b

        def an(n):  # off-diagonal Jacobi coefficient a_n, n >= 1
            t = 2.0 * n + ab
            return 2.0 / t * np.sqrt(n * (n + a) * (n + b) * (n + ab) / ((t - 1.0) * (t + 1.0)))

        def rn(n):
            return 1.0 / np.sqrt(2.0 * n + ab + 1.0)

        def coeffs(n):
            t = 2.0 * n + ab
            bn = (b * b - a * a) / (t * (t + 2.0))
            a_next = an(n + 1)
            A = rn(n + 1) * (x - bn) / (a_next * rn(n))
            B = rn(n + 1) * an(n) / (a_next * rn(n - 1)) if n > 0 else np.zeros_like(a)
            return A, B

        return _run_diagonals(log0, coeffs, n_len)

    pos = sequences(min(n_source, n_target), n_target, 0)
    neg = sequences(min(n_target, max(n_source - 1, 0)), max(n_source - 1, 0), 1) if n_source > 1 else \
        np.zeros((0, wf.size, 0))
    return _assemble(pos, neg, _unit_phase(wf), n_target, n_source, shape)


def fock_block(beta: float, z, n_target: int, n_source: int, reduced: bool = False):
    """Matrix of the Weyl operator W_z on the orthonormal basis.

    ``[..., k, j]`` holds ``<W_z omega_j, omega_k>``.  With ``reduced=True`` the
    Gaussian factor ``exp(-beta |z|^2 / 2)`` is omitted.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    zf = z.ravel()
    x = beta * (np.abs(zf) ** 2)[:, None]
    with np.errstate(divide="ignore"):
        log_abs = np.log(math.sqrt(beta) * np.abs(zf))[:, None]

    def sequences(n_len, n_diag, first):
        m = np.arange(first, first + n_diag, dtype=float)[None, :]
        log0 = _power_log(m, log_abs) - 0.5 * log_gamma(m + 1.0)
        if not reduced:
            log0 = log0 - 0.5 * x
        log0 = np.broadcast_to(log0, (zf.size, n_diag)).copy()

        def coeffs(n):
            d = np.sqrt((n + 1.0) * (n + m + 1.0))
            return (2.0 * n + 1.0 + m - x) / d, np.sqrt(n * (n + m)) / d

        return _run_diagonals(log0, coeffs, n_len)

    pos = sequences(min(n_source, n_target), n_target, 0)
    neg = sequences(min(n_target, max(n_source - 1, 0)), max(n_source - 1, 0), 1) if n_source > 1 else \
        np.zeros((0, zf.size, 0))
    return _assemble(pos, neg, _unit_phase(zf), n_target, n_source, shape)


def bergman_phase(alpha: float, angle: float) -> complex:
    """The scalar e^{i(1 + alpha/2) angle} carried by a rotated unitary."""
    return complex(np.exp(1j * (1.0 + 0.5 * alpha) * angle))


def bergman_matrix(alpha: float, g: GroupElement, n_target: int, n_source: int) -> np.ndarray:
    """Matrix ``[k, j] = <U_g e_j, e_k>`` of the full group unitary.

    The rotation part contributes e^{i(1+alpha/2) t} e^{i j t}; for
    non-integer ``alpha/2`` the first factor uses the stored angle in
    [0, 2 pi) as its branch.
    """
    block = bergman_block(alpha, g.point, n_target, n_source)
    rot = np.exp(1j * g.angle * np.arange(n_source))
    return bergman_phase(alpha, g.angle) * block * rot[None, :]


def fock_matrix(beta: float, z: complex, n_target: int, n_source: int) -> np.ndarray:
    """Matrix ``[k, j] = <W_z omega_j, omega_k>``."""
    return fock_block(beta, z, n_target, n_source)


def u_matrix_element(alpha: float, g: GroupElement, j: int, k: int) -> complex:
    """<U_g e_j, e_k> on the weighted Bergman space."""
    if j < 0 or k < 0:
        raise ValueError("basis indices must be nonnegative")
    return complex(bergman_matrix(alpha, g, k + 1, j + 1)[k, j])


def w_matrix_element(beta: float, z: complex, j: int, k: int) -> complex:
    """<W_z omega_j, omega_k> on the Fock space."""
    if j < 0 or k < 0:
        raise ValueError("basis indices must be nonnegative")
    return complex(fock_block(beta, z, k + 1, j + 1)[k, j])


def fock_truncation(beta: float, z: complex, j: int) -> int:
    """Target degree that captures the column of W_z down to about 1e-10."""
    t = beta * abs(z) ** 2
    return math.ceil(t + 40.0 * math.sqrt(t + 1.0) + j + 20)


@dataclass(frozen=True)
class UnitaryImage:
    """A truncated image vector and the fraction of squared norm it retains."""

    vector: CoefficientVector
    captured_mass: float
    truncation: int


def _element_matrix(space: SpaceParams, element, n_target: int, n_source: int):
    if space.is_bergman:
        if not isinstance(element, GroupElement):
            raise TypeError("Bergman unitaries take a GroupElement")
        return bergman_matrix(space.weight, element, n_target, n_source)
    if isinstance(element, GroupElement):
        raise TypeError("Fock Weyl operators take a complex translation")
    return fock_matrix(space.weight, complex(element), n_target, n_source)


def apply_unitary(u: CoefficientVector, element, truncation: int) -> UnitaryImage:
    """Apply U_g (Bergman) or W_z (Fock) and keep Taylor degrees <= truncation."""
    if truncation < u.degree:
        raise ValueError("truncation must be at least the degree of u")
    x = u.orthonormal()
    mat = _element_matrix(u.space, element, truncation + 1, x.size)
    y = mat @ x
    total = float(np.vdot(x, x).real)
    captured = float(np.vdot(y, y).real) / total if total > 0 else 1.0
    if captured < 1.0 - CAPTURED_MASS_WARN:
        warnings.warn(
            f"truncation {truncation} captures only {captured:.10f} of the squared norm",
            RuntimeWarning,
            stacklevel=2,
        )
    return UnitaryImage(CoefficientVector.from_orthonormal(u.space, y), captured, truncation)


def suggest_truncation(u: CoefficientVector, element, tail: float = 1e-6, max_degree: int = 1 << 16) -> int:
    """Smallest power-of-two-stepped degree whose captured mass is >= 1 - tail."""
    x = u.orthonormal()
    total = float(np.vdot(x, x).real)
    k = max(16, u.degree)
    while k <= max_degree:
        y = _element_matrix(u.space, element, k + 1, x.size) @ x
        if float(np.vdot(y, y).real) >= (1.0 - tail) * total:
            return k
        k *= 2
    raise RuntimeError(f"no truncation up to {max_degree} captures 1 - {tail} of the norm")
