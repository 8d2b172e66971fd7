"""Toeplitz and localization operators as truncated matrices.

Matrices are expressed in the orthonormal monomial basis (e_n for Bergman,
omega_n for Fock) and truncated to indices 0..N-1.  ``entries[m, n]`` holds
``<A e_n, e_m>``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaln

from .quadrature import (
    BERGMAN_WEIGHTED,
    FOCK_GAUSSIAN,
    QuadratureGrid,
    angular_rule,
    composite_legendre,
    radial_panels,
)
from .spaces import CoefficientVector, SpaceMismatchError, SpaceParams
from .special import log_gamma, reg_inc_beta, reg_inc_gamma_p
from .symbols import DISC, PLANE, Constant, DiscIndicator, SymbolSpec
from .unitaries import bergman_block, fock_block

HERMITIAN_TOL = 1e-10


class TruncationError(RuntimeError):
    """Raised when a truncation leaves too much of the operator behind."""


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """An N x N truncation of an operator with provenance metadata."""

    space: SpaceParams
    entries: np.ndarray = field(repr=False)
    hermitian: bool
    provenance: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "size": self.size,
            "hermitian": self.hermitian,
            "entries": [[[v.real, v.imag] for v in row] for row in self.entries],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "OperatorMatrix":
        sp = data["space"]
        entries = np.array([[complex(re, im) for re, im in row] for row in data["entries"]])
        return cls(SpaceParams(sp["kind"], sp["weight"]), entries, data["hermitian"],
                   data.get("provenance", {}))


def _finalize(space, entries, want_hermitian, provenance) -> OperatorMatrix:
    hermitian = False
    if want_hermitian:
        dev = float(np.max(np.abs(entries - entries.conj().T))) if entries.size else 0.0
        if dev <= HERMITIAN_TOL * max(1.0, float(np.max(np.abs(entries))) if entries.size else 1.0):
            entries = 0.5 * (entries + entries.conj().T)
            hermitian = True
        provenance = {**provenance, "hermitian_deviation": dev}
    return OperatorMatrix(space, entries, hermitian, provenance)


def _check_grid(space: SpaceParams, symbol: SymbolSpec, grid: QuadratureGrid):
    expected = BERGMAN_WEIGHTED if space.is_bergman else FOCK_GAUSSIAN
    if grid.measure != expected:
        raise SpaceMismatchError(f"grid measure {grid.measure} does not match {space.kind} space")
    domain = DISC if space.is_bergman else PLANE
    if symbol.domain != domain:
        raise SpaceMismatchError(f"{symbol.domain} symbol used on the {space.kind} space")


def _measure_factor(space: SpaceParams, grid: QuadratureGrid):
    """Ratio between the space's own measure and the grid's measure at the nodes."""
    if grid.parameter == space.weight:
        return 1.0
    s = np.abs(grid.nodes) ** 2
    if space.is_bergman:
        a, a0 = space.weight, grid.parameter
        return (a + 1.0) / (a0 + 1.0) * np.exp((a - a0) * np.log1p(-s))
    b, b0 = space.weight, grid.parameter
    return b / b0 * np.exp(-(b - b0) * s)


def basis_values(space: SpaceParams, z, n_max: int) -> np.ndarray:
    """Array ``[n, i] = e_n(z_i)`` for n < n_max, formed in log domain."""
    z = np.asarray(z, dtype=complex).ravel()
    n = np.arange(n_max, dtype=float)[:, None]
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(z))[None, :]
    logpow = np.where(n == 0, 0.0, n * logabs)
    logmag = 0.5 * np.asarray(space.log_basis_sq(n)) + logpow
    return np.exp(logmag + 1j * n * np.angle(z)[None, :])


def toeplitz_matrix(space: SpaceParams, symbol: SymbolSpec, N: int, grid: QuadratureGrid) -> OperatorMatrix:
    """Matrix of the Toeplitz operator with a theta-independent symbol."""
    if N < 1:
        raise ValueError("N must be positive")
    _check_grid(space, symbol, grid)
    prov = {"operator": "toeplitz", "symbol": symbol.describe(), "grid": grid.to_json(), "truncation": N}
    if symbol.is_zero:
        return OperatorMatrix(space, np.zeros((N, N), dtype=complex), True, prov)
    if symbol.theta_dependent:
        raise ValueError("Toeplitz operators take theta-independent symbols")
    vals = np.asarray(symbol(0.0, grid.nodes), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ValueError("symbol is not finite at every node")
    wf = grid.weights * _measure_factor(space, grid) * vals
    e = basis_values(space, grid.nodes, N)
    entries = (np.conj(e) * wf[None, :]) @ e.T
    return _finalize(space, entries, symbol.is_real, prov)


# ---------------------------------------------------------------------------
# radial diagonal fast paths


def _bergman_closed_diagonal(alpha, symbol: SymbolSpec, n):
    """Diagonal for constants and centered disc indicators via incomplete beta."""
    form = symbol.form
    r, sigma = symbol.scaling if symbol.scaling else (1.0, 0.0)
    if isinstance(form, Constant):
        x0, height = 1.0, complex(form.value)
    else:
        x0, height = min(1.0, (form.radius / r) ** 2), form.height
    a = alpha + sigma
    if sigma == 0:
        scale = np.ones_like(n)
    else:
        log_scale = (math.log(alpha + 1.0) + log_gamma(n + alpha + 2.0) - log_gamma(n + 1.0)
                     - log_gamma(alpha + 2.0) + betaln(n + 1.0, a + 1.0))
        scale = np.exp(log_scale)
    if x0 >= 1.0:
        return height * scale
    return height * scale * reg_inc_beta(x0, n + 1.0, a + 1.0)


def _profile_nodes(symbol: SymbolSpec, s_end: float, n_max: int, a: float, n: int = 20):
    width = min(0.05, 0.5 / math.sqrt(n_max + a + 2.0))
    breaks = [b * b for b in symbol.breaks]
    return radial_panels(s_end, breaks, width, n)


def _bergman_profile_diagonal(alpha, symbol: SymbolSpec, n):
    s_end = min(1.0, symbol.support**2)
    x, w = _profile_nodes(symbol, s_end, float(n[-1]), alpha)
    f = symbol.profile(np.sqrt(x))
    keep = f != 0
    x, w, f = x[keep], w[keep], f[keep]
    if x.size == 0:
        return np.zeros(n.shape)
    nn = n[:, None].astype(float)
    log_basis = log_gamma(nn + alpha + 2.0) - log_gamma(nn + 1.0) - log_gamma(alpha + 2.0)
    logint = math.log(alpha + 1.0) + alpha * np.log1p(-x)[None, :] + log_basis + nn * np.log(x)[None, :]
    return np.exp(logint) @ (w * f)


def _fock_profile_diagonal(beta, symbol: SymbolSpec, n):
    n_max = float(n[-1])
    t_end = n_max + 40.0 * math.sqrt(n_max + 1.0) + 60.0
    if math.isfinite(symbol.support):
        t_end = min(t_end, beta * symbol.support**2)
    cuts = sorted({beta * b * b for b in symbol.breaks if beta * b * b < t_end})
    edges = np.array([0.0, *cuts, t_end])
    fine = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = max(1, math.ceil((hi - lo) / 1.0))
        fine.extend(lo + (hi - lo) * np.arange(1, m + 1) / m)
    t, w = composite_legendre(np.array(fine), 20)
    f = symbol.profile(np.sqrt(t / beta))
    nn = n[:, None].astype(float)
    logint = -t[None, :] + nn * np.log(t)[None, :] - log_gamma(nn + 1.0)
    return np.exp(logint) @ (w * f)


def radial_toeplitz_diagonal(space: SpaceParams, symbol: SymbolSpec, N: int) -> np.ndarray:
    """Diagonal of a Toeplitz operator with a radial symbol, without a 2D grid.

    Bergman entries are (alpha+1) Gamma(n+alpha+2)/(n! Gamma(alpha+2)) times
    the integral of (1-x)^alpha x^n F(sqrt x) over [0, 1], where F includes any
    (r, sigma) scaling.  Disc indicators and constants use the incomplete beta
    or incomplete gamma closed forms; other profiles use composite
    Gauss-Legendre panels in log domain.
    """
    if not symbol.radial:
        raise ValueError("radial_toeplitz_diagonal requires a radial symbol")
    if N < 1:
        raise ValueError("N must be positive")
    n = np.arange(N)
    form = symbol.form
    if space.is_bergman:
        if symbol.domain != DISC:
            raise SpaceMismatchError("Bergman diagonals need a disc symbol")
        if isinstance(form, (Constant, DiscIndicator)):
            out = _bergman_closed_diagonal(space.weight, symbol, n)
        else:
            out = _bergman_profile_diagonal(space.weight, symbol, n)
    else:
        if symbol.domain != PLANE:
            raise SpaceMismatchError("Fock diagonals need a plane symbol")
        if isinstance(form, Constant):
            out = np.full(N, complex(form.value))
        elif isinstance(form, DiscIndicator):
            out = form.height * reg_inc_gamma_p(n + 1.0, space.weight * form.radius**2)
        else:
            out = _fock_profile_diagonal(space.weight, symbol, n)
    out = np.asarray(out)
    return out.real.astype(float) if np.all(np.imag(out) == 0) else out


def disc_tail_truncation(rho: float, alpha: float, tol: float = 1e-10, n_cap: int = 1 << 20) -> int:
    """Smallest N with I_{rho^2}(N+1, alpha+1) < tol."""
    x = rho * rho
    if x >= 1:
        raise ValueError("rho must be below 1")
    lo, hi = 0, 1
    while reg_inc_beta(x, hi + 1.0, alpha + 1.0) >= tol:
        hi *= 2
        if hi > n_cap:
            raise TruncationError("tail rule did not terminate")
    while lo < hi:
        mid = (lo + hi) // 2
        if reg_inc_beta(x, mid + 1.0, alpha + 1.0) < tol:
            hi = mid
        else:
            lo = mid + 1
    return lo


# ---------------------------------------------------------------------------
# localization operators


def _window_coords(space: SpaceParams, window: CoefficientVector, name: str) -> np.ndarray:
    if window.space != space:
        raise SpaceMismatchError(f"window {name} lives in {window.space}, expected {space}")
    return window.orthonormal()


def unitary_columns(space: SpaceParams, z, n_target: int, n_source: int, reduced: bool = True):
    """Matrix elements of U_z (Bergman) or W_z (Fock) at many points."""
    if space.is_bergman:
        return bergman_block(space.weight, z, n_target, n_source, reduced=reduced)
    return fock_block(space.weight, z, n_target, n_source, reduced=reduced)


def _full_factor(space: SpaceParams, z):
    s = np.abs(z) ** 2
    if space.is_bergman:
        return np.exp((1.0 + 0.5 * space.weight) * np.log1p(-s))
    return np.exp(-0.5 * space.weight * s)


def localization_matrix(
    space: SpaceParams,
    symbol: SymbolSpec,
    phi: CoefficientVector,
    psi: CoefficientVector,
    N: int,
    grid: QuadratureGrid,
    theta_nodes: int | None = None,
) -> OperatorMatrix:
    """Matrix of the localization operator with windows phi, psi.

    ``entries[m, n] = c * int int f(theta, z) <e_n, U_z phi_theta> <U_z psi_theta, e_m>``
    with c = alpha+1 against the invariant measure (Bergman) or beta/pi
    against area measure (Fock).  The common factor of the matrix elements
    is absorbed into the grid's measure, so the integrand is a polynomial
    times the symbol.  For theta-independent symbols the theta average is
    done exactly by index selection; otherwise ``theta_nodes`` uniform angles
    are used (default: enough for the window degrees).
    """
    if N < 1:
        raise ValueError("N must be positive")
    _check_grid(space, symbol, grid)
    a = _window_coords(space, phi, "phi")
    b = _window_coords(space, psi, "psi")
    d = max(a.size, b.size)
    a = np.pad(a, (0, d - a.size))
    b = np.pad(b, (0, d - b.size))
    same_window = a.size == b.size and np.array_equal(a, b)
    prov = {
        "operator": "localization",
        "symbol": symbol.describe(),
        "phi": phi.to_json(),
        "psi": psi.to_json(),
        "grid": grid.to_json(),
        "truncation": N,
    }
    if symbol.is_zero:
        return OperatorMatrix(space, np.zeros((N, N), dtype=complex), True, prov)

    nodes = grid.nodes
    block = unitary_columns(space, nodes, N, d, reduced=True)  # (P, N, d)
    mw = grid.weights * _measure_factor(space, grid)

    analytic = not symbol.theta_dependent and theta_nodes is None
    if analytic:
        f = np.asarray(symbol(0.0, nodes), dtype=complex)
        if not np.all(np.isfinite(f)):
            raise ValueError("symbol is not finite at every node")
        entries = np.zeros((N, N), dtype=complex)
        for j in range(d):
            coef = b[j] * np.conj(a[j])
            if coef == 0:
                continue
            col = block[:, :, j].T  # (N, P)
            entries += coef * (col * (mw * f)[None, :]) @ col.conj().T
        prov["theta_average"] = "analytic"
    else:
        n_theta = theta_nodes or (2 * d + 1)
        thetas, tw = angular_rule(n_theta)
        entries = np.zeros((N, N), dtype=complex)
        jj = np.arange(d)
        for t, wt in zip(thetas, tw):
            rot = np.exp(1j * jj * t)
            f = np.asarray(symbol(t, nodes), dtype=complex)
            if not np.all(np.isfinite(f)):
                raise ValueError("symbol is not finite at every node")
            img_psi = (block @ (b * rot)).T  # (N, P): <U_z psi_t, e_m>
            img_phi = (block @ (a * rot)).T
            entries += wt * (img_psi * (mw * f)[None, :]) @ img_phi.conj().T
        prov["theta_average"] = f"trapezoid:{n_theta}"

    # fraction of the window captured by the first N basis vectors, worst node
    full = np.abs(block @ b) ** 2 * (_full_factor(space, nodes) ** 2)[:, None]
    captured = full.sum(axis=1) / max(float(np.vdot(b, b).real), 1e-300)
    prov["worst_node_captured_mass"] = float(captured.min())
    want_herm = same_window and symbol.is_real
    return _finalize(space, entries, want_herm, prov)


def radial_localization_diagonal(space: SpaceParams, symbol: SymbolSpec, window: CoefficientVector,
                                 N: int, n_per_panel: int = 20) -> np.ndarray:
    """Diagonal of a Bergman localization operator with radial symbol and phi = psi.

    For radial symbols and a single window the operator is diagonal, with
    entry n equal to (alpha+1) sum_j |psi_j|^2 times the invariant-measure
    integral of F(|z|) |<U_z e_j, e_n>|^2; the angular integral is done
    analytically and the radial one on Gauss-Legendre panels.
    """
    if not space.is_bergman:
        raise SpaceMismatchError("radial localization diagonal is implemented for Bergman spaces")
    if not symbol.radial:
        raise ValueError("symbol must be radial")
    c = _window_coords(space, window, "psi")
    alpha = space.weight
    s_end = min(1.0, symbol.support**2)
    x, w = _profile_nodes(symbol, s_end, float(N), alpha, n_per_panel)
    f = symbol.profile(np.sqrt(x))
    keep = f != 0
    x, w, f = x[keep], w[keep], f[keep]
    out = np.zeros(N)
    if x.size == 0:
        return out
    block = bergman_block(alpha, np.sqrt(x), N, c.size)  # (P, N, d), full elements
    mass = np.abs(block) ** 2 @ (np.abs(c) ** 2)  # (P, N)
    weights = (alpha + 1.0) * w * f / (1.0 - x) ** 2
    return weights @ mass


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """Eigenvalues (or singular values), norm, trace and threshold counts."""

    eigenvalues: np.ndarray = field(repr=False)
    op_norm: float
    trace: float
    count_above: dict
    h_trace: float | None = None
    hermitian: bool = True

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "eigenvalue"])
        for i, v in enumerate(self.eigenvalues):
            writer.writerow([i, f"{v:.17g}"])
        return buf.getvalue()


def spectral_summary(A, h=None, thresholds=()) -> SpectralSummary:
    """Spectral data of a matrix, eigenvalues sorted in decreasing order.

    Hermitian input uses the full eigendecomposition and
    ``h_trace = sum_i lambda_i h(lambda_i)``.  Otherwise singular values
    are reported and ``h_trace`` is taken over them.  ``A`` may be an
    OperatorMatrix, a full matrix, or a 1D array holding a diagonal.
    """
    hermitian = True
    if isinstance(A, OperatorMatrix):
        mat, hermitian, prov = A.entries, A.hermitian, A.provenance
    else:
        mat, prov = np.asarray(A), {}
        if mat.ndim == 2:
            hermitian = bool(np.allclose(mat, mat.conj().T, atol=HERMITIAN_TOL, rtol=0))
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix has non-finite entries")
    try:
        if mat.ndim == 1:
            if np.iscomplexobj(mat) and np.any(mat.imag != 0):
                hermitian = False
                vals = np.sort(np.abs(mat))[::-1]
            else:
                vals = np.sort(mat.real)[::-1]
            trace = float(np.sum(mat.real))
        elif hermitian:
            vals = np.linalg.eigvalsh(mat)[::-1]
            trace = float(np.trace(mat).real)
        else:
            vals = np.linalg.svd(mat, compute_uv=False)
            trace = float(np.trace(mat).real)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolver failed for matrix with provenance {prov}") from exc
    op_norm = float(np.max(np.abs(vals))) if vals.size else 0.0
    counts = {float(dlt): int(np.count_nonzero(vals > dlt)) for dlt in thresholds}
    h_trace = None
    if h is not None:
        h_trace = math.fsum(vals * np.asarray(h(vals), dtype=float))
    return SpectralSummary(vals, op_norm, trace, counts, h_trace, hermitian)
