"""Tensor-product quadrature on the disc and the plane.

Radial rules live in ``s = |z|^2`` (disc) or ``t = beta |z|^2`` (plane), where
the weighted area measures become the classical Jacobi and Laguerre weights.
Nodes and weights come from the Golub-Welsch eigenvalue method applied to the
three-term recurrence.  Angular rules are uniform trapezoid rules.

Symbols with jumps on circles are supported by splitting the radial range at
``breaks``; panels away from the boundary use Gauss-Legendre with the weight
folded into the quadrature weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal


BERGMAN_WEIGHTED = "bergman_weighted"
FOCK_GAUSSIAN = "fock_gaussian"
MOBIUS_INVARIANT = "mobius_invariant"
PLANE_LEBESGUE = "plane_lebesgue"

# the weight (1-s)^a or e^{-t} drops by e^{-PANEL_DECAY} across one panel
PANEL_DECAY = 8.0


class QuadratureError(RuntimeError):
    """Raised when a rule cannot be constructed or an integrand misbehaves."""


# ---------------------------------------------------------------------------
# one-dimensional rules


def _christoffel_weights(x, diag, offdiag):
    """Weights 1 / sum_k p_k(x)^2 from the orthonormal recurrence.

    Unlike squared eigenvector components these keep relative accuracy for
    the tiny weights far out in the tail of the measure.  The recurrence is
    rescaled on the fly to avoid overflow.
    """
    p_prev = np.zeros_like(x)
    p_cur = np.ones_like(x)
    total = np.ones_like(x)
    log_scale = np.zeros_like(x)
    for k in range(diag.size - 1):
        p_next = ((x - diag[k]) * p_cur - (offdiag[k - 1] * p_prev if k > 0 else 0.0)) / offdiag[k]
        p_prev, p_cur = p_cur, p_next
        total = total + p_cur * p_cur
        big = np.abs(p_cur) > 1e100
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            p_prev, p_cur, total = p_prev * f, p_cur * f, total * f * f
            log_scale = log_scale + np.where(big, 100.0 * math.log(10.0), 0.0)
    return np.exp(-np.log(total) - 2.0 * log_scale)


def _golub_welsch(diag, offdiag):
    """Nodes and normalized weights from orthonormal recurrence coefficients."""
    try:
        nodes = eigh_tridiagonal(diag, offdiag, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise QuadratureError(f"tridiagonal eigensolver failed: {exc}") from exc
    weights = _christoffel_weights(nodes, diag, offdiag)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights)) and np.all(weights > 0)):
        raise QuadratureError("recurrence produced non-finite nodes or weights")
    return nodes, weights / math.fsum(weights)


def gauss_jacobi_unit(n: int, a: float, b: float = 0.0):
    """Gauss rule on [0, 1] for the weight (1-s)^a s^b, weights summing to 1."""
    if n < 1:
        raise ValueError("need at least one node")
    if not (a > -1 and b > -1):
        raise ValueError("Jacobi exponents must exceed -1")
    k = np.arange(n, dtype=float)
    ab = a + b
    two_k = 2.0 * k + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (two_k * (two_k + 2.0))
    diag[0] = (b - a) / (ab + 2.0)
    kk = np.arange(1, n, dtype=float)
    t = 2.0 * kk + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (t * t * (t + 1.0) * (t - 1.0))
    if n > 1:
        beta[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) ** 2 * (3.0 + ab))
    if not np.all(np.isfinite(diag)) or not np.all(beta > 0):
        raise QuadratureError("Jacobi recurrence coefficients are not admissible")
    x, w = _golub_welsch(diag, np.sqrt(beta))
    return 0.5 * (1.0 + x), w


def gauss_laguerre_unit(n: int, a: float = 0.0):
    """Gauss rule on [0, inf) for t^a e^{-t}, weights summing to 1."""
    if n < 1:
        raise ValueError("need at least one node")
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + a + 1.0
    kk = np.arange(1, n, dtype=float)
    return _golub_welsch(diag, np.sqrt(kk * (kk + a)))


def gauss_legendre(n: int, lo: float, hi: float):
    """Gauss-Legendre nodes and weights on [lo, hi] (weights sum to hi - lo)."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def composite_legendre(edges, n: int):
    """Gauss-Legendre on each consecutive pair of ``edges``."""
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            x, w = gauss_legendre(n, lo, hi)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _refine_edges(edges, scale: float):
    """Subdivide each interval so no piece is longer than ``scale``."""
    out = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        m = max(1, math.ceil((hi - lo) / scale))
        out.extend(lo + (hi - lo) * np.arange(1, m + 1) / m)
    return np.array(out)


def jacobi_radial_rule(alpha: float, n: int, s_breaks=(), s_max: float = 1.0):
    """Radial rule in s for the probability weight (alpha+1)(1-s)^alpha on [0, s_max].

    The last panel ending at s = 1 is an exact Gauss-Jacobi rule; interior
    panels use Gauss-Legendre with the weight folded in, refined so that the
    weight changes by at most a factor e^8 across a panel.
    """
    if not 0 < s_max <= 1:
        raise ValueError("s_max must lie in (0, 1]")
    cuts = sorted({float(b) for b in s_breaks if 0 < b < s_max})
    edges = [0.0, *cuts, s_max]
    nodes, weights = [], []
    if s_max == 1.0:
        lo = edges[-2]
        x, w = gauss_jacobi_unit(n, alpha)
        nodes.append(lo + (1.0 - lo) * x)
        # mass of the last panel is (1 - lo)^(alpha+1)
        weights.append(w * (1.0 - lo) ** (alpha + 1.0))
        edges = edges[:-1]
    if len(edges) > 1:
        # log(1-s) changes by PANEL_DECAY/(alpha+1) per panel at most
        u_edges = -np.log1p(-np.asarray(edges))
        u_edges = _refine_edges(u_edges, PANEL_DECAY / max(alpha + 1.0, 1.0))
        s_edges = -np.expm1(-u_edges)
        x, w = composite_legendre(s_edges, n)
        nodes.append(x)
        weights.append(w * (alpha + 1.0) * np.exp(alpha * np.log1p(-x)))
    order = np.argsort(np.concatenate(nodes), kind="stable")
    return np.concatenate(nodes)[order], np.concatenate(weights)[order]


def laguerre_radial_rule(n: int, t_breaks=(), t_max: float = math.inf):
    """Radial rule in t for the probability weight e^{-t} on [0, t_max]."""
    cuts = sorted({float(b) for b in t_breaks if 0 < b < t_max})
    edges = [0.0, *cuts]
    nodes, weights = [], []
    if math.isinf(t_max):
        lo = edges[-1]
        x, w = gauss_laguerre_unit(n)
        nodes.append(lo + x)
        weights.append(w * math.exp(-lo))
    else:
        edges.append(float(t_max))
    if len(edges) > 1:
        e = _refine_edges(np.asarray(edges), PANEL_DECAY)
        x, w = composite_legendre(e, n)
        nodes.append(x)
        weights.append(w * np.exp(-x))
    order = np.argsort(np.concatenate(nodes), kind="stable")
    return np.concatenate(nodes)[order], np.concatenate(weights)[order]


def angular_rule(n: int, offset: float = 0.0):
    """Uniform angles on [0, 2 pi) with weights 1/n."""
    if n < 1:
        raise ValueError("need at least one angular node")
    theta = offset + 2.0 * math.pi * np.arange(n) / n
    return theta, np.full(n, 1.0 / n)


# ---------------------------------------------------------------------------
# two-dimensional grids


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Nodes and positive weights for one of the supported measures."""

    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    measure: str
    parameter: float
    orders: tuple
    radius: float | None = None
    breaks: tuple = ()

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise QuadratureError("nodes and weights must have the same shape")
        if np.any(self.weights <= 0):
            raise QuadratureError("quadrature weights must be positive")

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def to_json(self) -> dict:
        return {
            "measure": self.measure,
            "parameter": self.parameter,
            "orders": list(self.orders),
            "radius": self.radius,
            "breaks": list(self.breaks),
            "size": self.size,
            "total_mass": self.total_mass,
        }


def _tensor(radii, rweights, n_ang):
    theta, aw = angular_rule(n_ang)
    nodes = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (rweights[:, None] * aw[None, :]).ravel()
    return nodes, weights


def disc_grid(alpha: float, n_rad: int, n_ang: int, radius: float = 1.0, breaks=()) -> QuadratureGrid:
    """Grid for dA_alpha restricted to |z| < radius.

    ``n_rad`` is the number of radial nodes per panel; ``breaks`` are radii at
    which the integrand may jump.  With the default full radius the rule is
    exact for s^p e^{ik theta}, p <= 2 n_rad - 1, |k| <= n_ang - 1.
    """
    if not alpha > -1:
        raise ValueError("alpha must exceed -1")
    if n_rad < 1 or n_ang < 1:
        raise ValueError("grid orders must be positive")
    if not 0 < radius <= 1:
        raise ValueError("radius must lie in (0, 1]")
    s, w = jacobi_radial_rule(alpha, n_rad, [b * b for b in breaks], radius * radius)
    nodes, weights = _tensor(np.sqrt(s), w, n_ang)
    return QuadratureGrid(nodes, weights, BERGMAN_WEIGHTED, float(alpha), (n_rad, n_ang),
                          float(radius), tuple(float(b) for b in breaks))


def plane_grid(beta: float, n_rad: int, n_ang: int, radius: float = math.inf, breaks=()) -> QuadratureGrid:
    """Grid for the Gaussian measure d mu_beta restricted to |z| < radius."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    if n_rad < 1 or n_ang < 1:
        raise ValueError("grid orders must be positive")
    t, w = laguerre_radial_rule(n_rad, [beta * b * b for b in breaks], beta * radius * radius)
    nodes, weights = _tensor(np.sqrt(t / beta), w, n_ang)
    return QuadratureGrid(nodes, weights, FOCK_GAUSSIAN, float(beta), (n_rad, n_ang),
                          float(radius), tuple(float(b) for b in breaks))


def integrate(grid: QuadratureGrid, f) -> complex:
    """Sum of w_i f(node_i) in node order with exactly rounded accumulation."""
    values = np.asarray(f(grid.nodes), dtype=complex)
    if values.shape != grid.nodes.shape:
        values = np.broadcast_to(values, grid.nodes.shape)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand is not finite at every node")
    terms = grid.weights * values
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def radial_panels(s_max: float, s_breaks=(), max_width: float = 0.05, n: int = 20,
                  floor: float = 1e-14, n_graded: int = 60):
    """Composite Gauss-Legendre in s on [0, s_max] for peaked radial integrands.

    Panels are split at ``s_breaks`` and refined to width ``max_width``.  When
    ``s_max`` is 1 the final stretch is graded geometrically in 1 - s down to
    ``floor`` so integrands with boundary behavior are resolved.
    """
    cuts = sorted({float(b) for b in s_breaks if 0 < b < s_max})
    end = s_max
    grade_from = None
    if s_max >= 1.0:
        grade_from = max(cuts[-1] if cuts else 0.0, 1.0 - max_width)
        end = grade_from
    edges = _refine_edges(np.array([0.0, *[c for c in cuts if c < end], end]), max_width)
    edges = edges[np.concatenate([[True], np.diff(edges) > 0])]
    if grade_from is not None:
        tail = 1.0 - np.geomspace(1.0 - grade_from, floor, n_graded)
        edges = np.concatenate([edges, tail[1:]])
    return composite_legendre(edges, n)


def integrate_invariant(f, alpha_prime: float = 0.0, n_rad: int = 64, n_ang: int = 64,
                        radius: float = 1.0, breaks=()) -> complex:
    """Integral of f against d lambda = dA / (pi (1-|z|^2)^2).

    Realized on the dA_{alpha'} grid with f(z)(1-|z|^2)^{-2-alpha'}/(alpha'+1).
    """
    grid = disc_grid(alpha_prime, n_rad, n_ang, radius, breaks)

    def g(z):
        return f(z) * (1.0 - np.abs(z) ** 2) ** (-2.0 - alpha_prime) / (alpha_prime + 1.0)

    return integrate(grid, g)


def invariant_radial_integral(profile, s_max: float = 1.0, s_breaks=(), n: int = 32) -> float:
    """Integral of a radial function F(sqrt s) against d lambda, i.e. of F ds/(1-s)^2.

    Panels are graded geometrically toward s = 1 so integrands vanishing at the
    boundary are resolved.
    """
    cuts = sorted({float(b) for b in s_breaks if 0 < b < s_max})
    edges = [0.0, *cuts, s_max]
    if s_max >= 1.0:
        # geometric grading in 1 - s down to 1e-12
        tail = 1.0 - np.geomspace(1.0 - edges[-2], 1e-12, 40)
        edges = [*edges[:-1], *tail[1:]]
    x, w = composite_legendre(np.asarray(edges), n)
    vals = np.asarray(profile(np.sqrt(x)), dtype=float) / (1.0 - x) ** 2
    return math.fsum(w * vals)
