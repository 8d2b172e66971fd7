"""Eigenvalue distribution of localization operators as alpha grows.

With a radial symbol and a single window the localization operator is
diagonal, so all spectral quantities come from its diagonal.  For psi = 1
this is the Toeplitz diagonal in closed form; other windows use
``radial_localization_diagonal``.  The sweeps compare, as alpha grows,

  tr(L h(L)) / (alpha+1)          with  int f h(f) d lambda,
  #{eigenvalues > delta}/(alpha+1) with  lambda({f > delta}),
  ||L||                             with  ||f||_inf,
  tr(L^2 - L_{f^2}) / (alpha+1)     with  0.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from ..operators import (
    TruncationError,
    disc_tail_truncation,
    localization_matrix,
    radial_localization_diagonal,
    radial_toeplitz_diagonal,
)
from ..quadrature import disc_grid, invariant_radial_integral
from ..spaces import CoefficientVector, SpaceParams
from ..symbols import DiscIndicator, SymbolSpec
from .records import ALL, TREND, make_record

TAIL_RULE_TOL = 1e-10
TAIL_ABORT = 1e-6

H_FAMILY = {
    "1": lambda x: np.ones_like(x),
    "x": lambda x: x,
    "x2": lambda x: x**2,
    "x3": lambda x: x**3,
}


def _is_unit_window(coords: np.ndarray) -> bool:
    return coords.size == 1 or not np.any(coords[1:])


def szego_diagonal(alpha: float, symbol: SymbolSpec, coords=(1.0,)) -> tuple[np.ndarray, int, float]:
    """Diagonal of L_f for the window with A^2 coordinates ``coords``.

    Returns (diagonal, N, tail fraction).  N comes from the tail rule at the
    symbol's support radius, padded by the window degree; the diagonal is
    extended past N to estimate the neglected tail, and the computation is
    aborted with TruncationError if that tail exceeds 1e-6 of the trace.
    """
    coords = np.asarray(coords, dtype=complex)
    rho = min(symbol.support, 1.0 - 1e-12)
    d = coords.size - 1
    N = disc_tail_truncation(rho, alpha, TAIL_RULE_TOL) + 4 * d + (10 if d else 0)
    n_ext = N + max(20, N // 4)
    sp = SpaceParams.bergman(alpha)
    if _is_unit_window(coords):
        diag = abs(coords[0]) ** 2 * radial_toeplitz_diagonal(sp, symbol, n_ext)
    else:
        window = CoefficientVector.from_orthonormal(sp, coords)
        diag = radial_localization_diagonal(sp, symbol, window, n_ext)
    total = math.fsum(diag)
    tail = math.fsum(diag[N:]) / total if total else 0.0
    if tail > TAIL_ABORT:
        raise TruncationError(f"diagonal tail fraction {tail:.3e} exceeds {TAIL_ABORT:g} at alpha={alpha}")
    return np.asarray(diag[:N], dtype=float), N, tail


def trace_target(symbol: SymbolSpec, h, norm_sq: float = 1.0) -> float:
    """norm_sq * int f h(f) d lambda for a radial symbol."""
    s_max = min(1.0, symbol.support**2)
    breaks = [b * b for b in symbol.breaks]
    return norm_sq * invariant_radial_integral(lambda r: (lambda F: F * h(F))(symbol.profile(r)),
                                               s_max, breaks)


def level_set_measure(symbol: SymbolSpec, delta: float, n_scan: int = 4001) -> float:
    """lambda({|z| : F(|z|) > delta}) from bracketed crossings of F - delta."""
    if isinstance(symbol.form, DiscIndicator) and symbol.scaling is None:
        rho = symbol.form.radius
        return rho * rho / (1.0 - rho * rho) if symbol.form.height > delta else 0.0
    s_max = min(1.0 - 1e-12, symbol.support**2)
    s = np.linspace(0.0, s_max, n_scan)

    def g(x):
        return float(symbol.profile(math.sqrt(x))) - delta

    above = symbol.profile(np.sqrt(s)) > delta
    total, start = 0.0, (0.0 if above[0] else None)
    for i in range(1, s.size):
        if above[i] != above[i - 1]:
            try:
                x = brentq(g, s[i - 1], s[i], xtol=1e-15)
            except ValueError:
                x = s[i]  # jump discontinuity inside the bracket
            if above[i]:
                start = x
            else:
                total += x / (1 - x) - start / (1 - start)
                start = None
    if start is not None:
        total += s_max / (1 - s_max) - start / (1 - start)
    return total


def dense_spot_check(alpha: float, symbol: SymbolSpec, coords, N: int = 60, n_rad: int = 48,
                     n_ang: int | None = None):
    """Dense localization matrix versus the diagonal fast path at moderate alpha.

    Returns (dense traces, fast-path traces) for the h family, normalized
    by alpha+1, together with the largest off-diagonal magnitude.
    """
    sp = SpaceParams.bergman(alpha)
    window = CoefficientVector.from_orthonormal(sp, coords)
    # e^{i(n-m) theta} for |n - m| < N + d is integrated exactly
    n_ang = n_ang or 2 * (N + coords.size) + 1
    grid = disc_grid(alpha, n_rad, n_ang, breaks=symbol.breaks)
    mat = localization_matrix(sp, symbol, window, window, N, grid)
    eig = np.linalg.eigvalsh(mat.entries)
    fast = radial_localization_diagonal(sp, symbol, window, N)
    off = float(np.max(np.abs(mat.entries - np.diag(np.diag(mat.entries)))))
    dense_tr = {k: math.fsum(eig * h(eig)) / (alpha + 1.0) for k, h in H_FAMILY.items()}
    fast_tr = {k: math.fsum(fast * h(fast)) / (alpha + 1.0) for k, h in H_FAMILY.items()}
    return dense_tr, fast_tr, off


def szego_suite(alpha_list=(100.0, 500.0, 1000.0), rho: float = 0.5, symbol: SymbolSpec | None = None,
                window=(1.0,), h_family=("1", "x", "x2", "x3"), deltas=(0.3, 0.5, 0.7),
                trace_rel_tol: float = 0.1, count_rel_tol: float = 0.1, norm_tol: float = 0.01,
                defect_tol: float = 0.02, dense_alpha: float | None = None, dense_N: int = 60):
    """Trace, counting, norm and defect sweeps over increasing alpha."""
    alpha_list = [float(a) for a in alpha_list]
    if not alpha_list or any(b <= a for a, b in zip(alpha_list[:-1], alpha_list[1:])) or alpha_list[0] <= -1:
        raise ValueError("alpha_list must be nonempty increasing with alpha > -1")
    f = symbol or SymbolSpec.disc_indicator(rho)
    coords = np.asarray(window, dtype=complex)
    norm_sq = float(np.sum(np.abs(coords) ** 2))
    if abs(norm_sq - 1.0) > 1e-10:
        raise ValueError("window must have unit norm")
    f2 = f.power(2)
    base = {"symbol": f.describe(), "window": [[c.real, c.imag] for c in coords]}
    diags, tails, diags_f2 = [], [], []
    for a in alpha_list:
        d, N, tail = szego_diagonal(a, f, coords)
        d2, _, _ = szego_diagonal(a, f2, coords)
        diags.append(d)
        tails.append(tail)
        diags_f2.append(d2)
    extra = {"tail_fraction": tails, "truncation": [int(d.size) for d in diags]}
    recs = []
    for name in h_family:
        h = H_FAMILY[name]
        target = trace_target(f, h)
        vals = [math.fsum(d * h(d)) / (a + 1.0) for a, d in zip(alpha_list, diags)]
        params = {**base, "h": name}
        if name == "1":
            recs.append(make_record("szego_trace", params, "alpha", alpha_list, vals, target,
                                    1e-8 * max(abs(target), 1.0), ALL, notes="exact identity up to truncation",
                                    extra=extra))
        else:
            recs.append(make_record("szego_trace", {**params, "relative_tolerance": trace_rel_tol}, "alpha",
                                    alpha_list, vals, target, trace_rel_tol * abs(target), TREND, extra=extra))
    floors = [1.0 / (a + 1.0) for a in alpha_list]
    for delta in deltas:
        target = level_set_measure(f, delta)
        vals = [np.count_nonzero(d > delta) / (a + 1.0) for a, d in zip(alpha_list, diags)]
        recs.append(make_record("szego_count", {**base, "delta": delta, "relative_tolerance": count_rel_tol},
                                "alpha", alpha_list, vals, target, count_rel_tol * abs(target), TREND,
                                notes="noise floor 1/(alpha+1) from integer counts", floor=floors))
    recs.append(make_record("szego_norm", base, "alpha", alpha_list, [float(np.max(d)) for d in diags],
                            f.sup, norm_tol, TREND, floor=1e-10, notes="noise floor 1e-10"))
    defects = [(math.fsum(d * d) - math.fsum(d2)) / (a + 1.0)
               for a, d, d2 in zip(alpha_list, diags, diags_f2)]
    recs.append(make_record("szego_defect", base, "alpha", alpha_list, defects, 0.0, defect_tol, TREND,
                            notes="absolute tolerance on the normalized defect"))
    if dense_alpha is not None:
        dense, fast, off = dense_spot_check(dense_alpha, f, coords, dense_N)
        keys = list(H_FAMILY)
        recs.append(make_record("szego_dense_spot_check", {**base, "alpha": dense_alpha, "N": dense_N},
                                "h", keys, [dense[k] for k in keys], [fast[k] for k in keys], 1e-6, ALL,
                                notes="dense eigenvalues versus the diagonal fast path",
                                extra={"max_offdiagonal": off}))
    return recs
