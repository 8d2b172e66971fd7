"""Bergman-to-Fock limits as r grows, with weight beta r^2 + sigma.

Sub-sweeps:
  (a) integrals of f(r z) against dA_{beta r^2 + sigma} versus the Gaussian
      integral of f;
  (b) norms of dilated entire functions versus their Fock norms;
  (c) diagonal entries of Toeplitz operators with scaled disc indicators
      versus the Fock values P(n+1, beta R^2);
  (d) the closed-form norm of those operators versus 1 - exp(-beta R^2);
  (e) optionally, dense windowed localization matrices versus their Fock
      counterparts, for moderate beta r^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..operators import localization_matrix, radial_toeplitz_diagonal
from ..quadrature import disc_grid, integrate, plane_grid
from ..spaces import CoefficientVector, SpaceParams, basis_scale
from ..special import log_factorial, reg_inc_gamma_p
from ..symbols import PLANE, SymbolSpec
from .records import STRICT, TREND, make_record

GAUSS_RATE = 0.5  # c in exp(-c |z|^2)


@dataclass(frozen=True)
class IntegralTest:
    """A test function with a closed-form Gaussian integral."""

    name: str
    func: Callable
    fock_integral: Callable  # beta -> int f d mu_beta
    n_ang: int = 1


def _gaussian(z):
    return np.exp(-GAUSS_RATE * np.abs(z) ** 2)


INTEGRAL_TESTS = {
    "constant": IntegralTest("constant", lambda z: np.ones(np.shape(z)), lambda b: 1.0),
    "gaussian": IntegralTest("gaussian", _gaussian, lambda b: b / (b + GAUSS_RATE)),
    "poly_gaussian": IntegralTest("poly_gaussian", lambda z: np.abs(z) ** 2 * _gaussian(z),
                                  lambda b: b / (b + GAUSS_RATE) ** 2),
    "re_sq_gaussian": IntegralTest("re_sq_gaussian", lambda z: np.real(z) ** 2 * _gaussian(z),
                                   lambda b: 0.5 * b / (b + GAUSS_RATE) ** 2, n_ang=4),
    "quartic": IntegralTest("quartic", lambda z: np.abs(z) ** 4, lambda b: 2.0 / b**2),
}

# entire functions for the norm sweep, as Taylor coefficients
EXP_RATE = 0.5
EXP_DEGREE = 40
NORM_TESTS = {
    "polynomial": np.array([1.0, 2.0, 0.0, 0.5], dtype=complex),
    "exponential": np.exp(EXP_RATE * 0j + np.arange(EXP_DEGREE + 1) * math.log(EXP_RATE)
                          - np.array([log_factorial(n) for n in range(EXP_DEGREE + 1)])).astype(complex),
}


def fock_norm_target(name: str, beta: float) -> float:
    if name == "exponential":
        return math.exp(0.5 * EXP_RATE**2 / beta)
    a = NORM_TESTS[name]
    n = np.arange(a.size)
    return math.sqrt(math.fsum(np.abs(a) ** 2 * np.exp(np.array([log_factorial(k) for k in n]) - n * math.log(beta))))


def closed_form_norm(beta: float, sigma: float, R: float, r: float) -> float:
    """(b r^2 + 1)/(b r^2 + sigma + 1) [1 - (1 - R^2/r^2)^{b r^2 + sigma + 1}]."""
    a = beta * r * r
    x = min(1.0, (R / r) ** 2)
    tail = 0.0 if x >= 1.0 else math.exp((a + sigma + 1.0) * math.log1p(-x))
    return (a + 1.0) / (a + sigma + 1.0) * (1.0 - tail)


def _check_r_list(r_list):
    r = [float(v) for v in r_list]
    if not r or any(b <= a for a, b in zip(r[:-1], r[1:])) or r[0] <= 0:
        raise ValueError("r_list must be nonempty increasing")
    return r


def integral_sweep(beta, sigma, r_list, tests=("constant", "gaussian", "poly_gaussian"),
                   n_rad: int = 64, tol: float = 1e-2):
    """Sub-sweep (a)."""
    r_list = _check_r_list(r_list)
    out = []
    for name in tests:
        t = INTEGRAL_TESTS[name]
        target = t.fock_integral(beta)
        vals = []
        for r in r_list:
            grid = disc_grid(beta * r * r + sigma, n_rad, t.n_ang)
            vals.append(integrate(grid, lambda z, r=r: t.func(r * z)).real)
        params = {"beta": beta, "sigma": sigma, "test_function": name, "n_rad": n_rad}
        if name == "constant":
            out.append(make_record("limit_integral", params, "r", r_list, vals, target, 1e-12, "all",
                                   notes="exact at every r"))
        else:
            out.append(make_record("limit_integral", params, "r", r_list, vals, target, tol, STRICT))
    return out


def norm_sweep(beta, sigma, r_list, tests=("polynomial", "exponential"), tol: float = 1e-2):
    """Sub-sweep (b)."""
    r_list = _check_r_list(r_list)
    out = []
    for name in tests:
        a = NORM_TESTS[name]
        vals = []
        for r in r_list:
            sp = SpaceParams.bergman(beta * r * r + sigma)
            vals.append(CoefficientVector(sp, a).dilated(r).norm())
        params = {"beta": beta, "sigma": sigma, "test_function": name}
        out.append(make_record("limit_norm", params, "r", r_list, vals, fock_norm_target(name, beta),
                               tol, STRICT))
    return out


def diagonal_sweep(beta, sigma, R, r_list, n_max: int = 8, tol: float = 1e-2):
    """Sub-sweep (c): one record per n <= n_max."""
    r_list = _check_r_list(r_list)
    f = SymbolSpec.disc_indicator(R)
    diags = [radial_toeplitz_diagonal(SpaceParams.bergman(beta * r * r), f.scaled(r, sigma), n_max + 1)
             for r in r_list]
    out = []
    for n in range(n_max + 1):
        target = float(reg_inc_gamma_p(n + 1.0, beta * R * R))
        params = {"beta": beta, "sigma": sigma, "R": R, "n": n}
        out.append(make_record("limit_toeplitz_diagonal", params, "r", r_list,
                               [d[n] for d in diags], target, tol, STRICT))
    return out


def closed_norm_sweep(beta, sigma, R, r_list, tol: float = 2e-3):
    """Sub-sweep (d), also cross-checked against the sup of the fast-path diagonal."""
    r_list = _check_r_list(r_list)
    vals = [closed_form_norm(beta, sigma, R, r) for r in r_list]
    target = -math.expm1(-beta * R * R)
    params = {"beta": beta, "sigma": sigma, "R": R}
    rec = make_record("limit_toeplitz_norm", params, "r", r_list, vals, target, tol, TREND)
    # the closed form is the n = 0 entry, which is the largest one
    f = SymbolSpec.disc_indicator(R)
    sups = []
    for r in r_list:
        d = radial_toeplitz_diagonal(SpaceParams.bergman(beta * r * r), f.scaled(r, sigma), 64)
        sups.append(float(np.max(d)))
    check = make_record("limit_toeplitz_norm_consistency", params, "r", r_list, sups, vals, 1e-10, "all",
                        notes="closed form equals the largest fast-path diagonal entry")
    return [rec, check]


DENSE_PHI = np.array([1.0, 0.5], dtype=complex)
DENSE_PSI = np.array([1.0, 0.0, -0.3j], dtype=complex)


def _dense_symbol(theta, z):
    return np.exp(-np.abs(z - 0.5) ** 2) * (1.0 + 0.5 * np.cos(theta))


def _monomial_form(space, mat, r=1.0):
    """Turn <L e_n, e_m> into <L (r z)^n, (r z)^m>."""
    n = np.arange(mat.shape[0])
    scale = r**n / basis_scale(space, n)
    return mat * scale[:, None] * scale[None, :]


def dense_window_sweep(beta, sigma, r_list, n_entries: int = 4, n_rad: int = 48, n_ang: int = 48,
                       max_weight: float = 200.0, tol: float = 0.15):
    """Sub-sweep (e): relative max difference of <L g_r, h_r> over monomials g, h."""
    r_list = [r for r in _check_r_list(r_list) if beta * r * r <= max_weight]
    if not r_list:
        return []
    base = SymbolSpec.general(_dense_symbol, 1.5, name="shifted_gaussian_cos")
    plane_sym = SymbolSpec.general(_dense_symbol, 1.5, domain=PLANE, name="shifted_gaussian_cos")
    n_theta = 2 * max(DENSE_PHI.size, DENSE_PSI.size) + 3
    fsp = SpaceParams.fock(beta)
    ref = localization_matrix(fsp, plane_sym, CoefficientVector(fsp, DENSE_PHI), CoefficientVector(fsp, DENSE_PSI),
                              n_entries, plane_grid(beta, n_rad, n_ang), theta_nodes=n_theta)
    target_mat = _monomial_form(fsp, ref.entries)
    scale = float(np.max(np.abs(target_mat)))
    diffs = []
    for r in r_list:
        sp = SpaceParams.bergman(beta * r * r)
        phi_r = CoefficientVector(sp, DENSE_PHI).dilated(r)
        psi_r = CoefficientVector(sp, DENSE_PSI).dilated(r)
        mat = localization_matrix(sp, base.scaled(r, sigma), phi_r, psi_r, n_entries,
                                  disc_grid(sp.weight, n_rad, n_ang), theta_nodes=n_theta)
        diffs.append(float(np.max(np.abs(_monomial_form(sp, mat.entries, r) - target_mat))) / scale)
    params = {"beta": beta, "sigma": sigma, "n_entries": n_entries, "n_rad": n_rad, "n_ang": n_ang}
    return [make_record("limit_localization_dense", params, "r", r_list, diffs, 0.0, tol, TREND,
                        notes="computed is the max entry difference relative to the largest Fock entry")]


def limit_suite(beta: float = 1.0, sigma: float = 0.0, r_list=(2, 4, 8, 16, 32), R: float = 1.0,
                n_max: int = 8, tests=("constant", "gaussian", "poly_gaussian"),
                norm_tests=("polynomial", "exponential"), dense: bool = False, tol: float = 1e-2,
                norm_tol: float = 2e-3):
    """All limit sub-sweeps; returns a list of SweepRecord."""
    if not beta > 0 or sigma < 0 or not R > 0:
        raise ValueError("need beta > 0, sigma >= 0, R > 0")
    recs = []
    recs += integral_sweep(beta, sigma, r_list, tests, tol=tol)
    recs += norm_sweep(beta, sigma, r_list, norm_tests, tol=tol)
    recs += diagonal_sweep(beta, sigma, R, r_list, n_max, tol=tol)
    recs += closed_norm_sweep(beta, sigma, R, r_list, tol=norm_tol)
    if dense:
        recs += dense_window_sweep(beta, sigma, r_list)
    return recs
