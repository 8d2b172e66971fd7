"""Sharp norm bounds for Toeplitz operators and the concentration inequality.

For radial symbols the Toeplitz operator is diagonal in the monomial basis,
so its norm is the largest diagonal entry.  The bounds compared against are

  Bergman:  ||T_f|| <= ||f||_inf [1 - (||f||_inf / (||f||_inf + ||f||_{L1(dlambda)}))^{alpha+1}]
  Fock:     ||T_f|| <= ||f||_inf [1 - exp(-(beta/pi) ||f||_1 / ||f||_inf)]

with equality for centered disc indicators, and

  int_Omega |g|^2 dA_alpha <= [1 - (1 + lambda(Omega))^{-(alpha+1)}] ||g||^2.
"""

from __future__ import annotations

import math

import numpy as np

from ..operators import disc_tail_truncation, radial_toeplitz_diagonal
from ..quadrature import composite_legendre, invariant_radial_integral
from ..spaces import SpaceParams
from ..special import reg_inc_beta
from ..symbols import DISC, PLANE, SymbolSpec
from .records import ALL, UPPER, make_record

EQUALITY_TOL = 1e-8
INEQUALITY_SLACK = 1e-10


def _cap(a):
    return lambda rho: np.clip(1.0 - (rho / a) ** 2, 0.0, None) ** 2


def _bump(a):
    return lambda rho: 0.5 * (1.0 + np.cos(np.pi * np.minimum(rho / a, 1.0)))


def _annulus(a, b):
    return lambda rho: np.where((rho >= a) & (rho < b), 1.0, 0.0)


def _two_step(a, b):
    return lambda rho: np.where(rho < a, 1.0, np.where(rho < b, 0.5, 0.0))


def _ramp(a):
    return lambda rho: np.where(rho < a, (rho / a) ** 2, 0.0)


def _ring(c, w):
    return lambda rho: np.exp(-(((rho - c) / w) ** 2))


def profile_family(scale: float = 1.0, domain: str = DISC) -> dict:
    """Non-extremal bounded radial profiles, radii multiplied by ``scale``."""
    s = scale
    specs = {
        "cap": (_cap(0.7 * s), 1.0, 0.7 * s, ()),
        "cosine_bump": (_bump(0.8 * s), 1.0, 0.8 * s, ()),
        "annulus": (_annulus(0.2 * s, 0.6 * s), 1.0, 0.6 * s, (0.2 * s, 0.6 * s)),
        "two_step": (_two_step(0.3 * s, 0.6 * s), 1.0, 0.6 * s, (0.3 * s, 0.6 * s)),
        "ramp": (_ramp(0.7 * s), 1.0, 0.7 * s, (0.7 * s,)),
        "ring": (_ring(0.4 * s, 0.1 * s), 1.0, 0.8 * s, (0.8 * s,)),
    }
    return {name: SymbolSpec.radial_profile(f, bound, domain=domain, support=sup, breaks=br, name=name)
            for name, (f, bound, sup, br) in specs.items()}


# ---------------------------------------------------------------------------
# Bergman


def bergman_bound(sup: float, l1_lambda: float, alpha: float) -> float:
    if sup == 0:
        return 0.0
    return sup * -math.expm1((alpha + 1.0) * math.log(sup / (sup + l1_lambda)))


def bergman_l1_lambda(symbol: SymbolSpec) -> float:
    s_max = min(1.0, symbol.support**2)
    return invariant_radial_integral(lambda rho: np.abs(symbol.profile(rho)), s_max,
                                     [b * b for b in symbol.breaks])


def bergman_toeplitz_norm(symbol: SymbolSpec, alpha: float, tol: float = 1e-14) -> float:
    rho = min(symbol.support, 1.0 - 1e-12)
    N = disc_tail_truncation(rho, alpha, tol) + 2
    return float(np.max(np.abs(radial_toeplitz_diagonal(SpaceParams.bergman(alpha), symbol, N))))


def bergman_sharp_records(alpha_list, radii=(0.3, 0.5, 0.7, 0.9), profiles=None):
    out = []
    for rho in radii:
        f = SymbolSpec.disc_indicator(rho)
        lam = rho * rho / (1.0 - rho * rho)
        norms = [bergman_toeplitz_norm(f, a) for a in alpha_list]
        bounds = [bergman_bound(1.0, lam, a) for a in alpha_list]
        out.append(make_record("bergman_sharp_bound_equality", {"symbol": "disc_indicator", "rho": rho},
                               "alpha", list(alpha_list), norms, bounds, EQUALITY_TOL, ALL))
    for name, f in (profiles or profile_family()).items():
        lam = bergman_l1_lambda(f)
        norms = [bergman_toeplitz_norm(f, a) for a in alpha_list]
        bounds = [bergman_bound(f.sup, lam, a) for a in alpha_list]
        out.append(make_record("bergman_sharp_bound", {"symbol": name, "l1_lambda": lam}, "alpha",
                               list(alpha_list), norms, bounds, INEQUALITY_SLACK, UPPER))
    return out


# ---------------------------------------------------------------------------
# Fock


def fock_bound(sup: float, l1: float, beta: float) -> float:
    if sup == 0:
        return 0.0
    return sup * -math.expm1(-(beta / math.pi) * l1 / sup)


def fock_l1(symbol: SymbolSpec) -> float:
    """Area integral of |F|: pi times the integral of |F(sqrt u)| du."""
    if not math.isfinite(symbol.support):
        raise ValueError("plane profiles need a finite support radius")
    u_max = symbol.support**2
    edges = sorted({0.0, u_max, *[b * b for b in symbol.breaks if b < symbol.support]})
    fine = np.concatenate([np.linspace(lo, hi, 9)[:-1] for lo, hi in zip(edges[:-1], edges[1:])] + [[u_max]])
    u, w = composite_legendre(fine, 20)
    return math.pi * math.fsum(w * np.abs(symbol.profile(np.sqrt(u))))


def fock_toeplitz_norm(symbol: SymbolSpec, beta: float) -> float:
    t = beta * symbol.support**2
    N = int(math.ceil(t + 12.0 * math.sqrt(t + 1.0) + 40.0))
    return float(np.max(np.abs(radial_toeplitz_diagonal(SpaceParams.fock(beta), symbol, N))))


def fock_sharp_records(beta, radii=(0.5, 1.0, 2.0), profiles=None):
    out = []
    norms, bounds = [], []
    for R in radii:
        f = SymbolSpec.disc_indicator(R, domain=PLANE)
        norms.append(fock_toeplitz_norm(f, beta))
        bounds.append(fock_bound(1.0, math.pi * R * R, beta))
    out.append(make_record("fock_sharp_bound_equality", {"beta": beta, "symbol": "disc_indicator"},
                           "R", list(radii), norms, bounds, EQUALITY_TOL, ALL))
    names, norms, bounds = [], [], []
    for name, f in (profiles or profile_family(2.0, PLANE)).items():
        names.append(name)
        norms.append(fock_toeplitz_norm(f, beta))
        bounds.append(fock_bound(f.sup, fock_l1(f), beta))
    out.append(make_record("fock_sharp_bound", {"beta": beta}, "symbol", names, norms, bounds,
                           INEQUALITY_SLACK, UPPER))
    return out


# ---------------------------------------------------------------------------
# concentration inequality


def lambda_measure(rho_in: float, rho_out: float) -> float:
    """Invariant measure of the annulus rho_in <= |z| < rho_out (a disc if rho_in = 0)."""
    def m(r):
        return r * r / (1.0 - r * r)
    return m(rho_out) - m(rho_in)


def concentration(coords: np.ndarray, alpha: float, rho_in: float, rho_out: float) -> float:
    """int_Omega |g|^2 dA_alpha for g with orthonormal coordinates ``coords``.

    Monomials stay orthogonal on centered annuli, so the integral is
    sum_n |g_n|^2 (I_{rho_out^2}(n+1, alpha+1) - I_{rho_in^2}(n+1, alpha+1)).
    """
    n = np.arange(coords.size, dtype=float)
    hi = reg_inc_beta(rho_out**2, n + 1.0, alpha + 1.0)
    lo = reg_inc_beta(rho_in**2, n + 1.0, alpha + 1.0) if rho_in > 0 else 0.0
    return math.fsum(np.abs(coords) ** 2 * (hi - lo))


def concentration_bound(alpha: float, lam: float, norm_sq: float) -> float:
    return -math.expm1(-(alpha + 1.0) * math.log1p(lam)) * norm_sq


def concentration_records(alpha_list, radii=(0.3, 0.5, 0.7, 0.9), n_random: int = 10, degree: int = 6,
                          seed: int = 0):
    out = []
    for a in alpha_list:
        lhs = [concentration(np.array([1.0]), a, 0.0, r) for r in radii]
        rhs = [concentration_bound(a, lambda_measure(0.0, r), 1.0) for r in radii]
        out.append(make_record("concentration_equality", {"alpha": a, "g": "normalized_kernel_at_0"},
                               "rho", list(radii), lhs, rhs, EQUALITY_TOL, ALL))
    rng = np.random.default_rng(seed)
    domains = [(0.0, r) for r in radii] + [(0.2, 0.6), (0.5, 0.8)]
    for a in alpha_list:
        labels, lhs, rhs = [], [], []
        for i in range(n_random):
            c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
            nsq = math.fsum(np.abs(c) ** 2)
            for lo, hi in domains:
                labels.append(f"g{i}:{lo:g}-{hi:g}")
                lhs.append(concentration(c, a, lo, hi))
                rhs.append(concentration_bound(a, lambda_measure(lo, hi), nsq))
        out.append(make_record("concentration_inequality", {"alpha": a, "seed": seed, "degree": degree},
                               "case", labels, lhs, rhs, INEQUALITY_SLACK, UPPER))
    return out


def sharp_bound_suite(alpha_list=(0.0, 1.0, 2.0, 5.0, 20.0), beta: float = 1.0,
                      radii=(0.3, 0.5, 0.7, 0.9), plane_radii=(0.5, 1.0, 2.0), n_random: int = 10,
                      seed: int = 0):
    """Bergman and Fock sharp bounds plus the concentration inequality."""
    if any(a <= -1 for a in alpha_list) or not beta > 0:
        raise ValueError("need alpha > -1 and beta > 0")
    recs = bergman_sharp_records(alpha_list, radii)
    recs += fock_sharp_records(beta, plane_radii)
    recs += concentration_records(alpha_list, radii, n_random, seed=seed)
    return recs
