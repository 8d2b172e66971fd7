"""Windowed Berezin transform checks and the L^p convergence sweep."""

from __future__ import annotations

import math

import numpy as np

from ..berezin import BerezinRequest, berezin_lp_distances, berezin_mass, windowed_berezin_eval
from ..spaces import CoefficientVector, SpaceParams
from ..symbols import SymbolSpec
from .records import ALL, STRICT, UPPER, make_record

WINDOWS = {
    "1": np.array([1.0]),
    "e1": np.array([0.0, 1.0]),
    "mixed": np.array([1.0, 1.0j]) / math.sqrt(2.0),
}


def window_coords(window) -> np.ndarray:
    """A named window or explicit A^2 coordinates, normalized."""
    if isinstance(window, str):
        if window not in WINDOWS:
            raise ValueError(f"unknown window {window!r}")
        return WINDOWS[window].astype(complex)
    x = np.asarray(window, dtype=complex)
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise ValueError("window must be nonzero")
    return x / nrm


def window_alpha(coords, alpha: float) -> CoefficientVector:
    """The window carried to weight alpha by copying orthonormal coordinates."""
    return CoefficientVector.from_orthonormal(SpaceParams.bergman(alpha), coords)


def radial_test_symbols() -> dict:
    """Radial symbols used in the distance sweep and the invariants."""
    return {
        "cap": SymbolSpec.radial_profile(lambda r: np.clip(1.0 - r * r / 0.5, 0.0, None) ** 2, 1.0,
                                         support=math.sqrt(0.5), name="cap"),
        # 1 - |z|^2 damped to zero at |z| = 0.8 with a C^1 junction
        "damped_defect": SymbolSpec.radial_profile(
            lambda r: (1.0 - r * r) * np.clip(1.0 - r * r / 0.64, 0.0, None) ** 2, 1.0, support=0.8,
            name="damped_defect"),
    }


def _general_symbol():
    return SymbolSpec.general(lambda t, z: 0.5 * (1.0 + np.cos(t) * np.real(z)) * (np.abs(z) < 0.7), 1.0,
                              name="angle_weighted_disc")


def _points(rng, n: int, max_radius: float = 0.9):
    r = max_radius * np.sqrt(rng.uniform(size=n))
    a = rng.uniform(0, 2 * math.pi, size=n)
    t = rng.uniform(0, 2 * math.pi, size=n)
    return tuple((float(ti), complex(ri * math.cos(ai), ri * math.sin(ai))) for ti, ri, ai in zip(t, r, a))


def value_records(alphas=(0.0, 1.0, 5.0, 20.0)):
    out = []
    quad = SymbolSpec.radial_profile(lambda r: r * r, 1.0, name="abs_sq")
    vals = [windowed_berezin_eval(BerezinRequest(a, window_alpha(WINDOWS["1"], a), quad, ((0.0, 0j),)))[0]
            for a in alphas]
    out.append(make_record("berezin_classical_value", {"symbol": "abs_sq", "window": "1"}, "alpha",
                           list(alphas), vals, [1.0 / (a + 2.0) for a in alphas], 1e-8, ALL))
    ind = SymbolSpec.disc_indicator(0.5)
    a = 50.0
    v = windowed_berezin_eval(BerezinRequest(a, window_alpha(WINDOWS["1"], a), ind, ((0.0, 0j),)))[0]
    out.append(make_record("berezin_indicator_value", {"symbol": "disc_indicator", "rho": 0.5, "window": "1"},
                           "alpha", [a], [v], 1.0 - 0.75**51, 1e-8, ALL))
    return out


def invariant_records(alphas=(2.0, 10.0), windows=("1", "e1", "mixed"), n_points: int = 12, seed: int = 0):
    """Constants are fixed, sup is not increased, nonnegative symbols stay nonnegative."""
    rng = np.random.default_rng(seed)
    pts = _points(rng, n_points)
    symbols = {**radial_test_symbols(), "disc_indicator": SymbolSpec.disc_indicator(0.5), "general": _general_symbol()}
    const = SymbolSpec.constant(0.7)
    keys, sups, bounds, negs, cvals = [], [], [], [], []
    for a in alphas:
        for w in windows:
            win = window_alpha(window_coords(w), a)
            cvals.extend(windowed_berezin_eval(BerezinRequest(a, win, const, pts)))
            for name, f in symbols.items():
                b = windowed_berezin_eval(BerezinRequest(a, win, f, pts))
                keys.append(f"alpha={a:g}:{w}:{name}")
                sups.append(float(np.max(np.abs(b))))
                bounds.append(f.sup)
                negs.append(float(-np.min(b)))
    params = {"alphas": list(alphas), "windows": list(windows), "n_points": n_points, "seed": seed}
    return [
        make_record("berezin_constant", {**params, "value": 0.7}, "point", list(range(len(cvals))), cvals, 0.7,
                    1e-10, ALL),
        make_record("berezin_contraction", params, "case", keys, sups, bounds, 1e-8, UPPER),
        make_record("berezin_positivity", params, "case", keys, negs, 0.0, 1e-10, UPPER,
                    notes="computed is minus the smallest value"),
    ]


def mass_records(alphas=(10.0, 40.0), windows=("1", "e1"), rel_tol: float = 1e-6):
    keys, lhs, rhs = [], [], []
    for name, f in radial_test_symbols().items():
        for w in windows:
            for a in alphas:
                m, target = berezin_mass(BerezinRequest(a, window_alpha(window_coords(w), a), f))
                keys.append(f"{name}:{w}:alpha={a:g}")
                lhs.append(m)
                rhs.append(target)
    tol = rel_tol * max(rhs)
    return [make_record("berezin_mass", {"relative_tolerance": rel_tol}, "case", keys, lhs, rhs, tol, ALL)]


def distance_records(alphas=(10.0, 40.0, 160.0), windows=("1", "e1"), ps=(1, 2), symbols=None):
    """Strictly decreasing L^p(T x D) distance between B f and f as alpha grows."""
    out = []
    for name, f in (symbols or radial_test_symbols()).items():
        for w in windows:
            coords = window_coords(w)
            dists = {p: [] for p in ps}
            for a in alphas:
                d = berezin_lp_distances(BerezinRequest(a, window_alpha(coords, a), f), ps)
                for p in ps:
                    dists[p].append(d[p])
            for p in ps:
                vals = dists[p]
                out.append(make_record("berezin_distance", {"symbol": name, "window": str(w), "p": p}, "alpha",
                                       list(alphas), vals, 0.0, vals[0], STRICT,
                                       notes="trend-only contract: tolerance is the first distance"))
    return out


def berezin_suite(alphas=(10.0, 40.0, 160.0), windows=("1", "e1"), ps=(1, 2), seed: int = 0):
    alphas = [float(a) for a in alphas]
    if not alphas or any(b <= a for a, b in zip(alphas[:-1], alphas[1:])) or alphas[0] <= -1:
        raise ValueError("alpha_list must be nonempty increasing with alpha > -1")
    recs = value_records()
    recs += invariant_records(seed=seed)
    recs += mass_records(alphas[:2], windows)
    recs += distance_records(alphas, windows, ps)
    return recs
