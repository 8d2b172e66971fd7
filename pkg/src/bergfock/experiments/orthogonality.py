"""Orthogonality relations for the Moebius and Weyl unitary families.

Bergman:  (alpha+1) int dtheta/2pi int <g, U_z phi_theta><U_z psi_theta, h> dlambda = <g, h><psi, phi>
Fock:     (beta/pi) int <g, W_z phi><W_z psi, h> dA = <g, h><psi, phi>

Only the coordinates of U_z phi up to the degree of g (and of h) enter, so
the integrand is built from finite blocks of closed-form matrix elements.
The common factor (1-|z|^2)^{2+alpha} (or exp(-beta |z|^2)) of two matrix
elements turns the invariant (or area) measure into dA_alpha (or d mu_beta),
leaving a polynomial in z, conj(z) that the grids below integrate exactly:

  radial order  2d + 2   (degree <= 2d in |z|^2 per panel rule)
  angular order 4d + 3   (frequencies up to 2d)
  theta nodes   2d + 3   (frequencies up to 2d)

with d the largest degree among the four polynomials.
"""

from __future__ import annotations

import math

import numpy as np

from ..quadrature import angular_rule, disc_grid, plane_grid
from ..spaces import CoefficientVector, SpaceParams, inner_product
from ..unitaries import bergman_block, fock_block
from .records import ALL, make_record

TRIVIAL_TOL = 1e-9
RANDOM_TOL = 1e-7


def grid_orders(d: int) -> dict:
    return {"n_rad": 2 * d + 2, "n_ang": 4 * d + 3, "n_theta": 2 * d + 3}


def orthogonality_lhs(space: SpaceParams, g, h, phi, psi, orders: dict | None = None) -> complex:
    """Quadrature value of the left-hand side for four CoefficientVectors."""
    for v in (g, h, phi, psi):
        if v.space != space:
            raise ValueError("all four vectors must live in the given space")
    d = max(v.degree for v in (g, h, phi, psi))
    o = orders or grid_orders(d)
    if space.is_bergman:
        grid = disc_grid(space.weight, o["n_rad"], o["n_ang"])
        block = bergman_block(space.weight, grid.nodes, d + 1, d + 1, reduced=True)
    else:
        grid = plane_grid(space.weight, o["n_rad"], o["n_ang"])
        block = fock_block(space.weight, grid.nodes, d + 1, d + 1, reduced=True)
    gx, hx, ax, bx = (v.padded(d).orthonormal() for v in (g, h, phi, psi))
    thetas, tw = angular_rule(o["n_theta"])
    jj = np.arange(d + 1)
    total = 0j
    for t, wt in zip(thetas, tw):
        rot = np.exp(1j * jj * t)
        u_phi = block @ (ax * rot)  # (P, d+1): coordinates of U_z phi_theta
        u_psi = block @ (bx * rot)
        left = u_phi.conj() @ gx     # <g, U_z phi_theta>
        right = u_psi @ hx.conj()    # <U_z psi_theta, h>
        terms = grid.weights * left * right
        total += wt * complex(math.fsum(terms.real), math.fsum(terms.imag))
    return total


def orthogonality_rhs(g, h, phi, psi) -> complex:
    return inner_product(g, h) * inner_product(psi, phi)


def _random_vector(space, rng, degree):
    x = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return CoefficientVector.from_orthonormal(space, x / np.linalg.norm(x))


def _space_label(space: SpaceParams) -> dict:
    return {"space": space.kind, "weight": space.weight}


def _complex_record(tag, params, keys, lhs, rhs, tol, notes=""):
    """Record on |LHS - RHS| (computed = |LHS - RHS|, target 0)."""
    diffs = [abs(a - b) for a, b in zip(lhs, rhs)]
    extra = {"lhs": [[v.real, v.imag] for v in lhs], "rhs": [[v.real, v.imag] for v in rhs]}
    return make_record(tag, params, "case", keys, diffs, 0.0, tol, ALL, notes=notes, extra=extra)


def trivial_record(space: SpaceParams):
    one = CoefficientVector.monomial(space, 0)
    lhs = [orthogonality_lhs(space, one, one, one, one)]
    rhs = [orthogonality_rhs(one, one, one, one)]
    rec = _complex_record("orthogonality_trivial", _space_label(space), ["g=h=phi=psi=1"], lhs, rhs,
                          TRIVIAL_TOL, notes="both sides equal 1")
    return rec


def orthogonal_monomials_record(space: SpaceParams, rng, degree: int = 3):
    e1 = CoefficientVector.monomial(space, 1)
    e2 = CoefficientVector.monomial(space, 2)
    phi, psi = _random_vector(space, rng, degree), _random_vector(space, rng, degree)
    lhs = [orthogonality_lhs(space, e1, e2, phi, psi), orthogonality_lhs(space, e2, e1, phi, psi)]
    rhs = [orthogonality_rhs(e1, e2, phi, psi), orthogonality_rhs(e2, e1, phi, psi)]
    return _complex_record("orthogonality_orthogonal_monomials", _space_label(space), ["g=e1,h=e2", "g=e2,h=e1"],
                           lhs, rhs, TRIVIAL_TOL, notes="both sides vanish")


def random_record(space: SpaceParams, rng, n_random: int = 5, degree: int = 3):
    keys, lhs, rhs = [], [], []
    for i in range(n_random):
        g, h, phi, psi = (_random_vector(space, rng, degree) for _ in range(4))
        keys.append(f"random{i}")
        lhs.append(orthogonality_lhs(space, g, h, phi, psi))
        rhs.append(orthogonality_rhs(g, h, phi, psi))
    params = {**_space_label(space), "degree": degree, **grid_orders(degree)}
    return _complex_record("orthogonality_random", params, keys, lhs, rhs, RANDOM_TOL)


def orthogonality_suite(alphas=(0.0, 2.5, 10.0), betas=(0.5, 1.0, 3.0), n_random: int = 5, degree: int = 3,
                        seed: int = 0):
    """Trivial, orthogonal-monomial and random-quadruple records per space."""
    if not 0 <= degree <= 4:
        raise ValueError("degree must lie in 0..4")
    rng = np.random.default_rng(seed)
    spaces = [SpaceParams.bergman(a) for a in alphas] + [SpaceParams.fock(b) for b in betas]
    recs = []
    for sp in spaces:
        recs.append(trivial_record(sp))
        if degree >= 2:
            recs.append(orthogonal_monomials_record(sp, rng, degree))
        if n_random > 0:
            recs.append(random_record(sp, rng, n_random, degree))
    return recs
