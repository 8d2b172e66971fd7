"""The disc automorphism group realized as pairs (e^{i theta}, a) in T x D.

An element ``(theta, a)`` acts by ``z -> e^{i theta} (z - a) / (1 - conj(a) z)``.
The product is defined so that the map of ``g * h`` is the composition of the
map of ``g`` with the map of ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
# points this close to the circle make 1 - conj(a) b numerically singular
BOUNDARY_MARGIN = 1e-14


def _normalize_angle(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class GroupElement:
    """An automorphism of the unit disc, stored as (angle, point)."""

    angle: float = 0.0
    point: complex = 0j

    def __post_init__(self):
        p = complex(self.point)
        if not (abs(p) < 1.0 - BOUNDARY_MARGIN):
            raise ValueError(f"group element point must satisfy |a| < 1, got {p!r}")
        if not math.isfinite(self.angle):
            raise ValueError("group element angle must be finite")
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "angle", _normalize_angle(float(self.angle)))

    @property
    def rotation(self) -> complex:
        """The unit complex number e^{i angle}."""
        return complex(math.cos(self.angle), math.sin(self.angle))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def to_json(self) -> dict:
        return {"angle": self.angle, "point": [self.point.real, self.point.imag]}

    @classmethod
    def from_json(cls, data: dict) -> "GroupElement":
        re, im = data["point"]
        return cls(data["angle"], complex(re, im))


IDENTITY = GroupElement(0.0, 0j)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product whose map is ``phi_g o phi_h``."""
    a, b = g.point, h.point
    eta_rot = h.rotation
    # e^{i(theta+eta)} (1 + e^{-i eta} a conj(b)) / (1 + e^{i eta} conj(a) b)
    num = 1.0 + a * b.conjugate() / eta_rot
    den = 1.0 + a.conjugate() * b * eta_rot
    ratio = num / den
    angle = g.angle + h.angle + math.atan2(ratio.imag, ratio.real)
    x = a / eta_rot
    point = (x + b) / (1.0 + b.conjugate() * x)
    return GroupElement(angle, point)


def inverse(g: GroupElement) -> GroupElement:
    """The inverse element (e^{-i theta}, -e^{i theta} a)."""
    return GroupElement(-g.angle, -g.rotation * g.point)


def mobius_eval(g: GroupElement, zeta):
    """Evaluate e^{i theta} (zeta - a) / (1 - conj(a) zeta); vectorized in zeta."""
    z = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-15):
        raise ValueError("mobius_eval requires |zeta| <= 1")
    a = g.point
    out = g.rotation * (z - a) / (1.0 - np.conj(a) * z)
    return complex(out) if out.ndim == 0 else out


def phi(a: complex, zeta):
    """The involution phi_a(zeta) = (zeta - a) / (1 - conj(a) zeta); vectorized."""
    z = np.asarray(zeta, dtype=complex)
    return (z - a) / (1.0 - np.conj(a) * z)


def random_element(rng: np.random.Generator, max_radius: float = 0.95) -> GroupElement:
    """Draw an element with uniform angle and point uniform in a disc of given radius."""
    theta = rng.uniform(0.0, TWO_PI)
    r = max_radius * math.sqrt(rng.uniform())
    arg = rng.uniform(0.0, TWO_PI)
    return GroupElement(theta, r * complex(math.cos(arg), math.sin(arg)))


def compose_arrays(angle_g, point_g, angle_h, point_h):
    """Vectorized group product on arrays of (angle, point) pairs.

    Returns (angle, point) with angles left unnormalized.
    """
    a = np.asarray(point_g, dtype=complex)
    b = np.asarray(point_h, dtype=complex)
    eta_rot = np.exp(1j * np.asarray(angle_h, dtype=float))
    ratio = (1.0 + a * np.conj(b) / eta_rot) / (1.0 + np.conj(a) * b * eta_rot)
    angle = np.asarray(angle_g) + np.asarray(angle_h) + np.angle(ratio)
    x = a / eta_rot
    return angle, (x + b) / (1.0 + np.conj(b) * x)
