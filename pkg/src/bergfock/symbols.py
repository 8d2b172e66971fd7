"""Bounded symbols on T x D or T x C.

A symbol is evaluated as ``f(theta, z)`` with broadcasting.  Radial symbols
additionally expose their profile ``F(rho)`` and the radii where the profile
may jump, so quadrature can split panels there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

DISC = "disc"
PLANE = "plane"


@dataclass(frozen=True)
class Constant:
    value: complex

    kind = "constant"
    radial = True

    def profile(self, rho):
        return np.full(np.shape(rho), self.value)

    def __call__(self, theta, z):
        return np.full(np.broadcast_shapes(np.shape(theta), np.shape(z)), self.value)

    @property
    def sup(self) -> float:
        return abs(self.value)

    @property
    def breaks(self) -> tuple:
        return ()

    @property
    def support(self) -> float:
        return math.inf if self.value != 0 else 0.0

    def describe(self) -> dict:
        return {"form": self.kind, "value": [complex(self.value).real, complex(self.value).imag]}


@dataclass(frozen=True)
class DiscIndicator:
    """Indicator of the centered disc of radius R, optionally scaled by ``height``."""

    radius: float
    height: float = 1.0

    kind = "disc_indicator"
    radial = True

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disc indicator radius must be positive")

    def profile(self, rho):
        return np.where(np.asarray(rho) < self.radius, self.height, 0.0)

    def __call__(self, theta, z):
        out = self.profile(np.abs(z))
        return np.broadcast_to(out, np.broadcast_shapes(np.shape(theta), np.shape(z)))

    @property
    def sup(self) -> float:
        return abs(self.height)

    @property
    def breaks(self) -> tuple:
        return (self.radius,)

    @property
    def support(self) -> float:
        return self.radius

    def describe(self) -> dict:
        return {"form": self.kind, "radius": self.radius, "height": self.height}


@dataclass(frozen=True)
class RadialProfile:
    """A radial symbol z -> F(|z|) with a declared sup bound.

    ``support`` is a radius outside which F vanishes (``inf`` if none) and
    ``breaks`` lists radii where F may fail to be smooth.
    """

    func: Callable = field(compare=False)
    bound: float
    support: float = math.inf
    breaks: tuple = ()
    name: str = "profile"

    kind = "radial_profile"
    radial = True

    def profile(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.asarray(self.func(rho), dtype=float)
        return np.where(rho < self.support, out, 0.0)

    def __call__(self, theta, z):
        out = self.profile(np.abs(z))
        return np.broadcast_to(out, np.broadcast_shapes(np.shape(theta), np.shape(z)))

    @property
    def sup(self) -> float:
        return self.bound

    def describe(self) -> dict:
        return {"form": self.kind, "name": self.name, "bound": self.bound,
                "support": self.support, "breaks": list(self.breaks)}


@dataclass(frozen=True)
class General:
    """An arbitrary bounded symbol f(theta, z)."""

    func: Callable = field(compare=False)
    bound: float
    theta_dependent: bool = True
    real: bool = True
    name: str = "general"

    kind = "general"
    radial = False

    def __call__(self, theta, z):
        return np.asarray(self.func(theta, z))

    @property
    def sup(self) -> float:
        return self.bound

    @property
    def breaks(self) -> tuple:
        return ()

    @property
    def support(self) -> float:
        return math.inf

    def describe(self) -> dict:
        return {"form": self.kind, "name": self.name, "bound": self.bound,
                "theta_dependent": self.theta_dependent}


@dataclass(frozen=True)
class SymbolSpec:
    """A symbol with its domain and an optional (r, sigma) scaling.

    With scaling the evaluated symbol is (1 - |z|^2)^sigma f(theta, r z).
    """

    form: object
    domain: str = DISC
    scaling: tuple | None = None

    def __post_init__(self):
        if self.domain not in (DISC, PLANE):
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.scaling is not None:
            r, sigma = self.scaling
            if not (r > 0 and sigma >= 0):
                raise ValueError("scaling requires r > 0 and sigma >= 0")
            if self.domain != DISC:
                raise ValueError("scaling applies to disc symbols only")
            object.__setattr__(self, "scaling", (float(r), float(sigma)))
        if not np.isfinite(self.form.sup):
            raise ValueError("every symbol must carry a finite sup bound")

    @classmethod
    def constant(cls, c, domain=DISC):
        return cls(Constant(c), domain)

    @classmethod
    def disc_indicator(cls, radius, domain=DISC, height=1.0):
        return cls(DiscIndicator(radius, height), domain)

    @classmethod
    def radial_profile(cls, func, bound, domain=DISC, **kw):
        return cls(RadialProfile(func, bound, **kw), domain)

    @classmethod
    def general(cls, func, bound, domain=DISC, **kw):
        return cls(General(func, bound, **kw), domain)

    def scaled(self, r: float, sigma: float = 0.0) -> "SymbolSpec":
        return replace(self, scaling=(r, sigma))

    @property
    def radial(self) -> bool:
        return self.form.radial

    @property
    def theta_dependent(self) -> bool:
        return getattr(self.form, "theta_dependent", False)

    @property
    def is_real(self) -> bool:
        if isinstance(self.form, Constant):
            return complex(self.form.value).imag == 0
        return getattr(self.form, "real", True)

    @property
    def is_zero(self) -> bool:
        return isinstance(self.form, Constant) and self.form.value == 0

    @property
    def sup(self) -> float:
        """Sup-norm bound of the evaluated (possibly scaled) symbol."""
        return self.form.sup

    @property
    def breaks(self) -> tuple:
        """Radii where the evaluated symbol may jump."""
        r = self.scaling[0] if self.scaling else 1.0
        return tuple(b / r for b in self.form.breaks)

    @property
    def support(self) -> float:
        r = self.scaling[0] if self.scaling else 1.0
        return self.form.support / r

    def __call__(self, theta, z):
        z = np.asarray(z)
        if self.scaling is None:
            return self.form(theta, z)
        r, sigma = self.scaling
        vals = self.form(theta, r * z)
        if sigma:
            vals = vals * (1.0 - np.abs(z) ** 2) ** sigma
        return vals

    def profile(self, rho):
        """Radial profile of the evaluated symbol."""
        if not self.radial:
            raise ValueError("symbol is not radial")
        rho = np.asarray(rho, dtype=float)
        if self.scaling is None:
            return self.form.profile(rho)
        r, sigma = self.scaling
        vals = self.form.profile(r * rho)
        if sigma:
            vals = vals * (1.0 - rho**2) ** sigma
        return vals

    def power(self, k: int) -> "SymbolSpec":
        """The pointwise power f**k (radial symbols only)."""
        if not self.radial:
            raise ValueError("power is implemented for radial symbols")
        form = self.form
        if isinstance(form, DiscIndicator):
            new = DiscIndicator(form.radius, form.height**k)
        elif isinstance(form, Constant):
            new = Constant(form.value**k)
        else:
            new = RadialProfile(lambda rho, f=form.func: f(rho) ** k, form.bound**k,
                                form.support, form.breaks, f"{form.name}^{k}")
        scaling = None
        if self.scaling:
            scaling = (self.scaling[0], self.scaling[1] * k)
        return SymbolSpec(new, self.domain, scaling)

    def describe(self) -> dict:
        out = {"domain": self.domain, **self.form.describe()}
        if self.scaling:
            out["scaling"] = {"r": self.scaling[0], "sigma": self.scaling[1]}
        return out
