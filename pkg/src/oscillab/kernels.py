"""Radial unit-mass kernel families concentrating at the origin."""

from __future__ import annotations

import dataclasses
import math

import numpy as np

# |S^{N-1}| and |B_1| for the supported dimensions
_SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi}
_BALL_VOLUME = {1: 2.0, 2: math.pi}

# profile values below this fraction of the peak are truncated
_PROFILE_CUTOFF = 1e-12


@dataclasses.dataclass(frozen=True)
class KernelFamily:
    """Parametric radial profile rho_eps(r), unit mass on R^N for every eps."""

    kind: str  # box | gaussian_radial | exponential_radial

    def __post_init__(self):
        if self.kind not in ("box", "gaussian_radial", "exponential_radial"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    def profile(self, r, eps: float, dim: int):
        """rho_eps evaluated at radius r (array or scalar)."""
        r = np.asarray(r, dtype=np.float64)
        if self.kind == "box":
            return np.where(r <= eps, 1.0 / (_BALL_VOLUME[dim] * eps ** dim), 0.0)
        if self.kind == "gaussian_radial":
            sigma = eps
            peak = (2.0 * math.pi * sigma * sigma) ** (-dim / 2.0)
            return peak * np.exp(-0.5 * (r / sigma) ** 2)
        # exponential_radial: c * exp(-r/eps), c fixed by unit mass:
        # area(S^{N-1}) * c * eps^N * Gamma(N) = 1
        c = 1.0 / (_SPHERE_AREA[dim] * eps ** dim * math.gamma(dim))
        return c * np.exp(-r / eps)

    def effective_radius(self, eps: float, dim: int) -> float:
        """Radius beyond which the profile is below the truncation cutoff."""
        if self.kind == "box":
            return eps
        if self.kind == "gaussian_radial":
            return eps * math.sqrt(-2.0 * math.log(_PROFILE_CUTOFF))
        return -eps * math.log(_PROFILE_CUTOFF)

    def mass_quadrature(self, eps: float, dim: int, n_points: int = 200_000) -> float:
        """Numerical radial mass: area(S^{N-1}) * int rho_eps(r) r^{N-1} dr."""
        r_max = self.effective_radius(eps, dim)
        r = np.linspace(0.0, r_max, n_points)
        integrand = self.profile(r, eps, dim) * r ** (dim - 1)
        return _SPHERE_AREA[dim] * float(np.trapezoid(integrand, r))

    def tail_mass(self, eps: float, dim: int, delta: float, n_points: int = 100_000) -> float:
        """Numerical value of int_delta^inf rho_eps(r) r^{N-1} dr."""
        r_max = max(self.effective_radius(eps, dim), delta * (1.0 + 1e-12))
        if r_max <= delta:
            return 0.0
        r = np.linspace(delta, r_max, n_points)
        integrand = self.profile(r, eps, dim) * r ** (dim - 1)
        return float(np.trapezoid(integrand, r))


def check_unit_mass(kernel: KernelFamily, eps: float, dim: int, tol: float = 1e-6) -> float:
    """Return the quadrature mass; raise if it deviates from 1 beyond tol."""
    mass = kernel.mass_quadrature(eps, dim)
    if abs(mass - 1.0) > tol:
        raise ValueError(
            f"kernel {kernel.kind} mass {mass!r} deviates from 1 beyond {tol} at eps={eps}"
        )
    return mass


def check_tail_vanishing(
    kernel: KernelFamily, dim: int, delta: float, eps_schedule
) -> list:
    """Tail masses along a decreasing eps schedule; must be nonincreasing."""
    tails = [kernel.tail_mass(eps, dim, delta) for eps in eps_schedule]
    for a, b in zip(tails, tails[1:]):
        if b > a + 1e-12:
            raise ValueError(
                f"kernel {kernel.kind} tail mass not decreasing at delta={delta}"
            )
    return tails
