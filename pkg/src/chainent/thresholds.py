"""Threshold temperatures and the free-fermion XY thermodynamic limit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy.integrate import quad
from scipy.special import expit

from . import thermo
from .hilbert import ChainSpec, Model
from .witness import CLASSES, BoundClass, EntanglementVerdict, bound_value, classify

T_TOL = 1e-10


class NoThresholdError(ValueError):
    """The ground energy does not beat the bound, so no threshold exists."""


@dataclass(frozen=True)
class ThresholdResult:
    bound_class: BoundClass
    temperature: float
    bracket: tuple[float, float]
    residual: float
    bound: float


def bisect_increasing(f: Callable[[float], float], target: float, lo: float,
                      hi: float, xtol: float) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` with f(lo) < target < f(hi) to width ``xtol``."""
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _expand_upper(f, target, hi=1.0, limit=1e8):
    while f(hi) <= target:
        hi *= 2
        if hi > limit:
            raise RuntimeError("failed to bracket the threshold")
    return hi


def threshold_temperature(spec: ChainSpec, bound_class,
                          decomposition: thermo.SpectralDecomposition | None = None,
                          xtol: float = T_TOL, table=None) -> ThresholdResult:
    """Temperature at which U(T) crosses the bound of ``bound_class``.

    Raises :class:`NoThresholdError` if the ground energy is not below the
    bound.
    """
    bound_class = BoundClass(bound_class)
    dec = decomposition or thermo.solve(spec, vectors=False)
    # scale-free spectrum in units of J; bound divided by J to match
    energies = dec.eigenvalues / spec.J
    target = bound_value(spec.model, bound_class, spec.n_sites, 1.0, table)
    if energies[0] >= target:
        raise NoThresholdError(
            f"{spec.model.value} N={spec.n_sites}: E0={energies[0]:.6g} "
            f"does not beat {bound_class.value} bound {target:.6g}")

    def u(t):
        return float(thermo.boltzmann_weights(energies, t) @ energies) if t > 0 \
            else energies[0]

    hi = _expand_upper(u, target)
    lo, hi = bisect_increasing(u, target, 0.0, hi, xtol)
    t = 0.5 * (lo + hi)
    return ThresholdResult(bound_class, t * spec.J, (lo * spec.J, hi * spec.J),
                           abs(u(t) - target) * spec.J, target * spec.J)


def all_thresholds(spec: ChainSpec, table=None) -> dict[BoundClass, ThresholdResult | None]:
    """Threshold for every class; ``None`` where no threshold exists."""
    dec = thermo.solve(spec, vectors=False)
    out = {}
    for c in CLASSES:
        try:
            out[c] = threshold_temperature(spec, c, dec, table=table)
        except NoThresholdError:
            out[c] = None
    return out


def xy_limit_internal_energy(T: float, J: float = 1.0) -> float:
    """Internal energy per site of the infinite isotropic XY ring.

    Free fermions with dispersion eps(k) = -4J cos k at half filling:
    u(T) = (1/2pi) int eps(k) f(eps(k)) dk. Pairing k with pi - k and
    substituting y = cos k gives

        u(T) = -4J/pi + (8J/pi) int_0^1 y expit(-4Jy/T) / sqrt(1 - y^2) dy,

    whose thermal part is concentrated in y < O(T/J) and is integrated
    separately from the square-root endpoint.
    """
    if T < 0:
        raise ValueError("temperature must be non-negative")
    ground = -4.0 * J / math.pi
    if T == 0:
        return ground
    tau = T / J
    split = min(0.5, 40.0 * tau)

    def near(y):
        return y * expit(-4.0 * y / tau) / math.sqrt(1.0 - y * y)

    def far(y):
        # remaining (1 - y)^(-1/2) handled by the algebraic weight
        return y * expit(-4.0 * y / tau) / math.sqrt(1.0 + y)

    a, _ = quad(near, 0.0, split, epsabs=1e-13, epsrel=1e-12, limit=200,
                points=[split * f for f in (0.01, 0.05, 0.2)])
    b, _ = quad(far, split, 1.0, weight="alg", wvar=(0.0, -0.5), epsabs=1e-13,
                epsrel=1e-12, limit=200)
    return ground + 8.0 * J / math.pi * (a + b)


def xy_limit_threshold_result(bound_class, xtol: float = 1e-8) -> ThresholdResult:
    """Root of u(T) = c_X for the infinite XY ring, with its bracket."""
    bound_class = BoundClass(bound_class)
    target = bound_value(Model.XY, bound_class, 1)
    if target <= -4 / math.pi:
        raise NoThresholdError(f"{bound_class.value} bound lies below the XY ground energy")
    hi = _expand_upper(xy_limit_internal_energy, target)
    lo, hi = bisect_increasing(xy_limit_internal_energy, target, 0.0, hi, xtol)
    t = 0.5 * (lo + hi)
    return ThresholdResult(bound_class, t, (lo, hi),
                           abs(xy_limit_internal_energy(t) - target), target)


def xy_limit_threshold(bound_class, xtol: float = 1e-8) -> float:
    """Temperature (J/k_B) where the infinite-ring XY energy per site reaches the bound."""
    return xy_limit_threshold_result(bound_class, xtol).temperature


@dataclass(frozen=True)
class SweepRow:
    temperature: float
    energy: float
    verdict: EntanglementVerdict

    @property
    def energy_per_site(self) -> float:
        return self.energy / self.verdict.n_sites


def temperature_sweep(spec: ChainSpec, temperatures: Sequence[float],
                      decomposition: thermo.SpectralDecomposition | None = None,
                      table=None) -> list[SweepRow]:
    temps = list(temperatures)
    if any(b < a for a, b in zip(temps, temps[1:])):
        raise ValueError("temperature grid must be sorted ascending")
    dec = decomposition or thermo.solve(spec, vectors=False)
    energies = thermo.energy_curve(dec.eigenvalues, temps)
    return [SweepRow(t, float(u), classify(float(u), spec, table))
            for t, u in zip(temps, energies)]
