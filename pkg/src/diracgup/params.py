"""Physical inputs, the dimensionless (rho, rho_star) pair and regime labels.

All spectral formulas depend on two numbers only::

    rho      = hbar (omega_c - omega) / (M c^2),   omega_c = e B0 / (2 M c)
    rho_star = 2 / (beta M^2 c^2)

Internally we work in natural units hbar = c = M = 1, where
lambda = rho, beta = 2 / rho_star and 1/(beta lambda) = rho_star / (2 rho).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from numbers import Real

from .errors import CriticalPointError, DiracGUPError, NoMinimalLengthError, RegimeBoundaryError

__all__ = [
    "PhysicalConfig",
    "DimensionlessConfig",
    "Regime",
    "CharacteristicLengths",
    "dimensionless_from_physical",
    "classify_regime",
    "tau_of",
    "characteristic_lengths",
    "critical_field",
]


@dataclass(frozen=True)
class PhysicalConfig:
    """Dimensionful inputs.  Constants are explicit so any unit system works.

    Plain arithmetic is used throughout the conversion layer, so exact
    ``fractions.Fraction`` inputs stay exact where no square root is involved.
    """

    mass: Real
    omega: Real
    b0: Real
    beta: Real
    hbar: Real = 1
    c: Real = 1
    e: Real = 1

    def __post_init__(self):
        for name in ("mass", "hbar", "c", "e"):
            if not getattr(self, name) > 0:
                raise DiracGUPError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.omega < 0:
            raise DiracGUPError(f"omega must be non-negative, got {self.omega!r}")
        if self.beta < 0:
            raise DiracGUPError(f"beta must be non-negative, got {self.beta!r}")

    @property
    def omega_c(self):
        """Cyclotron-type frequency e B0 / (2 M c)."""
        return self.e * self.b0 / (2 * self.mass * self.c)

    @property
    def lam(self):
        """lambda = M hbar (omega_c - omega)."""
        return self.mass * self.hbar * (self.omega_c - self.omega)


class Regime(enum.Enum):
    EXTERNAL_POSITIVE = "external_positive"  # rho > rho_star
    INTERNAL_POSITIVE = "internal_positive"  # 0 < rho < rho_star
    INTERNAL_NEGATIVE = "internal_negative"  # -rho_star < rho < 0
    EXTERNAL_NEGATIVE = "external_negative"  # rho < -rho_star
    BOUNDARY_POSITIVE = "boundary_positive"  # rho == rho_star
    BOUNDARY_NEGATIVE = "boundary_negative"  # rho == -rho_star

    @property
    def display(self) -> str:
        """CamelCase name, e.g. InternalPositive."""
        return "".join(w.capitalize() for w in self.value.split("_"))

    @property
    def is_boundary(self) -> bool:
        return self in (Regime.BOUNDARY_POSITIVE, Regime.BOUNDARY_NEGATIVE)

    @property
    def is_external(self) -> bool:
        return self in (Regime.EXTERNAL_POSITIVE, Regime.EXTERNAL_NEGATIVE)


@dataclass(frozen=True)
class DimensionlessConfig:
    """The (rho, rho_star) pair.

    ``boundary_tol`` widens the |rho| == rho_star locus; the default 0 keeps
    comparisons strict.
    """

    rho: float
    rho_star: float
    boundary_tol: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rho_star) and self.rho_star > 0):
            raise DiracGUPError(f"rho_star must be positive and finite, got {self.rho_star!r}")
        if not math.isfinite(self.rho):
            raise DiracGUPError(f"rho must be finite, got {self.rho!r}")
        if self.boundary_tol < 0:
            raise DiracGUPError("boundary_tol must be non-negative")

    @property
    def beta(self) -> float:
        """beta in natural units (hbar = c = M = 1)."""
        return 2.0 / self.rho_star

    @property
    def lam(self) -> float:
        """lambda = rho M^2 c^2, i.e. rho in natural units."""
        return self.rho

    @property
    def inv_beta_lambda(self) -> float:
        _require_nonzero(self.rho)
        return self.rho_star / (2.0 * self.rho)

    @property
    def tau(self) -> float:
        return tau_of(self)

    @property
    def regime(self) -> Regime:
        return classify_regime(self)


def _require_nonzero(rho: float) -> None:
    if rho == 0:
        raise CriticalPointError(
            "rho = 0 is the critical point lambda = 0; the momentum-space operators "
            "reduce to multiplication and no closed-form solution table applies"
        )


def dimensionless_from_physical(cfg: PhysicalConfig, boundary_tol: float = 0.0) -> DimensionlessConfig:
    if cfg.beta == 0:
        raise NoMinimalLengthError(
            "beta = 0: no minimal length, rho_star is infinite; use the beta -> 0 limit formulas"
        )
    mc2 = cfg.mass * cfg.c**2
    rho = cfg.hbar * (cfg.omega_c - cfg.omega) / mc2
    rho_star = 2 / (cfg.beta * cfg.mass**2 * cfg.c**2)
    return DimensionlessConfig(float(rho), float(rho_star), boundary_tol)


def classify_regime(d: DimensionlessConfig) -> Regime:
    _require_nonzero(d.rho)
    gap = abs(d.rho) - d.rho_star
    if abs(gap) <= d.boundary_tol:
        return Regime.BOUNDARY_POSITIVE if d.rho > 0 else Regime.BOUNDARY_NEGATIVE
    if d.rho > 0:
        return Regime.EXTERNAL_POSITIVE if gap > 0 else Regime.INTERNAL_POSITIVE
    return Regime.EXTERNAL_NEGATIVE if gap > 0 else Regime.INTERNAL_NEGATIVE


def require_spectral_regime(d: DimensionlessConfig) -> Regime:
    """Regime of ``d``, raising on the loci where the solution tables do not apply."""
    regime = classify_regime(d)
    if regime.is_boundary:
        raise RegimeBoundaryError(
            f"|rho| = rho_star = {d.rho_star!r} separates two regimes; the spectrum is "
            "non-analytic there and no table row applies"
        )
    return regime


def tau_of(d: DimensionlessConfig) -> float:
    """tau = -1/2 - rho_star / (2 rho)."""
    _require_nonzero(d.rho)
    return -0.5 - d.rho_star / (2.0 * d.rho)


@dataclass(frozen=True)
class CharacteristicLengths:
    landau: float
    dirac: float
    minimal: float
    inv_beta_lambda: float
    infinite: bool

    @property
    def minimal_over_landau(self) -> float:
        return self.minimal / self.landau

    @property
    def minimal_over_dirac(self) -> float:
        return self.minimal / self.dirac


def characteristic_lengths(cfg: PhysicalConfig) -> CharacteristicLengths:
    """Landau and Dirac oscillator lengths, the minimal length and 1/(beta lambda).

    ``infinite`` is set when 1/(beta lambda) diverges, which happens for
    omega_c == omega (equal lengths) or beta == 0.  The small-ratio assumption
    Delta x0 << l_L, l_D is exposed through the ratio properties, not enforced.
    """
    wc = cfg.omega_c
    if wc <= 0:
        raise DiracGUPError("the Landau length needs omega_c > 0 (positive e*B0)")
    landau = math.sqrt(cfg.hbar / (cfg.mass * wc))
    dirac = math.sqrt(cfg.hbar / (cfg.mass * cfg.omega)) if cfg.omega > 0 else math.inf
    minimal = cfg.hbar * math.sqrt(cfg.beta)
    inv_l2 = 1.0 / landau**2 - (1.0 / dirac**2 if cfg.omega > 0 else 0.0)
    # exact test on the physical inputs; the float difference of lengths is not reliable
    degenerate = cfg.omega_c == cfg.omega or cfg.beta == 0
    if degenerate:
        return CharacteristicLengths(landau, dirac, minimal, math.inf, True)
    return CharacteristicLengths(landau, dirac, minimal, 1.0 / (minimal**2 * inv_l2), False)


def critical_field(cfg: PhysicalConfig):
    """B_cr = 2 M c omega / e, where rho changes sign."""
    return 2 * cfg.mass * cfg.c * cfg.omega / cfg.e
