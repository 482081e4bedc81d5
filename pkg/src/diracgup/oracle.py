"""Finite-difference eigenvalues of the trigonometric Poschl-Teller problem.

    -phi'' + V(x) phi = k^2 phi,   |x| < pi/2,
    V(x) = ((mu^2 + nu^2)/2 - 1/4) / cos^2 x + ((mu^2 - nu^2)/2) sin x / cos^2 x

The operator is discretised on the staggered nodes x_j = -pi/2 + (j + 1/2) h,
h = pi / N, with the homogeneous condition imposed at the walls, half a step
outside the outer nodes.  Eigenvalues come from Sturm-sequence bisection and
are Richardson-extrapolated over a doubling ladder.

Only the potential and tridiagonal linear algebra live here; no closed-form
solution is used to produce the numbers.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from .errors import BisectionError, DiracGUPError
from .params import DimensionlessConfig
from .spectrum import classify_solution, effective_exponents, k_squared, pt_parameters

__all__ = [
    "GridSpec",
    "EigenReport",
    "potential",
    "tridiagonal",
    "sturm_count",
    "fd_eigenvalues",
    "richardson",
    "verify_spectrum",
    "verify_exponents",
    "PASS",
    "FAIL",
    "FLAGGED",
    "WINDOW_FLOOR",
]

PASS, FAIL, FLAGGED = "PASS", "FAIL", "FLAGGED"
# Dirichlet walls select the regular endpoint behaviour only for exponents >= 1/2
WINDOW_FLOOR = 0.5
DEFAULT_LADDER = (512, 1024, 2048)


def potential(mu: float, nu: float, x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= math.pi / 2):
        raise DiracGUPError("the potential is defined for |x| < pi/2 only")
    c2 = np.cos(x) ** 2
    v = ((mu * mu + nu * nu) / 2 - 0.25) / c2 + ((mu * mu - nu * nu) / 2) * np.sin(x) / c2
    return v if v.ndim else float(v)


@dataclass(frozen=True)
class GridSpec:
    """N staggered interior nodes on (-pi/2, pi/2)."""

    points: int

    def __post_init__(self):
        if self.points < 64:
            raise DiracGUPError(f"grid needs at least 64 points, got {self.points}")

    @property
    def h(self) -> float:
        return math.pi / self.points

    @property
    def delta(self) -> float:
        return self.h / 2

    def nodes(self) -> np.ndarray:
        return -math.pi / 2 + (np.arange(self.points) + 0.5) * self.h


def tridiagonal(mu: float, nu: float, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the discretised operator."""
    h = grid.h
    diag = 2.0 / h**2 + potential(mu, nu, grid.nodes())
    # wall half a step outside: ghost value is minus the boundary node
    diag[0] += 1.0 / h**2
    diag[-1] += 1.0 / h**2
    off = np.full(grid.points - 1, -1.0 / h**2)
    return diag, off


@njit(cache=True, nogil=True)
def _sturm(d, e2, x):
    count = 0
    q = d[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, d.size):
        if q == 0.0:
            q = 1e-300
        q = d[i] - x - e2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def _bisect_all(d, e2, count, lo, hi, out, ok):
    for k in range(count):
        a, b = lo, hi
        for _ in range(400):
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            if _sturm(d, e2, mid) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
        ok[k] = (b - a) <= 4.0 * np.finfo(np.float64).eps * max(abs(a), abs(b), 1.0)


def sturm_count(mu: float, nu: float, grid: GridSpec, x: float) -> int:
    """Number of eigenvalues of the discretised operator below x."""
    d, off = tridiagonal(mu, nu, grid)
    return int(_sturm(d, off * off, float(x)))


def fd_eigenvalues(mu: float, nu: float, grid: GridSpec, count: int) -> np.ndarray:
    """Lowest ``count`` discrete eigenvalues, ascending."""
    if count < 1 or count > grid.points // 4:
        raise DiracGUPError(f"count must lie in [1, {grid.points // 4}] for {grid.points} points")
    d, off = tridiagonal(mu, nu, grid)
    e2 = off * off
    r = np.abs(off).max()
    lo, hi = float(d.min() - 2 * r), float(d.max() + 2 * r)
    n_lo, n_hi = _sturm(d, e2, lo), _sturm(d, e2, hi)
    if n_lo != 0 or n_hi != grid.points:
        raise BisectionError(f"Gershgorin bracket [{lo:.6g}, {hi:.6g}] holds counts {n_lo}..{n_hi}, expected 0..{grid.points}")
    out = np.empty(count)
    ok = np.zeros(count, dtype=np.bool_)
    _bisect_all(d, e2, count, lo, hi, out, ok)
    if not ok.all():
        bad = int(np.nonzero(~ok)[0][0])
        raise BisectionError(f"bisection for eigenvalue {bad} did not converge (bracket [{lo:.6g}, {hi:.6g}])")
    return out


def richardson(coarse: np.ndarray, mid: np.ndarray, fine: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Order-2 extrapolation of the finest pair and the observed order from all three."""
    extrap = fine + (fine - mid) / 3.0
    with np.errstate(divide="ignore", invalid="ignore"):
        order = np.log2(np.abs((coarse - mid) / (mid - fine)))
    return extrap, order


@dataclass
class EigenReport:
    mu: float
    nu: float
    label: str = ""
    m: int | None = None
    component: int | None = None
    rho: float | None = None
    rho_star: float | None = None
    analytic: list = field(default_factory=list)
    ladder: list = field(default_factory=list)
    numeric: list = field(default_factory=list)  # one list of k^2 per grid
    extrapolated: list = field(default_factory=list)
    order: list = field(default_factory=list)
    rel_errors: list = field(default_factory=list)
    raw_rel_errors: list = field(default_factory=list)
    max_rel_error: float = 0.0
    tolerance: float = 1e-4
    raw_tolerance: float = 1e-3
    status: str = PASS
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "EigenReport":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "EigenReport":
        return cls.from_dict(json.loads(text))


def verify_exponents(
    mu: float,
    nu: float,
    analytic: Sequence[float],
    ladder: Sequence[int] = DEFAULT_LADDER,
    tolerance: float = 1e-4,
    raw_tolerance: float = 1e-3,
) -> EigenReport:
    """Compare ``analytic`` k^2 values with the extrapolated discrete spectrum.

    (mu, nu) are the sign-resolved exponents; only their squares enter the
    potential, so outside mu, nu >= 1/2 the walls may select another solution
    and the case is reported as FLAGGED instead of judged.
    """
    if len(ladder) != 3 or any(b != 2 * a for a, b in zip(ladder, ladder[1:])):
        raise DiracGUPError(f"ladder must be three doubling counts, got {tuple(ladder)}")
    analytic = np.asarray(analytic, dtype=float)
    count = analytic.size
    ks = [fd_eigenvalues(mu, nu, GridSpec(n), count) for n in ladder]
    extrap, order = richardson(*ks)
    rel = np.abs(extrap / analytic - 1.0)
    raw = np.abs(ks[-1] / analytic - 1.0)
    rep = EigenReport(
        mu=float(mu),
        nu=float(nu),
        analytic=analytic.tolist(),
        ladder=list(ladder),
        numeric=[k.tolist() for k in ks],
        extrapolated=extrap.tolist(),
        order=[float(o) if math.isfinite(o) else None for o in order],
        rel_errors=rel.tolist(),
        raw_rel_errors=raw.tolist(),
        max_rel_error=float(rel.max()),
        tolerance=tolerance,
        raw_tolerance=raw_tolerance,
    )
    if mu < WINDOW_FLOOR or nu < WINDOW_FLOOR:
        rep.status = FLAGGED
        rep.note = f"exponent below {WINDOW_FLOOR}: analytically selected, not certified by the grid"
    elif rel.max() > tolerance or raw.max() > raw_tolerance:
        rep.status = FAIL
        rep.note = "extrapolated or raw error above tolerance"
    return rep


def verify_spectrum(
    m: int,
    component: int,
    d: DimensionlessConfig,
    n_max: int = 3,
    ladder: Sequence[int] = DEFAULT_LADDER,
    tolerance: float = 1e-4,
) -> EigenReport:
    """Certify k_n^2, n <= n_max, of the class selected for (m, component) in ``d``."""
    sol = classify_solution(m, component, d)
    pt = pt_parameters(m, component, d)
    mu_e, nu_e = effective_exponents(sol.label, pt)
    analytic = [k_squared(sol.label, n, pt) for n in range(n_max + 1)]
    rep = verify_exponents(mu_e, nu_e, analytic, ladder, tolerance)
    rep.label, rep.m, rep.component = sol.label, m, component
    rep.rho, rep.rho_star = d.rho, d.rho_star
    return rep
