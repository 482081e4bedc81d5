"""Critical points, critical fields and level-curve datasets across rho.

The minimal length partitions each of (0, rho*] and [-rho*, 0) by the points
rho_N = +-rho*/N.  Odd N mark the onset of a dashed family (ii or iii), even N
mark the crossing of a dashed level with a solid one.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DiracGUPError, GridResolutionError, NoMinimalLengthError
from .params import DimensionlessConfig, PhysicalConfig, critical_field
from .spectrum import (
    FAM_IV,
    Level,
    branch_families,
    family_members,
    first_present,
    merge_levels,
    persistence,
)

__all__ = [
    "CriticalPoint",
    "CriticalField",
    "LevelCurvePoint",
    "Figure1Dataset",
    "Kink",
    "critical_rhos",
    "critical_fields",
    "lowest_levels",
    "rho_grid",
    "figure1_dataset",
    "detect_kinks",
    "dashed_onsets",
    "coincidences",
]


@dataclass(frozen=True)
class CriticalPoint:
    index: int
    rho: float
    kind: str  # "threshold" (odd index) or "crossing" (even index)
    sign: int


def critical_rhos(rho_star: float, N_max: int) -> list[CriticalPoint]:
    if N_max < 1:
        raise DiracGUPError(f"N_max must be >= 1, got {N_max}")
    out = []
    for N in range(1, N_max + 1):
        kind = "threshold" if N % 2 else "crossing"
        for sign in (1, -1):
            out.append(CriticalPoint(N, sign * rho_star / N, kind, sign))
    return out


@dataclass(frozen=True)
class CriticalField:
    index: int
    b_cr_n: object
    b_cr: object
    sign: int = 1


def critical_fields(cfg: PhysicalConfig, N_max: int, signs: Sequence[int] = (1,)) -> list[CriticalField]:
    """B_cr^N = B_cr + 4c / (N beta e hbar) for N = 1..N_max.

    ``signs=(1, -1)`` also returns the mirror fields B_cr - 4c/(N beta e hbar)
    belonging to rho_N = -rho*/N.  Only field arithmetic is used, so exact
    ``Fraction`` inputs give exact outputs.
    """
    if cfg.beta == 0:
        raise NoMinimalLengthError("beta = 0: every B_cr^N is infinite (they recede as beta -> 0)")
    if N_max < 1:
        raise DiracGUPError(f"N_max must be >= 1, got {N_max}")
    b_cr = critical_field(cfg)
    out = []
    for N in range(1, N_max + 1):
        shift = 4 * cfg.c / (N * cfg.beta * cfg.e * cfg.hbar)
        for s in signs:
            out.append(CriticalField(N, b_cr + s * shift, b_cr, s))
    return out


# ---------------------------------------------------------------------------
# level curves


@dataclass(frozen=True)
class LevelCurvePoint:
    rho: float
    levels: tuple[Level, ...]

    @property
    def energies(self) -> tuple[float, ...]:
        return tuple(L.energy for L in self.levels)

    @property
    def flags(self) -> tuple[str, ...]:
        return tuple(L.persistence for L in self.levels)


@dataclass
class Figure1Dataset:
    rho_star: float
    curves: int
    branch: int
    points: list[LevelCurvePoint]
    skipped: list[tuple[float, str]] = field(default_factory=list)

    @property
    def rho(self) -> np.ndarray:
        return np.array([p.rho for p in self.points])

    def energy_matrix(self) -> np.ndarray:
        return np.array([p.energies for p in self.points])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        k = self.curves
        w.writerow(["rho"] + [f"E_{i}" for i in range(1, k + 1)] + [f"flags_{i}" for i in range(1, k + 1)])
        for p in self.points:
            w.writerow([_fmt(p.rho)] + [_fmt(e) for e in p.energies] + list(p.flags))
        return buf.getvalue()

    def to_json(self) -> str:
        rec = {
            "rho_star": self.rho_star,
            "curves": self.curves,
            "branch": self.branch,
            "points": [{"rho": p.rho, "levels": [L.to_dict() for L in p.levels]} for p in self.points],
            "skipped": [[r, why] for r, why in self.skipped],
        }
        return json.dumps(rec, indent=1)

    @classmethod
    def from_csv(cls, text: str, rho_star: float, branch: int = 1) -> "Figure1Dataset":
        """Rebuild energies and flags from :meth:`to_csv` output; member sets are not stored."""
        rows = list(csv.reader(io.StringIO(text)))
        k = (len(rows[0]) - 1) // 2
        pts = []
        for r in rows[1:]:
            levels = tuple(Level(float(r[1 + i]), branch, (), (), r[1 + k + i]) for i in range(k))
            pts.append(LevelCurvePoint(float(r[0]), levels))
        return cls(float(rho_star), k, branch, pts)

    @classmethod
    def from_json(cls, text: str) -> "Figure1Dataset":
        rec = json.loads(text)
        pts = [
            LevelCurvePoint(float(p["rho"]), tuple(Level.from_dict(L) for L in p["levels"]))
            for p in rec["points"]
        ]
        return cls(
            float(rec["rho_star"]),
            int(rec["curves"]),
            int(rec["branch"]),
            pts,
            [(float(r), str(why)) for r, why in rec["skipped"]],
        )

    def __eq__(self, other):
        if not isinstance(other, Figure1Dataset):
            return NotImplemented
        return (
            self.rho_star == other.rho_star
            and self.curves == other.curves
            and self.branch == other.branch
            and self.points == other.points
            and list(map(tuple, self.skipped)) == list(map(tuple, other.skipped))
        )


def _fmt(x: float) -> str:
    return format(x, ".15g")


def lowest_levels(d: DimensionlessConfig, count: int, branch: int = 1, merge_rtol: float = 1e-12) -> list[Level]:
    """The ``count`` lowest-|E| distinct levels of a branch.

    Once present, every family's |E| grows with N, so the answer is contained
    in the first ``count`` present levels of each family.  Dashed families may
    start at N ~ rho*/(2|rho|); the first present index is found by bisection.
    """
    if count < 1:
        raise DiracGUPError(f"count must be >= 1, got {count}")
    labels = []
    for fam in branch_families(d, branch):
        N0 = first_present(fam, d)
        if N0 is not None:
            labels += [(fam, N) for N in range(N0, N0 + (1 if fam == FAM_IV else count))]
    levels = merge_levels(d, branch, labels, merge_rtol)
    levels.sort(key=lambda L: abs(L.energy))
    return levels[:count]


def rho_grid(rho_min: float, rho_max: float, step: float, decimals: int = 12) -> np.ndarray:
    """Uniform grid with values rounded so that e.g. 5.0 and 20.0 land exactly."""
    n = int(round((rho_max - rho_min) / step))
    return np.round(rho_min + step * np.arange(n + 1), decimals)


def figure1_dataset(
    rho_star: float,
    rho_grid: Iterable[float],
    curves: int = 6,
    branch: int = 1,
    merge_rtol: float = 1e-12,
) -> Figure1Dataset:
    """Lowest ``curves`` energies of one branch at each grid rho, ranked by energy."""
    points, skipped = [], []
    for rho in rho_grid:
        rho = float(rho)
        if rho == 0.0:
            skipped.append((rho, "critical point rho = 0"))
            continue
        if abs(rho) == rho_star:
            skipped.append((rho, "regime boundary |rho| = rho_star"))
            continue
        d = DimensionlessConfig(rho, rho_star)
        points.append(LevelCurvePoint(rho, tuple(lowest_levels(d, curves, branch, merge_rtol))))
    for rho, why in skipped:
        warnings.warn(f"figure1_dataset: skipped rho={rho!r} ({why})", stacklevel=2)
    return Figure1Dataset(rho_star, curves, branch, points, skipped)


# ---------------------------------------------------------------------------
# diagnostics on a dataset


@dataclass(frozen=True)
class Kink:
    rho: float
    curve: int  # 0-based rank
    kind: str  # "slope" or "members"
    critical_index: int | None
    distance: float | None


def _grid_step(rho: np.ndarray) -> float:
    gaps = np.diff(rho)
    if gaps.size == 0:
        raise DiracGUPError("dataset needs at least two points")
    h = float(gaps.min())
    ratio = gaps / h
    if np.any(np.abs(ratio - np.round(ratio)) > 1e-6):
        raise DiracGUPError("detect_kinks needs a uniform grid (gaps must be multiples of the step)")
    return h


def _catalog(rho_star: float, rho_lo: float, rho_hi: float, step: float, n_max: int | None) -> list[CriticalPoint]:
    def in_range(cp):
        return rho_lo - step <= cp.rho <= rho_hi + step

    if n_max is None:
        # largest index whose neighbours are still more than two steps apart
        n_max = 1
        while rho_star / n_max - rho_star / (n_max + 1) > 2 * step:
            n_max += 1
    pts = sorted((cp for cp in critical_rhos(rho_star, n_max) if in_range(cp)), key=lambda c: c.rho)
    bad = [(a, b) for a, b in zip(pts, pts[1:]) if b.rho - a.rho <= 2 * step]
    if bad:
        pairs = ", ".join(f"(N={a.index}: {a.rho:.6g}, N={b.index}: {b.rho:.6g})" for a, b in bad)
        raise GridResolutionError(f"grid step {step:g} cannot separate critical points {pairs}")
    return pts


def detect_kinks(
    dataset: Figure1Dataset, tolerance: float, n_max: int | None = None
) -> list[Kink]:
    """Non-analytic points of the rank-ordered curves.

    A point is flagged when the step-scaled second difference exceeds
    ``tolerance`` or when the (n, m) member set of a curve changes between
    neighbours.  Runs of flagged points collapse to one kink at their mean rho.
    Each kink is matched to the nearest rho_N (N <= n_max; by default the
    largest resolvable index) when it lies within one grid step.
    """
    rho = dataset.rho
    h = _grid_step(rho)
    E = dataset.energy_matrix()
    npts, ncurves = E.shape
    catalog = _catalog(dataset.rho_star, float(rho[0]), float(rho[-1]), h, n_max)
    cat_rho = np.array([c.rho for c in catalog])

    kinks: list[Kink] = []
    for k in range(ncurves):
        flagged: list[tuple[float, str]] = []
        h1, h2 = np.diff(rho)[:-1], np.diff(rho)[1:]
        d2 = h**2 * 2 * ((E[2:, k] - E[1:-1, k]) / h2 - (E[1:-1, k] - E[:-2, k]) / h1) / (h1 + h2)
        for j in np.nonzero(np.abs(d2) > tolerance)[0]:
            flagged.append((float(rho[j + 1]), "slope"))
        for j in range(1, npts):
            a = {(mm.n, mm.m) for mm in dataset.points[j - 1].levels[k].members}
            b = {(mm.n, mm.m) for mm in dataset.points[j].levels[k].members}
            if a != b:
                flagged.append((0.5 * (rho[j - 1] + rho[j]), "members"))
        flagged.sort()
        cluster: list[tuple[float, str]] = []
        for item in flagged + [(math.inf, "")]:
            if cluster and item[0] - cluster[-1][0] > 2 * h * (1 + 1e-9):
                loc = float(np.mean([r for r, _ in cluster]))
                kind = "members" if any(kd == "members" for _, kd in cluster) else "slope"
                idx, dist = None, None
                if cat_rho.size:
                    i = int(np.argmin(np.abs(cat_rho - loc)))
                    dist = float(abs(cat_rho[i] - loc))
                    if dist <= h * (1 + 1e-9):
                        idx = catalog[i].index
                kinks.append(Kink(loc, k, kind, idx, dist if idx is not None else None))
                cluster = []
            cluster.append(item)
    kinks.sort(key=lambda q: (q.rho, q.curve))
    return kinks


def _labels(point: LevelCurvePoint) -> dict[tuple[str, int], float]:
    return {lab: L.energy for L in point.levels for lab in L.labels}


def dashed_onsets(dataset: Figure1Dataset) -> list[tuple[float, float, tuple[str, int]]]:
    """Intervals (rho_a, rho_b) where a dashed level shown in the window starts or stops existing.

    A dashed label visible at one end of a grid interval
    whose degeneracy is zero at the other end marks an onset.
    """
    out = []
    pts = dataset.points
    for p, q in zip(pts, pts[1:]):
        if (p.rho > 0) != (q.rho > 0):
            continue
        dp = DimensionlessConfig(p.rho, dataset.rho_star)
        dq = DimensionlessConfig(q.rho, dataset.rho_star)
        for here, there_cfg, lo, hi in ((q, dp, p.rho, q.rho), (p, dq, p.rho, q.rho)):
            for L in here.levels:
                for fam, N in L.labels:
                    if _is_dashed(fam, here.rho, dataset.rho_star) and not family_members_safe(fam, N, there_cfg):
                        out.append((lo, hi, (fam, N)))
    return sorted(set(out))


def family_members_safe(fam: str, N: int, d: DimensionlessConfig) -> bool:
    try:
        return bool(family_members(fam, N, d))
    except DiracGUPError:
        return False


def _is_dashed(fam: str, rho: float, rho_star: float) -> bool:
    return persistence(fam, DimensionlessConfig(rho, rho_star)) == "dashed"


def coincidences(dataset: Figure1Dataset) -> list[tuple[float, float, tuple[str, int], tuple[str, int]]]:
    """Solid/dashed energy coincidences, exact on a grid point or bracketed by a sign change."""
    out = []
    rs = dataset.rho_star
    for p in dataset.points:
        for L in p.levels:
            if L.persistence == "solid+dashed":
                sol = [lab for lab in L.labels if not _is_dashed(lab[0], p.rho, rs)]
                das = [lab for lab in L.labels if _is_dashed(lab[0], p.rho, rs)]
                out.append((p.rho, p.rho, sol[0], das[0]))
    pts = dataset.points
    for p, q in zip(pts, pts[1:]):
        if (p.rho > 0) != (q.rho > 0) or (abs(p.rho) > rs) != (abs(q.rho) > rs):
            continue
        ep, eq = _labels(p), _labels(q)
        common = [lab for lab in ep if lab in eq]
        solid = [lab for lab in common if not _is_dashed(lab[0], p.rho, rs)]
        dashed = [lab for lab in common if _is_dashed(lab[0], p.rho, rs)]
        for s in solid:
            for t in dashed:
                a = ep[s] - ep[t]
                b = eq[s] - eq[t]
                if a * b < 0:
                    out.append((p.rho, q.rho, s, t))
    return sorted(set(out))
