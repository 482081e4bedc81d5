"""Closed-form spectrum: component eigenvalues, spinor rows, level families.

Notation (natural units, a = 1/(beta lambda) = rho_star/(2 rho))::

    zeta_i = m - 1/2 + i          xi_i = m + 5/2 - i + a
    mu_i   = xi_i - 1/2           nu_i = zeta_i - 1/2

Each component solution belongs to one of four endpoint classes a-d, which
fix the signs of (mu, nu) in k_n = n + (mu' + nu' + 1)/2.  Spinors pair an
upper (i = 1) and a lower (i = 2) component with equal k; the admissible
pairings per regime are the ``SpinorRow`` entries below.

Families of levels (positive branch shown, the negative branch mirrors)::

    external    ext_plus   N = n+m+1 (m >= 0)     ext_minus  N = n+|m| (m <= -1)
    0 < rho < rho*   i     N = n+m+1 (m >= 0), N = n (tau < m <= -1, n >= 1)
                     ii    N = n+|m| (m < tau)
                     iv_zero   E = -1, lower-only (tau < m <= -1, n = 0)
    -rho* < rho < 0  iii   N = n+m+1 (m > tau)
                     iv_zero   E = +1, upper-only (0 <= m < tau, n = 0)
                     v     N = n (0 <= m < tau, n >= 1), N = n+|m| (m <= -1)

    E^2 = 1 + 4 rho N [2 (rho/rho*) N +- 1]      (+ for ext_plus, i, iii)

Degeneracies are always obtained by listing members, never from ceil(tau).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import (
    DiracGUPError,
    DiscardedSolutionError,
    InadmissibleStateError,
    LevelNotPermissibleError,
    UnphysicalError,
)
from .params import DimensionlessConfig, Regime, require_spectral_regime, tau_of

__all__ = [
    "FAMILIES",
    "PLUS_FAMILIES",
    "DASHED_FAMILIES",
    "PTParameters",
    "SolutionClass",
    "SpinorRow",
    "Member",
    "Level",
    "pt_parameters",
    "table_classes",
    "classify_solution",
    "spinor_row",
    "effective_exponents",
    "k_squared",
    "energy_from_k",
    "level_energy",
    "family_members",
    "degeneracy",
    "state_family",
    "families_in_regime",
    "enumerate_levels",
    "merge_levels",
    "branch_families",
    "first_present",
    "persistence",
]

EXT_PLUS, EXT_MINUS = "ext_plus", "ext_minus"
FAM_I, FAM_II, FAM_III, FAM_IV, FAM_V = "i", "ii", "iii", "iv_zero", "v"
FAMILIES = (EXT_PLUS, EXT_MINUS, FAM_I, FAM_II, FAM_III, FAM_IV, FAM_V)
PLUS_FAMILIES = frozenset({EXT_PLUS, FAM_I, FAM_III})
DASHED_FAMILIES = frozenset({FAM_II, FAM_III})

_REGIME_FAMILIES = {
    Regime.EXTERNAL_POSITIVE: (EXT_PLUS, EXT_MINUS),
    Regime.EXTERNAL_NEGATIVE: (EXT_PLUS, EXT_MINUS),
    Regime.INTERNAL_POSITIVE: (FAM_I, FAM_II, FAM_IV),
    Regime.INTERNAL_NEGATIVE: (FAM_III, FAM_IV, FAM_V),
}


def _check_branch(branch: int) -> int:
    if branch not in (1, -1):
        raise DiracGUPError(f"branch must be +1 or -1, got {branch!r}")
    return branch


# ---------------------------------------------------------------------------
# component level


@dataclass(frozen=True)
class PTParameters:
    component: int
    m: int
    zeta: float
    xi: float
    mu: float
    nu: float


def pt_parameters(m: int, component: int, d: DimensionlessConfig) -> PTParameters:
    if component not in (1, 2):
        raise DiracGUPError(f"component must be 1 or 2, got {component!r}")
    a = d.inv_beta_lambda
    zeta = m - 0.5 + component
    xi = m + 2.5 - component + a
    # component 1: mu = m + 1 + a, nu = m.  component 2: mu = m + a, nu = m + 1.
    return PTParameters(component, m, zeta, xi, xi - 0.5, zeta - 0.5)


def table_classes(m: int, component: int, d: DimensionlessConfig) -> frozenset:
    """All classes whose m-predicate (component table, caption tie-breaks applied) holds."""
    tau = tau_of(d)
    out = set()
    if component == 1:
        if m >= 0 and m > tau - 1:
            out.add("a")
        if m <= -1 and m < tau:
            out.add("b")
        if tau - 1 < m <= -1:
            out.add("c")
        if 0 <= m < tau:
            out.add("d")
    elif component == 2:
        if m >= 0 and m > tau:
            out.add("a")
        if m <= -1 and m < tau + 1:
            out.add("b")
        if tau < m <= -1:
            out.add("c")
        if -1 <= m < tau + 1:
            out.add("d")
    else:
        raise DiracGUPError(f"component must be 1 or 2, got {component!r}")
    return frozenset(out)


class SpinorRow(NamedTuple):
    """One row of a spinor table: classes and n-offsets of both components.

    The upper component uses index ``n + upper_shift`` and the lower one
    ``n + lower_shift``; a negative index means that component vanishes.
    """

    key: str
    upper_class: str
    upper_shift: int
    lower_class: str
    lower_shift: int


ROW_AA = SpinorRow("aa", "a", 0, "a", 0)
ROW_BB = SpinorRow("bb", "b", 0, "b", 0)
ROW_CC = SpinorRow("cc", "c", -1, "c", 0)
# the lower component carries index n-1 and the upper n; see decisions on the printed pairing
ROW_DD = SpinorRow("dd", "d", 0, "d", -1)


def spinor_row(m: int, d: DimensionlessConfig) -> SpinorRow | None:
    """The spinor row containing angular momentum ``m``; None for orphan m (m == tau)."""
    regime = require_spectral_regime(d)
    tau = tau_of(d)
    if regime.is_external:
        return ROW_AA if m >= 0 else ROW_BB
    if regime is Regime.INTERNAL_POSITIVE:
        if m >= 0:
            return ROW_AA
        if tau < m <= -1:
            return ROW_CC
        if m < tau:
            return ROW_BB
        return None
    if m > tau:
        return ROW_AA
    if 0 <= m < tau:
        return ROW_DD
    if m <= -1:
        return ROW_BB
    return None


@dataclass(frozen=True)
class SolutionClass:
    label: str
    component: int
    m: int
    pairable: bool


def classify_solution(m: int, component: int, d: DimensionlessConfig) -> SolutionClass:
    """Endpoint class used for component ``component`` at angular momentum ``m``.

    Where two classes overlap for a single component, the one entering the
    spinor row of ``m`` wins.  At an integer tau the value m = tau belongs to
    no row; the component then gets its unique table class, marked unpairable.
    """
    if component not in (1, 2):
        raise DiracGUPError(f"component must be 1 or 2, got {component!r}")
    row = spinor_row(m, d)
    allowed = table_classes(m, component, d)
    if row is not None:
        label = row.upper_class if component == 1 else row.lower_class
        if label not in allowed:
            raise DiracGUPError(
                f"internal inconsistency: row {row.key} assigns class {label} to "
                f"component {component}, m={m}, but the table allows {sorted(allowed)}"
            )
        return SolutionClass(label, component, m, True)
    if len(allowed) != 1:
        raise DiracGUPError(
            f"internal inconsistency: orphan m={m} for component {component} matches {sorted(allowed)}"
        )
    return SolutionClass(next(iter(allowed)), component, m, False)


_SIGNS = {"a": (1, 1), "b": (-1, -1), "c": (1, -1), "d": (-1, 1)}


def effective_exponents(label: str, p: PTParameters) -> tuple[float, float]:
    """Sign-resolved (mu', nu') selected by the class."""
    sm, sn = _SIGNS[label]
    return sm * p.mu, sn * p.nu


def k_squared(label: str, n: int, p: PTParameters) -> float:
    """Quarter-square eigenvalue of the component table for class ``label``."""
    if n < 0:
        raise DiracGUPError(f"n must be non-negative, got {n}")
    z, x = p.zeta, p.xi
    if label == "a":
        s = 2 * n + z + x
    elif label == "b":
        s = 2 * n + 2 - z - x
    elif label == "c":
        s = 2 * n + 1 - z + x
    elif label == "d":
        s = 2 * n + 1 + z - x
    else:
        raise DiracGUPError(f"unknown solution class {label!r}")
    return 0.25 * s * s


def energy_from_k(k2: float, d: DimensionlessConfig, branch: int) -> float:
    """E / Mc^2 from k^2 = rho_star (E^2 - 1 + rho_star/2) / (8 rho^2)."""
    _check_branch(branch)
    rad = 1.0 + (8.0 * d.rho**2 / d.rho_star) * k2 - d.rho_star / 2.0
    if rad < 0:
        raise UnphysicalError(
            f"k^2 = {k2!r} gives a negative radicand {rad!r}: unphysical (n, m) for this regime"
        )
    return branch * math.sqrt(rad)


# ---------------------------------------------------------------------------
# level families


class Member(NamedTuple):
    n: int
    m: int
    family: str
    N: int


def families_in_regime(d: DimensionlessConfig) -> tuple[str, ...]:
    return _REGIME_FAMILIES[require_spectral_regime(d)]


def _zero_mode_branch(regime: Regime) -> int:
    return 1 if regime is Regime.INTERNAL_NEGATIVE else -1


def _above(tau: float) -> int:
    """Smallest integer strictly greater than tau."""
    return math.floor(tau) + 1


def _below(tau: float) -> int:
    """Largest integer strictly smaller than tau."""
    return math.ceil(tau) - 1


def _member_ranges(family: str, N: int, d: DimensionlessConfig) -> list[tuple[range, str]]:
    """Admissible m of level (family, N) as integer ranges, each with its n(m) rule.

    Rules: "N-1-m", "N+m", "N" and "0" give the radial index of a member.
    """
    regime = require_spectral_regime(d)
    if family not in FAMILIES:
        raise DiracGUPError(f"unknown family {family!r}")
    if family not in _REGIME_FAMILIES[regime]:
        return []
    if N < 1:
        raise DiracGUPError(f"family index N must be >= 1, got {N}")
    tau = tau_of(d)
    if family == EXT_PLUS:
        return [(range(0, N), "N-1-m")]
    if family == FAM_I:
        return [(range(0, N), "N-1-m"), (range(_above(tau), 0), "N")]
    if family == EXT_MINUS:
        return [(range(-1, -N - 1, -1), "N+m")]
    if family == FAM_II:
        return [(range(min(-1, _below(tau)), -N - 1, -1), "N+m")]
    if family == FAM_III:
        return [(range(max(0, _above(tau)), N), "N-1-m")]
    if family == FAM_V:
        return [(range(0, _below(tau) + 1), "N"), (range(-1, -N - 1, -1), "N+m")]
    # zero mode
    if N != 1:
        return []
    if regime is Regime.INTERNAL_NEGATIVE:
        return [(range(0, _below(tau) + 1), "0")]
    return [(range(_above(tau), 0), "0")]


_N_RULES = {"N-1-m": lambda N, m: N - 1 - m, "N+m": lambda N, m: N + m, "N": lambda N, m: N, "0": lambda N, m: 0}


def family_members(family: str, N: int, d: DimensionlessConfig) -> list[Member]:
    """Every (n, m) carrying level (family, N), listed by direct enumeration."""
    return [
        Member(_N_RULES[rule](N, m), m, family, N)
        for ms, rule in _member_ranges(family, N, d)
        for m in ms
    ]


def degeneracy(family: str, N: int, d: DimensionlessConfig) -> int:
    """Member count of (family, N); 0 means the level is absent."""
    return sum(len(ms) for ms, _ in _member_ranges(family, N, d))


def level_energy(family: str, N: int, d: DimensionlessConfig, branch: int) -> float:
    """Closed-form E / Mc^2 of level (family, N)."""
    _check_branch(branch)
    regime = require_spectral_regime(d)
    if family not in FAMILIES:
        raise DiracGUPError(f"unknown family {family!r}")
    if family not in _REGIME_FAMILIES[regime] or degeneracy(family, N, d) == 0:
        raise LevelNotPermissibleError(
            f"level ({family}, N={N}) has degeneracy D = 0 at rho={d.rho!r}, rho*={d.rho_star!r}"
        )
    if family == FAM_IV:
        if branch != _zero_mode_branch(regime):
            raise LevelNotPermissibleError(
                f"the zero mode in {regime.value} only exists with E = {_zero_mode_branch(regime):+d} Mc^2"
            )
        return float(branch)
    sign = 1.0 if family in PLUS_FAMILIES else -1.0
    rho = d.rho
    return branch * math.sqrt(1.0 + 4.0 * rho * N * (2.0 * (rho / d.rho_star) * N + sign))


def state_family(n: int, m: int, d: DimensionlessConfig, branch: int) -> tuple[str, int]:
    """(family, N) of the spinor state (n, m) on the given branch."""
    _check_branch(branch)
    if n < 0:
        raise InadmissibleStateError(f"n must be non-negative, got {n}")
    regime = require_spectral_regime(d)
    row = spinor_row(m, d)
    if row is None:
        raise DiscardedSolutionError(
            f"m = {m} equals tau: its component solutions belong to different classes "
            "and cannot be paired into a spinor"
        )
    if row is ROW_AA:
        fam = EXT_PLUS if regime.is_external else (FAM_I if regime is Regime.INTERNAL_POSITIVE else FAM_III)
        return fam, n + m + 1
    if row is ROW_BB:
        fam = EXT_MINUS if regime.is_external else (FAM_II if regime is Regime.INTERNAL_POSITIVE else FAM_V)
        return fam, n - m
    if n == 0:
        if branch != _zero_mode_branch(regime):
            raise DiscardedSolutionError(
                f"(n=0, m={m}) is a singlet with E = {_zero_mode_branch(regime):+d} Mc^2 only"
            )
        return FAM_IV, 1
    return (FAM_I if row is ROW_CC else FAM_V), n


def persistence(family: str, d: DimensionlessConfig) -> str:
    """'solid' if the level continues a beta -> 0 state, 'dashed' otherwise.

    In the external regimes ext_plus continues family i (rho > 0) or iii
    (rho < 0), and ext_minus continues ii (rho > 0) or v (rho < 0).
    """
    if family == EXT_PLUS:
        return "solid" if d.rho > 0 else "dashed"
    if family == EXT_MINUS:
        return "dashed" if d.rho > 0 else "solid"
    return "dashed" if family in DASHED_FAMILIES else "solid"


@dataclass(frozen=True)
class Level:
    """A distinct energy with every (n, m) member; merged across families at crossings."""

    energy: float
    branch: int
    labels: tuple[tuple[str, int], ...]
    members: tuple[Member, ...]
    persistence: str

    @property
    def degeneracy(self) -> int:
        return len(self.members)

    @property
    def family(self) -> str:
        return self.labels[0][0]

    @property
    def N(self) -> int:
        return self.labels[0][1]

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "branch": self.branch,
            "labels": [list(lab) for lab in self.labels],
            "members": [list(mem) for mem in self.members],
            "persistence": self.persistence,
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "Level":
        return cls(
            energy=float(rec["energy"]),
            branch=int(rec["branch"]),
            labels=tuple((str(f), int(N)) for f, N in rec["labels"]),
            members=tuple(Member(int(n), int(m), str(f), int(N)) for n, m, f, N in rec["members"]),
            persistence=str(rec["persistence"]),
        )


def _merge_flags(flags) -> str:
    flags = set(flags)
    return "solid+dashed" if len(flags) > 1 else flags.pop()


def merge_levels(
    d: DimensionlessConfig, branch: int, labels, merge_rtol: float = 1e-12
) -> list[Level]:
    """Levels for the given present (family, N) labels, ascending in energy.

    Family levels whose energies agree within ``merge_rtol`` are merged into
    one :class:`Level`; its labels keep the family provenance.
    """
    raw = [(level_energy(fam, N, d, branch), fam, N) for fam, N in labels]
    raw.sort(key=lambda t: (t[0], FAMILIES.index(t[1]), t[2]))

    groups: list[list] = []
    for item in raw:
        if groups:
            ref = groups[-1][0][0]
            if abs(item[0] - ref) <= merge_rtol * max(abs(item[0]), abs(ref)):
                groups[-1].append(item)
                continue
        groups.append([item])

    levels = []
    for g in groups:
        levels.append(
            Level(
                energy=g[0][0],
                branch=branch,
                labels=tuple((fam, N) for _, fam, N in g),
                members=tuple(mem for _, fam, N in g for mem in family_members(fam, N, d)),
                persistence=_merge_flags(persistence(fam, d) for _, fam, _ in g),
            )
        )
    return levels


def branch_families(d: DimensionlessConfig, branch: int) -> tuple[str, ...]:
    """Families carrying levels on ``branch`` in the regime of ``d``."""
    _check_branch(branch)
    regime = require_spectral_regime(d)
    return tuple(f for f in _REGIME_FAMILIES[regime] if f != FAM_IV or branch == _zero_mode_branch(regime))


def first_present(family: str, d: DimensionlessConfig) -> int | None:
    """Smallest N with (family, N) present, or None if the family is empty here.

    Presence is monotone in N (the admissible m ranges only widen), so an
    exponential search followed by bisection is exact.
    """
    if family == FAM_IV:
        return 1 if degeneracy(family, 1, d) > 0 else None
    if family not in families_in_regime(d):
        return None
    hi = 1
    while degeneracy(family, hi, d) == 0:
        hi *= 2
    lo = hi // 2 + 1 if hi > 1 else 1
    while lo < hi:
        mid = (lo + hi) // 2
        if degeneracy(family, mid, d) > 0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def enumerate_levels(
    d: DimensionlessConfig, branch: int, N_max: int, merge_rtol: float = 1e-12
) -> list[Level]:
    """Distinct levels with family index N <= N_max, ascending in energy.

    Family levels whose energies agree within ``merge_rtol`` are merged into
    one :class:`Level`; its labels keep the family provenance.
    """
    _check_branch(branch)
    if N_max < 1:
        raise DiracGUPError(f"N_max must be >= 1, got {N_max}")
    labels = []
    for fam in branch_families(d, branch):
        N0 = first_present(fam, d)
        if N0 is None:
            continue
        top = 1 if fam == FAM_IV else N_max
        labels += [(fam, N) for N in range(N0, top + 1)]
    return merge_levels(d, branch, labels, merge_rtol)
