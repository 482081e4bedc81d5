"""Level rearrangements across the field axis.

The lowest curves change character at rho_N = +-rho*/N.  Odd N are thresholds
where a new (dashed) family enters; even N are crossings where a dashed level
lands on a solid one.  The script regenerates the curves, finds the kinks and
sorts the events by parity.
"""
import warnings

from diracgup.qpt import coincidences, critical_rhos, dashed_onsets, detect_kinks, figure1_dataset, rho_grid

RHO_STAR = 20.0

with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # rho = 0 and the boundary loci are skipped
    ds = figure1_dataset(RHO_STAR, rho_grid(-30, 30, 0.05), 6)

print("critical points (positive side)")
for cp in critical_rhos(RHO_STAR, 6):
    if cp.sign > 0:
        print(f"    N = {cp.index}  rho_N = {cp.rho:8.4f}  {cp.kind}")

print("\nresolved kinks of the six lowest curves")
seen = set()
for k in detect_kinks(ds, 0.02):
    if k.critical_index is not None and abs(k.rho) >= 4 - 0.1 and (k.critical_index, k.rho > 0) not in seen:
        seen.add((k.critical_index, k.rho > 0))
        print(f"    rho = {k.rho:+8.3f}  matched to N = {k.critical_index}  ({k.kind})")

onsets = [(lo, hi) for lo, hi, _ in dashed_onsets(ds) if abs(lo) > 3]
hits = [(lo, hi) for lo, hi, *_ in coincidences(ds) if abs(lo) > 3]
print(f"\ndashed onsets with |rho| > 3: {len(onsets)} (each brackets an odd rho_N)")
print(f"solid/dashed coincidences with |rho| > 3: {len(hits)} (each at an even rho_N)")

# the same structure in field units: B_cr^N = B_cr + 4c/(N beta e hbar)
from fractions import Fraction

from diracgup import PhysicalConfig
from diracgup.qpt import critical_fields

cfg = PhysicalConfig(mass=1, omega=1, b0=3, beta=Fraction(1, 10))
print("\ncritical fields for M = omega = 1, beta = 1/10")
for f in critical_fields(cfg, 5):
    print(f"    N = {f.index}  B = {f.b_cr_n}  (B_cr = {f.b_cr})")
