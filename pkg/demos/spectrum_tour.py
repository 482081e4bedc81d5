"""A tour of the four field regimes and their level families.

rho measures the magnetic field against the oscillator (rho < 0 below the
critical field), rho* the inverse minimal length.  Units hbar = c = M = 1.
"""
from diracgup import DimensionlessConfig, enumerate_levels, tau_of
from diracgup.spectrum import FAM_IV, degeneracy

RHO_STAR = 20.0

for rho in (25.0, 5.0, -5.0, -25.0):
    d = DimensionlessConfig(rho, RHO_STAR)
    print(f"rho = {rho:+5.1f}  regime {d.regime.display:16s} tau = {tau_of(d):+.2f}")
    for L in enumerate_levels(d, 1, 4)[:5]:
        labels = ", ".join(f"{f}:{N}" for f, N in L.labels)
        print(f"    E = {L.energy:9.5f}  D = {L.degeneracy:3d}  {L.persistence:7s} [{labels}]")

# Inside the negative window every m in [0, tau) contributes one singlet at E = +1.
# As the field approaches the critical value from below, tau grows without bound.
print("\nzero-mode degeneracy as rho -> 0-")
for rho in (-5.0, -2.0, -0.5, -0.05):
    d = DimensionlessConfig(rho, RHO_STAR)
    print(f"    rho = {rho:+6.2f}  tau = {tau_of(d):7.2f}  D = {degeneracy(FAM_IV, 1, d)}")
