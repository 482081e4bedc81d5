"""Exact spectrum of the 2D Dirac oscillator in a magnetic field with a minimal length.

Submodules:

* :mod:`params`       physical and dimensionless inputs, regimes, tau
* :mod:`spectrum`     solution classes, k_n, energies, level families, degeneracies
* :mod:`qpt`          critical points and fields, level-curve datasets, kink detection
* :mod:`wavefunction` radial profiles, spinors, P+-, x, deformed-measure integrals
* :mod:`oracle`       finite-difference eigenvalues certifying k_n
* :mod:`cli`          command-line front end
"""
from .errors import *  # noqa: F401,F403
from .params import (
    CharacteristicLengths,
    DimensionlessConfig,
    PhysicalConfig,
    Regime,
    characteristic_lengths,
    classify_regime,
    critical_field,
    dimensionless_from_physical,
    tau_of,
)
from .spectrum import (
    Level,
    classify_solution,
    degeneracy,
    energy_from_k,
    enumerate_levels,
    k_squared,
    level_energy,
    pt_parameters,
)
from .qpt import critical_fields, critical_rhos, detect_kinks, figure1_dataset, rho_grid
from .wavefunction import assemble_spinor, hyp2f1_terminating, norm_squared, overlap, radial_profile
from .oracle import fd_eigenvalues, verify_spectrum

__version__ = "0.1.0"
