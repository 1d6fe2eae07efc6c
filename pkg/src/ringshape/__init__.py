"""Classical mechanics of two ring-shaped potentials.

An oscillatory system (harmonic well plus ring repulsion) and a coulombic
one (the Hartmann potential): closed-form trajectories, the full sets of
integrals of motion, equipotential surfaces, planarity via the torsion of
the trajectory, periodicity and quasi-periodicity, orbit-averaged
potentials, semiclassical spectra, and local-degeneracy conditions, all
cross-validated against an independent Hamilton-equation integrator.
"""

from .core import (
    CoulParams,
    DomainError,
    MotionConstants,
    NumericError,
    OscParams,
    PhaseState,
    PlanarityClass,
    RationalApprox,
    angular_momentum,
    best_rational,
    from_cylindrical,
    from_spherical,
    to_cylindrical,
    to_spherical,
)
from .coulomb import (
    CoulInvariants,
    CoulOrbit,
    DegeneracyTriple,
    SeparatrixOrbit,
    coul_bounds,
    coul_constants_from_bounds,
    coul_equipotential,
    coul_invariants,
    coul_orbit_from_constants,
    coul_period,
    coul_planar_orbit,
    coul_planarity,
    coul_potential,
    coul_potential_model,
    coul_radial_time,
    coul_semiclassical,
    coul_separatrix,
    coul_sphere_orbit,
    coul_trajectory,
    coul_virial,
    degeneracy_q,
    degeneracy_search,
    separatrix_radius,
)
from .frenet import (
    FrenetData,
    PotentialModel,
    finite_difference_model,
    frenet_conservative,
    frenet_general,
    frenet_parametric,
)
from .oracle import IntegrationRun, closure_test, drift_report, integrate
from .oscillator import (
    OscInvariants,
    OscOrbit,
    osc_angmom_q0,
    osc_bounds,
    osc_constants_from_bounds,
    osc_cylinder_orbit,
    osc_equipotential,
    osc_invariants,
    osc_mean_potential,
    osc_orbit_from_constants,
    osc_periodicity,
    osc_planarity,
    osc_potential,
    osc_potential_model,
    osc_projection,
    osc_quantized_constants,
    osc_semiclassical,
    osc_trajectory,
)

__version__ = "0.1.0"
