"""Lattice Boltzmann solver for coupled free and porous-media flow.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._core import (  # noqa: F401
    ConfigError,
    GeometryError,
    InterfaceCondition,
    InterfaceFit,
    LatticeModel,
    NumericalInstability,
    PermeabilityEstimate,
    ProfileData,
    RunStats,
    Simulation,
    Sphere,
    SpherePack,
    TwoDomainConfig,
    TwoDomainSolution,
    VoxelGeometry,
    WallScheme,
    couette_semi_analytic,
    d3q19,
    equilibrium,
    extract_interface_params,
    generate_packing,
    glbm_equilibrium,
    glbm_force_and_velocity,
    interface_position_candidates,
    kozeny_carman,
    l2_distance_normalized,
    measure_permeability,
    moments,
    read_profile_csv,
    relaxation_from_magic,
    run_couette_porous,
    run_scenario_file,
    run_to_steady,
    sample_two_domain,
    solve_two_domain,
    trt_collide,
    voxelize,
    write_profile_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
