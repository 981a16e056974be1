"""Cubic nontwist map: reconnection thresholds, Hamiltonian flow and portraits."""

from ._core import (
    Params,
    rotation_profile,
    twist_derivative,
    step,
    orbit,
    rotation_number,
    twistless_circles,
    extremal_rotation_numbers,
    energy,
    vector_field,
    equilibria,
    residual_I_II,
    residual_II_III,
    k_of_b_II_III,
    triple_residual,
    thresholds,
    triple_point,
    regime,
    integrate,
    chain_topology,
    level_curves,
    is_meander,
    run_cli,
    DomainError,
    NumericalError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
