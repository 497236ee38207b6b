"""Two-interface necrotic tumour moving-boundary solver."""

from ._core import (
    Bio,
    ConfigError,
    Geometry,
    InterfaceCollision,
    NecrosimError,
    bessel_i,
    bessel_k,
    evolve,
    fd_jacobian_mode,
    phi,
    principal_symbol,
    psi0_critical,
    run_cli,
    solve_stationary,
    verify,
)

__all__ = [
    "Bio",
    "ConfigError",
    "Geometry",
    "InterfaceCollision",
    "NecrosimError",
    "bessel_i",
    "bessel_k",
    "evolve",
    "fd_jacobian_mode",
    "phi",
    "principal_symbol",
    "psi0_critical",
    "run_cli",
    "solve_stationary",
    "verify",
]
