"""Lindblad spectra, persistent oscillations, and block structure."""

from ._core import (
    BlockPartition,
    DeltaCondition,
    DensityMatrix,
    DfsResult,
    DfsSubspace,
    EigenModePair,
    JumpChannel,
    LindbladModel,
    ModeClass,
    NumericalError,
    RStarSolution,
    SpectralMode,
    Spectrum,
    StructureReport,
    build_superoperator,
    check_strong,
    check_weak,
    classify,
    construct_modes,
    dfs_modes,
    discover_partition,
    dissipator,
    dissipator_residual,
    evolve_expansion,
    evolve_rk4,
    fidelity,
    find_dfs,
    master_rhs,
    project,
    solve_rstar,
    spectrum,
    verify_block_form,
    zoo,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "DeltaCondition",
    "DensityMatrix",
    "DfsResult",
    "DfsSubspace",
    "EigenModePair",
    "JumpChannel",
    "LindbladModel",
    "ModeClass",
    "NumericalError",
    "RStarSolution",
    "SpectralMode",
    "Spectrum",
    "StructureReport",
    "build_superoperator",
    "check_strong",
    "check_weak",
    "classify",
    "construct_modes",
    "dfs_modes",
    "discover_partition",
    "dissipator",
    "dissipator_residual",
    "evolve_expansion",
    "evolve_rk4",
    "fidelity",
    "find_dfs",
    "master_rhs",
    "project",
    "solve_rstar",
    "spectrum",
    "verify_block_form",
    "zoo",
]
