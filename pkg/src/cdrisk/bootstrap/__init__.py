"""One-year recursive bootstrap: residual pool, engine, and kernel backends."""

from ._backend import HAVE_COMPILED, available_kernels, default_kernel_name, get_kernel
from .engine import (
    MODES,
    TAILS,
    BootstrapConfig,
    CdrDistribution,
    ResidualPool,
    build_residual_pool,
    dump_samples,
    run,
)

__all__ = [
    "MODES",
    "TAILS",
    "BootstrapConfig",
    "CdrDistribution",
    "ResidualPool",
    "build_residual_pool",
    "dump_samples",
    "run",
    "HAVE_COMPILED",
    "available_kernels",
    "default_kernel_name",
    "get_kernel",
]
