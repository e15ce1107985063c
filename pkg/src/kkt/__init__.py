"""KKT reformulation of the GNE problem as a PL least-squares objective."""

from .certificate import GneCertificate, certify_gne, default_tolerance
from .system import (
    BlockLayout,
    KktSystem,
    PrimalDual,
    assemble,
    build_h_blocks,
    gap,
    gap_gradient,
    gap_partials,
    kkt_residual,
    local_gradient_x,
    local_terms,
)

__all__ = [
    "BlockLayout",
    "GneCertificate",
    "KktSystem",
    "PrimalDual",
    "assemble",
    "build_h_blocks",
    "certify_gne",
    "default_tolerance",
    "gap",
    "gap_gradient",
    "gap_partials",
    "kkt_residual",
    "local_gradient_x",
    "local_terms",
]
