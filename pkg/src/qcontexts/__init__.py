"""Measurement contexts, Born probabilities, and their certification machinery.

Submodules:
    linalg    -- tolerance policy, Gram-Schmidt, Hermitian eigensolver, unitarity
    core      -- projectors, contexts, modalities, densities, measurement simulator
    gleason   -- frame-function validation, density reconstruction
    uhlhorn   -- ray-map certification and operator fitting
    partition -- {0,1} valuation search on vector systems
    topology  -- permutation paths in the unitary group
    jsonio    -- file formats for the CLI
    sampling  -- seeded random domain objects
"""

__version__ = "0.1.0"

from .linalg import DEFAULT_TOL, Tolerance  # noqa: F401
