"""Exact extension of pseudonorms from a subgroup to a finite abelian group."""

from .extend import (
    ExtendedNorm,
    ExtensionError,
    ExtensionProblem,
    build_chain,
    chain_extend,
    enumerate_representations,
    min_matching_cost,
    pair_cost,
    prime_step_extend,
    rho,
)
from .groups import (
    FiniteAbelianGroup,
    GroupError,
    Homomorphism,
    LatticeGroup,
    Subgroup,
    coordinates,
    make_group,
    quotient,
    scale_subgroup,
    subgroup_closure,
)
from .lattice import lattice_extend
from .pseudonorm import NormError, Pseudonorm, validate
from .transversal import (
    UniformCollection,
    birkhoff_decompose,
    p_fractional_transversal,
    transversal,
)
from .winding import discontinuity_report, pair_distance, sum_norm, winding_norm

__version__ = "0.1.0"
