"""Exact combinatorics of oriented multigraphs.

Forest-complement polynomials through two independent engines, weighted
cycle lattices and their component groups, residue-field volumes with a
brute-force integration oracle, and the stability stratification of
edge orbit data. Everything is exact: integers and fractions only.
"""

from .graphs import (
    BudgetExceededError,
    DomainError,
    Edge,
    LoopContractionError,
    Multigraph,
    UnknownEdgeError,
    betti1,
    boundary,
    classify_edge,
    contract,
    cycle_basis,
    delete,
    enumeration_budget,
    fragment,
    spanning_forests,
)
from .kirchhoff import (
    psi_delcon,
    psi_det,
    psi_enum,
    matrix_tree_dual,
)
from .lattice import (
    ComponentGroup,
    IntMatrix,
    TropTorus,
    component_group,
    tau_matrix,
    smith_normal_form,
    tropical_jacobian,
)
from .poly import MultilinearPoly, equal, evaluate
from .stability import (
    CharRange,
    EdgeOrbit,
    StabilityParam,
    StrataComplex,
    delta_membership,
    generic_orbit,
    is_generic,
    is_semistable,
    orbit_char_set,
    point_orbit,
    segment_orbit,
    strata_complex,
)
from .volumes import (
    LocalFieldParams,
    central_fibre_point_count,
    fibre_volume,
    total_volume,
    total_volume_padic_oracle,
    trop_volume_check,
    valuation_stratum_measure,
    valuation_tail_measure,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CharRange",
    "ComponentGroup",
    "DomainError",
    "Edge",
    "EdgeOrbit",
    "IntMatrix",
    "LocalFieldParams",
    "LoopContractionError",
    "Multigraph",
    "MultilinearPoly",
    "StabilityParam",
    "StrataComplex",
    "TropTorus",
    "UnknownEdgeError",
    "__version__",
    "betti1",
    "boundary",
    "central_fibre_point_count",
    "classify_edge",
    "component_group",
    "contract",
    "cycle_basis",
    "delete",
    "delta_membership",
    "enumeration_budget",
    "equal",
    "evaluate",
    "fibre_volume",
    "fragment",
    "generic_orbit",
    "is_generic",
    "is_semistable",
    "matrix_tree_dual",
    "orbit_char_set",
    "point_orbit",
    "psi_delcon",
    "psi_det",
    "psi_enum",
    "segment_orbit",
    "smith_normal_form",
    "spanning_forests",
    "strata_complex",
    "tau_matrix",
    "total_volume",
    "total_volume_padic_oracle",
    "trop_volume_check",
    "tropical_jacobian",
    "valuation_stratum_measure",
    "valuation_tail_measure",
]
