"""Exact symbolic toolkit for multiparameter Poisson/quantum symplectic and
Euclidean algebras, their admissible-set strata, and the stratum maps
relating the two sides."""

from .admissible import (
    AdmissibleSet,
    brute_force_admissible,
    derived_sets,
    enumerate_admissible,
    eta_injectivity,
    gk_dimension,
    growth_check,
    length,
    stratum_poset,
)
from .algebra_an import (
    PoissonParams,
    build_an,
    consistency_check,
    iterated_presentation,
    k_action,
    k_basis,
    level_eigen_elements,
    log_canonical_matrix,
    omega,
    quotient_system,
    verify_omega_identities,
)
from .algebra_kn import (
    NCElement,
    QuantumParams,
    QuantumTorus,
    commutation_matrix,
    defining_relations,
    nc_multiply,
    normality_check,
    omega_q,
)
from .correspondence import (
    AdditiveCharacter,
    GroupContainsMinusOne,
    group_character,
    poisson_stratum_map,
    quantum_stratum_map,
    stratification_report,
    verify_poisson_stratum_map,
    verify_quantum_stratum_map,
)
from .exact_poly import (
    LaurentPoly,
    ReductionSystem,
    VarSpec,
    divide_exact,
    format_poly,
    group_analysis,
    reduce_poly,
)
from .poisson_core import (
    DoubleExtensionSpec,
    PoissonDerivation,
    PoissonStructure,
    derivation_check,
    double_extend,
    is_poisson_normal,
    localize,
    ore_extend,
)

__version__ = "0.1.0"
