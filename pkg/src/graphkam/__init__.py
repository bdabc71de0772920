"""Weak KAM theory and Aubry-Mather theory on finite graphs."""
from .errors import GraphKamError, NumericalError, ValidationError
from .graph import (
    Chain0,
    Chain1,
    Cochain0,
    Cochain1,
    Graph,
    HomologyBasis,
    Path,
    boundary,
    build_graph,
    coboundary,
    cohomology_class,
    enumerate_circuits,
    homology_basis,
    homology_class,
    pairing,
    representative_cochain,
)
from .hamiltonian import GraphHamiltonian, OmegaModified, a0, modify, quadratic_family
from .mather import (
    alpha,
    alpha_circuit_oracle,
    beta,
    check_graph_property,
    is_alpha_minimizer,
    mather_measures,
    subdifferential,
)
from .measures import (
    FiniteMeasure,
    ParametrizedPath,
    decompose_circuits,
    integrate,
    integrate_cochain,
    is_closed,
    occupation_measure,
    rotation_vector,
    validate_parametrized_path,
    wasserstein1,
)
from .network import ArcHamiltonian, NetworkSpec, check_compiled, compile_network, sigma_plus
from .weak_kam import aubry_set, critical_value, has_subsolution, intrinsic_length, solve, subsolution
