"""Static relative-output consensus for networks of passifiable SIMO agents."""

from .digraph import (
    SpectrumReport,
    WeightedDigraph,
    has_directed_spanning_tree,
    laplace_matrix,
    leading_set,
    left_zero_eigenvector,
    make_cycle,
    make_dodeca_example,
    make_three_node_example,
    spectrum_report,
)
from .errors import (
    AssumptionError,
    BracketError,
    ConvergenceError,
    DimensionError,
    DivergenceError,
    DomainError,
    InvalidInputError,
    MultiplicityError,
    PassifiabilityError,
    PassinetError,
    TopologyError,
)
from .gains import (
    ConsensusVerdict,
    GainAssignment,
    asymptote_ratio,
    cycle_hyperbola_check,
    cycle_threshold,
    exact_consensus_test,
    general_threshold,
    sufficient_gain_identical,
    sufficient_gain_nonidentical,
    threshold_bisection,
)
from .passify import (
    AgentModel,
    PassifyReport,
    double_integrator_agent,
    is_hyper_minimum_phase,
    kappa0,
    passify_report,
    transfer_numerator,
)
from .region import BoundarySample, boundary_sample, three_node_polar, trace_boundary
from .simkit import NetworkSpec, SimTrace, convergence_report, predicted_consensus, simulate

__version__ = "0.1.0"
