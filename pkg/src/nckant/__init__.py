"""Spectral distances on finite spectral triples, Wasserstein-1 transport on
finite cost spaces, and a transport-style distance on algebra states whose
cost is the spectral distance between pure states."""

from .errors import (DegenerateTripleError, InfeasibleError, NotApplicableError,
                     ValidationError)
from .linalg import commutator, eigh, hs_inner, operator_norm
from .models import (MoyalCostParams, SphereMeasure, bloch_to_density,
                     density_to_bloch, fibonacci_sphere, m2_diagonal_distance,
                     m2_diagonal_triple, moyal_ball_cost, sphere_measure,
                     spinor_to_bloch, state_from_measure, two_point_distance,
                     two_point_state, two_point_triple, two_sheet_cost)
from .spectral import (ExtendedDistance, SolverOptions, spectral_distance,
                       spectral_distance_oracle)
from .transport import (FiniteCostSpace, LipschitzWitness, TransportPlan,
                        cycle_space, explicit_space, interval_space,
                        kantorovich_dual, make_cost_space, two_sheet_space,
                        wasserstein_primal)
from .triple import (CommutantBasis, DensityState, FiniteSpectralTriple,
                     ValidationReport, commutant_kernel, commutator_norm,
                     density_state, in_lipschitz_ball, make_triple,
                     product_triple, state_evaluate, validate_triple)
from .wd import (ChordEqualityReport, LipDConstraintSet, PureStateSample,
                 WdResult, chord_equality_check, lambda_rescale, moyal_sample,
                 pure_sample_cost_matrix, quotient_transport,
                 sphere_sample_points, wd_distance)

__version__ = "0.1.0"
