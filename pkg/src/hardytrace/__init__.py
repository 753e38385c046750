"""Truncated Hardy-space Toeplitz models on bounded symmetric domains.

The package computes, exactly where possible: the Jordan-triple catalog
and its Peirce-1 data, conical-polynomial norms and dimensions, the
asymptotic sequence class behind the quotient-module estimates, truncated
operator models on the ball and on the rank-one boundary manifold, and the
two sides of the Dixmier-trace formula for commutator products.
"""

from .catalog import (DomainDescriptor, Peirce1Data, ball, descriptor_for,
                      peirce1_data, standard_catalog, type_i, type_ii,
                      type_iii, type_iv, type_v, type_vi)
from .conical import (ConicalContext, conical_norm_sq, conical_norm_sq_ratio,
                      conical_polynomial_expand, fock_norm_sq,
                      graded_dimension, conical_shift_coefficient,
                      pochhammer_block_ratio, rep_dimension)
from .geometry import (BoundaryPoint, PeirceFrame, boundary_bracket,
                       bracket_symbol, dixmier_constant, gindikin_gamma,
                       peirce_frame, poisson_extension, poisson_hat_symbol,
                       sample_S1, trace_formula_rhs, trace_formula_rhs_exact)
from .models import (GradedBasis, TruncatedOperator, build_ball_model,
                     build_rank_one_model, derivative_operator,
                     lambda_operator, lambda_resolvent, sub_toeplitz_commutator,
                     sub_toeplitz_linear, sub_toeplitz_parts, toeplitz_matrix,
                     unitary_weight)
from .partitions import (Partition, enumerate_partitions, falling_pochhammer,
                         multivariate_pochhammer, rising_pochhammer,
                         subtract_block)
from .seqclass import (SequenceFit, combine, fit_asymptotics,
                       norm_ratio_samples, norm_ratio_sequence)
from .spectral import (SpectralReport, dixmier_estimate, macaev_diagnostic,
                       resolvent_partial_sum_stat, singular_values)
from .symbols import SymbolPolynomial, holomorphic_derivative

__version__ = "0.1.0"
